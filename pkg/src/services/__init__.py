"""Experiment services: image classification, sieve, heights, equidistribution, derangements."""
from src.services.derangement import (
    coset_delta_table,
    conjugate_union,
    derangement_proportion,
    goursat_probe,
)
from src.services.equidist import deviation_report, family_histogram, prediction
from src.services.galimage import (
    classify_mod_ell,
    image_at,
    mod2_image,
    mod3_image,
    surjective_all_ell,
)
from src.services.heights import count_height, enumerate_proj, enumerate_weierstrass
from src.services.sieve import L_of_Q, hit_count_bound, sieve_bound

__all__ = [
    "coset_delta_table",
    "conjugate_union",
    "derangement_proportion",
    "goursat_probe",
    "deviation_report",
    "family_histogram",
    "prediction",
    "classify_mod_ell",
    "image_at",
    "mod2_image",
    "mod3_image",
    "surjective_all_ell",
    "count_height",
    "enumerate_proj",
    "enumerate_weierstrass",
    "L_of_Q",
    "hit_count_bound",
    "sieve_bound",
]
