import pytest

from src.core.errors import ConfigError, InvariantViolationError
from src.core.groups import create_subgroup, gl2
from src.core.utils import choose, rng_for
from src.models.curves import Curve, FrobData, phi_rank_is_free_rank2
from src.models.schemas import ALL_REASONS, Mod2Image, Reason
from src.services.galimage import (
    TraceStream,
    classify_mod_ell,
    classify_stream,
    division_polynomial_3,
    image_at,
    is_surjective,
    mod2_image,
    mod3_image,
    mod3_reasons,
    phi_witness,
    surjective_all_ell,
)
from src.services.heights import enumerate_weierstrass


def test_non_cm_curve_contains_sl2_mod_5():
    verdict = classify_mod_ell(Curve(1, 1), 5, 1000)
    assert verdict.contains_sl2
    assert verdict.kind == "ContainsSL2"
    assert verdict.label() == "ContainsSL2"


def test_cm_curve_keeps_nonsplit_normalizer_mod_5():
    verdict = classify_mod_ell(Curve(0, 1), 5, 2000)
    assert verdict.kind == "Candidate"
    assert Reason.NONSPLIT_CARTAN_NORM in verdict.reasons


def test_cm_curve_supersingular_primes():
    E = Curve(0, 1)
    for f in TraceStream(E, 200):
        if f.p % 3 == 2:
            assert f.a_p == 0


@pytest.mark.parametrize("ell", [5, 7, 11, 13])
@pytest.mark.parametrize("ab", [(0, 1), (-1, 0)])
def test_cm_curves_are_candidates(ab, ell):
    assert not classify_mod_ell(Curve(*ab), ell, 1000).contains_sl2


def test_zero_budget_keeps_every_reason():
    verdict = classify_mod_ell(Curve(0, 1), 5, 0)
    assert verdict.reasons == ALL_REASONS
    assert verdict.primes_used == 0


def test_ell_3_never_tracks_exceptional():
    verdict = classify_mod_ell(Curve(1, 1), 3, 0)
    assert verdict.reasons == ALL_REASONS - {Reason.EXCEPTIONAL}


def test_primes_used_counts_bad_primes_and_ell():
    # primes 5..29 are 5, 7, 11, 13, 17, 19, 23, 29; the CM curve never finishes
    assert classify_mod_ell(Curve(0, 1), 5, 30).primes_used == 8


def test_classifier_rejects_ell_2():
    with pytest.raises(ConfigError):
        classify_mod_ell(Curve(1, 1), 2, 100)


@pytest.mark.parametrize("ab", [(1, 1), (2, 3), (-2, 5), (0, 1), (3, -1)])
def test_budget_monotone(ab):
    E = Curve(*ab)
    small = classify_mod_ell(E, 7, 60)
    large = classify_mod_ell(E, 7, 600)
    assert large.reasons <= small.reasons
    if small.contains_sl2:
        assert large.contains_sl2


def test_classify_stream_single_irreducible_class():
    verdict = classify_stream(5, [(0, 2)])
    assert verdict.reasons == ALL_REASONS - {Reason.REDUCIBLE}
    assert verdict.primes_used == 1


def test_split_normalizer_needs_two_distinct_witnesses():
    # (1, 2) at ell = 5: t != 0 and t^2 - 4d = 3 is a nonsquare
    once = classify_stream(5, [(1, 2), (1, 2)])
    assert Reason.SPLIT_CARTAN_NORM in once.reasons
    twice = classify_stream(5, [(1, 2), (4, 2)])
    assert Reason.SPLIT_CARTAN_NORM not in twice.reasons


@pytest.mark.parametrize("ell", [5, 7])
@pytest.mark.parametrize(
    "family,reason",
    [
        ("borel", Reason.REDUCIBLE),
        ("split_cartan_normalizer", Reason.SPLIT_CARTAN_NORM),
        ("nonsplit_cartan_normalizer", Reason.NONSPLIT_CARTAN_NORM),
        ("exceptional", Reason.EXCEPTIONAL),
    ],
)
def test_classifier_sound_on_maximal_subgroups(ell, family, reason):
    G = gl2(ell)
    H = create_subgroup(family, ell)
    stream = [(G.trace(m), G.det(m)) for m in H]
    assert reason in classify_stream(ell, stream).reasons


@pytest.mark.parametrize("ell", [5, 7])
def test_classifier_complete_on_full_group(ell):
    G = gl2(ell)
    everything = list(G.iter_elements())
    for seed in range(100):
        rng = rng_for(seed, f"completeness|ell={ell}")
        stream = []
        for _ in range(200):
            m = choose(rng, everything)
            stream.append((G.trace(m), G.det(m)))
        assert classify_stream(ell, stream).contains_sl2


def test_mod2_image_examples():
    assert mod2_image(Curve(1, 1)) == Mod2Image.FULL
    assert mod2_image(Curve(0, 1)) == Mod2Image.ORDER_LE2
    assert mod2_image(Curve(-3, 1)) == Mod2Image.CYCLIC3
    assert mod2_image(Curve(-1, 0)) == Mod2Image.ORDER_LE2


def test_full_mod2_image_gives_one_third_odd_traces():
    traces = [f for f in TraceStream(Curve(1, 1), 10000) if isinstance(f, FrobData)]
    odd = sum(1 for f in traces if f.a_p % 2) / len(traces)
    assert abs(odd - 1 / 3) < 0.05


def test_surjective_all_ell_non_cm():
    verdicts = surjective_all_ell(Curve(1, 1), [7, 2, 5], 1000)
    assert sorted(verdicts) == [2, 5, 7]
    assert all(is_surjective(v) for v in verdicts.values())


def test_surjective_all_ell_cm_has_candidate():
    verdicts = surjective_all_ell(Curve(0, 1), [2, 5], 500)
    assert not all(is_surjective(v) for v in verdicts.values())


def test_surjective_all_ell_empty_budget():
    verdicts = surjective_all_ell(Curve(1, 1), [5, 7, 11], 0)
    assert not any(v.contains_sl2 for v in verdicts.values())


def test_surjective_all_ell_rejects_empty_list():
    with pytest.raises(ConfigError):
        surjective_all_ell(Curve(1, 1), [], 100)


def test_phi_witness():
    # p = 5 is supersingular for the CM curve; a_7 = -4 passes
    assert phi_witness(Curve(0, 1), 200) == 7
    assert phi_witness(Curve(1, 1), 37) is not None
    assert phi_witness(Curve(1, 1), 4) is None


def test_phi_rank_passes_for_most_primes_non_cm():
    frobs = [f for f in TraceStream(Curve(1, 1), 2000) if isinstance(f, FrobData)]
    passing = sum(1 for f in frobs if phi_rank_is_free_rank2(f)) / len(frobs)
    assert passing > 0.9
    assert not any(phi_rank_is_free_rank2(f) for f in frobs if f.a_p == 0)


@pytest.mark.slow
def test_candidate_share_falls_with_height():
    shares = []
    for x in (10, 20, 40):
        curves = list(enumerate_weierstrass(x))
        flagged = sum(1 for E in curves if not classify_mod_ell(E, 5, 1000).contains_sl2)
        shares.append(flagged / len(curves))
    assert shares[0] > shares[1] > shares[2]
    assert shares[2] < 0.05


def test_division_polynomial_3_coefficients():
    assert division_polynomial_3(Curve(2, 3)).all_coeffs() == [3, 0, 12, 36, -4]


def test_mod3_image_non_cm_is_full():
    verdict = mod3_image(Curve(1, 1))
    assert verdict.contains_sl2
    assert verdict.ell == 3
    assert verdict.label() == "ContainsSL2"


def test_mod3_image_rational_three_torsion_is_borel():
    # psi_3 = 3x(x^3 + 4): (0, 1) is a rational point of order 3
    assert mod3_image(Curve(0, 1)).reasons == {Reason.REDUCIBLE}


def test_mod3_image_cm_by_i_is_nonsplit_normaliser():
    # 3 is inert in Z[i]
    assert mod3_image(Curve(-1, 0)).reasons == {Reason.NONSPLIT_CARTAN_NORM}


@pytest.mark.parametrize(
    "degrees, group, expected",
    [
        ([4], "S4", set()),
        ([4], "D4", {Reason.NONSPLIT_CARTAN_NORM}),
        ([4], "C4", {Reason.NONSPLIT_CARTAN_NORM}),
        ([1, 3], None, {Reason.REDUCIBLE}),
        ([2, 2], None, {Reason.SPLIT_CARTAN_NORM, Reason.NONSPLIT_CARTAN_NORM}),
        (
            [1, 1, 2],
            None,
            {Reason.REDUCIBLE, Reason.SPLIT_CARTAN_NORM, Reason.NONSPLIT_CARTAN_NORM},
        ),
    ],
)
def test_mod3_reasons_from_splitting(degrees, group, expected):
    assert mod3_reasons(degrees, group) == expected


def test_mod3_projective_image_in_a4_is_an_invariant_violation():
    with pytest.raises(InvariantViolationError):
        mod3_reasons([4], "A4")


@pytest.mark.parametrize("ab", [(0, 1), (-1, 0), (1, 1), (2, 3)])
def test_frobenius_classifier_at_3_never_contradicts_exact_image(ab):
    E = Curve(*ab)
    exact = mod3_image(E)
    assert exact.reasons <= classify_mod_ell(E, 3, 500).reasons


def test_ell_3_is_exact_without_primes():
    assert image_at(Curve(1, 1), 3, 0).contains_sl2
    verdicts = surjective_all_ell(Curve(1, 1), [3, 2], 0)
    assert is_surjective(verdicts[3])
    assert not surjective_all_ell(Curve(0, 1), [3], 1000)[3].contains_sl2


def test_most_small_curves_are_surjective_mod_3():
    curves = list(enumerate_weierstrass(3))
    flagged = [E for E in curves if not mod3_image(E).contains_sl2]
    assert len(flagged) / len(curves) < 0.5
    # j = 0 and j = 1728 curves are never surjective mod 3
    assert all(not mod3_image(E).contains_sl2 for E in curves if E.a == 0 or E.b == 0)
