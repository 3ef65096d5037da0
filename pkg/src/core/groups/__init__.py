from src.core.groups.base import (
    FiniteGroup,
    SubgroupHandle,
    closure,
    commutator_subgroup,
)
from src.core.groups.gl2 import (
    GL2,
    Mat2,
    charpoly_fiber,
    charpoly_splitting,
    conj_invariants,
    det_coset,
    gl2,
    group_order_gl2,
)
from src.core.groups.product import CayleyTable, ProductGroup
from src.core.groups.subgroups import create_subgroup, register_subgroup_family

__all__ = [
    "FiniteGroup",
    "SubgroupHandle",
    "closure",
    "commutator_subgroup",
    "GL2",
    "Mat2",
    "charpoly_fiber",
    "charpoly_splitting",
    "conj_invariants",
    "det_coset",
    "gl2",
    "group_order_gl2",
    "CayleyTable",
    "ProductGroup",
    "create_subgroup",
    "register_subgroup_family",
]
