"""Named subgroup families of GL_2(F_ell), built from generators."""
from __future__ import annotations

from typing import Callable, Dict, List, Optional

from src.core.errors import ConfigError, NotASubgroupError
from src.core.groups.base import SubgroupHandle, closure
from src.core.groups.gl2 import (
    GL2,
    Mat2,
    exceptional_invariants,
    gl2,
    projective_order_invariant,
)
from src.core.logging import get_logger
from src.core.modarith import primitive_root

logger = get_logger("groups.subgroups")

SubgroupFactory = Callable[[GL2], SubgroupHandle]

_SUBGROUP_FAMILIES: Dict[str, SubgroupFactory] = {}

EXCEPTIONAL_ORDERS = (24, 48, 120)


def register_subgroup_family(name: str, factory: SubgroupFactory) -> None:
    _SUBGROUP_FAMILIES[name] = factory


def subgroup_families() -> List[str]:
    _ensure_default_families()
    return sorted(_SUBGROUP_FAMILIES)


def create_subgroup(name: str, ell: int) -> SubgroupHandle:
    _ensure_default_families()
    factory = _SUBGROUP_FAMILIES.get(name)
    if factory is None:
        raise ConfigError(
            f"unknown subgroup family '{name}'",
            {"family": name, "known": sorted(_SUBGROUP_FAMILIES)},
        )
    return factory(gl2(ell))


def _torus_gens(G: GL2) -> List[Mat2]:
    r = primitive_root(G.n)
    return [G.diag(r, 1), G.diag(1, r)]


def borel(G: GL2) -> SubgroupHandle:
    return closure(G, _torus_gens(G) + [G.matrix([[1, 1], [0, 1]])])


def split_cartan(G: GL2) -> SubgroupHandle:
    return closure(G, _torus_gens(G))


def split_cartan_normalizer(G: GL2) -> SubgroupHandle:
    return closure(G, _torus_gens(G) + [G.matrix([[0, 1], [1, 0]])])


def _nonsplit_generator(G: GL2) -> Mat2:
    """Companion matrix of a primitive quadratic, of order ell^2 - 1."""
    ell = G.n
    target = ell * ell - 1
    for t in range(ell):
        for d in range(1, ell):
            if any((x * x - t * x + d) % ell == 0 for x in range(ell)):
                continue
            companion = G.matrix([[0, -d], [1, t]])
            if G.element_order(companion) == target:
                return companion
    raise NotASubgroupError("no primitive quadratic found", {"ell": ell})


def nonsplit_cartan(G: GL2) -> SubgroupHandle:
    return closure(G, [_nonsplit_generator(G)])


def nonsplit_cartan_normalizer(G: GL2) -> SubgroupHandle:
    """Adds an element acting on the Cartan as x -> x^ell."""
    c = _nonsplit_generator(G)
    c_ell = c
    for _ in range(G.n - 1):
        c_ell = G.mul(c_ell, c)
    for sigma in G.iter_elements():
        if G.mul(sigma, c) == G.mul(c_ell, sigma):
            return closure(G, [c, sigma])
    raise NotASubgroupError("no Frobenius twist found", {"ell": G.n})


def exceptional(G: GL2, with_scalars: bool = True) -> SubgroupHandle:
    """A subgroup whose image in PGL_2 is A4, S4 or A5.

    Searched deterministically as <a, b> inside SL_2 with a of trace 0 and b
    of trace -1. Scalars are appended, so every square is a determinant.
    """
    ell = G.n
    if ell < 5:
        raise ConfigError("exceptional family needs ell >= 5", {"ell": ell})
    allowed = exceptional_invariants(ell)
    sl2 = G.special_group()
    sl2_order = G.sl2_order()
    order_two = [m for m in sl2 if G.trace(m) == 0]
    order_three = [m for m in sl2 if G.trace(m) == ell - 1]
    found: Optional[SubgroupHandle] = None
    for a in order_two:
        for b in order_three:
            H = closure(G, [a, b])
            if H.order not in EXCEPTIONAL_ORDERS or H.order == sl2_order:
                continue
            if all(projective_order_invariant(G, m) in allowed for m in H.elements):
                found = H
                break
        if found is not None:
            break
    if found is None:
        raise NotASubgroupError("no exceptional subgroup found", {"ell": ell})
    logger.debug(
        "exceptional subgroup located",
        extra={"stats": {"ell": ell, "order": found.order}},
    )
    if not with_scalars:
        return found
    return closure(G, list(found.generators) + [G.scalar(primitive_root(ell))])


def _ensure_default_families() -> None:
    if "borel" in _SUBGROUP_FAMILIES:
        return
    register_subgroup_family("gl2", lambda G: closure(G, G.full_group().generators))
    register_subgroup_family("sl2", lambda G: closure(G, G.special_group().generators))
    register_subgroup_family("borel", borel)
    register_subgroup_family("split_cartan", split_cartan)
    register_subgroup_family("split_cartan_normalizer", split_cartan_normalizer)
    register_subgroup_family("nonsplit_cartan", nonsplit_cartan)
    register_subgroup_family("nonsplit_cartan_normalizer", nonsplit_cartan_normalizer)
    register_subgroup_family("exceptional", exceptional)
