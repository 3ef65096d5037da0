"""Coset actions, derangements and Goursat-type probes in GL_2(F_ell)."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from src.core.errors import (
    ConfigError,
    HypothesisFailedError,
    InvariantViolationError,
    NotASubgroupError,
)
from src.core.groups.base import Element, SubgroupHandle, closure, commutator_subgroup
from src.core.groups.gl2 import (
    GL2,
    REPEATED,
    DetCoset,
    Mat2,
    centralizer_order,
    charpoly_splitting,
    gl2,
)
from src.core.groups.product import CayleyTable, ProductGroup
from src.core.groups.subgroups import create_subgroup
from src.core.logging import get_logger
from src.core.utils import choose, rng_for

logger = get_logger("derangement")

PRODUCT = "product"
GRAPH = "graph"
CENTRAL_GRAPH = "central_graph"
NOT_SUBDIRECT = "not_subdirect"

M_CONTAINS_S = "M_contains_S"
NOT_ONTO_H_MOD_HG = "M_not_onto_H/H_g"
NOT_ONTO_H_MOD_H0 = "M_not_onto_H/H_0"
HG_NOT_NORMAL = "H_g_not_normal"


@dataclass
class ActionTable:
    group: SubgroupHandle
    stabilizer: SubgroupHandle
    point_count: int
    fixed_point_flags: Dict[Element, bool] = field(default_factory=dict)

    def derangements(self) -> FrozenSet[Element]:
        return frozenset(x for x, fixed in self.fixed_point_flags.items() if not fixed)


def _require_subgroup(M: SubgroupHandle, H: SubgroupHandle) -> None:
    if not M.is_subgroup_of(H):
        raise NotASubgroupError(
            "M is not contained in H", {"M_order": M.order, "H_order": H.order}
        )


def coset_representatives(H: SubgroupHandle, M: SubgroupHandle) -> List[Element]:
    """One h per left coset hM, smallest first."""
    _require_subgroup(M, H)
    ambient = H.ambient
    covered: Set[Element] = set()
    reps = []
    for h in H:
        if h in covered:
            continue
        reps.append(h)
        covered.update(ambient.mul(h, m) for m in M.elements)
    return reps


def conjugate_union(H: SubgroupHandle, M: SubgroupHandle) -> FrozenSet[Element]:
    """Union of h M h^-1 over h in H; one conjugate per coset of M suffices."""
    out: Set[Element] = set()
    for h in coset_representatives(H, M):
        out |= M.conjugate_set(h)
    return frozenset(out)


def action_table(H: SubgroupHandle, M: SubgroupHandle) -> ActionTable:
    """Fixed points of left multiplication on H/M: x fixes hM iff h^-1 x h in M."""
    ambient = H.ambient
    reps = coset_representatives(H, M)
    inverses = [ambient.inv(h) for h in reps]
    flags = {}
    for x in H:
        flags[x] = any(
            ambient.mul(ambient.mul(hi, x), h) in M.elements
            for h, hi in zip(reps, inverses)
        )
    return ActionTable(H, M, len(reps), flags)


def _members(H: SubgroupHandle, kappa: Union[None, DetCoset, Iterable[Element]]) -> List[Element]:
    if kappa is None:
        return list(H)
    if isinstance(kappa, DetCoset):
        return [x for x in H if x in kappa]
    return sorted(set(kappa))


def derangement_proportion(
    H: SubgroupHandle,
    M: SubgroupHandle,
    kappa: Union[None, DetCoset, Iterable[Element]] = None,
    union: Optional[FrozenSet[Element]] = None,
) -> Fraction:
    """Share of kappa (default all of H) acting without fixed points on H/M."""
    C = union if union is not None else conjugate_union(H, M)
    members = _members(H, kappa)
    if not members:
        raise NotASubgroupError("kappa has no elements in H")
    outside = sum(1 for x in members if x not in C)
    return Fraction(outside, len(members))


@dataclass
class CosetDeltaTable:
    rows: List[Dict] = field(default_factory=list)

    @property
    def max_ratio(self) -> float:
        return max(r["ratio"] for r in self.rows)


def _product_order(A: SubgroupHandle, N: SubgroupHandle) -> int:
    return A.order * N.order // A.intersection(N).order


def _is_normal(N: SubgroupHandle, H: SubgroupHandle) -> bool:
    ambient = H.ambient
    return all(ambient.conj(g, n) in N.elements for g in H.generators for n in N.generators)


def coset_delta_table(
    H: SubgroupHandle,
    H_g: SubgroupHandle,
    M: SubgroupHandle,
    S: Optional[SubgroupHandle] = None,
    H0: Optional[SubgroupHandle] = None,
) -> CosetDeltaTable:
    """|C cap kappa| / |H_g| for every H_g-coset kappa in H0 * H_g.

    S defaults to the commutator subgroup of H and H0 to H itself. Failed
    hypotheses raise HypothesisFailedError naming the first one that fails.
    """
    _require_subgroup(M, H)
    _require_subgroup(H_g, H)
    S = S if S is not None else commutator_subgroup(H)
    H0 = H0 if H0 is not None else H
    if not _is_normal(H_g, H):
        raise HypothesisFailedError(HG_NOT_NORMAL)
    if _product_order(M, H_g) != H.order:
        raise HypothesisFailedError(NOT_ONTO_H_MOD_HG, {"M_order": M.order})
    if _product_order(M, H0) != H.order:
        raise HypothesisFailedError(NOT_ONTO_H_MOD_H0, {"M_order": M.order})
    if S.is_subgroup_of(M):
        raise HypothesisFailedError(M_CONTAINS_S, {"S_order": S.order})

    ambient = H.ambient
    C = conjugate_union(H, M)
    span = closure(ambient, H0.generators + H_g.generators)
    table = CosetDeltaTable()
    for rep in coset_representatives(span, H_g):
        kappa = {ambient.mul(rep, n) for n in H_g.elements}
        hits = len(kappa & C)
        row = {
            "coset": rep,
            "det": ambient.det(rep) if isinstance(ambient, GL2) else None,
            "size": len(kappa),
            "hits": hits,
            "ratio": hits / H_g.order,
            "derangement_proportion": 1 - hits / len(kappa),
        }
        table.rows.append(row)
    if any(not 0 <= r["ratio"] <= 1 for r in table.rows):
        raise InvariantViolationError("coset ratio outside [0, 1]")
    return table


def _both_projections_onto(Gp: ProductGroup, elements: FrozenSet[Element]) -> bool:
    width = Gp.width
    left = {x // width for x in elements}
    right = {x % width for x in elements}
    return len(left) == len(Gp.left) and len(right) == len(Gp.right)


def classify_subdirect(Gp: ProductGroup, H: SubgroupHandle) -> str:
    """Goursat outcome for a subgroup of S x S."""
    n = len(Gp.left)
    if not _both_projections_onto(Gp, H.elements):
        return NOT_SUBDIRECT
    if H.order == n * n:
        return PRODUCT
    first = {x // Gp.width for x in H.elements}
    if H.order == n and len(first) == n:
        return GRAPH
    if H.order == 2 * n:
        return CENTRAL_GRAPH
    logger.error(
        "subdirect product outside the Goursat dichotomy",
        extra={"stats": {"order": H.order, "factor": n}},
    )
    raise InvariantViolationError(
        "subdirect subgroup is neither a product nor a graph",
        {"order": H.order, "factor_order": n},
    )


@lru_cache(maxsize=4)
def _sl2_square(ell: int) -> ProductGroup:
    if ell < 5:
        # SL_2(F_2) and SL_2(F_3) have solvable quotients and more fiber products
        raise ConfigError("Goursat probe needs ell >= 5", {"ell": ell})
    G = gl2(ell)
    table = CayleyTable(closure(G, G.special_group().generators))
    return ProductGroup(table, table)


def goursat_closure(ell: int, pairs: Sequence[Tuple[Mat2, Mat2]]) -> Tuple[str, int]:
    """Outcome and order of the subgroup of SL_2 x SL_2 generated by `pairs`."""
    Gp = _sl2_square(ell)
    H = closure(Gp, [Gp.pair(x, y) for x, y in pairs])
    return classify_subdirect(Gp, H), H.order


def goursat_probe(ell: int, trials: int, seed: int) -> Dict[str, int]:
    """Closures of random generator pairs in SL_2 x SL_2, tallied by outcome.

    Each trial draws its second coordinates either independently, through a
    conjugation automorphism, or through a conjugation twisted by +-1.
    """
    Gp = _sl2_square(ell)
    table = Gp.left
    G = gl2(ell)
    rng = rng_for(seed, f"goursat|ell={ell}")
    everything = list(G.iter_elements())
    minus_one = G.scalar(-1)
    outcomes: Counter = Counter()
    for _ in range(trials):
        mode = choose(rng, ("independent", "graph", "central"))
        g = choose(rng, everything)
        gens = []
        for _ in range(2):
            x = choose(rng, table.items)
            if mode == "independent":
                y = choose(rng, table.items)
            else:
                y = G.conj(g, x)
                if mode == "central" and rng.integers(2):
                    y = G.mul(minus_one, y)
            gens.append(Gp.pair(x, y))
        H = closure(Gp, gens)
        outcomes[classify_subdirect(Gp, H)] += 1
    report = {k: outcomes.get(k, 0) for k in (PRODUCT, GRAPH, CENTRAL_GRAPH, NOT_SUBDIRECT)}
    logger.info("goursat probe", extra={"stats": {"ell": ell, "trials": trials, **report}})
    return report


def centralizer_bound_check(ell: int, samples: int, seed: int) -> List[Dict]:
    """|C(b)| >= ell - 1 always, and >= ell (ell - 1) for non-semisimple b."""
    G = gl2(ell)
    rng = rng_for(seed, f"centralizer|ell={ell}")
    everything = list(G.iter_elements())
    rows = []
    for _ in range(samples):
        beta = choose(rng, everything)
        order = centralizer_order(G, beta)
        repeated = (
            not G.is_scalar(beta)
            and charpoly_splitting(ell, G.trace(beta), G.det(beta)) == REPEATED
        )
        floor = ell * (ell - 1) if repeated else ell - 1
        if order < floor:
            raise InvariantViolationError(
                "centralizer smaller than expected",
                {"beta": beta, "order": order, "floor": floor},
            )
        rows.append({"beta": beta, "centralizer": order, "non_semisimple": int(repeated)})
    return rows


REPORT_FAMILIES = (
    "borel",
    "split_cartan_normalizer",
    "nonsplit_cartan_normalizer",
    "exceptional",
)


def derangement_report(ell: int, families: Sequence[str] = REPORT_FAMILIES) -> List[Dict]:
    """Per det-coset ratios for M in each family, with H = GL_2 and H_g = SL_2.

    Families whose hypotheses fail produce one row carrying the reason.
    """
    H = create_subgroup("gl2", ell)
    H_g = create_subgroup("sl2", ell)
    S = commutator_subgroup(H)
    rows: List[Dict] = []
    for name in families:
        if name == "exceptional" and ell < 5:
            continue
        M = create_subgroup(name, ell)
        try:
            table = coset_delta_table(H, H_g, M, S=S)
        except HypothesisFailedError as e:
            rows.append({"ell": ell, "subgroup": name, "status": e.reason})
            continue
        for row in sorted(table.rows, key=lambda r: r["det"]):
            rows.append(
                {
                    "ell": ell,
                    "subgroup": name,
                    "det": row["det"],
                    "ratio": row["ratio"],
                    "derangement_proportion": row["derangement_proportion"],
                    "status": "ok",
                }
            )
        logger.debug(
            "coset table",
            extra={"stats": {"ell": ell, "family": name, "max_ratio": table.max_ratio}},
        )
    return rows
