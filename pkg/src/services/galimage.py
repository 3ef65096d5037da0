"""Mod-ell Galois images: exact at ell = 2 and 3, one-sided from Frobenius data above.

The classifier only ever proves that the image contains SL_2(F_ell). Each
maximal-subgroup family still compatible with the observed classes is kept as
a reason; the verdict is ContainsSL2 once none remain, Candidate otherwise.
At ell = 3 every (t, d) class meets the nonsplit Cartan normaliser, so the
image there is read off the 3-division polynomial instead.
"""
from __future__ import annotations

import math
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union

import sympy

from src.core.errors import ConfigError, InvariantViolationError
from src.core.groups.gl2 import NONSPLIT, SPLIT, charpoly_splitting, exceptional_invariants
from src.core.logging import get_logger
from src.core.modarith import primes_in
from src.models.curves import BadReduction, Curve, FrobData, phi_rank_is_free_rank2, trace_at
from src.models.schemas import ALL_REASONS, ImageVerdict, Mod2Image, Reason

logger = get_logger("galimage")

FIRST_PRIME = 5

Verdict = Union[ImageVerdict, Mod2Image]


class TraceStream:
    """Frobenius data of one curve at ascending primes, computed on demand."""

    def __init__(self, E: Curve, budget: int):
        self.E = E
        self.primes = primes_in(FIRST_PRIME, budget)
        self._computed: List[Union[FrobData, BadReduction]] = []

    def __iter__(self) -> Iterator[Union[FrobData, BadReduction]]:
        for i, p in enumerate(self.primes):
            if i == len(self._computed):
                self._computed.append(trace_at(self.E, p))
            yield self._computed[i]


class Eliminator:
    """Tracks which maximal-subgroup reasons the observed classes rule out."""

    def __init__(self, ell: int):
        if ell < 3:
            raise ConfigError("mod-2 images are computed exactly, not classified", {"ell": ell})
        self.ell = ell
        self.remaining: Set[Reason] = set(ALL_REASONS)
        if ell == 3:
            # every proper subgroup of GL_2(F_3) with full det lies in a
            # Borel or a Cartan normaliser
            self.remaining.discard(Reason.EXCEPTIONAL)
        self._split_witnesses: Set[Tuple[int, int]] = set()
        self._nonsplit_witnesses: Set[Tuple[int, int]] = set()
        self._allowed_u = exceptional_invariants(ell)

    @property
    def done(self) -> bool:
        return not self.remaining

    def observe(self, t: int, d: int) -> None:
        ell = self.ell
        t, d = t % ell, d % ell
        kind = charpoly_splitting(ell, t, d)
        if kind == NONSPLIT:
            # a stable line forces a split characteristic polynomial
            self.remaining.discard(Reason.REDUCIBLE)
            if t:
                self._split_witnesses.add((t, d))
        elif kind == SPLIT and t:
            self._nonsplit_witnesses.add((t, d))
        if len(self._split_witnesses) >= 2:
            self.remaining.discard(Reason.SPLIT_CARTAN_NORM)
        if len(self._nonsplit_witnesses) >= 2:
            self.remaining.discard(Reason.NONSPLIT_CARTAN_NORM)
        if Reason.EXCEPTIONAL in self.remaining:
            u = t * t * pow(d, -1, ell) % ell
            if u not in self._allowed_u:
                self.remaining.discard(Reason.EXCEPTIONAL)

    def verdict(self, primes_used: int) -> ImageVerdict:
        return ImageVerdict(
            ell=self.ell, reasons=frozenset(self.remaining), primes_used=primes_used
        )


def classify_stream(ell: int, stream: Iterable[Tuple[int, int]]) -> ImageVerdict:
    """Run the eliminations over (t, d) pairs; stops once nothing is left."""
    eliminator = Eliminator(ell)
    used = 0
    for t, d in stream:
        used += 1
        eliminator.observe(t, d)
        if eliminator.done:
            break
    return eliminator.verdict(used)


def classify_mod_ell(
    E: Curve, ell: int, prime_budget: int, traces: Optional[TraceStream] = None
) -> ImageVerdict:
    """Verdict for the image of Galois on E[ell] from good primes p <= budget.

    Every prime in [5, budget] counts toward primes_used, including bad
    primes and p = ell, which carry no data.
    """
    traces = traces or TraceStream(E, prime_budget)
    eliminator = Eliminator(ell)
    used = 0
    for f in traces:
        if f.p > prime_budget:
            break
        used += 1
        if isinstance(f, BadReduction) or f.p == ell:
            continue
        eliminator.observe(f.a_p, f.p)
        if eliminator.done:
            break
    verdict = eliminator.verdict(used)
    logger.debug(
        "classified",
        extra={"stats": {"a": E.a, "b": E.b, "ell": ell, "verdict": verdict.label()}},
    )
    return verdict


def phi_witness(
    E: Curve, prime_budget: int, traces: Optional[TraceStream] = None
) -> Optional[int]:
    """Least good p <= budget whose Frobenius passes the free-rank-2 test."""
    traces = traces or TraceStream(E, prime_budget)
    for f in traces:
        if f.p > prime_budget:
            break
        if isinstance(f, FrobData) and phi_rank_is_free_rank2(f):
            return f.p
    return None


_X = sympy.Symbol("x")


def _factor_degrees(poly: sympy.Poly) -> List[int]:
    _, factors = poly.factor_list()
    return sorted(f.degree() for f, k in factors for _ in range(k))


def mod2_image(E: Curve) -> Mod2Image:
    """Galois group of x^3 + ax + b, which is the image on E[2]."""
    cubic = sympy.Poly(_X**3 + E.a * _X + E.b, _X)
    if 1 in _factor_degrees(cubic):
        return Mod2Image.ORDER_LE2
    disc = int(cubic.discriminant())
    if disc > 0 and math.isqrt(disc) ** 2 == disc:
        return Mod2Image.CYCLIC3
    return Mod2Image.FULL


def division_polynomial_3(E: Curve) -> sympy.Poly:
    """psi_3, whose four roots are the x-coordinates of the lines in E[3]."""
    return sympy.Poly(3 * _X**4 + 6 * E.a * _X**2 + 12 * E.b * _X - E.a**2, _X)


def mod3_reasons(factor_degrees: Sequence[int], group: Optional[str] = None) -> FrozenSet[Reason]:
    """Maximal families containing the mod-3 image, from how psi_3 splits.

    PGL_2(F_3) acts on the four roots as S_4; the Borel is a point stabiliser
    and the nonsplit Cartan normaliser a 2-Sylow. `group` is the transitive
    group name when psi_3 is irreducible.
    """
    degrees = sorted(factor_degrees)
    if sum(degrees) != 4:
        raise InvariantViolationError("psi_3 must have degree 4", {"degrees": degrees})
    reasons: Set[Reason] = set()
    if 1 in degrees:
        reasons.add(Reason.REDUCIBLE)
    if max(degrees) <= 2:
        reasons.update({Reason.SPLIT_CARTAN_NORM, Reason.NONSPLIT_CARTAN_NORM})
    if degrees == [4]:
        if group in ("C4", "V", "D4"):
            reasons.add(Reason.NONSPLIT_CARTAN_NORM)
        elif group != "S4":
            # the determinant is the cyclotomic character, so the projective
            # image cannot sit inside PSL_2(F_3) = A_4
            raise InvariantViolationError(
                "mod-3 projective image inside A_4", {"group": group}
            )
    return frozenset(reasons)


def mod3_image(E: Curve) -> ImageVerdict:
    """Exact image on E[3]; ContainsSL2 iff psi_3 has Galois group S_4."""
    psi3 = division_polynomial_3(E)
    degrees = _factor_degrees(psi3)
    group = None
    if degrees == [4]:
        name, _ = psi3.galois_group(by_name=True)
        group = name.value
    verdict = ImageVerdict(ell=3, reasons=mod3_reasons(degrees, group), primes_used=0)
    logger.debug(
        "mod-3 image",
        extra={"stats": {"a": E.a, "b": E.b, "degrees": degrees, "group": group}},
    )
    return verdict


def image_at(
    E: Curve, ell: int, budget: int, traces: Optional[TraceStream] = None
) -> Verdict:
    """Exact images at 2 and 3; the Frobenius classifier from 5 on."""
    if ell == 2:
        return mod2_image(E)
    if ell == 3:
        return mod3_image(E)
    return classify_mod_ell(E, ell, budget, traces=traces)


def is_surjective(verdict: Verdict) -> bool:
    if isinstance(verdict, Mod2Image):
        return verdict == Mod2Image.FULL
    return verdict.contains_sl2


def surjective_all_ell(
    E: Curve, ell_list: Sequence[int], budget: int
) -> Dict[int, Verdict]:
    if not ell_list:
        raise ConfigError("ell list is empty")
    traces = TraceStream(E, budget)
    return {ell: image_at(E, ell, budget, traces=traces) for ell in sorted(set(ell_list))}
