"""Large-sieve quantities over P^n(Q).

Bound shapes use implicit constant 1 and the internal inequality check uses
constant 64; both are diagnostic, not certified.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Tuple

import numpy as np

from src.core.config import BOUND_SHAPE_CONSTANT, SIEVE_INEQUALITY_CONSTANT
from src.core.errors import (
    ConfigError,
    DeltaOutOfRangeError,
    InvariantViolationError,
    OmegaOutOfRangeError,
)
from src.core.logging import get_logger
from src.core.modarith import primes_in
from src.models.schemas import SieveProblem
from src.services.heights import ProjPoint, enumerate_proj

logger = get_logger("sieve")

Predicate = Callable[[ProjPoint], bool]


def _smallest_prime_factors(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in primes_in(2, limit):
        block = spf[p::p]
        block[block == 0] = p
    return spf


def L_of_Q(P: SieveProblem) -> Fraction:
    """Sum over squarefree a <= Q of prod_{p | a} w_p / (1 - w_p), exactly."""
    limit = int(math.floor(P.Q))
    if limit < 1:
        return Fraction(0)
    weight: Dict[int, Fraction] = {}
    for p in primes_in(2, limit):
        w = P.omega_at(p)
        if not 0 <= w < 1:
            raise OmegaOutOfRangeError(p, w)
        weight[p] = w / (1 - w)

    spf = _smallest_prime_factors(limit)
    g: List[Fraction] = [Fraction(0)] * (limit + 1)
    g[1] = Fraction(1)
    total = Fraction(1)
    for a in range(2, limit + 1):
        p = int(spf[a])
        rest = a // p
        if rest % p == 0:
            continue  # not squarefree
        g[a] = g[rest] * weight[p]
        total += g[a]
    return total


def sieve_bound(P: SieveProblem) -> float:
    L = L_of_Q(P)
    if L == 0:
        return math.inf
    top = max(P.x ** ((P.n + 1) * P.degree), P.Q ** (2 * (P.n + 1)))
    return BOUND_SHAPE_CONSTANT * top / float(L)


def _check_delta(delta: float) -> None:
    if not 0 <= delta < 1:
        raise DeltaOutOfRangeError(delta)


def hit_count_bound(n: int, delta: float, c: float, s_size: int, x: float) -> float:
    """(1-d)^-1 x^(n+1/2) log x + |S|^(4n+4) + ((1-d)^-1 c)^(4n+4)."""
    _check_delta(delta)
    scale = 1.0 / (1.0 - delta)
    return BOUND_SHAPE_CONSTANT * (
        scale * x ** (n + 0.5) * math.log(x)
        + float(s_size) ** (4 * n + 4)
        + (scale * c) ** (4 * n + 4)
    )


def adjusted_excluded_size(s_size: int, group_order: int) -> int:
    """|S'| = |S| + ceil(log2 |G_g|)."""
    return s_size + math.ceil(math.log2(group_order)) if group_order > 1 else s_size


def hit_theorem_bound(
    n: int, x: float, s_size: int, class_size: int, group_order: int
) -> float:
    """x^(n+1/2) log x + |S'|^(4n+4) + |C|^(2n+2) |G_g|^(4n+4)."""
    s_prime = adjusted_excluded_size(s_size, group_order)
    return BOUND_SHAPE_CONSTANT * (
        x ** (n + 0.5) * math.log(x)
        + float(s_prime) ** (4 * n + 4)
        + float(class_size) ** (2 * n + 2) * float(group_order) ** (4 * n + 4)
    )


def omega_lower_bound(delta: float, c: float, N: int) -> float:
    """Guaranteed w_p when the image mod p has at most d N^n + c N^(n-1/2) points."""
    _check_delta(delta)
    if N >= 4 * c * c / (1 - delta) ** 2:
        return (1 - delta) / 2
    return 0.0


def reduction_omega(predicate: Predicate, n: int, p: int, box: int = 0) -> Fraction:
    """1 - |B'_p| / p^(n+1), B'_p the reductions of all lifts of B.

    Points of B are found among heights <= box (default 2p), which is enough
    to hit every residue class the set can reach.
    """
    box = box or 2 * p
    image = {tuple([0] * (n + 1))}
    for u in enumerate_proj(n, box):
        if not predicate(u):
            continue
        base = tuple(c % p for c in u.coords)
        for lam in range(1, p):
            image.add(tuple(lam * c % p for c in base))
    return 1 - Fraction(len(image), p ** (n + 1))


def count_in_set(predicate: Predicate, n: int, x: float) -> int:
    return sum(1 for u in enumerate_proj(n, x) if predicate(u))


def check_sieve_inequality(count: int, P: SieveProblem) -> float:
    """Assert count <= 64 * sieve_bound; returns the bound."""
    bound = sieve_bound(P)
    if count > SIEVE_INEQUALITY_CONSTANT * bound:
        logger.error(
            "sieve inequality violated",
            extra={"stats": {"count": count, "bound": bound, "x": P.x}},
        )
        raise InvariantViolationError(
            "large-sieve inequality violated",
            {"count": count, "bound": bound, "x": P.x, "Q": P.Q},
        )
    return bound


def _even_numerator(u: ProjPoint) -> bool:
    return u.coords[0] % 2 == 0


def _everything(u: ProjPoint) -> bool:
    return True


DEMO_SETS: Dict[str, Tuple[Predicate, str]] = {
    "zero": (_everything, "all of P^1(Q); every w_p is 0"),
    "even-numerator": (_even_numerator, "[u0:u1] with u0 even"),
    "half": (_everything, "w_p = 1/2 for every p <= Q"),
}


def demo_problem(name: str, x: float) -> Tuple[SieveProblem, Predicate]:
    if name not in DEMO_SETS:
        raise ConfigError(f"unknown sieve demo '{name}'", {"known": sorted(DEMO_SETS)})
    predicate, _ = DEMO_SETS[name]
    Q = math.sqrt(x)
    primes = primes_in(2, int(Q))
    if name == "half":
        omega = {p: Fraction(1, 2) for p in primes}
    else:
        omega = {p: reduction_omega(predicate, 1, p) for p in primes}
    return SieveProblem(n=1, omega=omega, x=x, Q=Q), predicate


def sieve_table(name: str, xs: Iterable[float]) -> List[Dict]:
    rows = []
    for x in xs:
        P, predicate = demo_problem(name, x)
        L = L_of_Q(P)
        bound = sieve_bound(P)
        count = count_in_set(predicate, P.n, x)
        rows.append(
            {
                "demo": name,
                "x": int(x),
                "Q": P.Q,
                "L": float(L),
                "L_exact": str(L),
                "bound": bound,
                "count": count,
                "within": int(count <= SIEVE_INEQUALITY_CONSTANT * bound),
            }
        )
    return rows
