"""Frobenius class statistics of the Weierstrass family over F_p."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Tuple, Union

import numpy as np

from src.core.errors import (
    ConfigError,
    EqualCharacteristicError,
    InvariantViolationError,
    NotInCosetError,
)
from src.core.groups.gl2 import DetCoset, GL2, Mat2, fiber_size, group_order_gl2
from src.core.logging import get_logger
from src.core.modarith import is_prime
from src.models.curves import FrobData, phi_rank_is_free_rank2, traces_for_prime

logger = get_logger("equidist")

METHODS = ("twist", "direct")


@dataclass
class ClassHistogram:
    ell: int
    p: int
    counts: Dict[Tuple[int, int], int] = field(default_factory=dict)
    total: int = 0

    def __add__(self, other: "ClassHistogram") -> "ClassHistogram":
        if (self.ell, self.p) != (other.ell, other.p):
            raise ConfigError("cannot merge histograms of different (ell, p)")
        merged = Counter(self.counts)
        merged.update(other.counts)
        return ClassHistogram(self.ell, self.p, dict(merged), self.total + other.total)

    def count(self, t: int, d: int) -> int:
        return self.counts.get((t % self.ell, d % self.ell), 0)


def _check_prime(p: int) -> None:
    if p <= 3 or not is_prime(p):
        raise ConfigError("family statistics need a prime p > 3", {"p": p})


def _tally(values: np.ndarray, weight: int, into: Counter) -> None:
    uniq, counts = np.unique(values, return_counts=True)
    for v, c in zip(uniq.tolist(), counts.tolist()):
        into[int(v)] += weight * int(c)


def _distribution_twist(p: int) -> Counter:
    dist: Counter = Counter()
    units = np.arange(1, p, dtype=np.int64)
    zeros = np.zeros_like(units)
    # rows a = 0 and b = 0 are never twists of (s, s)
    _tally(traces_for_prime(np.stack([zeros, units], axis=1), p), 1, dist)
    _tally(traces_for_prime(np.stack([units, zeros], axis=1), p), 1, dist)
    # (a, b) = (l^2 s, l^3 s) has a_p = chi(l) a_p(s, s); half the l are squares
    s = units[(4 * units + 27) % p != 0]
    base = traces_for_prime(np.stack([s, s], axis=1), p)
    half = (p - 1) // 2
    _tally(base, half, dist)
    _tally(-base, half, dist)
    return dist


def _distribution_direct(p: int) -> Counter:
    dist: Counter = Counter()
    pairs = [
        (a, b) for a in range(p) for b in range(p) if (4 * a**3 + 27 * b * b) % p
    ]
    _tally(traces_for_prime(pairs, p), 1, dist)
    return dist


def family_trace_distribution(p: int, method: str = "twist") -> Dict[int, int]:
    """{a_p: number of nonsingular (a, b) in F_p^2 with that trace}."""
    _check_prime(p)
    if method not in METHODS:
        raise ConfigError(f"unknown method '{method}'", {"known": METHODS})
    dist = _distribution_twist(p) if method == "twist" else _distribution_direct(p)
    total = sum(dist.values())
    if total != p * p - p:
        raise InvariantViolationError("family count mismatch", {"p": p, "total": total})
    return dict(sorted(dist.items()))


def family_histogram(p: int, ell: int, method: str = "twist") -> ClassHistogram:
    if ell == p:
        raise EqualCharacteristicError(p, ell)
    # distribution is shared across ell; callers sweeping ell should fold it themselves
    return histogram_from_distribution(family_trace_distribution(p, method), p, ell)


def histogram_from_distribution(dist: Dict[int, int], p: int, ell: int) -> ClassHistogram:
    """Fold a trace distribution into (a_p mod ell, p mod ell) classes."""
    if ell == p:
        raise EqualCharacteristicError(p, ell)
    counts: Counter = Counter()
    for a_p, c in dist.items():
        counts[(a_p % ell, p % ell)] += c
    h = ClassHistogram(ell, p, dict(sorted(counts.items())), sum(dist.values()))
    logger.debug(
        "histogram",
        extra={"stats": {"p": p, "ell": ell, "classes": len(h.counts), "total": h.total}},
    )
    return h


def sl2_order(ell: int) -> int:
    return group_order_gl2(ell) // (ell - 1)


def is_tame(p: int, ell: int) -> bool:
    """p does not divide |SL_2(F_ell)| = ell (ell^2 - 1)."""
    return (ell * (ell * ell - 1)) % p != 0


def prediction(ell: int, p: int, C: Union[DetCoset, Iterable[Mat2]]) -> float:
    """|C| / |SL_2(F_ell)| * (p^2 - p) for C inside the det = p coset."""
    d = p % ell
    if isinstance(C, DetCoset):
        if C.d != d:
            raise NotInCosetError(d, C.d)
        size = C.cardinality
    else:
        G = GL2(ell)
        size = 0
        for m in C:
            found = G.det(m)
            if found != d:
                raise NotInCosetError(d, found)
            size += 1
    return size / sl2_order(ell) * (p * p - p)


def deviation_report(h: ClassHistogram) -> List[Dict]:
    """(observed - predicted) / p^(3/2) for every trace class in the coset."""
    ell, p = h.ell, h.p
    d = p % ell
    scale = p**1.5
    tame = int(is_tame(p, ell))
    rows = []
    for t in range(ell):
        predicted = fiber_size(ell, t, d) / sl2_order(ell) * h.total
        observed = h.count(t, d)
        rows.append(
            {
                "p": p,
                "ell": ell,
                "t": t,
                "d": d,
                "count": observed,
                "predicted": predicted,
                "normalized_deviation": (observed - predicted) / scale,
                "tame": tame,
            }
        )
    return rows


def mod_p_bad_fiber_count(p: int, ell: int, classes: Iterable[int]) -> Dict[str, float]:
    """Points of A^2(F_p) that are singular or have Frob trace class in `classes`.

    Compared with delta p^2, delta = |C| / |SL_2| for C the union of the
    listed trace fibers in the det = p coset.
    """
    h = family_histogram(p, ell)
    d = p % ell
    traces = sorted({t % ell for t in classes})
    count = p + sum(h.count(t, d) for t in traces)
    delta = sum(fiber_size(ell, t, d) for t in traces) / sl2_order(ell)
    expected = delta * p * p
    return {
        "count": count,
        "delta": delta,
        "expected": expected,
        "normalized": (count - expected) / p**1.5,
    }


def phi_failure_density(p: int) -> float:
    """Share of the F_p family whose Frobenius fails the free-rank-2 test."""
    dist = family_trace_distribution(p)
    failing = sum(c for a_p, c in dist.items() if not phi_rank_is_free_rank2(FrobData(p, a_p)))
    return failing / (p * p - p)
