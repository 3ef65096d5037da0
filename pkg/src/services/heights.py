"""Rational points of bounded height and the Weierstrass coefficient box."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from src.core.errors import ConfigError
from src.core.modarith import mobius
from src.core.utils import split_range
from src.models.curves import Curve, is_singular

Shard = Tuple[int, int]


@dataclass(frozen=True, order=True)
class ProjPoint:
    coords: Tuple[int, ...]

    @property
    def height(self) -> int:
        return max(abs(c) for c in self.coords)

    @property
    def n(self) -> int:
        return len(self.coords) - 1


def canonicalize(v: Sequence[int]) -> ProjPoint:
    """Primitive representative whose first nonzero coordinate is positive."""
    coords = [int(c) for c in v]
    g = math.gcd(*coords)
    if g == 0:
        raise ValueError("the zero vector is not a projective point")
    lead = next(c for c in coords if c)
    if lead < 0:
        g = -g
    return ProjPoint(tuple(c // g for c in coords))


def _shell(width: int, h: int) -> Iterator[Tuple[int, ...]]:
    """Tuples with max |c| = h and first nonzero entry positive, lexicographic."""
    prefix: List[int] = []

    def walk(pos: int, started: bool, at_max: bool) -> Iterator[Tuple[int, ...]]:
        if pos == width:
            if started and at_max:
                yield tuple(prefix)
            return
        last = pos == width - 1
        lo = -h if started else 0
        for c in range(lo, h + 1):
            if last and not at_max and abs(c) != h:
                continue
            prefix.append(c)
            yield from walk(pos + 1, started or c != 0, at_max or abs(c) == h)
            prefix.pop()

    yield from walk(0, False, False)


def enumerate_proj(n: int, x: float) -> Iterator[ProjPoint]:
    """Every point of P^n(Q) with H <= x once, by height then lexicographically."""
    if n < 1:
        raise ConfigError("projective dimension must be at least 1", {"n": n})
    for h in range(1, int(x) + 1):
        for coords in _shell(n + 1, h):
            if math.gcd(*coords) == 1:
                yield ProjPoint(coords)


def count_height(n: int, x: float) -> int:
    """|{u in P^n(Q) : H(u) <= x}| by Mobius inversion over the box count."""
    x = int(x)
    total = sum(
        mobius(d) * ((2 * (x // d) + 1) ** (n + 1) - 1) for d in range(1, x + 1)
    )
    return total // 2


def _rows(x: int, shard: Optional[Shard]) -> range:
    if shard is None:
        return range(-x, x + 1)
    index, count = shard
    if count < 1 or not 0 <= index < count:
        raise ConfigError("bad shard", {"index": index, "count": count})
    start, stop = split_range(2 * x + 1, count)[index]
    return range(start - x, stop - x)


def enumerate_weierstrass(x: int, shard: Optional[Shard] = None) -> Iterator[Curve]:
    """Nonsingular (a, b) with max(|a|, |b|) <= x, row-major in a then b.

    With shard=(i, k) only the i-th of k contiguous blocks of rows is produced;
    concatenating the shards in order gives the full stream.
    """
    x = int(x)
    for a in _rows(x, shard):
        for b in range(-x, x + 1):
            if not is_singular(a, b):
                yield Curve(a, b)


def singular_pairs(x: int) -> List[Tuple[int, int]]:
    """The discriminant locus in the box: (a, b) = (-3t^2, 2t^3)."""
    out = []
    t = 0
    while 3 * t * t <= x and 2 * t**3 <= x:
        out.append((-3 * t * t, 2 * t**3))
        if t:
            out.append((-3 * t * t, -2 * t**3))
        t += 1
    return sorted(out)


def count_weierstrass(x: int) -> int:
    x = int(x)
    return (2 * x + 1) ** 2 - len(singular_pairs(x))
