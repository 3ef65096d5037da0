"""Short Weierstrass curves y^2 = x^3 + ax + b over Q and their reductions mod p."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from src.core.errors import (
    EqualCharacteristicError,
    HasseBoundError,
    SingularCurveError,
)
from src.core.modarith import FieldElem, legendre, legendre_table

# Vectorised kernels keep x^3 in int64; above this the scalar path is used.
VECTOR_P_LIMIT = 1 << 20
_BATCH_CELLS = 1 << 22


@dataclass(frozen=True)
class Curve:
    a: int
    b: int

    def __post_init__(self) -> None:
        if self.disc_core == 0:
            raise SingularCurveError(self.a, self.b)

    @property
    def disc_core(self) -> int:
        """4a^3 + 27b^2; the discriminant is -16 times this."""
        return 4 * self.a**3 + 27 * self.b**2

    @property
    def discriminant(self) -> int:
        return -16 * self.disc_core


@dataclass(frozen=True)
class CurveModP:
    a: FieldElem
    b: FieldElem
    p: int


@dataclass(frozen=True)
class BadReduction:
    p: int
    reason: str


@dataclass(frozen=True)
class FrobData:
    p: int
    a_p: int

    def __post_init__(self) -> None:
        if self.a_p * self.a_p > 4 * self.p:
            raise HasseBoundError(self.p, self.a_p)

    @property
    def point_count(self) -> int:
        return self.p + 1 - self.a_p

    @property
    def charpoly(self) -> Tuple[int, int, int]:
        """Coefficients of x^2 - a_p x + p."""
        return (1, -self.a_p, self.p)


Reduction = Union[CurveModP, BadReduction]


def is_singular(a: int, b: int) -> bool:
    return 4 * a**3 + 27 * b**2 == 0


def reduce(E: Curve, p: int) -> Reduction:
    if p <= 3:
        return BadReduction(p, "small characteristic")
    if E.disc_core % p == 0:
        return BadReduction(p, "p divides 4a^3 + 27b^2")
    return CurveModP(FieldElem(E.a % p, p), FieldElem(E.b % p, p), p)


@lru_cache(maxsize=64)
def _cubes(p: int) -> np.ndarray:
    xs = np.arange(p, dtype=np.int64)
    cubes = (xs * xs % p) * xs % p
    cubes.setflags(write=False)
    return cubes


def _character_sum(a: int, b: int, p: int) -> int:
    """Sum over x in F_p of chi(x^3 + ax + b)."""
    if p < VECTOR_P_LIMIT:
        xs = np.arange(p, dtype=np.int64)
        values = (_cubes(p) + (a % p) * xs + (b % p)) % p
        return int(legendre_table(p)[values].sum(dtype=np.int64))
    return sum(
        legendre(FieldElem((x * x * x + a * x + b) % p, p)) for x in range(p)
    )


def trace_of_frobenius(E: CurveModP) -> FrobData:
    return FrobData(E.p, -_character_sum(E.a.value, E.b.value, E.p))


def trace_at(E: Curve, p: int) -> Union[FrobData, BadReduction]:
    reduced = reduce(E, p)
    if isinstance(reduced, BadReduction):
        return reduced
    return trace_of_frobenius(reduced)


def traces_for_prime(pairs: Sequence[Tuple[int, int]], p: int) -> np.ndarray:
    """a_p for many (a, b) at one prime; callers drop pairs with bad reduction."""
    coeffs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2) % p
    out = np.empty(len(coeffs), dtype=np.int64)
    if p >= VECTOR_P_LIMIT:
        for i, (a, b) in enumerate(coeffs):
            out[i] = -_character_sum(int(a), int(b), p)
        return out
    xs = np.arange(p, dtype=np.int64)
    cubes = _cubes(p)
    chi = legendre_table(p)
    rows = max(1, _BATCH_CELLS // p)
    for start in range(0, len(coeffs), rows):
        block = coeffs[start : start + rows]
        values = (cubes[None, :] + block[:, :1] * xs[None, :] + block[:, 1:]) % p
        out[start : start + rows] = -chi[values].sum(axis=1, dtype=np.int64)
    return out


def count_points_bruteforce(a: int, b: int, p: int) -> int:
    """#E(F_p) by enumerating (x, y) in F_p^2, plus the point at infinity."""
    squares: dict = {}
    for y in range(p):
        key = y * y % p
        squares[key] = squares.get(key, 0) + 1
    affine = sum(squares.get((x * x * x + a * x + b) % p, 0) for x in range(p))
    return affine + 1


def frobenius_charpoly_mod(f: FrobData, ell: int) -> Tuple[FieldElem, FieldElem]:
    """(trace, det) of Frobenius at p acting on the ell-torsion."""
    if f.p == ell:
        raise EqualCharacteristicError(f.p, ell)
    return FieldElem(f.a_p % ell, ell), FieldElem(f.p % ell, ell)


def phi_rank_is_free_rank2(f: FrobData) -> bool:
    """Whether the Frobenius eigenvalues generate a free abelian group of rank 2.

    Both roots have absolute value sqrt(p), so any relation reduces to the
    ratio of the roots being a root of unity. That happens exactly in the
    supersingular case and when a_p^2 is one of 0, p, 2p, 3p, 4p.
    """
    if f.a_p % f.p == 0:
        return False
    return f.a_p * f.a_p not in {k * f.p for k in range(5)}


def weil_ratio_power(f: FrobData, k: int) -> complex:
    """(pi / conj(pi))^k for the roots of x^2 - a_p x + p."""
    imag = math.sqrt(max(4 * f.p - f.a_p * f.a_p, 0))
    root = complex(f.a_p, imag) / 2
    return (root / root.conjugate()) ** k


def has_torsion_ratio(f: FrobData, max_order: int = 12, tol: float = 1e-9) -> bool:
    """Numerical oracle: is (pi/conj(pi))^k = 1 for some 1 <= k <= max_order."""
    return any(
        abs(weil_ratio_power(f, k) - 1) < tol for k in range(1, max_order + 1)
    )


def good_primes(E: Curve, primes: Iterable[int]) -> List[int]:
    return [p for p in primes if not isinstance(reduce(E, p), BadReduction)]

