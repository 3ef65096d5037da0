"""Prime-field arithmetic and the elementary number theory the experiments share."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Union

import numpy as np
import sympy

from src.core.config import MODULUS_LIMIT
from src.core.errors import CompositeModulusError, ZeroInverseError

IntLike = Union[int, "FieldElem"]


def is_prime(n: int) -> bool:
    # sympy's test is deterministic below 2**64, which covers MODULUS_LIMIT
    return n >= 2 and bool(sympy.isprime(n))


@dataclass(frozen=True)
class FieldElem:
    value: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        # canonical representative in [0, modulus)
        object.__setattr__(self, "value", int(self.value) % self.modulus)

    def _coerce(self, other: IntLike) -> int:
        if isinstance(other, FieldElem):
            if other.modulus != self.modulus:
                raise ValueError(
                    f"cannot mix residues mod {self.modulus} and mod {other.modulus}"
                )
            return other.value
        return int(other) % self.modulus

    def _make(self, value: int) -> "FieldElem":
        return FieldElem(value % self.modulus, self.modulus)

    def __add__(self, other: IntLike) -> "FieldElem":
        return self._make(self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other: IntLike) -> "FieldElem":
        return self._make(self.value - self._coerce(other))

    def __rsub__(self, other: IntLike) -> "FieldElem":
        return self._make(self._coerce(other) - self.value)

    def __mul__(self, other: IntLike) -> "FieldElem":
        return self._make(self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self) -> "FieldElem":
        return self._make(-self.value)

    def __pow__(self, exponent: int) -> "FieldElem":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return self._make(pow(self.value, exponent, self.modulus))

    def __truediv__(self, other: IntLike) -> "FieldElem":
        return self * self._make(self._coerce(other)).inverse()

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def inverse(self) -> "FieldElem":
        if self.value == 0:
            raise ZeroInverseError(self.modulus)
        # extended Euclid via pow(.., -1, ..)
        return self._make(pow(self.value, -1, self.modulus))

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.modulus})"


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __call__(self, value: int) -> FieldElem:
        return FieldElem(int(value) % self.p, self.p)

    @property
    def order(self) -> int:
        return self.p

    def elements(self) -> List[FieldElem]:
        return [FieldElem(v, self.p) for v in range(self.p)]

    def zero(self) -> FieldElem:
        return FieldElem(0, self.p)

    def one(self) -> FieldElem:
        return FieldElem(1 % self.p, self.p)


def field_new(p: int) -> PrimeField:
    if p < 2 or p >= MODULUS_LIMIT:
        raise CompositeModulusError(p)
    if not is_prime(p):
        witness = min(sympy.primefactors(p)) if p < (1 << 32) else None
        raise CompositeModulusError(p, witness)
    return PrimeField(p)


def legendre(a: FieldElem) -> int:
    """Euler's criterion: 0, +1 or -1."""
    if a.value == 0:
        return 0
    if a.modulus == 2:
        return 1
    r = pow(a.value, (a.modulus - 1) // 2, a.modulus)
    return 1 if r == 1 else -1


@lru_cache(maxsize=64)
def legendre_table(p: int) -> np.ndarray:
    """chi(v) for v = 0..p-1 as an int8 array (read-only)."""
    xs = np.arange(p, dtype=np.int64)
    chi = np.full(p, -1, dtype=np.int8)
    chi[(xs * xs) % p] = 1
    chi[0] = 0
    chi.setflags(write=False)
    return chi


def squarefree_up_to(Q: int) -> List[int]:
    Q = int(Q)
    if Q < 1:
        return []
    mask = np.ones(Q + 1, dtype=bool)
    mask[0] = False
    k = 2
    while k * k <= Q:
        mask[k * k :: k * k] = False
        k += 1
    return [int(a) for a in np.flatnonzero(mask)]


def primes_in(lo: int, hi: int) -> List[int]:
    if hi < lo or hi < 2:
        return []
    return [int(p) for p in sympy.primerange(max(lo, 2), hi + 1)]


def primitive_root(p: int) -> int:
    return int(sympy.primitive_root(p))


def mobius(n: int) -> int:
    return int(sympy.mobius(n))
