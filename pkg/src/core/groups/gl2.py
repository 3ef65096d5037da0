"""GL_2 over Z/n with matrices packed into one int."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import sympy

from src.core.config import EXHAUSTIVE_ELL_CAP
from src.core.errors import CompositeModulusError, ConfigError, InvariantViolationError
from src.core.groups.base import FiniteGroup, SubgroupHandle, closure, commutator_subgroup
from src.core.modarith import FieldElem, is_prime, primitive_root

Mat2 = int

_MASK = 0xFFFF
_FIELD_LIMIT = 1 << 16

SPLIT = "split"
NONSPLIT = "nonsplit"
REPEATED = "repeated"


def pack(a: int, b: int, c: int, d: int) -> Mat2:
    return a | (b << 16) | (c << 32) | (d << 48)


def unpack(m: Mat2) -> Tuple[int, int, int, int]:
    return m & _MASK, (m >> 16) & _MASK, (m >> 32) & _MASK, (m >> 48) & _MASK


def group_order_gl2(ell: int) -> int:
    return (ell * ell - 1) * (ell * ell - ell)


def group_order_gl2_mod(n: int) -> int:
    """|GL_2(Z/n)| = n^4 * prod over p | n of (1 - 1/p)(1 - 1/p^2)."""
    order = n**4
    for p in sympy.primefactors(n):
        order = order // (p * p * p) * (p - 1) * (p * p - 1)
    return order


def euler_phi(n: int) -> int:
    return int(sympy.totient(n))


class GL2(FiniteGroup):
    """The group GL_2(Z/n); prime n unless allow_composite is set."""

    def __init__(self, n: int, allow_composite: bool = False):
        if n < 2 or n >= _FIELD_LIMIT:
            raise ConfigError(f"modulus {n} outside [2, {_FIELD_LIMIT})", {"n": n})
        if not allow_composite and not is_prime(n):
            raise CompositeModulusError(n, min(sympy.primefactors(n)))
        self.n = n
        self.is_field = is_prime(n)

    def __repr__(self) -> str:
        return f"GL2({self.n})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GL2) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("GL2", self.n))

    # -- construction --------------------------------------------------

    def matrix(self, rows: Sequence[Sequence[int]]) -> Mat2:
        (a, b), (c, d) = rows
        n = self.n
        m = pack(a % n, b % n, c % n, d % n)
        if math.gcd(self.det(m), n) != 1:
            raise InvariantViolationError("matrix is not invertible", {"rows": rows, "n": n})
        return m

    def rows(self, m: Mat2) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        a, b, c, d = unpack(m)
        return (a, b), (c, d)

    def diag(self, x: int, y: int) -> Mat2:
        return self.matrix([[x, 0], [0, y]])

    def scalar(self, x: int) -> Mat2:
        return self.diag(x, x)

    # -- group law -----------------------------------------------------

    def identity(self) -> Mat2:
        return pack(1, 0, 0, 1)

    def mul(self, x: Mat2, y: Mat2) -> Mat2:
        n = self.n
        a, b, c, d = x & _MASK, (x >> 16) & _MASK, (x >> 32) & _MASK, x >> 48
        e, f, g, h = y & _MASK, (y >> 16) & _MASK, (y >> 32) & _MASK, y >> 48
        return (
            (a * e + b * g) % n
            | ((a * f + b * h) % n) << 16
            | ((c * e + d * g) % n) << 32
            | ((c * f + d * h) % n) << 48
        )

    def inv(self, x: Mat2) -> Mat2:
        n = self.n
        a, b, c, d = unpack(x)
        r = pow((a * d - b * c) % n, -1, n)
        return pack(d * r % n, -b * r % n, -c * r % n, a * r % n)

    def order(self) -> int:
        return group_order_gl2_mod(self.n)

    def det(self, m: Mat2) -> int:
        a, b, c, d = unpack(m)
        return (a * d - b * c) % self.n

    def trace(self, m: Mat2) -> int:
        a, _, _, d = unpack(m)
        return (a + d) % self.n

    def is_scalar(self, m: Mat2) -> bool:
        a, b, c, d = unpack(m)
        return b == 0 and c == 0 and a == d

    # -- enumeration ---------------------------------------------------

    def units(self) -> List[int]:
        return [u for u in range(1, self.n) if math.gcd(u, self.n) == 1]

    def iter_elements(self) -> Iterator[Mat2]:
        n = self.n
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    for d in range(n):
                        if math.gcd((a * d - b * c) % n, n) == 1:
                            yield pack(a, b, c, d)

    def full_group(self) -> SubgroupHandle:
        """GL_2(Z/n) from elementary matrices and diag(u, 1)."""
        units = [primitive_root(self.n)] if self.is_field else self.units()
        gens = [self.matrix([[1, 1], [0, 1]]), self.matrix([[1, 0], [1, 1]])]
        gens += [self.diag(u, 1) for u in units if u != 1]
        return SubgroupHandle(self, gens)

    def special_group(self) -> SubgroupHandle:
        """SL_2(Z/n) is generated by the two elementary matrices."""
        return SubgroupHandle(
            self, [self.matrix([[1, 1], [0, 1]]), self.matrix([[1, 0], [1, 1]])]
        )

    def sl2_order(self) -> int:
        return self.order() // euler_phi(self.n)


@lru_cache(maxsize=32)
def gl2(ell: int) -> GL2:
    """Shared prime-field context; exhaustive work is limited to small ell."""
    if ell > EXHAUSTIVE_ELL_CAP:
        raise ConfigError(
            f"ell = {ell} exceeds the exhaustive cap {EXHAUSTIVE_ELL_CAP}",
            {"ell": ell, "cap": EXHAUSTIVE_ELL_CAP},
        )
    return GL2(ell)


def conj_invariants(G: GL2, m: Mat2) -> Tuple[FieldElem, FieldElem]:
    return FieldElem(G.trace(m), G.n), FieldElem(G.det(m), G.n)


@lru_cache(maxsize=32)
def _splitting_table(ell: int) -> Dict[Tuple[int, int], str]:
    table: Dict[Tuple[int, int], str] = {}
    for t in range(ell):
        for d in range(1, ell):
            roots = [x for x in range(ell) if (x * x - t * x + d) % ell == 0]
            if len(roots) == 2:
                table[(t, d)] = SPLIT
            elif len(roots) == 1:
                table[(t, d)] = REPEATED
            else:
                table[(t, d)] = NONSPLIT
    return table


def charpoly_splitting(ell: int, t: int, d: int) -> str:
    """How x^2 - t x + d factors over F_ell: split, nonsplit or repeated."""
    return _splitting_table(ell)[(int(t) % ell, int(d) % ell)]


def fiber_size(ell: int, t: int, d: int) -> int:
    kind = charpoly_splitting(ell, t, d)
    if kind == SPLIT:
        return ell * ell + ell
    if kind == NONSPLIT:
        return ell * ell - ell
    return ell * ell


def charpoly_fiber(G: GL2, t: int, d: int) -> FrozenSet[Mat2]:
    """All matrices with trace t and determinant d (d a unit)."""
    ell = G.n
    t, d = int(t) % ell, int(d) % ell
    if d == 0:
        raise InvariantViolationError("charpoly fiber needs d != 0", {"ell": ell})
    out = set()
    for a in range(ell):
        e = (t - a) % ell
        rest = (a * e - d) % ell  # = b * c
        for b in range(ell):
            if b:
                c = rest * pow(b, -1, ell) % ell
                out.add(pack(a, b, c, e))
            elif rest == 0:
                for c in range(ell):
                    out.add(pack(a, 0, c, e))
    fiber = frozenset(out)
    if len(fiber) != fiber_size(ell, t, d):
        raise InvariantViolationError(
            "charpoly fiber has the wrong size",
            {"ell": ell, "t": t, "d": d, "size": len(fiber)},
        )
    return fiber


@dataclass(frozen=True)
class DetCoset:
    """The coset {m : det m = d} of SL_2, by predicate."""

    group: GL2
    d: int

    def __contains__(self, m: Mat2) -> bool:
        return self.group.det(m) == self.d % self.group.n

    def __len__(self) -> int:
        return self.cardinality

    @property
    def cardinality(self) -> int:
        return self.group.sl2_order()

    def elements(self) -> Iterator[Mat2]:
        return (m for m in self.group.iter_elements() if m in self)


def det_coset(G: GL2, d: int) -> DetCoset:
    if int(d) % G.n == 0:
        raise InvariantViolationError("det coset needs d != 0", {"n": G.n})
    return DetCoset(G, int(d) % G.n)


def centralizer_order(G: GL2, m: Mat2, within: Optional[SubgroupHandle] = None) -> int:
    pool = within.elements if within is not None else G.iter_elements()
    return sum(1 for x in pool if G.mul(x, m) == G.mul(m, x))


def is_semisimple(G: GL2, m: Mat2) -> bool:
    if G.is_scalar(m):
        return True
    return charpoly_splitting(G.n, G.trace(m), G.det(m)) != REPEATED


def projective_order_invariant(G: GL2, m: Mat2) -> int:
    """u = t^2 / d, constant on scalar multiples of m."""
    d = G.det(m)
    t = G.trace(m)
    return t * t * pow(d, -1, G.n) % G.n


@lru_cache(maxsize=32)
def exceptional_invariants(ell: int) -> FrozenSet[int]:
    """Values of t^2/d on elements of projective order 1, 2, 3, 4 or 5."""
    values = {4 % ell, 0, 1 % ell, 2 % ell}
    values.update(x for x in range(ell) if (x * x - 3 * x + 1) % ell == 0)
    return frozenset(values)


def sl2_index_of_commutator(n: int) -> int:
    """[SL_2(Z/n) : GL_2(Z/n)']."""
    G = GL2(n, allow_composite=True)
    derived = commutator_subgroup(closure(G, G.full_group().generators))
    for m in derived.elements:
        if G.det(m) != 1:
            raise InvariantViolationError(
                "commutator of GL_2 left SL_2", {"n": n, "det": G.det(m)}
            )
    return G.sl2_order() // derived.order
