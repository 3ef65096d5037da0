"""Abstract finite-group context and materialised subgroups."""
from __future__ import annotations

from abc import ABC, abstractmethod
from collections import deque
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence

from src.core.config import CLOSURE_CAP
from src.core.errors import CapExceededError, InvariantViolationError
from src.core.logging import get_logger

logger = get_logger("groups")

Element = int


class FiniteGroup(ABC):
    """Elements are plain ints; the context knows how to multiply them."""

    @abstractmethod
    def identity(self) -> Element:
        raise NotImplementedError

    @abstractmethod
    def mul(self, x: Element, y: Element) -> Element:
        raise NotImplementedError

    @abstractmethod
    def inv(self, x: Element) -> Element:
        raise NotImplementedError

    @abstractmethod
    def order(self) -> Optional[int]:
        """Order of the ambient group, if known in closed form."""
        raise NotImplementedError

    def conj(self, g: Element, x: Element) -> Element:
        return self.mul(self.mul(g, x), self.inv(g))

    def commutator(self, g: Element, h: Element) -> Element:
        return self.mul(self.mul(g, h), self.mul(self.inv(g), self.inv(h)))

    def element_order(self, x: Element) -> int:
        one = self.identity()
        power, k = x, 1
        while power != one:
            power = self.mul(power, x)
            k += 1
        return k


class SubgroupHandle:
    """A subgroup given by generators; its element set is built on demand."""

    def __init__(
        self,
        ambient: FiniteGroup,
        generators: Sequence[Element],
        elements: Optional[Iterable[Element]] = None,
        cap: Optional[int] = None,
    ):
        self.ambient = ambient
        self.generators = tuple(generators)
        self.cap = cap or CLOSURE_CAP
        self._elements: Optional[FrozenSet[Element]] = (
            frozenset(elements) if elements is not None else None
        )

    @classmethod
    def from_elements(
        cls, ambient: FiniteGroup, elements: Iterable[Element]
    ) -> "SubgroupHandle":
        items = frozenset(elements)
        return cls(ambient, sorted(items), elements=items)

    @property
    def elements(self) -> FrozenSet[Element]:
        if self._elements is None:
            self._elements = _close(self.ambient, self.generators, self.cap)
        return self._elements

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: Element) -> bool:
        return x in self.elements

    def __iter__(self) -> Iterator[Element]:
        return iter(sorted(self.elements))

    def __len__(self) -> int:
        return self.order

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubgroupHandle):
            return NotImplemented
        return self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def is_subgroup_of(self, other: "SubgroupHandle") -> bool:
        return self.elements <= other.elements

    def intersection(self, other: "SubgroupHandle") -> "SubgroupHandle":
        return SubgroupHandle.from_elements(
            self.ambient, self.elements & other.elements
        )

    def conjugate_set(self, g: Element) -> FrozenSet[Element]:
        return frozenset(self.ambient.conj(g, x) for x in self.elements)

    def is_trivial(self) -> bool:
        return self.order == 1


def _close(
    ambient: FiniteGroup, generators: Sequence[Element], cap: int
) -> FrozenSet[Element]:
    one = ambient.identity()
    gens = [g for g in dict.fromkeys(generators) if g != one]
    seen = {one}
    queue = deque([one])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = ambient.mul(x, g)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise CapExceededError(cap, len(seen))
                queue.append(y)
    total = ambient.order()
    if total is not None and total % len(seen) != 0:
        logger.error(
            "closure order does not divide the group order",
            extra={"stats": {"closure": len(seen), "ambient": total}},
        )
        raise InvariantViolationError(
            "Lagrange check failed for closure",
            {"closure": len(seen), "ambient": total},
        )
    return frozenset(seen)


def closure(
    ambient: FiniteGroup,
    generators: Sequence[Element],
    cap: Optional[int] = None,
) -> SubgroupHandle:
    handle = SubgroupHandle(ambient, generators, cap=cap)
    handle.elements  # materialise now so CapExceeded surfaces here
    return handle


def commutator_subgroup(
    G: SubgroupHandle, spot_checks: int = 64
) -> SubgroupHandle:
    """G' as the normal closure of the commutators of G's generators."""
    ambient = G.ambient
    gens = [g for g in G.generators if g in G.elements]
    seeds: List[Element] = []
    for i, g in enumerate(gens):
        for h in gens[i + 1 :]:
            c = ambient.commutator(g, h)
            if c != ambient.identity():
                seeds.append(c)

    derived = SubgroupHandle(ambient, seeds, cap=G.cap)
    changed = True
    while changed:
        changed = False
        for g in gens:
            for n in list(derived.generators):
                c = ambient.conj(g, n)
                if c not in derived.elements:
                    derived = SubgroupHandle(
                        ambient, derived.generators + (c,), cap=G.cap
                    )
                    changed = True

    _check_normal(G, derived, spot_checks)
    return derived


def _check_normal(G: SubgroupHandle, N: SubgroupHandle, spot_checks: int) -> None:
    ambient = G.ambient
    sample = sorted(N.elements)[:spot_checks]
    for g in G.generators:
        for n in sample:
            if ambient.conj(g, n) not in N.elements:
                raise InvariantViolationError(
                    "commutator subgroup is not normal",
                    {"generator": g, "element": n},
                )
