"""Direct products of materialised groups via Cayley tables."""
from __future__ import annotations

from typing import Dict, List, Tuple

from src.core.groups.base import Element, FiniteGroup, SubgroupHandle


class CayleyTable:
    """Index-based multiplication table of a small materialised group."""

    def __init__(self, group: SubgroupHandle):
        ambient = group.ambient
        self.items: List[Element] = sorted(group.elements)
        self.index: Dict[Element, int] = {x: i for i, x in enumerate(self.items)}
        self.table: List[List[int]] = [
            [self.index[ambient.mul(x, y)] for y in self.items] for x in self.items
        ]
        self.inverse: List[int] = [self.index[ambient.inv(x)] for x in self.items]
        self.unit = self.index[ambient.identity()]

    def __len__(self) -> int:
        return len(self.items)


class ProductGroup(FiniteGroup):
    """G1 x G2 with elements encoded as i * |G2| + j."""

    def __init__(self, left: CayleyTable, right: CayleyTable):
        self.left = left
        self.right = right
        self.width = len(right)

    def split(self, x: Element) -> Tuple[int, int]:
        return divmod(x, self.width)

    def join(self, i: int, j: int) -> Element:
        return i * self.width + j

    def identity(self) -> Element:
        return self.join(self.left.unit, self.right.unit)

    def mul(self, x: Element, y: Element) -> Element:
        i, j = divmod(x, self.width)
        k, m = divmod(y, self.width)
        return self.join(self.left.table[i][k], self.right.table[j][m])

    def inv(self, x: Element) -> Element:
        i, j = divmod(x, self.width)
        return self.join(self.left.inverse[i], self.right.inverse[j])

    def order(self) -> int:
        return len(self.left) * len(self.right)

    def pair(self, a: Element, b: Element) -> Element:
        """Encode a pair of ambient elements."""
        return self.join(self.left.index[a], self.right.index[b])
