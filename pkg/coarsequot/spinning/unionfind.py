"""Union-find whose links carry the group element moving a vertex onto its parent."""

from __future__ import annotations

from collections import defaultdict

import numpy as np

from coarsequot.groups.words import GroupElement


class PotentialUnionFind:
    """Disjoint sets over ``0..n-1`` with potentials.

    Each vertex ``x`` stores an element ``m`` with ``m · x = parent(x)``. ``find`` composes these
    along the path, so ``find(x)`` returns the root together with the element carrying ``x`` to
    it. Union is by size; path compression keeps the composed potentials.
    """

    def __init__(self, n: int) -> None:
        """Start with ``n`` singleton sets and trivial potentials."""
        self.parents = np.arange(n)
        self.sizes = np.ones(n, dtype=np.int64)
        self.potentials: list[GroupElement] = [GroupElement.identity()] * n
        self.cycles: list[tuple[int, GroupElement]] = []

    def find(self, x: int) -> tuple[int, GroupElement]:
        """Root of ``x`` and the element ``m`` with ``m · x = root``."""
        path = []
        while self.parents[x] != x:
            path.append(x)
            x = int(self.parents[x])
        root = x
        carried = GroupElement.identity()
        for v in reversed(path):
            carried = carried * self.potentials[v]
            self.potentials[v] = carried
            self.parents[v] = root
        return root, (self.potentials[path[0]] if path else GroupElement.identity())

    def union(self, x: int, y: int, n: GroupElement) -> int:
        """Record ``n · x = y``; returns the surviving root.

        A union inside one set closes a loop; its element ``my · n · mx⁻¹`` fixes the root and is
        kept in ``cycles``.
        """
        rx, mx = self.find(x)
        ry, my = self.find(y)
        link = my * n * ~mx
        if rx == ry:
            if not link.is_identity:
                self.cycles.append((rx, link))
            return rx
        if self.sizes[rx] < self.sizes[ry]:
            self.parents[rx] = ry
            self.potentials[rx] = link
            self.sizes[ry] += self.sizes[rx]
            return ry
        self.parents[ry] = rx
        self.potentials[ry] = ~link
        self.sizes[rx] += self.sizes[ry]
        return rx

    def groups(self) -> list[list[int]]:
        """Members of each set, every list sorted, lists ordered by their smallest member."""
        groups: dict[int, list[int]] = defaultdict(list)
        for v in range(len(self.parents)):
            groups[self.find(v)[0]].append(v)
        return sorted(groups.values(), key=lambda members: members[0])

    def carry(self, x: int, y: int) -> GroupElement | None:
        """The element ``n`` with ``n · x = y`` read off the potentials, or ``None`` if apart."""
        rx, mx = self.find(x)
        ry, my = self.find(y)
        if rx != ry:
            return None
        return ~my * mx
