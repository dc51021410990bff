"""Vertex counts and frozen edge lists of the eight named graphs (0-indexed)."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import UnknownGraph


@dataclass(frozen=True)
class Topology:
    name: str
    n: int
    edges: tuple[tuple[int, int], ...]

    def neighbors(self, v: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return sorted(out)

    def bfs_order(self) -> list[tuple[int, int | None]]:
        """(vertex, parent) pairs in BFS order from vertex 0."""
        seen = {0}
        order: list[tuple[int, int | None]] = [(0, None)]
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for w in self.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    order.append((w, v))
                    queue.append(w)
        return order

    def min_degree(self) -> int:
        return min(len(self.neighbors(v)) for v in range(self.n))


GRAPHS: dict[str, Topology] = {
    t.name: t
    for t in (
        Topology("K2", 2, ((0, 1),)),
        Topology("K3", 3, ((0, 1), (1, 2), (2, 0))),
        Topology("P2", 3, ((0, 1), (1, 2))),
        Topology("P3", 4, ((0, 1), (1, 2), (2, 3))),
        Topology("C4", 4, ((0, 1), (1, 2), (2, 3), (3, 0))),
        Topology("C4_DIAG", 4, ((0, 1), (1, 2), (2, 3), (3, 0), (0, 2))),
        Topology("KITE", 4, ((0, 1), (1, 2), (2, 3), (2, 0))),
        Topology("Y", 4, ((2, 0), (2, 1), (2, 3))),
    )
}

GRAPH_NAMES = tuple(GRAPHS)


def get_topology(name: str) -> Topology:
    try:
        return GRAPHS[str(name).upper()]
    except KeyError:
        raise UnknownGraph(f"unknown graph {name!r}; choose from {', '.join(GRAPH_NAMES)}") from None
