"""Finite simple undirected graphs over integer vertex ids.

Top-level inputs use dense ids 0..n-1; internal machinery works on induced
subgraphs whose vertex sets are arbitrary subsets of the original ids, so the
class keeps an explicit vertex set rather than assuming density.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

Edge = Tuple[int, int]


def _norm_edge(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError("self-loop %d" % u)
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable graph: a vertex set plus a set of unordered edges."""

    __slots__ = ("_vertices", "_edges", "_adj", "names")

    def __init__(
        self,
        vertices: Iterable[int],
        edges: Iterable[Edge] = (),
        names: Optional[Dict[int, str]] = None,
    ):
        vs = frozenset(vertices)
        es = frozenset(_norm_edge(u, v) for u, v in edges)
        for u, v in es:
            if u not in vs or v not in vs:
                raise ValueError("edge endpoint outside vertex set: (%d,%d)" % (u, v))
        adj: Dict[int, set] = {v: set() for v in vs}
        for u, v in es:
            adj[u].add(v)
            adj[v].add(u)
        self._vertices = vs
        self._edges = es
        self._adj = {v: frozenset(ns) for v, ns in adj.items()}
        self.names = dict(names) if names else None

    @classmethod
    def dense(cls, n: int, edges: Iterable[Edge] = (), names=None) -> "Graph":
        g = cls(range(n), edges, names)
        return g

    @property
    def vertices(self) -> FrozenSet[int]:
        return self._vertices

    @property
    def edges(self) -> FrozenSet[Edge]:
        return self._edges

    @property
    def n(self) -> int:
        return len(self._vertices)

    def sorted_vertices(self) -> List[int]:
        return sorted(self._vertices)

    def has_vertex(self, v: int) -> bool:
        return v in self._vertices

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and v in self._adj.get(u, frozenset())

    def neighbours(self, v: int) -> FrozenSet[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def induced(self, vertices: Iterable[int]) -> "Graph":
        vs = frozenset(vertices)
        if not vs <= self._vertices:
            raise ValueError("induced set is not a subset of the vertex set")
        es = [
            (u, v)
            for u in vs
            for v in self._adj[u]
            if u < v and v in vs
        ]
        return Graph(vs, es)

    def is_spanning_subgraph_of(self, other: "Graph") -> bool:
        return self._vertices == other._vertices and self._edges <= other._edges

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = sorted(set(vertices))
        return all(self.has_edge(vs[i], vs[j]) for i in range(len(vs)) for j in range(i + 1, len(vs)))

    def components(self) -> List[FrozenSet[int]]:
        """Connected components, each sorted internally, ordered by min vertex."""
        seen = set()
        comps = []
        for start in self.sorted_vertices():
            if start in seen:
                continue
            stack = [start]
            comp = {start}
            seen.add(start)
            while stack:
                u = stack.pop()
                for w in self._adj[u]:
                    if w not in comp:
                        comp.add(w)
                        seen.add(w)
                        stack.append(w)
            comps.append(frozenset(comp))
        return comps

    def union(self, other: "Graph") -> "Graph":
        return Graph(
            self._vertices | other._vertices,
            list(self._edges) + list(other._edges),
        )

    def with_edges(self, extra: Iterable[Edge]) -> "Graph":
        return Graph(self._vertices, list(self._edges) + list(extra), self.names)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Graph)
            and self._vertices == other._vertices
            and self._edges == other._edges
        )

    def __hash__(self) -> int:
        return hash((self._vertices, self._edges))

    def __repr__(self) -> str:
        return "Graph(n=%d, m=%d)" % (self.n, len(self._edges))

    def to_json(self, weights: Optional[Sequence[int]] = None) -> dict:
        """Dense-id JSON form; requires vertices 0..n-1."""
        vs = self.sorted_vertices()
        if vs != list(range(len(vs))):
            raise ValueError("JSON form requires dense vertex ids 0..n-1")
        obj: dict = {"n": len(vs), "edges": [list(e) for e in sorted(self._edges)]}
        if weights is not None:
            obj["weights"] = list(weights)
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "Graph":
        n = obj["n"]
        edges = [tuple(e) for e in obj.get("edges", [])]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError("edge endpoint out of range")
        return cls.dense(n, edges)


def weights_from_json(obj: dict) -> Optional[List[int]]:
    return list(obj["weights"]) if "weights" in obj else None


def check_weights(graph: Graph, weights: Dict[int, Fraction]) -> None:
    if set(weights) != set(graph.vertices):
        raise ValueError("weight function domain differs from vertex set")
    if any(w <= 0 for w in weights.values()):
        raise ValueError("weights must be positive")
