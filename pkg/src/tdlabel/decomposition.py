"""Rooted forest-decompositions: validation, torsos, and tidying.

A decomposition is a rooted forest with one bag of graph vertices per node.
Derived data (depths, home nodes, adhesions) is computed eagerly; instances
are treated as immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .graphs import Graph


class RootedForestDecomposition:
    """Indexed forest plus bags, with parent-adhesions and home nodes derived."""

    __slots__ = ("parent", "bags", "children", "roots", "depth", "_order")

    def __init__(self, parent: Sequence[Optional[int]], bags: Sequence[FrozenSet[int]]):
        if len(parent) != len(bags):
            raise ValueError("parent and bag lists differ in length")
        n = len(parent)
        self.parent: Tuple[Optional[int], ...] = tuple(parent)
        self.bags: Tuple[FrozenSet[int], ...] = tuple(frozenset(b) for b in bags)
        children: List[List[int]] = [[] for _ in range(n)]
        roots = []
        for x, p in enumerate(self.parent):
            if p is None:
                roots.append(x)
            else:
                if not 0 <= p < n:
                    raise ValueError("parent id out of range")
                children[p].append(x)
        self.children: Tuple[Tuple[int, ...], ...] = tuple(tuple(c) for c in children)
        self.roots: Tuple[int, ...] = tuple(roots)
        depth = [-1] * n
        order = []
        queue = list(roots)
        for x in queue:
            depth[x] = 0 if self.parent[x] is None else depth[self.parent[x]] + 1
            order.append(x)
            queue.extend(self.children[x])
        if len(order) != n:
            raise ValueError("parent map contains a cycle")
        self.depth: Tuple[int, ...] = tuple(depth)
        self._order: Tuple[int, ...] = tuple(order)

    @property
    def nnodes(self) -> int:
        return len(self.bags)

    def bfs_order(self) -> Tuple[int, ...]:
        """All nodes, roots first, each parent before its children."""
        return self._order

    def height(self) -> int:
        return max(self.depth, default=0) if self.bags else 0

    def parent_adhesion(self, x: int) -> FrozenSet[int]:
        p = self.parent[x]
        if p is None:
            return frozenset()
        return self.bags[x] & self.bags[p]

    def adhesions(self) -> List[FrozenSet[int]]:
        """Parent adhesions of all non-root nodes (one per forest edge)."""
        return [self.parent_adhesion(x) for x in range(self.nnodes) if self.parent[x] is not None]

    def adhesion_width(self) -> int:
        return max((len(a) for a in self.adhesions()), default=0)

    def home_node(self, v: int) -> int:
        """Minimum-depth node whose bag contains v."""
        best = None
        for x in self._order:
            if v in self.bags[x]:
                if best is None or self.depth[x] < self.depth[best]:
                    best = x
        if best is None:
            raise KeyError("vertex %d appears in no bag" % v)
        return best

    def home_nodes(self) -> Dict[int, int]:
        homes: Dict[int, int] = {}
        for x in self._order:
            for v in self.bags[x]:
                if v not in homes:
                    homes[v] = x
        return homes

    def subtree_nodes(self, x: int) -> List[int]:
        out = [x]
        for y in out:
            out.extend(self.children[y])
        return out

    def layer(self, i: int) -> List[int]:
        """Nodes at depth i-1 (layers are 1-based)."""
        return [x for x in self._order if self.depth[x] == i - 1]

    def restrict_bags(self, keep: FrozenSet[int]) -> "RootedForestDecomposition":
        """Intersect every bag with a vertex set, keeping the forest shape."""
        return RootedForestDecomposition(self.parent, [b & keep for b in self.bags])

    def to_json(self) -> dict:
        return {
            "nodes": self.nnodes,
            "parent": [p for p in self.parent],
            "bags": [sorted(b) for b in self.bags],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RootedForestDecomposition":
        if obj["nodes"] != len(obj["bags"]):
            raise ValueError("node count does not match bag list")
        return cls(obj["parent"], [frozenset(b) for b in obj["bags"]])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RootedForestDecomposition)
            and self.parent == other.parent
            and self.bags == other.bags
        )

    def __hash__(self) -> int:
        return hash((self.parent, self.bags))

    def __repr__(self) -> str:
        return "RootedForestDecomposition(nodes=%d, height=%d)" % (self.nnodes, self.height())


@dataclass
class ValidityReport:
    ok: bool
    violations: List[str] = field(default_factory=list)
    adhesion_width: Optional[int] = None
    height: Optional[int] = None


def validate_decomposition(g: Graph, d: RootedForestDecomposition) -> ValidityReport:
    """Check coverage, edge coverage, and connectivity of vertex traces.

    Violations are data, not failures: every broken clause is reported.
    """
    violations = []
    bag_union = frozenset().union(*d.bags) if d.bags else frozenset()
    stray = bag_union - g.vertices
    if stray:
        violations.append("bags mention unknown vertices %s" % sorted(stray)[:5])
    missing = g.vertices - bag_union
    if missing:
        violations.append("vertices in no bag: %s" % sorted(missing)[:5])
    for u, v in sorted(g.edges):
        if not any(u in b and v in b for b in d.bags):
            violations.append("edge (%d,%d) not covered by any bag" % (u, v))
    # Trace connectivity: nodes containing v must induce a connected subforest.
    for v in sorted(bag_union & g.vertices):
        nodes = [x for x in range(d.nnodes) if v in d.bags[x]]
        if not nodes:
            continue
        node_set = set(nodes)
        tops = [x for x in nodes if d.parent[x] is None or d.parent[x] not in node_set]
        if len(tops) > 1:
            violations.append("trace of vertex %d is disconnected" % v)
    ok = not violations
    return ValidityReport(
        ok=ok,
        violations=violations,
        adhesion_width=d.adhesion_width() if ok else None,
        height=d.height() if ok else None,
    )


def torso(g: Graph, d: RootedForestDecomposition, x: int) -> Graph:
    """Bag-induced subgraph with every neighbouring adhesion completed."""
    if not 0 <= x < d.nnodes:
        raise KeyError("unknown decomposition node %d" % x)
    bag = d.bags[x]
    extra = []
    neighbours = list(d.children[x])
    if d.parent[x] is not None:
        neighbours.append(d.parent[x])
    for y in neighbours:
        shared = sorted(bag & d.bags[y])
        for i in range(len(shared)):
            for j in range(i + 1, len(shared)):
                extra.append((shared[i], shared[j]))
    return g.induced(bag).with_edges(extra)


def torso_union(g: Graph, d: RootedForestDecomposition) -> Graph:
    """Union of all torsos: the original graph plus all adhesion completions."""
    out = g
    extra = []
    for x in range(d.nnodes):
        if d.parent[x] is None:
            continue
        shared = sorted(d.parent_adhesion(x))
        for i in range(len(shared)):
            for j in range(i + 1, len(shared)):
                extra.append((shared[i], shared[j]))
    return out.with_edges(extra)


def is_tidy(d: RootedForestDecomposition) -> bool:
    for x in range(d.nnodes):
        if not d.bags[x]:
            return False
        p = d.parent[x]
        if p is not None:
            if d.bags[x] <= d.bags[p]:
                return False
            gp = d.parent[p]
            if gp is not None and (d.bags[x] & d.bags[p]) <= (d.bags[p] & d.bags[gp]):
                return False
    return True


def tidy(d: RootedForestDecomposition) -> RootedForestDecomposition:
    """Reduce to a tidy decomposition of the same graph.

    Rules are applied to a fixpoint in a fixed order, scanning nodes in BFS
    order with ties by node id: (1) drop empty bags, (2) cut edges with empty
    adhesions, (3) re-hang a grandchild whose adhesion is contained in its
    parent's adhesion, then drop child bags contained in their parent's bag.
    The surviving node set is a subset of the input's and no torso gains an
    edge; height never increases.
    """
    return tidy_with_map(d)[0]


def tidy_with_map(d: RootedForestDecomposition):
    """tidy(d) plus the original index of each surviving node."""
    parent: List[Optional[int]] = list(d.parent)
    bags = list(d.bags)
    alive = [True] * d.nnodes

    def kids(x):
        return [y for y in range(len(parent)) if alive[y] and parent[y] == x]

    changed = True
    while changed:
        changed = False
        order = _bfs_order(parent, alive)
        # (1) empty bags: children re-hang to the grandparent.
        for x in order:
            if alive[x] and not bags[x]:
                for y in kids(x):
                    parent[y] = parent[x]
                alive[x] = False
                changed = True
        if changed:
            continue
        # (2) empty adhesions become forest cuts.
        for x in order:
            p = parent[x]
            if alive[x] and p is not None and not (bags[x] & bags[p]):
                parent[x] = None
                changed = True
        if changed:
            continue
        # (3a) re-hang when the adhesion already sits inside the parent's own.
        for z in order:
            if not alive[z]:
                continue
            y = parent[z]
            if y is None:
                continue
            x = parent[y]
            if x is None:
                continue
            if (bags[z] & bags[y]) <= (bags[y] & bags[x]):
                parent[z] = x
                changed = True
        if changed:
            continue
        # (3b) a child bag inside its parent bag is dropped (leaf after 3a).
        for y in order:
            p = parent[y]
            if alive[y] and p is not None and bags[y] <= bags[p]:
                for z in kids(y):
                    parent[z] = p
                alive[y] = False
                changed = True

    keep = [x for x in range(d.nnodes) if alive[x]]
    remap = {x: i for i, x in enumerate(keep)}
    new_parent = [remap[parent[x]] if parent[x] is not None else None for x in keep]
    new_bags = [bags[x] for x in keep]
    return RootedForestDecomposition(new_parent, new_bags), tuple(keep)


def _bfs_order(parent: List[Optional[int]], alive: List[bool]) -> List[int]:
    n = len(parent)
    children: Dict[int, List[int]] = {x: [] for x in range(n)}
    roots = []
    for x in range(n):
        if not alive[x]:
            continue
        p = parent[x]
        if p is None:
            roots.append(x)
        else:
            children[p].append(x)
    order = []
    queue = sorted(roots)
    for x in queue:
        order.append(x)
        queue.extend(sorted(children[x]))
    return order
