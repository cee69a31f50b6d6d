"""Laminar interval representation of a bounded-treewidth host graph.

Each host vertex gets an open dyadic subinterval of (0,1) by a balanced
separator recursion: the separator vertices take the whole current interval,
the rest splits between the two halves.  Any two intervals are then nested or
disjoint, adjacent vertices get intersecting intervals, and no point lies in
more than (k+1) * (recursion depth) intervals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from ..graphs import Graph

Interval = Tuple[Fraction, Fraction]


def validate_elimination_order(host: Graph, order: Sequence[int], k: int) -> List[str]:
    """Check that every later neighbourhood is a clique of size at most k."""
    problems = []
    if sorted(order) != host.sorted_vertices():
        return ["order is not a permutation of the host vertices"]
    rank = {v: i for i, v in enumerate(order)}
    for v in host.sorted_vertices():
        later = [w for w in host.neighbours(v) if rank[w] > rank[v]]
        if len(later) > k:
            problems.append("vertex %d has %d later neighbours > k=%d" % (v, len(later), k))
        if not host.is_clique(later):
            problems.append("later neighbourhood of %d is not a clique" % v)
    return problems


def _balanced_bag(host: Graph, comp: FrozenSet[int], rank: Dict[int, int]) -> FrozenSet[int]:
    """A bag {v} + later-neighbours whose removal halves the component.

    Scans candidate vertices in ascending id and returns the first centroid
    bag; one always exists among the bags of a tree-decomposition.
    """
    sub = host.induced(comp)
    size = len(comp)
    for v in sorted(comp):
        bag = frozenset({v}) | frozenset(
            w for w in host.neighbours(v) if w in comp and rank[w] > rank[v]
        )
        rest = comp - bag
        if not rest:
            return bag
        worst = max((len(c) for c in sub.induced(rest).components()), default=0)
        if 2 * worst <= size:
            return bag
    raise AssertionError("no centroid bag found; elimination order invalid?")


def _split_pieces(pieces: List[FrozenSet[int]], total: int):
    """Partition components into two groups, each at most 2/3 of total."""
    if not pieces:
        return [], []
    pieces = sorted(pieces, key=lambda c: (-len(c), min(c)))
    if 3 * len(pieces[0]) >= total:
        return [pieces[0]], pieces[1:]
    group1: List[FrozenSet[int]] = []
    acc = 0
    i = 0
    while i < len(pieces) and 3 * acc < total:
        group1.append(pieces[i])
        acc += len(pieces[i])
        i += 1
    return group1, pieces[i:]


@dataclass
class IntervalMap:
    """Intervals, their colouring, and audit data for the three invariants."""

    intervals: Dict[int, Interval]
    colours: Dict[int, int]  # proper colouring of the intersection graph, 1-based
    depths: Dict[int, int]  # separator recursion depth that placed each vertex
    max_depth: int
    k: int

    def midpoint(self, v: int) -> Fraction:
        a, b = self.intervals[v]
        return (a + b) / 2

    def intersects(self, v: int, w: int) -> bool:
        (a, b), (c, d) = self.intervals[v], self.intervals[w]
        return max(a, c) < min(b, d)

    def point_load(self, x: Fraction) -> int:
        return sum(1 for a, b in self.intervals.values() if a < x < b)

    def max_point_load(self) -> int:
        """Exact maximum over all points, evaluated between endpoint values."""
        cuts = sorted({e for iv in self.intervals.values() for e in iv})
        best = 0
        for lo, hi in zip(cuts, cuts[1:]):
            best = max(best, self.point_load((lo + hi) / 2))
        return best


def interval_map(host: Graph, order: Sequence[int], k: int) -> IntervalMap:
    """Build the laminar interval family and its greedy colouring."""
    problems = validate_elimination_order(host, order, k)
    if problems:
        raise ValueError("elimination order fails: %s" % problems[:3])
    rank = {v: i for i, v in enumerate(order)}
    intervals: Dict[int, Interval] = {}
    depths: Dict[int, int] = {}
    max_depth = 0

    stack: List[Tuple[FrozenSet[int], Fraction, Fraction, int]] = []
    if host.n:
        stack.append((host.vertices, Fraction(0), Fraction(1), 0))
    while stack:
        verts, a, b, depth = stack.pop()
        if not verts:
            continue
        max_depth = max(max_depth, depth)
        total = len(verts)
        comps = host.induced(verts).components()
        biggest = max(comps, key=lambda c: (len(c), -min(c)))
        if 3 * len(biggest) > 2 * total:
            sep = _balanced_bag(host, biggest, rank)
        else:
            sep = frozenset()
        for v in sorted(sep):
            intervals[v] = (a, b)
            depths[v] = depth
        remaining = [c & (verts - sep) for c in comps if c & (verts - sep)]
        pieces: List[FrozenSet[int]] = []
        for c in remaining:
            pieces.extend(host.induced(c).components())
        group1, group2 = _split_pieces(pieces, total)
        mid = (a + b) / 2
        left = frozenset().union(*group1) if group1 else frozenset()
        right = frozenset().union(*group2) if group2 else frozenset()
        if left:
            stack.append((left, a, mid, depth + 1))
        if right:
            stack.append((right, mid, b, depth + 1))

    colours = greedy_interval_colouring(intervals)
    return IntervalMap(
        intervals=intervals,
        colours=colours,
        depths=depths,
        max_depth=max_depth,
        k=k,
    )


def greedy_interval_colouring(
    intervals: Dict[int, Interval],
    extra_conflicts: Optional[Dict[int, Set[int]]] = None,
) -> Dict[int, int]:
    """Greedy colouring in (left endpoint, length descending) order.

    For a laminar family the sweep keeps a stack of intervals containing the
    current position, so without extra conflicts the colour count equals the
    maximum point load.  ``extra_conflicts`` adds arbitrary further edges to
    separate (honoured exactly, possibly at the cost of more colours).
    """
    order = sorted(intervals, key=lambda v: (intervals[v][0], -(intervals[v][1] - intervals[v][0]), v))
    colours: Dict[int, int] = {}
    open_stack: List[int] = []
    for v in order:
        a, b = intervals[v]
        while open_stack and intervals[open_stack[-1]][1] <= a:
            open_stack.pop()
        blocked = {colours[w] for w in open_stack}
        if extra_conflicts:
            blocked |= {colours[w] for w in extra_conflicts.get(v, ()) if w in colours}
        c = 1
        while c in blocked:
            c += 1
        colours[v] = c
        open_stack.append(v)
    return colours
