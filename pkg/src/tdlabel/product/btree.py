"""Weight-balanced B-trees over weighted point rows, built virtually.

A row stores an ordered list of points, each replicated by its (possibly
huge) integer multiplicity, plus a block of trailing sentinel leaves used for
row-size smoothing.  The tree is never materialized: every node is a leaf
interval [s, e) at some height, children are consecutive chunks of a**(h-1)
expanded leaves (the last chunk absorbs a small remainder), and all queries
are integer arithmetic on cumulative multiplicities.

All leaves sit at the same depth.  By construction every node has at most
6*a**h leaves for its height h and every non-root node at least a**h / 2, so
fan-out never exceeds 12a.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple


def ceil_log(base: int, n: int) -> int:
    """Smallest H with base**H >= n, for n >= 1."""
    if n < 1:
        raise ValueError("n must be positive")
    h = 0
    p = 1
    while p < n:
        p *= base
        h += 1
    return h


@dataclass(frozen=True)
class Node:
    height: int
    start: int
    end: int  # leaf interval [start, end)

    @property
    def size(self) -> int:
        return self.end - self.start


class RowTree:
    """Chunk-built B-tree over expanded leaves; shape depends only on sizes."""

    __slots__ = ("a", "counts", "cum", "total", "height")

    def __init__(self, leaf_counts: Sequence[int], a: int):
        if a < 6:
            raise ValueError("branching parameter must be at least 6")
        if any(c < 0 for c in leaf_counts):
            raise ValueError("negative leaf count")
        self.a = a
        self.counts = list(leaf_counts)
        cum = [0]
        for c in self.counts:
            cum.append(cum[-1] + c)
        self.cum = cum
        self.total = cum[-1]
        if self.total < 1:
            raise ValueError("tree must contain at least one leaf")
        self.height = ceil_log(a, self.total)

    @property
    def root(self) -> Node:
        return Node(self.height, 0, self.total)

    def _chunks(self, node: Node) -> Tuple[int, int]:
        """(unit, number of children) for an internal node."""
        unit = self.a ** (node.height - 1)
        m = node.size
        full, rem = divmod(m, unit)
        if rem == 0:
            return unit, full
        if full >= 1 and 2 * rem < unit:
            return unit, full  # last full chunk absorbs the remainder
        return unit, full + 1

    def children(self, node: Node) -> List[Node]:
        if node.height == 0:
            return []
        unit, nchunks = self._chunks(node)
        out = []
        for j in range(nchunks):
            s = node.start + j * unit
            e = node.end if j == nchunks - 1 else node.start + (j + 1) * unit
            out.append(Node(node.height - 1, s, e))
        return out

    def child_index(self, node: Node, pos: int) -> int:
        """Index of the child whose leaf interval contains position pos."""
        unit, nchunks = self._chunks(node)
        return min((pos - node.start) // unit, nchunks - 1)

    def child(self, node: Node, j: int) -> Node:
        unit, nchunks = self._chunks(node)
        if not 0 <= j < nchunks:
            raise IndexError("child index out of range")
        s = node.start + j * unit
        e = node.end if j == nchunks - 1 else node.start + (j + 1) * unit
        return Node(node.height - 1, s, e)

    def anchor_path(self, lo: int, hi: int) -> List[int]:
        """Child indices from the root to the LCA of leaves [lo, hi)."""
        if not 0 <= lo < hi <= self.total:
            raise ValueError("empty or out-of-range leaf interval")
        node = self.root
        path: List[int] = []
        while node.height > 0:
            j = self.child_index(node, lo)
            if j != self.child_index(node, hi - 1):
                break
            path.append(j)
            node = self.child(node, j)
        return path

    def descend(self, path: Sequence[int]) -> Node:
        node = self.root
        for j in path:
            node = self.child(node, j)
        return node

    def iter_nodes(self) -> Iterator[Node]:
        """Full traversal; only for audits on small trees."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(self.children(node))

    def audit_node(self, node: Node, is_root: bool) -> List[str]:
        problems = []
        h = node.height
        if node.size > 6 * self.a**h:
            problems.append("node at height %d has %d leaves > 6a^h" % (h, node.size))
        if not is_root and 2 * node.size < self.a**h:
            problems.append("non-root at height %d has %d leaves < a^h/2" % (h, node.size))
        if h > 0:
            _, nchunks = self._chunks(node)
            if nchunks > 12 * self.a:
                problems.append("fan-out %d exceeds 12a" % nchunks)
        return problems

    def audit(self) -> List[str]:
        problems = []
        for node in self.iter_nodes():
            problems.extend(self.audit_node(node, node == self.root))
        return problems
