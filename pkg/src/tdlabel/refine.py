"""Heavy-subtree separators and the short/skinny decomposition refinement.

``heavy_set`` keeps the nodes whose subtree weight exceeds a 1/b fraction of
the total; the kept set is a connected, level-thin crown of the tree and the
hanging components are light.  ``skinny_refine`` applies this recursively to
a tree-decomposition: each crown's bags merge into one super-bag, hanging
subtrees recurse, and the super-bag tree ends up short while every super-bag
keeps a b-skinny inner decomposition indexed by a subtree of the input tree.

The input is tidied first, which makes every node weight positive; that is
what bounds inner level widths by the crown lemma.  All comparisons against
b are exact rational arithmetic, so b**height(outer) <= n is checked without
floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

from .decomposition import RootedForestDecomposition, tidy_with_map, validate_decomposition
from .graphs import Graph

Number = Union[int, Fraction]


def subtree_weights(parent: Sequence[Optional[int]], weights: Sequence[Number]) -> List[Number]:
    """Total weight of each node's subtree; children processed before parents."""
    n = len(parent)
    children: List[List[int]] = [[] for _ in range(n)]
    roots = []
    for x in range(n):
        p = parent[x]
        if p is None:
            roots.append(x)
        else:
            children[p].append(x)
    order: List[int] = []
    queue = list(roots)
    for x in queue:
        order.append(x)
        queue.extend(children[x])
    if len(order) != n:
        raise ValueError("parent map contains a cycle")
    total = list(weights)
    for x in reversed(order):
        for y in children[x]:
            total[x] += total[y]
    return total


def heavy_set(
    parent: Sequence[Optional[int]],
    weights: Sequence[Number],
    b: Number,
) -> Set[int]:
    """Nodes x with subtree weight strictly greater than total/b.

    For b > 1 and nonnegative weights with positive total, the set is
    connected, contains the root, has fewer than b nodes on every level, and
    every hanging component weighs at most total/b.
    """
    b = Fraction(b)
    if b <= 1:
        raise ValueError("b must exceed 1")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    sub = subtree_weights(parent, weights)
    total = sum(weights)
    if total <= 0:
        raise ValueError("total weight must be positive")
    threshold = Fraction(total) / b
    return {x for x in range(len(parent)) if Fraction(sub[x]) > threshold}


@dataclass
class SkinnyRefinement:
    """Two-level refinement: outer super-bag tree Q plus inner subtrees of T.

    ``source`` is the tidied input; ``source_nodes`` maps its node ids back
    to the caller's decomposition, so per-node torso witnesses carry over.
    """

    source: RootedForestDecomposition
    source_nodes: Tuple[int, ...]
    outer: RootedForestDecomposition
    inner_nodes: Tuple[Tuple[int, ...], ...]  # per Q-node, the merged source nodes
    attach_edges: Tuple[Optional[Tuple[int, int]], ...]  # (source parent, subtree root)
    b: Fraction

    def inner_tree(self, q: int) -> Tuple[RootedForestDecomposition, Tuple[int, ...]]:
        """The inner decomposition at q (original bags) and its source node ids."""
        nodes = self.inner_nodes[q]
        index = {t: i for i, t in enumerate(nodes)}
        parent = [
            index[self.source.parent[t]] if self.source.parent[t] in index else None
            for t in nodes
        ]
        bags = [self.source.bags[t] for t in nodes]
        return RootedForestDecomposition(parent, bags), nodes

    def to_json(self) -> dict:
        return {
            "b": [self.b.numerator, self.b.denominator],
            "outer": self.outer.to_json(),
            "inner_nodes": [list(ns) for ns in self.inner_nodes],
            "source": self.source.to_json(),
        }


def skinny_refine(g: Graph, d: RootedForestDecomposition, b: Number) -> SkinnyRefinement:
    """Refine a valid decomposition into a short tree of b-skinny super-bags.

    Separator weights are |B_y \\ B_parent(y)| on the tidied tree, computed
    once, so subtree weights telescope exactly.  Every inner tree is a crown
    from ``heavy_set``, hence has fewer than b nodes per level; the outer tree
    satisfies b**height <= n exactly; every outer adhesion is an adhesion of
    the input.
    """
    b = Fraction(b)
    if b <= 1:
        raise ValueError("b must exceed 1")
    report = validate_decomposition(g, d)
    if not report.ok:
        raise ValueError("invalid input decomposition: %s" % report.violations[:3])
    src, kept = tidy_with_map(d)

    n_nodes = src.nnodes
    weights = []
    for y in range(n_nodes):
        p = src.parent[y]
        weights.append(len(src.bags[y]) if p is None else len(src.bags[y] - src.bags[p]))
    sub = subtree_weights(src.parent, weights)

    q_parent: List[Optional[int]] = []
    q_bags: List[FrozenSet[int]] = []
    inner: List[Tuple[int, ...]] = []
    attach: List[Optional[Tuple[int, int]]] = []

    stack: List[Tuple[int, Optional[int], Optional[Tuple[int, int]]]] = [
        (r, None, None) for r in reversed(src.roots)
    ]
    while stack:
        root, qp, ed = stack.pop()
        w_sub = Fraction(sub[root])
        threshold = w_sub / b
        nodes = src.subtree_nodes(root)
        x_set = {x for x in nodes if Fraction(sub[x]) > threshold}
        q_idx = len(q_parent)
        q_parent.append(qp)
        q_bags.append(frozenset().union(*(src.bags[x] for x in x_set)))
        inner.append(tuple(sorted(x_set, key=lambda t: (src.depth[t], t))))
        attach.append(ed)
        hanging = [y for x in sorted(x_set) for y in src.children[x] if y not in x_set]
        for y in sorted(hanging, reverse=True):
            stack.append((y, q_idx, (src.parent[y], y)))

    outer = RootedForestDecomposition(q_parent, q_bags)
    return SkinnyRefinement(
        source=src,
        source_nodes=kept,
        outer=outer,
        inner_nodes=tuple(inner),
        attach_edges=tuple(attach),
        b=b,
    )


def check_skinny(tree: RootedForestDecomposition, b: Number) -> bool:
    """True when every depth level of the forest has at most b nodes."""
    b = Fraction(b)
    counts: Dict[int, int] = {}
    for x in range(tree.nnodes):
        counts[tree.depth[x]] = counts.get(tree.depth[x], 0) + 1
    return all(Fraction(c) <= b for c in counts.values())
