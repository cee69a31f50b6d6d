"""Row decomposition of a product-placed graph: dummies, weights, signatures.

Vertices of the input live at cells (H-vertex, row).  Dummy cells extend each
real cell one row upward so clique labels and signature transport always have
an anchor in the higher row.  Each row i collects the H-vertices present in
rows i-1 and i; a vertex's weight is spread over the rows that must "see" it
through the delta weights, rows are padded to smoothly varying sizes, and a
weight-balanced B-tree per row turns interval containment into root paths
(signatures).
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from ..bits import BitLabel
from ..codes import full_alphabetic_code, nice_weights
from ..graphs import Graph
from ..mls import WitnessedInstance
from ..witness import ProductWitness
from .btree import RowTree, ceil_log
from .intervals import IntervalMap, greedy_interval_colouring, interval_map

Cell = Tuple[int, int]  # (H-vertex, row)


def smooth_rows(sizes: Sequence[int]) -> List[int]:
    """Least targets t >= sizes with t_i >= ceil(t_(i +- 1) / 2).

    Consecutive targets stay within a factor of two of each other and the
    total at most quadruples: t_i = max_j ceil(m_j / 2**|i-j|), computed by a
    forward and a backward sweep.
    """
    if any(m < 1 for m in sizes):
        raise ValueError("row sizes must be positive")
    h = len(sizes)
    fwd = [0] * h
    bwd = [0] * h
    run = 0
    for i in range(h):
        run = max(sizes[i], -(-run // 2))
        fwd[i] = run
    run = 0
    for i in range(h - 1, -1, -1):
        run = max(sizes[i], -(-run // 2))
        bwd[i] = run
    return [max(f, b) for f, b in zip(fwd, bwd)]


def branching_parameter(total: int) -> int:
    """a = 2**ceil(sqrt(log2 N)) clamped to at least 6, via exact arithmetic."""
    if total < 1:
        return 6
    s = 0
    while (1 << (s * s)) < total:
        s += 1
    return max(1 << s, 6)


@dataclass
class RowStructure:
    """Everything the product labeller derives from one witnessed instance."""

    inst: WitnessedInstance
    witness: ProductWitness
    imap: IntervalMap
    k: int
    h: int
    cell_weight: Dict[Cell, int]  # real and dummy cells, nice-normalized weights
    real_cells: Dict[Cell, int]  # cell -> graph vertex id
    cell_of: Dict[int, Cell]  # graph vertex id -> cell
    dummy_cells: FrozenSet[Cell]
    rows: Dict[int, List[int]]  # row -> H-vertices, sorted by (midpoint, id)
    delta: Dict[Cell, int]
    row_size: Dict[int, int]  # m_i, expanded
    row_target: Dict[int, int]  # t_i after smoothing
    total_delta: int
    a: int
    entry_bits: int
    trees: Dict[int, RowTree] = field(default_factory=dict)
    sigma: Dict[Cell, BitLabel] = field(default_factory=dict)  # per (hv, row) slot
    sigma_plus: Dict[Cell, BitLabel] = field(default_factory=dict)  # per cell
    colours: Dict[int, int] = field(default_factory=dict)
    rho: Dict[int, BitLabel] = field(default_factory=dict)
    pred_hint: Dict[int, BitLabel] = field(default_factory=dict)
    nplus: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    row_members: Dict[int, FrozenSet[int]] = field(default_factory=dict)
    row_mids: Dict[int, List] = field(default_factory=dict)

    def x_set(self, hv: int, row: int) -> List[int]:
        """{hv} plus the row's members of hv's later neighbourhood."""
        present = self.row_members.get(row, frozenset())
        out = [hv]
        out.extend(w for w in self.nplus[hv] if w in present)
        return out


def build_rows(inst: WitnessedInstance) -> RowStructure:
    """Assemble rows, delta weights, row trees, signatures, and row codes.

    Asserts the exact total-weight bound: the delta weights sum to at most
    (2k+3) times the total (dummy-augmented) vertex weight.
    """
    witness = inst.witness
    if not isinstance(witness, ProductWitness):
        raise ValueError("product scheme needs a product witness")
    problems = witness.validate(inst.gplus)
    if problems:
        raise ValueError("invalid product witness: %s" % problems[:3])

    imap = interval_map(witness.host, witness.elim_order, witness.k)
    k = witness.k

    verts = inst.g.sorted_vertices()
    nice = nice_weights([inst.weights[v] for v in verts])
    placement = witness.placement_map()
    # Compact to occupied rows: restricted instances may leave declared rows
    # empty, and renumbering rows monotonically only relaxes the product rule.
    occupied = sorted({placement[v][1] for v in verts})
    rowmap = {r: i + 1 for i, r in enumerate(occupied)}
    h = len(occupied)
    cell_of = {v: (placement[v][0], rowmap[placement[v][1]]) for v in verts}
    real_cells = {cell_of[v]: v for v in verts}
    cell_weight: Dict[Cell, int] = {cell_of[v]: w for v, w in zip(verts, nice)}

    dummies: Set[Cell] = set()
    for (hv, row), v in sorted(real_cells.items()):
        up = (hv, row + 1)
        if row < h and up not in real_cells:
            dummies.add(up)
            cell_weight[up] = cell_weight[(hv, row)]

    rows: Dict[int, Set[int]] = {i: set() for i in range(1, h + 1)}
    for hv, row in cell_weight:
        rows[row].add(hv)
        if row + 1 <= h:
            rows[row + 1].add(hv)

    order_key = {hv: (imap.midpoint(hv), hv) for hv in witness.host.vertices}
    sorted_rows = {i: sorted(vs, key=lambda w: order_key[w]) for i, vs in rows.items()}

    rank = witness.rank()
    nplus = {
        hv: tuple(sorted(w for w in witness.host.neighbours(hv) if rank[w] > rank[hv]))
        for hv in witness.host.vertices
    }

    struct = RowStructure(
        inst=inst,
        witness=witness,
        imap=imap,
        k=k,
        h=h,
        cell_weight=cell_weight,
        real_cells=real_cells,
        cell_of=cell_of,
        dummy_cells=frozenset(dummies),
        rows=sorted_rows,
        delta={},
        row_size={},
        row_target={},
        total_delta=0,
        a=6,
        entry_bits=1,
    )
    struct.nplus = nplus
    struct.row_members = {i: frozenset(vs) for i, vs in sorted_rows.items()}
    struct.row_mids = {
        i: [imap.midpoint(w) for w in vs] for i, vs in sorted_rows.items()
    }

    delta: Dict[Cell, int] = {}
    for cell in sorted(cell_weight):
        hv, row = cell
        w = cell_weight[cell]
        for u in struct.x_set(hv, row):
            delta[(u, row)] = delta.get((u, row), 0) + w
            if row - 1 >= 1:
                delta[(u, row - 1)] = delta.get((u, row - 1), 0) + w
        if row + 1 <= h:
            delta[(hv, row + 1)] = delta.get((hv, row + 1), 0) + w
    struct.delta = delta
    struct.total_delta = sum(delta.values())
    total_weight = sum(cell_weight.values())
    if struct.total_delta > (2 * k + 3) * total_weight:
        raise AssertionError(
            "delta total %d exceeds (2k+3) * total weight %d"
            % (struct.total_delta, (2 * k + 3) * total_weight)
        )

    sizes = []
    for i in range(1, h + 1):
        m = sum(delta[(hv, i)] for hv in sorted_rows[i])
        if m < 1:
            raise AssertionError("row %d has no delta mass" % i)
        struct.row_size[i] = m
        sizes.append(m)
    targets = smooth_rows(sizes)
    for i, t in zip(range(1, h + 1), targets):
        struct.row_target[i] = t

    total = sum(targets)
    struct.a = branching_parameter(total)
    struct.entry_bits = (12 * struct.a - 1).bit_length()

    for i in range(1, h + 1):
        counts = [delta[(hv, i)] for hv in sorted_rows[i]]
        pad = struct.row_target[i] - struct.row_size[i]
        if pad:
            counts.append(pad)
        struct.trees[i] = RowTree(counts, struct.a)

    _build_signatures(struct)
    _build_colours(struct)
    _build_row_codes(struct)
    return struct


def _expanded_range(struct: RowStructure, hv: int, row: int) -> Tuple[int, int]:
    """Expanded leaf interval of the points strictly inside hv's interval."""
    mids = struct.row_mids[row]
    a, b = struct.imap.intervals[hv]
    lo_slot = bisect_right(mids, a)
    hi_slot = bisect_left(mids, b)
    tree = struct.trees[row]
    return tree.cum[lo_slot], tree.cum[hi_slot]


def _build_signatures(struct: RowStructure) -> None:
    width = struct.entry_bits
    for i in range(1, struct.h + 1):
        tree = struct.trees[i]
        for hv in struct.rows[i]:
            lo, hi = _expanded_range(struct, hv, i)
            if not lo < hi:
                raise AssertionError("vertex %d has no mass in row %d" % (hv, i))
            path = tree.anchor_path(lo, hi)
            struct.sigma[(hv, i)] = BitLabel.concat(
                [BitLabel(width, j) for j in path]
            )
    # Extended signature of a cell: the longest signature over its X-set;
    # every other member signature must be a prefix of it.
    for cell in sorted(struct.cell_weight):
        hv, row = cell
        sigs = [struct.sigma[(w, row)] for w in struct.x_set(hv, row)]
        best = max(sigs, key=len)
        for s in sigs:
            if not s.is_prefix_of(best):
                raise AssertionError("X-set signatures are not nested at %s" % (cell,))
        struct.sigma_plus[cell] = best


def _build_colours(struct: RowStructure) -> None:
    # Same row + same anchor node must force different colours, on top of the
    # interval intersection graph: B-tree anchors of disjoint intervals can
    # coincide, and the testers compare (signature, colour) pairs.
    conflicts: Dict[int, Set[int]] = {}
    for i in range(1, struct.h + 1):
        by_sig: Dict[BitLabel, List[int]] = {}
        for hv in struct.rows[i]:
            by_sig.setdefault(struct.sigma[(hv, i)], []).append(hv)
        for group in by_sig.values():
            for u in group:
                for w in group:
                    if u != w:
                        conflicts.setdefault(u, set()).add(w)
    placed = {hv for hv, _ in struct.cell_weight}
    intervals = {hv: struct.imap.intervals[hv] for hv in placed}
    struct.colours = greedy_interval_colouring(intervals, conflicts)


def _build_row_codes(struct: RowStructure) -> None:
    weights = [struct.row_target[i] for i in range(1, struct.h + 1)]
    codes = full_alphabetic_code(weights)
    for i, c in zip(range(1, struct.h + 1), codes):
        struct.rho[i] = c
    struct.pred_hint[1] = BitLabel.EMPTY
    for i in range(2, struct.h + 1):
        struct.pred_hint[i] = BitLabel.from_uint(len(struct.rho[i - 1]))


def sigma_at(struct: RowStructure, hv: int, row: int) -> Optional[BitLabel]:
    return struct.sigma.get((hv, row))


def signature_slack(struct: RowStructure) -> float:
    """Max of |sigma+(cell)| - (log2 t_row - log2 weight(cell)) over cells."""
    worst = float("-inf")
    for cell, sig in struct.sigma_plus.items():
        _, row = cell
        ideal = math.log2(struct.row_target[row]) - math.log2(struct.cell_weight[cell])
        worst = max(worst, len(sig) - ideal)
    return worst if worst != float("-inf") else 0.0
