"""Mixed labelling scheme for subgraphs of H x P with tw(H) <= k.

A vertex label is <lambda1, lambda2>: the row part carries the row codeword
and a predecessor hint, the column part carries the extended signature, the
vertex's own signature length and colour, the neighbour lists, the transition
code to the next row tree, and the vertex's next-row signature length.  A
clique label anchors at the clique member with the innermost interval and
stores its row part, its extended signature, and the members' (length,
colour) entries; a local identifier is the member's position in that list.

Both testers work on label bits alone: the row relationship comes from
comparing row codewords (reconstructing the predecessor codeword from the
hint), signatures of neighbour candidates are prefixes of the carried
extended signature, and cross-row queries transport the extended signature
through the transition code.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from ..bits import BitLabel, MalformedLabel, frame, unframe
from ..config import DEFAULT, BudgetConfig, product_g1, product_g2, product_g3
from ..mls import MixedLabelling, SchemeHandle, WitnessedInstance
from ..witness import ProductWitness
from .rows import RowStructure, build_rows, signature_slack

Cell = Tuple[int, int]


def predecessor_code(rho: BitLabel, hint: BitLabel) -> Optional[BitLabel]:
    """Row codeword of row i-1 from row i's codeword and the stored length.

    In a full code tree consecutive codewords are c10^q and c01^p, so the
    predecessor is determined by the hinted length.  Returns None for the
    first row (all-zero codeword).
    """
    t = rho.last_one()
    if t < 0:
        return None
    length = hint.to_uint()
    if length < t + 1:
        raise MalformedLabel("predecessor hint shorter than shared prefix")
    ones = length - t - 1
    return rho.prefix(t) + BitLabel(1, 0) + BitLabel(ones, (1 << ones) - 1)


def transport(sigma_plus: BitLabel, tau: BitLabel) -> BitLabel:
    """Apply a transition code: keep a prefix, splice the recorded suffix."""
    parts = unframe(tau)
    if len(parts) != 2:
        raise MalformedLabel("transition code must have two parts")
    keep = parts[0].to_uint()
    if keep > len(sigma_plus):
        raise MalformedLabel("transition keeps more bits than present")
    return sigma_plus.prefix(keep) + parts[1]


class VertexParts(NamedTuple):
    rho: BitLabel
    hint: BitLabel
    sigma_plus: BitLabel
    sig_len: int
    colour: int
    alpha: Tuple[Tuple[Tuple[int, int], ...], ...]  # three lists of (len, colour)
    tau: BitLabel
    next_sig_len: int


@lru_cache(maxsize=1 << 18)
def _parse_vertex(label: BitLabel) -> VertexParts:
    outer = unframe(label)
    if len(outer) != 2:
        raise MalformedLabel("vertex label must have two parts")
    lam1 = unframe(outer[0])
    if len(lam1) != 2:
        raise MalformedLabel("row part must have two parts")
    lam2 = unframe(outer[1])
    if len(lam2) != 6:
        raise MalformedLabel("column part must have six parts")
    sigma_plus, sig_len_bits, colour_bits, alpha_bits, tau, next_len_bits = lam2
    sig_len = sig_len_bits.to_uint()
    if sig_len > len(sigma_plus):
        raise MalformedLabel("own signature longer than extended signature")
    alpha = _parse_alpha(alpha_bits, 3)
    return VertexParts(
        rho=lam1[0],
        hint=lam1[1],
        sigma_plus=sigma_plus,
        sig_len=sig_len,
        colour=colour_bits.to_uint(),
        alpha=alpha,
        tau=tau,
        next_sig_len=next_len_bits.to_uint(),
    )


def _parse_alpha(bits: BitLabel, nlists: int) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    lists = unframe(bits)
    if len(lists) != nlists:
        raise MalformedLabel("neighbour block must have %d lists" % nlists)
    out = []
    for lst in lists:
        entries = []
        for e in unframe(lst):
            fields = unframe(e)
            if len(fields) != 2:
                raise MalformedLabel("neighbour entry must have two fields")
            entries.append((fields[0].to_uint(), fields[1].to_uint()))
        out.append(tuple(entries))
    return tuple(out)


class CliqueParts(NamedTuple):
    rho: BitLabel
    hint: BitLabel
    sigma_plus: BitLabel
    entries: Tuple[Tuple[int, int], ...]  # concatenated lower-row then own-row
    lower_count: int


@lru_cache(maxsize=1 << 16)
def _parse_clique(label: BitLabel) -> CliqueParts:
    outer = unframe(label)
    if len(outer) != 3:
        raise MalformedLabel("clique label must have three parts")
    lam1 = unframe(outer[0])
    if len(lam1) != 2:
        raise MalformedLabel("row part must have two parts")
    lists = _parse_alpha(outer[2], 2)
    return CliqueParts(
        rho=lam1[0],
        hint=lam1[1],
        sigma_plus=outer[1],
        entries=lists[0] + lists[1],
        lower_count=len(lists[0]),
    )


def _row_relation(a: VertexParts, b) -> Optional[int]:
    """0 when same row, -1 when a's row precedes b's, +1 when it follows."""
    if a.rho == b.rho:
        return 0
    if predecessor_code(b.rho, b.hint) == a.rho:
        return -1
    if predecessor_code(a.rho, a.hint) == b.rho:
        return 1
    return None


def _own_signature(p: VertexParts) -> BitLabel:
    return p.sigma_plus.prefix(p.sig_len)


def _scan_same_row(pv: VertexParts, pw: VertexParts) -> int:
    target = _own_signature(pw)
    for length, colour in pv.alpha[1]:
        if colour != pw.colour or length != len(target):
            continue
        if length <= len(pv.sigma_plus) and pv.sigma_plus.prefix(length) == target:
            return 1
    return 0


def _scan_cross(pv: VertexParts, pw: VertexParts) -> int:
    """pv sits one row below pw; both scans for the edge."""
    next_plus = transport(pv.sigma_plus, pv.tau)
    target_w = _own_signature(pw)
    for length, colour in pv.alpha[2]:
        if colour != pw.colour or length != len(target_w):
            continue
        if length <= len(next_plus) and next_plus.prefix(length) == target_w:
            return 1
    if pv.next_sig_len <= len(next_plus):
        target_v = next_plus.prefix(pv.next_sig_len)
        for length, colour in pw.alpha[0]:
            if colour != pv.colour or length != len(target_v):
                continue
            if length <= len(pw.sigma_plus) and pw.sigma_plus.prefix(length) == target_v:
                return 1
    return 0


def product_test_adjacency(x: BitLabel, y: BitLabel) -> int:
    px = _parse_vertex(x)
    py = _parse_vertex(y)
    if x == y:
        return 0
    rel = _row_relation(px, py)
    if rel is None:
        return 0
    if rel == 0:
        return 1 if (_scan_same_row(px, py) or _scan_same_row(py, px)) else 0
    if rel == -1:
        return _scan_cross(px, py)
    return _scan_cross(py, px)


def product_test_identity(mu_k: BitLabel, kappa: BitLabel, mu_v: BitLabel) -> int:
    pk = _parse_clique(mu_k)
    pv = _parse_vertex(mu_v)
    if pk.rho == pv.rho:
        same_row = True
    elif predecessor_code(pk.rho, pk.hint) == pv.rho:
        same_row = False
    else:
        return 0
    pos = kappa.to_uint()
    if not 1 <= pos <= len(pk.entries):
        raise MalformedLabel("local identifier out of range")
    member_in_lower = pos <= pk.lower_count
    # The member sits at the clique's anchor row iff it came from the own-row
    # list; the query must sit at the same row to match.
    if member_in_lower == same_row:
        return 0
    length, colour = pk.entries[pos - 1]
    if length > len(pk.sigma_plus):
        raise MalformedLabel("member signature longer than anchor signature")
    member_sig = pk.sigma_plus.prefix(length)
    if same_row:
        query_sig = _own_signature(pv)
        query_colour = pv.colour
    else:
        next_plus = transport(pv.sigma_plus, pv.tau)
        if pv.next_sig_len > len(next_plus):
            raise MalformedLabel("next-row signature longer than transported")
        query_sig = next_plus.prefix(pv.next_sig_len)
        query_colour = pv.colour
    return 1 if (member_sig == query_sig and colour == query_colour) else 0


def _entry(length: int, colour: int) -> BitLabel:
    return frame([BitLabel.from_uint(length), BitLabel.from_uint(colour)])


def _vertex_label(struct: RowStructure, cell: Cell) -> BitLabel:
    hv, row = cell
    lam1 = frame([struct.rho[row], struct.pred_hint[row]])
    sig = struct.sigma[(hv, row)]
    sp = struct.sigma_plus[cell]
    nxt = (hv, row + 1)
    if nxt in struct.cell_weight:
        sp_next = struct.sigma_plus[nxt]
        keep = sp.common_prefix_len(sp_next)
        tau = frame([BitLabel.from_uint(keep), sp_next.drop(keep)])
        next_len = BitLabel.from_uint(len(struct.sigma[(hv, row + 1)]))
    else:
        tau = BitLabel.EMPTY
        next_len = BitLabel.EMPTY
    lam2 = frame(
        [
            sp,
            BitLabel.from_uint(len(sig)),
            BitLabel.from_uint(struct.colours[hv]),
            _alpha_block(struct, cell),
            tau,
            next_len,
        ]
    )
    return frame([lam1, lam2])


def _alpha_block(struct: RowStructure, cell: Cell) -> BitLabel:
    hv, row = cell
    vid = struct.real_cells.get(cell)
    lists: List[List[BitLabel]] = [[], [], []]
    if vid is not None:
        g = struct.inst.g
        down = [hv] + list(struct.nplus[hv])
        for w in sorted(down):
            other = struct.real_cells.get((w, row - 1))
            if other is not None and g.has_edge(vid, other):
                lists[0].append(_entry(len(struct.sigma[(w, row)]), struct.colours[w]))
        for w in struct.nplus[hv]:
            other = struct.real_cells.get((w, row))
            if other is not None and g.has_edge(vid, other):
                lists[1].append(_entry(len(struct.sigma[(w, row)]), struct.colours[w]))
        for w in sorted(down):
            other = struct.real_cells.get((w, row + 1))
            if other is not None and g.has_edge(vid, other):
                lists[2].append(_entry(len(struct.sigma[(w, row + 1)]), struct.colours[w]))
    return frame([frame(lst) for lst in lists])


def _clique_label(struct: RowStructure, members: Sequence[int]) -> Tuple[BitLabel, Dict[int, BitLabel]]:
    cells = sorted(struct.cell_of[u] for u in members)
    rows = {r for _, r in cells}
    if len(rows) > 2 or (len(rows) == 2 and max(rows) - min(rows) != 1):
        raise ValueError("clique spans more than two consecutive rows")
    anchor_row = max(rows)
    hvs = sorted({hv for hv, _ in cells})

    def interval_len(w):
        a, b = struct.imap.intervals[w]
        return b - a

    vstar = min(hvs, key=lambda w: (interval_len(w), w))
    anchor = (vstar, anchor_row)
    if anchor not in struct.cell_weight:
        raise AssertionError("anchor cell missing despite dummy padding")
    sp = struct.sigma_plus[anchor]
    lower = [(hv, r) for hv, r in cells if r == anchor_row - 1]
    upper = [(hv, r) for hv, r in cells if r == anchor_row]
    entries = []
    for hv, _ in lower + upper:
        sig = struct.sigma[(hv, anchor_row)]
        if not sig.is_prefix_of(sp):
            raise AssertionError("member signature is not a prefix of the anchor's")
        entries.append(_entry(len(sig), struct.colours[hv]))
    label = frame(
        [
            frame([struct.rho[anchor_row], struct.pred_hint[anchor_row]]),
            sp,
            frame([frame(entries[: len(lower)]), frame(entries[len(lower) :])]),
        ]
    )
    kappas: Dict[int, BitLabel] = {}
    for pos, cell in enumerate(lower + upper, start=1):
        kappas[struct.real_cells[cell]] = BitLabel.from_uint(pos)
    return label, kappas


def product_label(
    inst: WitnessedInstance, cliques: Sequence[frozenset] = ()
) -> MixedLabelling:
    if inst.n == 0:
        return MixedLabelling({}, {}, {}, meta={"scheme": "product"})
    struct = build_rows(inst)
    mu = {v: _vertex_label(struct, struct.cell_of[v]) for v in inst.g.sorted_vertices()}
    clique_labels = {}
    local_ids = {}
    for k in cliques:
        label, kappas = _clique_label(struct, sorted(k))
        clique_labels[frozenset(k)] = label
        for u, kap in kappas.items():
            local_ids[(frozenset(k), u)] = kap
    meta = {
        "scheme": "product",
        "rows": struct.h,
        "branching": struct.a,
        "entry_bits": struct.entry_bits,
        "total_delta": struct.total_delta,
        "total_weight": sum(struct.cell_weight.values()),
        "k": struct.k,
        "sigma_slack": signature_slack(struct),
        "max_tau_bits": max(
            (
                len(unframe(unframe(unframe(label)[1])[4])[1])
                for label in mu.values()
                if len(unframe(unframe(label)[1])[4]) > 0
            ),
            default=0,
        ),
    }
    return MixedLabelling(mu, clique_labels, local_ids, meta=meta)


def product_scheme(k: int, cfg: BudgetConfig = DEFAULT) -> SchemeHandle:
    """Scheme handle for graphs placed into a width-k host times a path."""
    return SchemeHandle(
        name="product",
        label=product_label,
        test_adjacency=product_test_adjacency,
        test_identity=product_test_identity,
        g1=product_g1(k, cfg),
        g2=product_g2(k, cfg),
        g3=product_g3(k, cfg),
    )
