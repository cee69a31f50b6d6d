"""Weight normalization and order-preserving prefix-free codes.

``alphabetic_code`` realizes the classical alphabetic-tree construction by
embedding each element, replicated weight-many times, into a complete binary
tree and picking one subtree root per element.  The replication is never
materialized; all work is interval arithmetic over leaf ranges, so total
weights may be astronomically large.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

from .bits import BitLabel

Weight = Union[int, Fraction]


def nice_weights(weights: Sequence[Weight]) -> List[int]:
    """Normalize positive weights to integers with a bounded spread.

    After dividing by the minimum weight, each weight becomes
    ceil(max(total/|S|, w)).  The result satisfies, for every x,
    log W' - log w'(x) <= min(log |S|, log W - log w(x)) + 2.
    """
    if not weights:
        raise ValueError("empty weight set")
    ws = [Fraction(w) for w in weights]
    if any(w <= 0 for w in ws):
        raise ValueError("weights must be positive")
    lo = min(ws)
    ws = [w / lo for w in ws]
    total = sum(ws)
    floor = total / len(ws)
    return [math.ceil(max(floor, w)) for w in ws]


def _pick_node(lo: int, hi: int, height: int) -> Tuple[int, int]:
    """Subtree root covering only leaves [lo, hi) with >= (hi-lo)/4 of them.

    The complete tree has 2**height leaves; a node is (depth, index).  This is
    the left/right descent from the lowest common ancestor of the leaf range,
    ties toward the left child.
    """
    w = hi - lo
    if w == 1:
        return height, lo
    # Lowest common ancestor of leaves lo and hi-1.
    sh = (lo ^ (hi - 1)).bit_length()
    mid = ((lo >> (sh - 1)) | 1) << (sh - 1)  # boundary between its children
    if 2 * (mid - lo) >= w:
        # Descend along right children of the left child.
        span = mid - lo
        t = min(sh - 1, span.bit_length() - 1)
        return height - t, (mid >> t) - 1
    span = hi - mid
    t = min(sh - 1, span.bit_length() - 1)
    return height - t, mid >> t


def alphabetic_code(weights: Sequence[int]) -> List[BitLabel]:
    """Order-preserving prefix-free code for positive integer weights.

    Codewords follow the input order lexicographically and satisfy
    |code(x)| <= log2(W) - log2(w(x)) + 3 where W is the total weight.
    """
    if not weights:
        raise ValueError("empty key set")
    if any(w < 1 or w != int(w) for w in weights):
        raise ValueError("weights must be positive integers")
    if len(weights) == 1:
        return [BitLabel.EMPTY]
    total = sum(weights)
    height = (total - 1).bit_length()
    out = []
    lo = 0
    for w in weights:
        depth, index = _pick_node(lo, lo + w, height)
        out.append(BitLabel(depth, index))
        lo += w
    return out


def kraft_sum(codewords: Sequence[BitLabel]) -> Fraction:
    """Sum of 2^-|c| over the codewords."""
    return sum((Fraction(1, 1 << len(c)) for c in codewords), Fraction(0))


def contract_code(codes: Sequence[BitLabel]) -> List[BitLabel]:
    """Re-encode a sorted prefix-free code over the full (branching-only) tree.

    Keeps only the bits at positions where the code trie branches, i.e.
    contracts unary internal nodes.  Lengths never grow and lexicographic
    order is preserved, so all alphabetic-code guarantees carry over; in the
    contracted tree consecutive codewords differ as c01^p versus c10^q, which
    is what the row-code predecessor function exploits.
    """
    m = len(codes)
    if m <= 1:
        return [BitLabel.EMPTY] * m
    lcp = [codes[i].common_prefix_len(codes[i + 1]) for i in range(m - 1)]
    out = []
    for x in range(m):
        branches = []  # (depth, bit)
        best = None
        for t in range(x - 1, -1, -1):
            if best is None or lcp[t] < best:
                best = lcp[t]
                branches.append((lcp[t], 1))
        best = None
        for t in range(x, m - 1):
            if best is None or lcp[t] < best:
                best = lcp[t]
                branches.append((lcp[t], 0))
        branches.sort()
        out.append(BitLabel.from_string("".join(str(b) for _, b in branches)))
    return out


def full_alphabetic_code(weights: Sequence[int]) -> List[BitLabel]:
    """Alphabetic code re-encoded over a full tree (see contract_code)."""
    return contract_code(alphabetic_code(weights))
