"""Skinny-decomposition combinator: project layers onto a path and code them.

The bags at each depth of a level-thin rooted tree merge into one layer; the
layers form a path-decomposition whose adhesions are small, so each vertex in
an adhesion gets a short identifier (the depth of a code-tree node plus a
colour unique within it).  Vertex labels carry the home-layer codeword, the
base label inside the layer, the identifiers of adhesion neighbours, and the
vertex's own identifier; the testers resolve cross-layer edges by comparing
codeword prefixes.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..bits import BitLabel, MalformedLabel, frame, unframe
from ..codes import full_alphabetic_code, nice_weights
from ..config import DEFAULT, BudgetConfig, llog, log2n
from ..decomposition import torso, validate_decomposition
from ..graphs import Graph
from ..mls import MixedLabelling, SchemeHandle, WitnessedInstance
from ..refine import check_skinny
from ..witness import TreeWitness, UnionWitness
from .union import union_scheme


@lru_cache(maxsize=1 << 18)
def _parse4(label: BitLabel) -> Tuple[BitLabel, BitLabel, BitLabel, BitLabel]:
    parts = unframe(label)
    if len(parts) != 4:
        raise MalformedLabel("skinny vertex label must have four parts")
    return tuple(parts)  # type: ignore[return-value]


@lru_cache(maxsize=1 << 16)
def _parse_clique(label: BitLabel) -> Tuple[BitLabel, BitLabel, BitLabel]:
    parts = unframe(label)
    if len(parts) != 3:
        raise MalformedLabel("skinny clique label must have three parts")
    return parts[0], parts[1], parts[2]


def _parse_beta(beta: BitLabel) -> Optional[Tuple[int, int]]:
    """(depth, colour) of an adhesion identifier, or None for <epsilon>."""
    parts = unframe(beta)
    if len(parts) == 1 and len(parts[0]) == 0:
        return None
    if len(parts) != 2:
        raise MalformedLabel("adhesion identifier must have two fields")
    return parts[0].to_uint(), parts[1].to_uint()


def skinny_scheme(
    base: SchemeHandle,
    k: Optional[int] = None,
    b=None,
    cfg: BudgetConfig = DEFAULT,
) -> SchemeHandle:
    """Scheme for graphs with a level-thin rooted forest-decomposition.

    ``k`` and ``b`` are optional declared bounds on adhesion width and level
    width; when given, instances violating them are rejected.
    """
    ubase = union_scheme(base, cfg)

    def label(inst: WitnessedInstance, cliques: Sequence[frozenset]) -> MixedLabelling:
        witness = inst.witness
        if not isinstance(witness, TreeWitness):
            raise ValueError("skinny scheme needs a tree witness")
        decomp = witness.decomp
        report = validate_decomposition(inst.gplus, decomp)
        if not report.ok:
            raise ValueError("invalid decomposition: %s" % report.violations[:3])
        if k is not None and decomp.adhesion_width() > k:
            raise ValueError("adhesion-width exceeds declared k=%d" % k)
        if b is not None and not check_skinny(decomp, b):
            raise ValueError("decomposition is not %s-skinny" % b)
        if inst.n == 0:
            return MixedLabelling({}, {}, {}, meta={"scheme": "skinny"})

        verts = inst.g.sorted_vertices()
        nice = dict(zip(verts, nice_weights([inst.weights[v] for v in verts])))
        p = decomp.height() + 1
        layers = {i: decomp.layer(i) for i in range(1, p + 1)}
        big_b = {
            i: frozenset().union(*(decomp.bags[x] for x in layers[i]))
            for i in range(1, p + 1)
        }
        adhesion = {1: frozenset()}
        for i in range(2, p + 1):
            adhesion[i] = big_b[i] & big_b[i - 1]

        home_layer: Dict[int, int] = {}
        last_layer: Dict[int, int] = {}
        for i in range(1, p + 1):
            for v in big_b[i]:
                home_layer.setdefault(v, i)
                last_layer[v] = i

        psi = []
        for i in range(1, p + 1):
            w = sum(nice[v] for v in big_b[i] - adhesion[i])
            psi.append(max(1, w))
        rho = full_alphabetic_code(psi)

        # Adhesion identifiers: vertices spanning layers get (lca depth in the
        # layer-code tree, an index unique within that lca node's class).
        in_adhesion = sorted(set().union(*adhesion.values())) if p > 1 else []
        classes: Dict[Tuple[int, BitLabel], List[int]] = {}
        dvals: Dict[int, int] = {}
        for v in in_adhesion:
            d = rho[home_layer[v] - 1].common_prefix_len(rho[last_layer[v] - 1])
            dvals[v] = d
            classes.setdefault((d, rho[home_layer[v] - 1].prefix(d)), []).append(v)
        beta: Dict[int, BitLabel] = {}
        max_class = 0
        for key in sorted(classes, key=lambda t: (t[0], t[1].bits())):
            members = sorted(classes[key])
            max_class = max(max_class, len(members))
            for pos, v in enumerate(members, start=1):
                beta[v] = frame([BitLabel.from_uint(dvals[v]), BitLabel.from_uint(pos)])
        if k is not None and b is not None and max_class > int(Fraction(b)) * max(1, k):
            raise ValueError("adhesion class size exceeds the b*k contract")
        empty_beta = frame([BitLabel.EMPTY])

        # Per-layer base labelling of the torso union minus the upper adhesion.
        route: Dict[frozenset, int] = {}
        for kq in cliques:
            j = max(home_layer[u] for u in kq)
            route[frozenset(kq)] = j
        layer_cliques: Dict[int, List[frozenset]] = {i: [] for i in range(1, p + 1)}
        for kq, j in route.items():
            shard = frozenset(u for u in kq if home_layer[u] == j)
            layer_cliques[j].append(shard)

        layer_label: Dict[int, MixedLabelling] = {}
        for i in range(1, p + 1):
            pieces = []
            for x in layers[i]:
                piece_vs = decomp.bags[x] - adhesion[i]
                if piece_vs:
                    pieces.append(
                        (
                            piece_vs,
                            torso(inst.gplus, decomp, x).induced(piece_vs),
                            witness.torsos[x].restrict(piece_vs),
                        )
                    )
            vs_i = frozenset().union(*(pv for pv, _, _ in pieces)) if pieces else frozenset()
            gplus_i = Graph(
                vs_i, [e for _, tor, _ in pieces for e in tor.edges]
            )
            sub = WitnessedInstance(
                gplus=gplus_i,
                g=inst.g.induced(vs_i),
                weights={v: nice[v] for v in vs_i},
                witness=UnionWitness(pieces=tuple((pv, w) for pv, _, w in pieces)),
            )
            wanted = sorted(set(layer_cliques[i]), key=sorted)
            layer_label[i] = ubase.label(sub, wanted)

        mu: Dict[int, BitLabel] = {}
        for v in verts:
            i = home_layer[v]
            neigh = sorted(inst.g.neighbours(v) & adhesion[i])
            if k is not None and len(neigh) > k:
                raise ValueError("vertex %d has more than k adhesion neighbours" % v)
            alpha = frame([beta[u] for u in neigh])
            mu[v] = frame(
                [
                    rho[i - 1],
                    layer_label[i].vertex_labels[v],
                    alpha,
                    beta.get(v, empty_beta),
                ]
            )

        ck: Dict[frozenset, BitLabel] = {}
        kap: Dict[Tuple[frozenset, int], BitLabel] = {}
        for kq in cliques:
            kq = frozenset(kq)
            j = route[kq]
            shard = frozenset(u for u in kq if home_layer[u] == j)
            # Third part lists the adhesion members' identifiers; it keeps
            # clique labels injective when two cliques share a shard.
            adh_ids = frame([beta[u] for u in sorted(kq - shard)])
            ck[kq] = frame([rho[j - 1], layer_label[j].clique_labels[shard], adh_ids])
            for u in sorted(kq):
                if home_layer[u] == j:
                    kap[(kq, u)] = frame(
                        [BitLabel(1, 0), layer_label[j].local_ids[(shard, u)]]
                    )
                else:
                    kap[(kq, u)] = frame([BitLabel(1, 1), beta[u]])
        meta = {
            "scheme": "skinny",
            "layers": p,
            "max_class": max_class,
            "children": [layer_label[i].meta for i in range(1, p + 1)],
        }
        return MixedLabelling(mu, ck, kap, meta=meta)

    def test_a(x: BitLabel, y: BitLabel) -> int:
        rx = _parse4(x)
        ry = _parse4(y)
        if rx[0] == ry[0]:
            return ubase.test_adjacency(rx[1], ry[1])
        if ry[0].lex_less(rx[0]):
            rx, ry = ry, rx
        ident = _parse_beta(rx[3])
        if ident is None:
            return 0
        d, colour = ident
        if d > len(rx[0]):
            raise MalformedLabel("identifier depth exceeds codeword length")
        if d > len(ry[0]) or rx[0].prefix(d) != ry[0].prefix(d):
            return 0
        for entry in unframe(ry[2]):
            cand = _parse_beta(entry)
            if cand == (d, colour):
                return 1
        return 0

    def test_i(mu_k: BitLabel, kappa: BitLabel, mu_v: BitLabel) -> int:
        rk, inner_k, _ = _parse_clique(mu_k)
        rv = _parse4(mu_v)
        flag_parts = unframe(kappa)
        if len(flag_parts) != 2 or len(flag_parts[0]) != 1:
            raise MalformedLabel("skinny local identifier must be flag + payload")
        flag = flag_parts[0].bit(0)
        payload = flag_parts[1]
        if rk.lex_less(rv[0]):
            return 0
        if rk == rv[0]:
            if flag:
                return 0
            return ubase.test_identity(inner_k, payload, rv[1])
        # Clique layer strictly later than the vertex's home layer.
        if not flag:
            return 0
        ident_u = _parse_beta(payload)
        if ident_u is None:
            raise MalformedLabel("adhesion member identifier is empty")
        du, cu = ident_u
        if du > len(rk):
            raise MalformedLabel("identifier depth exceeds codeword length")
        if du > len(rv[0]) or rk.prefix(du) != rv[0].prefix(du):
            return 0
        ident_v = _parse_beta(rv[3])
        if ident_v is None:
            return 0
        return 1 if ident_v == (du, cu) else 0

    def g1(n: int) -> float:
        kk = k if k is not None else 4
        bb = float(Fraction(b)) if b is not None else 2.0
        return base.g1(n) + cfg.skinny_c * (
            kk * log2n(max(2, int(bb))) + kk * llog(n)
        ) + cfg.skinny_c * llog(n) + 10

    def g2(n: int) -> float:
        bb = float(Fraction(b)) if b is not None else 2.0
        return base.g2(n) + cfg.skinny_c * (log2n(max(2, int(bb))) + llog(n)) + 6

    def g3(n: int) -> float:
        return base.g3(n) + cfg.skinny_c * llog(n) + 6

    return SchemeHandle(
        name="skinny(%s)" % base.name,
        label=label,
        test_adjacency=test_a,
        test_identity=test_i,
        g1=g1,
        g2=g2,
        g3=g3,
    )
