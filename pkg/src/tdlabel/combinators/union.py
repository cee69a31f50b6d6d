"""Disjoint-union combinator: prefix a component codeword to every label.

The component code comes from the alphabetic code over component weights, so
heavier components get shorter prefixes.  Testers compare the component
codeword bitwise and delegate within a component; local identifiers pass
through unchanged.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from ..bits import BitLabel, MalformedLabel, frame, unframe
from ..codes import full_alphabetic_code, nice_weights
from ..config import DEFAULT, BudgetConfig, llog
from ..mls import MixedLabelling, SchemeHandle, WitnessedInstance
from ..witness import UnionWitness


@lru_cache(maxsize=1 << 18)
def _parse2(label: BitLabel) -> Tuple[BitLabel, BitLabel]:
    parts = unframe(label)
    if len(parts) != 2:
        raise MalformedLabel("union label must have two parts")
    return parts[0], parts[1]


def union_scheme(base: SchemeHandle, cfg: BudgetConfig = DEFAULT) -> SchemeHandle:
    """Scheme for vertex-disjoint unions of base-labelable pieces."""

    def label(inst: WitnessedInstance, cliques: Sequence[frozenset]) -> MixedLabelling:
        witness = inst.witness
        if not isinstance(witness, UnionWitness):
            raise ValueError("union scheme needs a union witness")
        pieces = sorted(witness.pieces, key=lambda p: min(p[0], default=-1))
        vs = set(inst.g.vertices)
        covered: set = set()
        for piece_vs, _ in pieces:
            if piece_vs & covered:
                raise ValueError("union pieces overlap")
            covered |= piece_vs
        if covered != vs:
            raise ValueError("union pieces do not partition the vertex set")
        for u, v in inst.gplus.edges:
            for piece_vs, _ in pieces:
                if (u in piece_vs) != (v in piece_vs):
                    raise ValueError("edge (%d,%d) crosses union pieces" % (u, v))

        if not pieces:
            return MixedLabelling({}, {}, {}, meta={"scheme": "union", "pieces": 0})

        verts = inst.g.sorted_vertices()
        nice = dict(zip(verts, nice_weights([inst.weights[v] for v in verts])))
        psi = [sum(nice[v] for v in piece_vs) for piece_vs, _ in pieces]
        codes = full_alphabetic_code(psi)

        route: Dict[frozenset, int] = {}
        for k in cliques:
            owners = [i for i, (piece_vs, _) in enumerate(pieces) if k <= piece_vs]
            if not owners:
                raise ValueError("clique %s spans union pieces" % sorted(k))
            route[frozenset(k)] = owners[0]
        per_piece_cliques: List[List[frozenset]] = [[] for _ in pieces]
        for k, i in route.items():
            per_piece_cliques[i].append(k)

        mu: Dict[int, BitLabel] = {}
        ck: Dict[frozenset, BitLabel] = {}
        kap: Dict[Tuple[frozenset, int], BitLabel] = {}
        metas = []
        for i, (piece_vs, piece_witness) in enumerate(pieces):
            sub = WitnessedInstance(
                gplus=inst.gplus.induced(piece_vs),
                g=inst.g.induced(piece_vs),
                weights={v: nice[v] for v in piece_vs},
                witness=piece_witness,
            )
            lab = base.label(sub, sorted(per_piece_cliques[i], key=sorted))
            metas.append(lab.meta)
            for v, bits in lab.vertex_labels.items():
                mu[v] = frame([codes[i], bits])
            for k, bits in lab.clique_labels.items():
                ck[k] = frame([codes[i], bits])
            for key, bits in lab.local_ids.items():
                kap[key] = bits
        return MixedLabelling(
            mu, ck, kap, meta={"scheme": "union", "pieces": len(pieces), "children": metas}
        )

    def test_a(x: BitLabel, y: BitLabel) -> int:
        rx, mx = _parse2(x)
        ry, my = _parse2(y)
        if rx != ry:
            return 0
        return base.test_adjacency(mx, my)

    def test_i(mu_k: BitLabel, kappa: BitLabel, mu_v: BitLabel) -> int:
        rk, mk = _parse2(mu_k)
        rv, mv = _parse2(mu_v)
        if rk != rv:
            return 0
        return base.test_identity(mk, kappa, mv)

    return SchemeHandle(
        name="union(%s)" % base.name,
        label=label,
        test_adjacency=test_a,
        test_identity=test_i,
        g1=lambda n: base.g1(n) + cfg.union_c * llog(n) + 5,
        g2=base.g2,
        g3=lambda n: base.g3(n) + cfg.union_c * llog(n) + 5,
    )
