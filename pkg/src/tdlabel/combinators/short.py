"""Short-decomposition combinator: recurse on root bags of a shallow forest.

The root bags of a tidy forest-decomposition are labelled as one disjoint
union of root torsos under inflated weights (each root-adhesion clique also
pays for the subtree hanging from it), and every hanging subtree recurses
with one level less.  A deep vertex's label concatenates its subtree's
root-adhesion clique label, its recursive label, and the local identifiers of
its neighbours inside that clique; label lengths telescope along the root
path, which is what keeps the scheme efficient for shallow forests.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from ..bits import BitLabel, MalformedLabel, frame, unframe
from ..codes import nice_weights
from ..config import DEFAULT, BudgetConfig, llog
from ..decomposition import (
    RootedForestDecomposition,
    is_tidy,
    tidy_with_map,
    torso,
    validate_decomposition,
)
from ..graphs import Graph
from ..mls import MixedLabelling, SchemeHandle, WitnessedInstance
from ..witness import TreeWitness, UnionWitness, Witness
from .union import union_scheme


@lru_cache(maxsize=1 << 18)
def _parts(label: BitLabel) -> Tuple[BitLabel, ...]:
    return tuple(unframe(label))


def short_scheme(
    base: SchemeHandle,
    k: Optional[int] = None,
    h: Optional[int] = None,
    cfg: BudgetConfig = DEFAULT,
) -> SchemeHandle:
    """Scheme for graphs with height-bounded, adhesion-bounded decompositions."""
    ubase = union_scheme(base, cfg)

    def label(inst: WitnessedInstance, cliques: Sequence[frozenset]) -> MixedLabelling:
        witness = inst.witness
        if not isinstance(witness, TreeWitness):
            raise ValueError("short scheme needs a tree witness")
        report = validate_decomposition(inst.gplus, witness.decomp)
        if not report.ok:
            raise ValueError("invalid decomposition: %s" % report.violations[:3])
        decomp, kept = tidy_with_map(witness.decomp)
        torsos = tuple(witness.torsos[x] for x in kept)
        if h is not None and decomp.height() > h:
            raise ValueError("decomposition height %d exceeds h=%d" % (decomp.height(), h))
        if k is not None and decomp.adhesion_width() > k:
            raise ValueError("adhesion-width exceeds declared k=%d" % k)
        if inst.n == 0:
            return MixedLabelling({}, {}, {}, meta={"scheme": "short"})
        verts = inst.g.sorted_vertices()
        nice = dict(zip(verts, nice_weights([inst.weights[v] for v in verts])))
        lab = _label(inst.gplus, inst.g, nice, decomp, torsos,
                     [frozenset(c) for c in cliques])
        homes = decomp.home_nodes()
        lab.meta.update(
            {
                "scheme": "short",
                "height": decomp.height(),
                "adhesion_width": decomp.adhesion_width(),
                "per_vertex_adhesion": {
                    v: len(decomp.parent_adhesion(homes[v])) for v in verts
                },
            }
        )
        return lab

    def _label(
        gplus: Graph,
        g: Graph,
        wts: Dict[int, int],
        decomp: RootedForestDecomposition,
        torsos: Tuple[Witness, ...],
        cliques: List[frozenset],
    ) -> MixedLabelling:
        k_eff = max(1, decomp.adhesion_width())
        roots = sorted(decomp.roots)
        broot = frozenset().union(*(decomp.bags[r] for r in roots))

        # Root-adhesion cliques and their hanging subtrees.
        level2 = [x for x in decomp.bfs_order() if decomp.depth[x] == 1]
        subtree_of: Dict[frozenset, List[int]] = {}
        for y in level2:
            key = decomp.bags[y] & broot
            subtree_of.setdefault(key, []).extend(decomp.subtree_nodes(y))
        adhesion_cliques = sorted(subtree_of, key=sorted)

        group_vs: Dict[frozenset, frozenset] = {}
        vertex_group: Dict[int, frozenset] = {}
        for key in adhesion_cliques:
            vs = frozenset().union(*(decomp.bags[z] for z in subtree_of[key])) - broot
            group_vs[key] = vs
            for v in vs:
                vertex_group[v] = key

        # Inflated root weights: each adhesion clique carries its subtree.
        delta: Dict[int, int] = {v: k_eff * wts[v] for v in broot}
        for key in adhesion_cliques:
            hang = sum(wts[v] for v in group_vs[key])
            for v in key:
                delta[v] += hang
        total_delta = sum(delta.values())
        total_w = sum(wts.values())
        if total_delta > k_eff * total_w:
            raise AssertionError("delta(B_R) exceeds k * total weight")

        pieces = []
        for r in roots:
            tor = torso(gplus, decomp, r)
            pieces.append((decomp.bags[r], tor, torsos[r]))
        gplus_root = Graph(broot, [e for _, tor, _ in pieces for e in tor.edges])
        root_inst = WitnessedInstance(
            gplus=gplus_root,
            g=g.induced(broot),
            weights={v: delta[v] for v in broot},
            witness=UnionWitness(pieces=tuple((bv, w) for bv, _, w in pieces)),
        )
        root_requests = set(adhesion_cliques)
        deep_cliques: Dict[frozenset, List[frozenset]] = {key: [] for key in adhesion_cliques}
        clique_group: Dict[frozenset, Optional[frozenset]] = {}
        for kq in cliques:
            deep = kq - broot
            if not deep:
                clique_group[kq] = None
                root_requests.add(kq)
                continue
            groups = {vertex_group[u] for u in deep}
            if len(groups) != 1:
                raise ValueError("clique %s spans several hanging subtrees" % sorted(kq))
            key = groups.pop()
            clique_group[kq] = key
            deep_cliques[key].append(deep)
            if not kq <= (group_vs[key] | key | broot):
                raise ValueError("clique %s not confined to one subtree" % sorted(kq))
        root_lab = ubase.label(root_inst, sorted(root_requests, key=sorted))

        child_lab: Dict[frozenset, MixedLabelling] = {}
        for key in adhesion_cliques:
            nodes = subtree_of[key]
            index = {z: t for t, z in enumerate(nodes)}
            parent = [
                index[decomp.parent[z]] if decomp.parent[z] in index else None
                for z in nodes
            ]
            bags = [decomp.bags[z] - broot for z in nodes]
            sub_decomp = RootedForestDecomposition(parent, bags)
            sub_torsos = tuple(torsos[z].restrict(bags[t]) for t, z in enumerate(nodes))
            vs = group_vs[key]
            child_lab[key] = _label(
                gplus.induced(vs),
                g.induced(vs),
                {v: wts[v] for v in vs},
                sub_decomp,
                sub_torsos,
                sorted(set(deep_cliques[key]), key=sorted),
            )

        mu: Dict[int, BitLabel] = {}
        for v in sorted(broot):
            mu[v] = frame([root_lab.vertex_labels[v]])
        for key in adhesion_cliques:
            kl = root_lab.clique_labels[key]
            for w in sorted(group_vs[key]):
                neigh = sorted(g.neighbours(w) & broot)
                alpha = frame([root_lab.local_ids[(key, u)] for u in neigh])
                mu[w] = frame([kl, child_lab[key].vertex_labels[w], alpha])

        ck: Dict[frozenset, BitLabel] = {}
        kap: Dict[Tuple[frozenset, int], BitLabel] = {}
        homes = decomp.home_nodes()
        for kq in cliques:
            key = clique_group[kq]
            if key is None:
                ck[kq] = frame([root_lab.clique_labels[kq]])
                for u in sorted(kq):
                    kap[(kq, u)] = frame(
                        [BitLabel.from_uint(0), root_lab.local_ids[(kq, u)]]
                    )
                continue
            deep = kq - broot
            # Root members' identifiers keep clique labels injective when two
            # cliques share their deep part.
            root_ids = frame([root_lab.local_ids[(key, u)] for u in sorted(kq & broot)])
            ck[kq] = frame(
                [
                    root_lab.clique_labels[key],
                    child_lab[key].clique_labels[deep],
                    root_ids,
                ]
            )
            for u in sorted(kq):
                if u in broot:
                    kap[(kq, u)] = frame(
                        [BitLabel.from_uint(0), root_lab.local_ids[(key, u)]]
                    )
                else:
                    inner = unframe(child_lab[key].local_ids[(deep, u)])
                    kap[(kq, u)] = frame(
                        [BitLabel.from_uint(inner[0].to_uint() + 1), inner[1]]
                    )
        meta = {"root": root_lab.meta, "children": [child_lab[key].meta for key in adhesion_cliques]}
        return MixedLabelling(mu, ck, kap, meta=meta)

    def test_a(x: BitLabel, y: BitLabel) -> int:
        px = _parts(x)
        py = _parts(y)
        if len(px) == 1 and len(py) == 1:
            return ubase.test_adjacency(px[0], py[0])
        if len(px) == 3 and len(py) == 1:
            px, py = py, px
        if len(px) == 1 and len(py) == 3:
            for kap in unframe(py[2]):
                if ubase.test_identity(py[0], kap, px[0]):
                    return 1
            return 0
        if len(px) == 3 and len(py) == 3:
            if px[0] != py[0]:
                return 0
            return test_a(px[1], py[1])
        raise MalformedLabel("short vertex label must have one or three parts")

    def test_i(mu_k: BitLabel, kappa: BitLabel, mu_v: BitLabel) -> int:
        kp = _parts(mu_k)
        vp = _parts(mu_v)
        kk = unframe(kappa)
        if len(kk) != 2:
            raise MalformedLabel("short local identifier must have two parts")
        depth = kk[0].to_uint()
        if len(vp) == 1:
            if depth > 0:
                return 0
            if len(kp) not in (1, 3):
                raise MalformedLabel("short clique label must have one or three parts")
            return ubase.test_identity(kp[0], kk[1], vp[0])
        if len(vp) != 3:
            raise MalformedLabel("short vertex label must have one or three parts")
        if depth == 0:
            return 0
        if len(kp) != 3:
            return 0
        if kp[0] != vp[0]:
            return 0
        inner = frame([BitLabel.from_uint(depth - 1), kk[1]])
        return test_i(kp[1], inner, vp[1])

    def g1(n: int) -> float:
        kk = k if k is not None else 4
        hh = h if h is not None else 2
        return (
            base.g1(n)
            + kk * (base.g2(n) + cfg.short_c * llog(n))
            + hh * (base.g3(n) + cfg.short_c * llog(n))
            + cfg.short_c * llog(n)
            + 10
        )

    def g2(n: int) -> float:
        return base.g2(n) + cfg.short_c * llog(n) + 6

    def g3(n: int) -> float:
        hh = h if h is not None else 2
        return (hh + 1) * (base.g3(n) + cfg.short_c * llog(n)) + 10

    return SchemeHandle(
        name="short(%s)" % base.name,
        label=label,
        test_adjacency=test_a,
        test_identity=test_i,
        g1=g1,
        g2=g2,
        g3=g3,
    )
