"""Apex combinator: a few distinguished vertices with explicit edge bits.

Every label carries the apex index (zero for ordinary vertices) and one bit
per apex recording adjacency, so testing against an apex is a single bit
lookup; everything else delegates to the base scheme on the graph minus the
apexes.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Dict, Sequence, Tuple

from ..bits import BitLabel, MalformedLabel, frame, unframe
from ..codes import nice_weights
from ..config import DEFAULT, BudgetConfig, llog
from ..mls import MixedLabelling, SchemeHandle, WitnessedInstance
from ..witness import ApexWitness


@lru_cache(maxsize=1 << 18)
def _parse3(label: BitLabel) -> Tuple[BitLabel, BitLabel, BitLabel]:
    parts = unframe(label)
    if len(parts) != 3:
        raise MalformedLabel("apex vertex label must have three parts")
    return parts[0], parts[1], parts[2]


@lru_cache(maxsize=1 << 16)
def _parse2(label: BitLabel) -> Tuple[BitLabel, BitLabel]:
    parts = unframe(label)
    if len(parts) != 2:
        raise MalformedLabel("apex clique label must have two parts")
    return parts[0], parts[1]


def apex_scheme(base: SchemeHandle, a: int, cfg: BudgetConfig = DEFAULT) -> SchemeHandle:
    """Scheme for base-class graphs plus at most ``a`` apex vertices."""

    def label(inst: WitnessedInstance, cliques: Sequence[frozenset]) -> MixedLabelling:
        witness = inst.witness
        if not isinstance(witness, ApexWitness):
            raise ValueError("apex scheme needs an apex witness")
        apexes = list(witness.apexes)
        if len(apexes) > a:
            raise ValueError("apex set larger than the configured bound %d" % a)
        if not set(apexes) <= set(inst.g.vertices):
            raise ValueError("apex vertices outside the instance")
        b = len(apexes)
        index = {u: i + 1 for i, u in enumerate(apexes)}
        sigma_bits = max(1, (b + 1 - 1).bit_length()) if b else 0
        rest = sorted(set(inst.g.vertices) - set(apexes))

        verts = inst.g.sorted_vertices()
        nice = dict(zip(verts, nice_weights([inst.weights[v] for v in verts])))

        inner_cliques = []
        seen = set()
        for k in cliques:
            kk = frozenset(k) - set(apexes)
            if kk and kk not in seen:
                seen.add(kk)
                inner_cliques.append(kk)
        if rest:
            sub = WitnessedInstance(
                gplus=inst.gplus.induced(rest),
                g=inst.g.induced(rest),
                weights={v: nice[v] for v in rest},
                witness=witness.inner,
            )
            inner = base.label(sub, sorted(inner_cliques, key=sorted))
        else:
            inner = MixedLabelling({}, {}, {})

        def sigma(v: int) -> BitLabel:
            return BitLabel(sigma_bits, index.get(v, 0))

        def cbits(v: int) -> BitLabel:
            bits = 0
            for u in apexes:
                bits = (bits << 1) | (1 if inst.g.has_edge(v, u) else 0)
            return BitLabel(b, bits)

        mu: Dict[int, BitLabel] = {}
        for v in inst.g.sorted_vertices():
            base_label = inner.vertex_labels.get(v, BitLabel.EMPTY)
            mu[v] = frame([sigma(v), cbits(v), base_label])

        ck: Dict[frozenset, BitLabel] = {}
        kap: Dict[Tuple[frozenset, int], BitLabel] = {}
        for k in cliques:
            k = frozenset(k)
            members = 0
            for u in apexes:
                members = (members << 1) | (1 if u in k else 0)
            kk = k - set(apexes)
            inner_label = inner.clique_labels.get(kk, BitLabel.EMPTY) if kk else BitLabel.EMPTY
            ck[k] = frame([BitLabel(b, members), inner_label])
            for u in sorted(k):
                if u in index:
                    kap[(k, u)] = BitLabel(1, 1) + sigma(u)
                else:
                    kap[(k, u)] = BitLabel(1, 0) + inner.local_ids[(kk, u)]
        return MixedLabelling(
            mu, ck, kap,
            meta={"scheme": "apex", "apexes": b, "child": inner.meta},
        )

    def test_a(x: BitLabel, y: BitLabel) -> int:
        sx, cx, mx = _parse3(x)
        sy, cy, my = _parse3(y)
        i = sx.to_uint()
        j = sy.to_uint()
        if i:
            if i > len(cy):
                raise MalformedLabel("apex index exceeds edge-bit block")
            return cy.bit(i - 1)
        if j:
            if j > len(cx):
                raise MalformedLabel("apex index exceeds edge-bit block")
            return cx.bit(j - 1)
        return base.test_adjacency(mx, my)

    def test_i(mu_k: BitLabel, kappa: BitLabel, mu_v: BitLabel) -> int:
        _, inner_k = _parse2(mu_k)
        sv, _, mv = _parse3(mu_v)
        if len(kappa) < 1:
            raise MalformedLabel("empty local identifier")
        flag = kappa.bit(0)
        payload = kappa.drop(1)
        if flag:
            return 1 if (sv.to_uint() != 0 and payload == sv) else 0
        if sv.to_uint() != 0:
            return 0
        return base.test_identity(inner_k, payload, mv)

    return SchemeHandle(
        name="apex(%s)" % base.name,
        label=label,
        test_adjacency=test_a,
        test_identity=test_i,
        g1=lambda n: base.g1(n) + cfg.apex_c * (a + llog(n)) + 8,
        g2=lambda n: base.g2(n) + cfg.apex_c * math.log2(a + 2) + 2,
        g3=lambda n: base.g3(n) + cfg.apex_c * (a + llog(n)) + 8,
    )
