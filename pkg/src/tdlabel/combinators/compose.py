"""Full composition: refine, label torsos as skinny instances, wrap shortly.

Given any bounded-adhesion tree-decomposition with base-labelable torsos, the
labeller picks the balance parameter b from the base scheme's clique-label
allowance, refines the decomposition into a short tree of b-skinny
super-bags, and labels the result with the short scheme over the skinny
scheme over the base.  The testers are exactly those of that composed stack,
so they are fixed functions independent of the instance.
"""

from __future__ import annotations

import math
from typing import Sequence

from ..config import DEFAULT, BudgetConfig, llog, log2n
from ..mls import MixedLabelling, SchemeHandle, WitnessedInstance
from ..refine import skinny_refine
from ..witness import TreeWitness
from .short import short_scheme
from .skinny import skinny_scheme


def balance_parameter(g3_value: float, n: int) -> int:
    """b(n) = 2**ceil(sqrt(g3(n) * log2 n)), at least 2."""
    if n < 2:
        return 2
    s = math.ceil(math.sqrt(max(1.0, g3_value) * log2n(n)))
    return max(2, 1 << int(s))


def compose_full(base: SchemeHandle, k: int, cfg: BudgetConfig = DEFAULT) -> SchemeHandle:
    """Scheme for graphs with adhesion-width-k decompositions into base torsos."""
    inner = skinny_scheme(base, cfg=cfg)
    snake = short_scheme(inner, cfg=cfg)

    def label(inst: WitnessedInstance, cliques: Sequence[frozenset]) -> MixedLabelling:
        witness = inst.witness
        if not isinstance(witness, TreeWitness):
            raise ValueError("composition needs a tree witness")
        if inst.n == 0:
            return MixedLabelling({}, {}, {}, meta={"scheme": "compose_full"})
        if witness.decomp.adhesion_width() > k:
            raise ValueError("adhesion-width exceeds configured k=%d" % k)
        n = inst.n
        b = balance_parameter(base.g3(n), n)
        ref = skinny_refine(inst.gplus, witness.decomp, b)
        torso_witnesses = []
        for q in range(ref.outer.nnodes):
            tree, nodes = ref.inner_tree(q)
            torso_witnesses.append(
                TreeWitness(
                    decomp=tree,
                    torsos=tuple(witness.torsos[ref.source_nodes[t]] for t in nodes),
                )
            )
        refined = WitnessedInstance(
            gplus=inst.gplus,
            g=inst.g,
            weights=inst.weights,
            witness=TreeWitness(decomp=ref.outer, torsos=tuple(torso_witnesses)),
        )
        lab = snake.label(refined, cliques)
        lab.meta["scheme"] = "compose_full"
        lab.meta["balance_b"] = b
        lab.meta["outer_height"] = ref.outer.height()
        return lab

    def g1(n: int) -> float:
        g3v = max(1.0, base.g3(n))
        s = math.sqrt(g3v * log2n(n))
        hh = math.sqrt(log2n(n) / g3v)
        return (
            base.g1(n)
            + cfg.compose_c * (base.g2(n) + s + (1 + hh) * llog(n) + k * llog(n))
            + 20
        )

    def g2(n: int) -> float:
        s = math.sqrt(max(1.0, base.g3(n)) * log2n(n))
        return base.g2(n) + cfg.compose_c * (s + llog(n)) + 10

    def g3(n: int) -> float:
        g3v = max(1.0, base.g3(n))
        s = math.sqrt(g3v * log2n(n))
        hh = math.sqrt(log2n(n) / g3v)
        return base.g3(n) + cfg.compose_c * (s + (1 + hh) * llog(n)) + 20

    return SchemeHandle(
        name="compose(%s)" % base.name,
        label=label,
        test_adjacency=snake.test_adjacency,
        test_identity=snake.test_identity,
        g1=g1,
        g2=g2,
        g3=g3,
    )
