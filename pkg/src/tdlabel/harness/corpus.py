"""The fixed-seed regression corpus and scheme registry.

Thirty instances spanning every scheme and the structural extremes the
schemes must survive: single rows, tall paths, heavy weight skew, empty apex
sets, single-piece unions, deep recursion, and glued decompositions up to
2000 vertices.  Instances regenerate deterministically from (seed, params);
the manifest records a content hash of each instance's canonical JSON so any
generator drift breaks loudly.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..config import DEFAULT, BudgetConfig
from ..graphs import Graph
from ..mls import SchemeHandle, WitnessedInstance
from ..product import product_scheme
from ..combinators import apex_scheme, compose_full, short_scheme, skinny_scheme, union_scheme
from ..witness import witness_from_json
from .generators import (
    gen_apex_instance,
    gen_decomposed_instance,
    gen_product_instance,
    gen_union_instance,
)

SCHEMES = ("product", "apex", "union", "skinny", "short", "compose_full")


def make_handle(scheme: str, params: Dict, cfg: BudgetConfig = DEFAULT) -> SchemeHandle:
    """The scheme handle matching a corpus entry's generator parameters."""
    k = params.get("k", 2)
    if scheme == "product":
        return product_scheme(k, cfg)
    if scheme == "apex":
        return apex_scheme(product_scheme(k, cfg), params.get("a", 2), cfg)
    if scheme == "union":
        base = product_scheme(k, cfg)
        if params.get("apexes"):
            base = apex_scheme(base, params["apexes"], cfg)
        return union_scheme(base, cfg)
    if scheme == "skinny":
        return skinny_scheme(product_scheme(params.get("torso_k", 2), cfg), cfg=cfg)
    if scheme == "short":
        return short_scheme(product_scheme(params.get("torso_k", 2), cfg), cfg=cfg)
    if scheme == "compose_full":
        base = product_scheme(params.get("torso_k", 2), cfg)
        if params.get("torso_kind") == "product+apex":
            base = apex_scheme(base, params.get("apexes", 2), cfg)
        bound = params.get("k_adh", 3) + 2 * params.get("torso_k", 2) + 4
        return compose_full(base, k=bound, cfg=cfg)
    raise ValueError("unknown scheme %r" % scheme)


def generate(scheme: str, params: Dict, seed: int):
    """Instance plus requested cliques for a corpus entry."""
    rng = random.Random(seed)
    p = dict(params)
    if scheme == "product":
        return gen_product_instance(
            p["n"], p.get("k", 2), p.get("h", 4), p.get("edge_prob", 0.3), rng,
            weights=p.get("weights", "random"),
        )
    if scheme == "apex":
        return gen_apex_instance(
            p["n"], p.get("k", 2), p.get("h", 4), p.get("a", 2),
            p.get("edge_prob", 0.3), rng, weights=p.get("weights", "random"),
        )
    if scheme == "union":
        return gen_union_instance(
            p.get("m", 4), p["n"], p.get("k", 2), p.get("h", 3),
            p.get("edge_prob", 0.3), rng, weights=p.get("weights", "random"),
            apexes=p.get("apexes", 0),
        )
    if scheme in ("skinny", "short", "compose_full"):
        return gen_decomposed_instance(
            p["n"], p.get("k_adh", 3), p.get("torso_kind", "product"), rng,
            torso_k=p.get("torso_k", 2), torso_h=p.get("torso_h", 4),
            edge_prob=p.get("edge_prob", 0.25), weights=p.get("weights", "random"),
            apexes=p.get("apexes", 2),
        )
    raise ValueError("unknown scheme %r" % scheme)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    scheme: str
    params: Dict
    seed: int

    def build(self):
        return generate(self.scheme, self.params, self.seed)

    def handle(self, cfg: BudgetConfig = DEFAULT) -> SchemeHandle:
        return make_handle(self.scheme, self.params, cfg)


CORPUS: Tuple[CorpusEntry, ...] = tuple(
    CorpusEntry(name, scheme, params, seed)
    for name, scheme, params, seed in [
        ("product-single-row", "product", {"n": 40, "k": 1, "h": 1}, 101),
        ("product-tree-rows", "product", {"n": 60, "k": 1, "h": 5}, 102),
        ("product-tall", "product", {"n": 120, "k": 2, "h": 20}, 103),
        ("product-n300-h15", "product", {"n": 300, "k": 2, "h": 15, "edge_prob": 0.5}, 7),
        ("product-full-super", "product", {"n": 200, "k": 3, "h": 5, "edge_prob": 0.0}, 105),
        ("product-unit-weights", "product", {"n": 100, "k": 2, "h": 8, "weights": "unit"}, 106),
        ("product-k0-path", "product", {"n": 50, "k": 0, "h": 10}, 107),
        ("apex-empty-set", "apex", {"n": 60, "k": 2, "h": 4, "a": 0}, 108),
        ("apex-two", "apex", {"n": 80, "k": 2, "h": 4, "a": 2}, 109),
        ("apex-k3", "apex", {"n": 150, "k": 3, "h": 6, "a": 2}, 110),
        ("union-single", "union", {"m": 1, "n": 50, "k": 2}, 111),
        ("union-eight", "union", {"m": 8, "n": 20, "k": 1, "h": 2}, 112),
        ("union-apex-pieces", "union", {"m": 4, "n": 25, "k": 2, "apexes": 2}, 113),
        ("skinny-small", "skinny", {"n": 60, "k_adh": 2, "torso_k": 1}, 114),
        ("skinny-mid", "skinny", {"n": 150, "k_adh": 3}, 115),
        ("skinny-wide", "skinny", {"n": 300, "k_adh": 3, "torso_h": 2}, 116),
        ("short-small", "short", {"n": 60, "k_adh": 2, "torso_k": 1}, 117),
        ("short-mid", "short", {"n": 150, "k_adh": 3}, 118),
        ("short-deep", "short", {"n": 300, "k_adh": 2, "torso_h": 2}, 119),
        ("short-n500", "short", {"n": 500, "k_adh": 3}, 120),
        ("compose-trees", "compose_full", {"n": 80, "k_adh": 1, "torso_k": 1}, 121),
        ("compose-small", "compose_full", {"n": 50, "k_adh": 2}, 122),
        ("compose-n120", "compose_full", {"n": 120, "k_adh": 3}, 123),
        ("compose-n250", "compose_full", {"n": 250, "k_adh": 3}, 124),
        ("compose-apex-torsos", "compose_full",
         {"n": 150, "k_adh": 3, "torso_kind": "product+apex"}, 125),
        ("compose-unit-weights", "compose_full", {"n": 400, "k_adh": 3, "weights": "unit"}, 126),
        ("compose-n500", "compose_full", {"n": 500, "k_adh": 3}, 127),
        ("compose-n800-apex", "compose_full",
         {"n": 800, "k_adh": 3, "torso_kind": "product+apex"}, 128),
        ("compose-n1200", "compose_full", {"n": 1200, "k_adh": 3}, 129),
        ("compose-n2000", "compose_full", {"n": 2000, "k_adh": 3}, 130),
    ]
)


def instance_to_json(inst: WitnessedInstance, cliques: Sequence[frozenset] = ()) -> dict:
    weights = []
    for v in inst.g.sorted_vertices():
        w = Fraction(inst.weights[v])
        weights.append(w.numerator if w.denominator == 1 else [w.numerator, w.denominator])
    return {
        "graph": inst.g.to_json(),
        "supergraph": inst.gplus.to_json(),
        "weights": weights,
        "witness": inst.witness.to_json(),
        "cliques": [sorted(k) for k in cliques],
    }


def instance_from_json(obj: dict) -> Tuple[WitnessedInstance, List[frozenset]]:
    g = Graph.from_json(obj["graph"])
    gplus = Graph.from_json(obj["supergraph"])
    weights = {}
    for v, w in zip(g.sorted_vertices(), obj["weights"]):
        weights[v] = Fraction(w[0], w[1]) if isinstance(w, list) else Fraction(w)
    inst = WitnessedInstance(
        gplus=gplus, g=g, weights=weights, witness=witness_from_json(obj["witness"])
    )
    return inst, [frozenset(k) for k in obj.get("cliques", [])]


def instance_digest(inst: WitnessedInstance, cliques: Sequence[frozenset] = ()) -> str:
    blob = json.dumps(instance_to_json(inst, cliques), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def corpus_manifest() -> List[dict]:
    out = []
    for entry in CORPUS:
        inst, cliques = entry.build()
        out.append(
            {
                "name": entry.name,
                "scheme": entry.scheme,
                "params": entry.params,
                "seed": entry.seed,
                "n": inst.n,
                "sha256": instance_digest(inst, cliques),
            }
        )
    return out
