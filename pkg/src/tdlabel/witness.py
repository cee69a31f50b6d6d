"""Structure witnesses carried by labelling instances.

Every scheme quantifies over graphs *with* some structure (a product
placement, an apex set, a component partition, a forest-decomposition whose
torsos are themselves witnessed).  Instances carry that structure explicitly
through these types; discovery of witnesses is out of scope.  All witnesses
restrict to induced subgraphs, which is what the combinators need when they
hand pieces of an instance to their base scheme.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .decomposition import RootedForestDecomposition
from .graphs import Graph


class Witness:
    kind: str = "abstract"

    def restrict(self, vertices: FrozenSet[int]) -> "Witness":
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ProductWitness(Witness):
    """Injective placement of a graph into H x P rows with tw(H) <= k certified.

    ``elim_order`` lists V(H) so that each vertex's later neighbourhood is a
    clique of size at most k; ``placement`` maps graph vertices to
    (H-vertex, row) with rows 1..h.
    """

    host: Graph
    elim_order: Tuple[int, ...]
    k: int
    h: int
    placement: Tuple[Tuple[int, int, int], ...]  # (graph vertex, H-vertex, row)

    kind = "product"

    def placement_map(self) -> Dict[int, Tuple[int, int]]:
        return {v: (hv, row) for v, hv, row in self.placement}

    def rank(self) -> Dict[int, int]:
        return {v: i for i, v in enumerate(self.elim_order)}

    def out_neighbourhood(self, hv: int) -> List[int]:
        rank = self.rank()
        return sorted(w for w in self.host.neighbours(hv) if rank[w] > rank[hv])

    def restrict(self, vertices: FrozenSet[int]) -> "ProductWitness":
        return ProductWitness(
            host=self.host,
            elim_order=self.elim_order,
            k=self.k,
            h=self.h,
            placement=tuple(p for p in self.placement if p[0] in vertices),
        )

    def validate(self, gplus: Graph) -> List[str]:
        """All violated clauses; empty means the witness certifies gplus."""
        problems = []
        pm = self.placement_map()
        if set(pm) != set(gplus.vertices):
            problems.append("placement does not cover the vertex set exactly")
        if len(set(pm.values())) != len(pm):
            problems.append("placement is not injective")
        if sorted(self.elim_order) != self.host.sorted_vertices():
            problems.append("elimination order is not a permutation of V(H)")
        rank = self.rank()
        for hv in self.host.sorted_vertices():
            later = [w for w in self.host.neighbours(hv) if rank[w] > rank[hv]]
            if len(later) > self.k:
                problems.append("out-degree of H-vertex %d exceeds k" % hv)
            if not self.host.is_clique(later):
                problems.append("out-neighbourhood of H-vertex %d is not a clique" % hv)
        for v, (hv, row) in pm.items():
            if not 1 <= row <= self.h:
                problems.append("vertex %d placed on row %d outside 1..h" % (v, row))
        for u, v in sorted(gplus.edges):
            (hu, ru), (hv_, rv) = pm[u], pm[v]
            if abs(ru - rv) > 1 or (hu != hv_ and not self.host.has_edge(hu, hv_)):
                problems.append("edge (%d,%d) violates the strong-product rule" % (u, v))
        return problems

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "h": self.h,
            "H_n": self.host.n,
            "H_edges": [list(e) for e in sorted(self.host.edges)],
            "elim_order": list(self.elim_order),
            "placement": [list(p) for p in sorted(self.placement)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ProductWitness":
        return cls(
            host=Graph.dense(obj["H_n"], [tuple(e) for e in obj["H_edges"]]),
            elim_order=tuple(obj["elim_order"]),
            k=obj["k"],
            h=obj["h"],
            placement=tuple(tuple(p) for p in obj["placement"]),
        )


@dataclass(frozen=True)
class ApexWitness(Witness):
    """An ordered apex set whose removal leaves an inner-witnessed graph."""

    apexes: Tuple[int, ...]
    inner: Witness

    kind = "apex"

    def restrict(self, vertices: FrozenSet[int]) -> "ApexWitness":
        return ApexWitness(
            apexes=tuple(a for a in self.apexes if a in vertices),
            inner=self.inner.restrict(vertices - set(self.apexes)),
        )

    def to_json(self) -> dict:
        return {"kind": self.kind, "apexes": list(self.apexes), "inner": self.inner.to_json()}


@dataclass(frozen=True)
class UnionWitness(Witness):
    """A partition into pairwise non-adjacent pieces, each witnessed."""

    pieces: Tuple[Tuple[FrozenSet[int], Witness], ...]

    kind = "union"

    def restrict(self, vertices: FrozenSet[int]) -> "UnionWitness":
        kept = []
        for vs, w in self.pieces:
            nvs = vs & vertices
            if nvs:
                kept.append((nvs, w.restrict(nvs)))
        return UnionWitness(pieces=tuple(kept))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "pieces": [
                {"vertices": sorted(vs), "witness": w.to_json()} for vs, w in self.pieces
            ],
        }


@dataclass(frozen=True)
class TreeWitness(Witness):
    """A rooted forest-decomposition with one witness per node's torso."""

    decomp: RootedForestDecomposition
    torsos: Tuple[Witness, ...]

    kind = "tree"

    def __post_init__(self):
        if len(self.torsos) != self.decomp.nnodes:
            raise ValueError("one torso witness per decomposition node required")

    def restrict(self, vertices: FrozenSet[int]) -> "TreeWitness":
        return TreeWitness(
            decomp=self.decomp.restrict_bags(vertices),
            torsos=tuple(
                w.restrict(self.decomp.bags[x] & vertices) for x, w in enumerate(self.torsos)
            ),
        )

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "decomposition": self.decomp.to_json(),
            "torsos": [w.to_json() for w in self.torsos],
        }


def witness_from_json(obj: dict) -> Witness:
    kind = obj["kind"]
    if kind == "product":
        return ProductWitness.from_json(obj)
    if kind == "apex":
        return ApexWitness(tuple(obj["apexes"]), witness_from_json(obj["inner"]))
    if kind == "union":
        return UnionWitness(
            tuple(
                (frozenset(p["vertices"]), witness_from_json(p["witness"]))
                for p in obj["pieces"]
            )
        )
    if kind == "tree":
        return TreeWitness(
            RootedForestDecomposition.from_json(obj["decomposition"]),
            tuple(witness_from_json(t) for t in obj["torsos"]),
        )
    raise ValueError("unknown witness kind %r" % kind)
