"""Weighted mixed labellings: containers, scheme handles, and the exact checker.

A scheme instance labels every vertex of a graph and every requested clique
of its supergraph, plus a short local identifier per clique member.  The two
testers are pure functions of label bits; the checker below verifies them
against brute-force enumeration and reports how far the label lengths sit
from the Kraft ideal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .bits import BitLabel, MalformedLabel
from .graphs import Graph
from .witness import Witness

Clique = FrozenSet[int]


@dataclass
class MixedLabelling:
    """Vertex labels, clique labels, and per-member local identifiers."""

    vertex_labels: Dict[int, BitLabel]
    clique_labels: Dict[Clique, BitLabel]
    local_ids: Dict[Tuple[Clique, int], BitLabel]
    meta: dict = field(default_factory=dict)

    def all_labels(self) -> List[BitLabel]:
        out = [self.vertex_labels[v] for v in sorted(self.vertex_labels)]
        out.extend(self.clique_labels[k] for k in sorted(self.clique_labels, key=sorted))
        return out


@dataclass(frozen=True)
class WitnessedInstance:
    """A labelling problem: supergraph, spanning subgraph, weights, witness."""

    gplus: Graph
    g: Graph
    weights: Dict[int, Fraction]
    witness: Witness

    def __post_init__(self):
        if not self.g.is_spanning_subgraph_of(self.gplus):
            raise ValueError("g must be a spanning subgraph of gplus")
        if set(self.weights) != set(self.g.vertices):
            raise ValueError("weights must cover exactly the vertex set")
        if any(w <= 0 for w in self.weights.values()):
            raise ValueError("weights must be positive")

    @property
    def n(self) -> int:
        return self.g.n

    def restricted(self, vertices: Iterable[int]) -> "WitnessedInstance":
        vs = frozenset(vertices)
        return WitnessedInstance(
            gplus=self.gplus.induced(vs),
            g=self.g.induced(vs),
            weights={v: self.weights[v] for v in vs},
            witness=self.witness.restrict(vs),
        )


@dataclass(frozen=True)
class SchemeHandle:
    """An opaque labeller with its adjacency and identity testers.

    The testers accept nothing but label bits; budget descriptors g1..g3 give
    the configured per-instance slack allowances as functions of n.
    """

    name: str
    label: Callable[[WitnessedInstance, Sequence[Clique]], MixedLabelling]
    test_adjacency: Callable[[BitLabel, BitLabel], int]
    test_identity: Callable[[BitLabel, BitLabel, BitLabel], int]
    g1: Callable[[int], float]
    g2: Callable[[int], float]
    g3: Callable[[int], float]


@dataclass
class BudgetReport:
    """Measured slack of label lengths over the Kraft ideal, in bits."""

    max_vertex_slack: float
    max_clique_slack: float
    max_kappa_bits: int
    max_vertex_bits: int
    mean_vertex_bits: float
    per_vertex_slack: Dict[int, float] = field(default_factory=dict)

    @classmethod
    def empty(cls) -> "BudgetReport":
        return cls(0.0, 0.0, 0, 0, 0.0)


@dataclass
class CheckResult:
    passed: bool
    failures: List[str]
    report: BudgetReport
    labelling: Optional[MixedLabelling] = None


def adjacency_oracle(g: Graph) -> List[List[bool]]:
    """Dense pair-indexed adjacency table; symmetric with a false diagonal."""
    vs = g.sorted_vertices()
    if vs and vs != list(range(len(vs))):
        raise ValueError("oracle table requires dense vertex ids")
    n = len(vs)
    table = [[False] * n for _ in range(n)]
    for u, v in g.edges:
        table[u][v] = True
        table[v][u] = True
    return table


def _log2(x) -> float:
    if isinstance(x, Fraction):
        return math.log2(x.numerator) - math.log2(x.denominator)
    return math.log2(x)


def budget_report(
    inst: WitnessedInstance,
    labelling: MixedLabelling,
    cliques: Sequence[Clique],
) -> BudgetReport:
    total = sum(inst.weights.values())
    log_total = _log2(total) if total > 0 else 0.0
    per_vertex: Dict[int, float] = {}
    max_v = 0.0
    for v in sorted(inst.g.vertices):
        ideal = log_total - _log2(inst.weights[v])
        slack = len(labelling.vertex_labels[v]) - ideal
        per_vertex[v] = slack
        max_v = max(max_v, slack)
    max_k = 0.0
    max_kappa = 0
    for k in cliques:
        ideal = log_total - min(_log2(inst.weights[v]) for v in k)
        max_k = max(max_k, len(labelling.clique_labels[k]) - ideal)
        for u in k:
            max_kappa = max(max_kappa, len(labelling.local_ids[(k, u)]))
    sizes = [len(labelling.vertex_labels[v]) for v in inst.g.vertices]
    return BudgetReport(
        max_vertex_slack=max_v,
        max_clique_slack=max_k,
        max_kappa_bits=max_kappa,
        max_vertex_bits=max(sizes, default=0),
        mean_vertex_bits=sum(sizes) / len(sizes) if sizes else 0.0,
        per_vertex_slack=per_vertex,
    )


def check_scheme_on_instance(
    handle: SchemeHandle,
    inst: WitnessedInstance,
    cliques: Sequence[Clique] = (),
    max_failures: int = 20,
    labelling: Optional[MixedLabelling] = None,
) -> CheckResult:
    """Exhaustively verify conditions (i) and (ii) plus label injectivity.

    Condition (i): the adjacency tester agrees with the spanning subgraph on
    every vertex pair.  Condition (ii): the identity tester recognizes each
    clique member against every vertex label.  Budget slack for conditions
    (iii)-(v) is measured and reported, not asserted.  Pass ``labelling`` to
    verify labels loaded from elsewhere instead of freshly computed ones.
    """
    cliques = [frozenset(k) for k in cliques]
    for k in cliques:
        if not inst.gplus.is_clique(k):
            raise ValueError("requested set %s is not a clique in gplus" % sorted(k))
    if labelling is None:
        labelling = handle.label(inst, cliques)
    failures: List[str] = []

    def fail(msg: str) -> bool:
        failures.append(msg)
        return len(failures) >= max_failures

    verts = sorted(inst.g.vertices)
    mu = labelling.vertex_labels
    if set(mu) < set(verts):
        raise ValueError("labelling is missing vertex labels")

    # Injectivity over vertex and clique labels together.
    seen: Dict[BitLabel, str] = {}
    for v in verts:
        key = mu[v]
        if key in seen:
            fail("label collision: vertex %d vs %s" % (v, seen[key]))
        seen[key] = "vertex %d" % v
    for k in cliques:
        key = labelling.clique_labels[k]
        if key in seen:
            fail("label collision: clique %s vs %s" % (sorted(k), seen[key]))
        seen[key] = "clique %s" % sorted(k)

    # (i) all ordered pairs, diagonal included.
    test_a = handle.test_adjacency
    has_edge = inst.g.has_edge
    done = False
    for i, u in enumerate(verts):
        if done:
            break
        lu = mu[u]
        for v in verts[i:]:
            expect = 1 if has_edge(u, v) else 0
            try:
                got = test_a(lu, mu[v])
            except MalformedLabel as exc:
                done = fail("A(mu(%d),mu(%d)) raised framing error: %s" % (u, v, exc))
                if done:
                    break
                continue
            if got != expect:
                done = fail("A(mu(%d),mu(%d)) = %d, expected %d" % (u, v, got, expect))
                if done:
                    break

    # (ii) all (clique, member, vertex) triples.
    test_i = handle.test_identity
    for k in cliques:
        lk = labelling.clique_labels[k]
        for u in sorted(k):
            kap = labelling.local_ids[(k, u)]
            for v in verts:
                expect = 1 if u == v else 0
                try:
                    got = test_i(lk, kap, mu[v])
                except MalformedLabel as exc:
                    if fail("I on clique %s raised framing error: %s" % (sorted(k), exc)):
                        break
                    continue
                if got != expect:
                    if fail(
                        "I(mu(%s),kappa(.,%d),mu(%d)) = %d, expected %d"
                        % (sorted(k), u, v, got, expect)
                    ):
                        break

    report = budget_report(inst, labelling, cliques)
    return CheckResult(not failures, failures, report, labelling)
