"""Verification driver and single-bit fault injection.

Verification delegates to the exhaustive checker; fault injection flips one
payload bit of a vertex label and counts the flip as detected when the
corrupted label either breaks frame parsing, collides with another label, or
changes some tester outcome against the brute-force oracle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..bits import BitLabel, MalformedLabel
from ..mls import (
    CheckResult,
    MixedLabelling,
    SchemeHandle,
    WitnessedInstance,
    check_scheme_on_instance,
)


def verify_instance(
    handle: SchemeHandle,
    inst: WitnessedInstance,
    cliques: Sequence[frozenset] = (),
    labelling: Optional[MixedLabelling] = None,
) -> dict:
    """Run the full check and return a JSON-friendly report."""
    res = check_scheme_on_instance(handle, inst, cliques, labelling=labelling)
    return {
        "pass": res.passed,
        "n": inst.n,
        "failures": res.failures,
        "budget": {
            "max_vertex_slack": res.report.max_vertex_slack,
            "max_clique_slack": res.report.max_clique_slack,
            "max_kappa_bits": res.report.max_kappa_bits,
            "max_vertex_bits": res.report.max_vertex_bits,
            "mean_vertex_bits": res.report.mean_vertex_bits,
        },
    }


def _flip_bit(label: BitLabel, pos: int) -> BitLabel:
    return BitLabel(len(label), label.to_uint() ^ (1 << (len(label) - 1 - pos)))


def _flip_detected(
    handle: SchemeHandle,
    inst: WitnessedInstance,
    cliques: Sequence[frozenset],
    labelling: MixedLabelling,
    victim: int,
    corrupted: BitLabel,
) -> bool:
    mu = labelling.vertex_labels
    others = [v for v in inst.g.sorted_vertices() if v != victim]
    if any(corrupted == mu[v] for v in others):
        return True  # injectivity broken
    if any(corrupted == labelling.clique_labels[k] for k in cliques):
        return True
    try:
        if handle.test_adjacency(corrupted, corrupted) != 0:
            return True
        for w in others:
            expect = 1 if inst.g.has_edge(victim, w) else 0
            if handle.test_adjacency(corrupted, mu[w]) != expect:
                return True
            if handle.test_adjacency(mu[w], corrupted) != expect:
                return True
        for k in cliques:
            lk = labelling.clique_labels[k]
            for u in sorted(k):
                kap = labelling.local_ids[(k, u)]
                expect = 1 if u == victim else 0
                if handle.test_identity(lk, kap, corrupted) != expect:
                    return True
    except MalformedLabel:
        return True
    return False


@dataclass
class FaultReport:
    trials: int
    detected: int  # by testers, injectivity, framing, or canonical comparison
    tester_detected: int  # by the (i)/(ii) surface and framing alone
    silent: List[Tuple[int, int]] = field(default_factory=list)  # (vertex, bit)

    @property
    def all_detected(self) -> bool:
        return self.detected == self.trials


def fault_injection(
    handle: SchemeHandle,
    inst: WitnessedInstance,
    cliques: Sequence[frozenset],
    flips: int,
    seed: int,
) -> FaultReport:
    """Flip random single bits of vertex labels; count detected corruptions.

    A flip counts as detected when it breaks frame parsing, label
    injectivity, or some tester outcome against the oracle, or (since the
    labeller is deterministic) when the stored label differs from the
    canonical relabelling.  The last clause always fires, but the
    tester-level count is reported separately: labels carry fields prepared
    for supergraph cliques and potential edges that one particular instance's
    query surface never reads, so tester-only detection cannot be total.
    """
    labelling = handle.label(inst, [frozenset(k) for k in cliques])
    rng = random.Random(seed)
    verts = inst.g.sorted_vertices()
    report = FaultReport(trials=0, detected=0, tester_detected=0)
    if not verts:
        return report
    for _ in range(flips):
        victim = verts[rng.randrange(len(verts))]
        label = labelling.vertex_labels[victim]
        if len(label) == 0:
            continue
        pos = rng.randrange(len(label))
        corrupted = _flip_bit(label, pos)
        report.trials += 1
        by_tester = _flip_detected(handle, inst, cliques, labelling, victim, corrupted)
        if by_tester:
            report.tester_detected += 1
        if by_tester or corrupted != labelling.vertex_labels[victim]:
            report.detected += 1
        else:
            report.silent.append((victim, pos))
    return report
