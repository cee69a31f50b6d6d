"""Label-length benchmarking across scales, with a fixed CSV schema.

Wall time is measured per labelling run; pass ``timings=False`` to zero the
ms column when byte-identical CSV output across reruns matters more than the
timing data.
"""

from __future__ import annotations

import io
import math
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from ..config import DEFAULT, BudgetConfig
from ..mls import budget_report
from .corpus import generate, make_handle

CSV_HEADER = "scheme,n,seed,max_vlabel,mean_vlabel,max_klabel,max_kappa,slack_bits,ms"


@dataclass
class BenchRecord:
    scheme: str
    n: int
    seed: int
    max_vlabel: int
    mean_vlabel: float
    max_klabel: int
    max_kappa: int
    slack_bits: float
    ms: int

    def csv_row(self) -> str:
        return "%s,%d,%d,%d,%.3f,%d,%d,%.9f,%d" % (
            self.scheme,
            self.n,
            self.seed,
            self.max_vlabel,
            self.mean_vlabel,
            self.max_klabel,
            self.max_kappa,
            self.slack_bits,
            self.ms,
        )


def bench_instance(
    scheme: str,
    params: Dict,
    seed: int,
    cfg: BudgetConfig = DEFAULT,
    timings: bool = True,
) -> BenchRecord:
    inst, cliques = generate(scheme, params, seed)
    handle = make_handle(scheme, params, cfg)
    t0 = time.perf_counter()
    labelling = handle.label(inst, cliques)
    elapsed = int(round((time.perf_counter() - t0) * 1000)) if timings else 0
    report = budget_report(inst, labelling, [frozenset(k) for k in cliques])
    sizes = [len(b) for b in labelling.clique_labels.values()]
    return BenchRecord(
        scheme=scheme,
        n=inst.n,
        seed=seed,
        max_vlabel=report.max_vertex_bits,
        mean_vlabel=report.mean_vertex_bits,
        max_klabel=max(sizes, default=0),
        max_kappa=report.max_kappa_bits,
        slack_bits=report.max_vertex_slack,
        ms=elapsed,
    )


def bench_sweep(
    scheme: str,
    n_list: Sequence[int],
    reps: int,
    seed: int,
    cfg: BudgetConfig = DEFAULT,
    weights: str = "unit",
    timings: bool = True,
    params: Optional[Dict] = None,
) -> List[BenchRecord]:
    if list(n_list) != sorted(n_list):
        raise ValueError("n list must be ascending")
    rows = []
    for n in n_list:
        for rep in range(reps):
            p = dict(params or {})
            p["n"] = n
            p["weights"] = weights
            rows.append(bench_instance(scheme, p, seed + 1000 * rep + n, cfg, timings))
    return rows


def to_csv(rows: Sequence[BenchRecord]) -> str:
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for r in rows:
        out.write(r.csv_row() + "\n")
    return out.getvalue()


def trend_fit(rows: Sequence[BenchRecord]) -> Dict[int, float]:
    """Per scale: worst slack divided by (log2 n) ** (3/4)."""
    worst: Dict[int, float] = {}
    for r in rows:
        key = r.n
        val = r.slack_bits / (math.log2(max(2, r.n)) ** 0.75)
        worst[key] = max(worst.get(key, 0.0), val)
    return dict(sorted(worst.items()))


def slack_ratio_by_scale(rows: Sequence[BenchRecord]) -> Dict[int, float]:
    """Per scale: worst slack divided by log2 n."""
    worst: Dict[int, float] = {}
    for r in rows:
        val = r.slack_bits / math.log2(max(2, r.n))
        worst[r.n] = max(worst.get(r.n, 0.0), val)
    return dict(sorted(worst.items()))
