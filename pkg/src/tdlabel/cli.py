"""Command-line interface: generate, label, verify, bench, selftest.

Exit codes: 0 success/pass, 1 verification failure, 2 input or format error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Dict, List, Optional, Tuple

from .bits import BitLabel
from .config import DEFAULT, BudgetConfig
from .mls import MixedLabelling, WitnessedInstance
from .harness.bench import bench_sweep, to_csv, trend_fit
from .harness.corpus import (
    CORPUS,
    SCHEMES,
    generate,
    instance_from_json,
    instance_to_json,
    make_handle,
)
from .harness.verify import fault_injection, verify_instance


def _clique_key(k) -> str:
    return ",".join(str(v) for v in sorted(k))


def labelling_to_json(scheme: str, n: int, labelling: MixedLabelling, budget: dict) -> dict:
    return {
        "scheme": scheme,
        "n": n,
        "vertex_labels": {str(v): b.to_json() for v, b in sorted(labelling.vertex_labels.items())},
        "clique_labels": {_clique_key(k): b.to_json() for k, b in labelling.clique_labels.items()},
        "local_ids": {
            "%s|%d" % (_clique_key(k), u): b.to_json()
            for (k, u), b in labelling.local_ids.items()
        },
        "budget": budget,
    }


def labelling_from_json(obj: dict) -> MixedLabelling:
    def parse_clique(s: str):
        return frozenset(int(v) for v in s.split(",") if s)

    mu = {int(v): BitLabel.from_json(b) for v, b in obj["vertex_labels"].items()}
    ck = {parse_clique(s): BitLabel.from_json(b) for s, b in obj["clique_labels"].items()}
    kap = {}
    for key, b in obj["local_ids"].items():
        cl, u = key.split("|")
        kap[(parse_clique(cl), int(u))] = BitLabel.from_json(b)
    return MixedLabelling(mu, ck, kap)


def _load_config(path: Optional[str]) -> BudgetConfig:
    return BudgetConfig.load(path) if path else DEFAULT


def _load_instance(path: str) -> Tuple[dict, WitnessedInstance, List[frozenset]]:
    with open(path) as fh:
        obj = json.load(fh)
    inst, cliques = instance_from_json(obj)
    return obj, inst, cliques


def cmd_gen(args) -> int:
    params: Dict = {"n": args.n}
    if args.k is not None:
        params["k" if args.scheme in ("product", "apex", "union") else "k_adh"] = args.k
    if args.weights:
        params["weights"] = args.weights
    inst, cliques = generate(args.scheme, params, args.seed)
    obj = instance_to_json(inst, cliques)
    obj["scheme"] = args.scheme
    obj["params"] = params
    blob = json.dumps(obj, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(blob)
    else:
        print(blob)
    return 0


def cmd_label(args) -> int:
    cfg = _load_config(args.budget_config)
    obj, inst, cliques = _load_instance(args.infile)
    handle = make_handle(obj["scheme"], obj.get("params", {}), cfg)
    labelling = handle.label(inst, cliques)
    report = verify_instance(handle, inst, cliques, labelling=labelling)
    dump = labelling_to_json(obj["scheme"], inst.n, labelling, report["budget"])
    blob = json.dumps(dump, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(blob)
    else:
        print(blob)
    return 0


def cmd_verify(args) -> int:
    cfg = _load_config(args.budget_config)
    obj, inst, cliques = _load_instance(args.infile)
    handle = make_handle(obj["scheme"], obj.get("params", {}), cfg)
    labelling = None
    if args.labels:
        with open(args.labels) as fh:
            labelling = labelling_from_json(json.load(fh))
    report = verify_instance(handle, inst, cliques, labelling=labelling)
    if args.fault_bits:
        fr = fault_injection(handle, inst, cliques, args.fault_bits, args.seed)
        report["fault_trials"] = fr.trials
        report["fault_detected"] = fr.detected
        report["pass"] = report["pass"] and fr.all_detected
    out = json.dumps(report, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        print(out)
    return 0 if report["pass"] else 1


def cmd_bench(args) -> int:
    cfg = _load_config(args.budget_config)
    n_list = [int(x) for x in args.n_list.split(",")]
    rows = bench_sweep(
        args.scheme,
        n_list,
        args.reps,
        args.seed,
        cfg,
        weights=args.weights or "unit",
        timings=not args.no_timings,
    )
    csv = to_csv(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv)
    else:
        sys.stdout.write(csv)
    fit = trend_fit(rows)
    sys.stderr.write(
        "slack / (log2 n)^0.75: %s\n"
        % ", ".join("n=%d: %.2f" % (n, v) for n, v in fit.items())
    )
    return 0


def cmd_selftest(args) -> int:
    cfg = _load_config(args.budget_config)
    failures = 0
    for entry in CORPUS:
        if entry.params.get("n", 0) > args.max_n:
            continue
        inst, cliques = entry.build()
        handle = entry.handle(cfg)
        report = verify_instance(handle, inst, cliques)
        status = "pass" if report["pass"] else "FAIL"
        print("%-24s %-12s n=%-5d %s" % (entry.name, entry.scheme, inst.n, status))
        if not report["pass"]:
            failures += 1
            for f in report["failures"][:3]:
                print("    " + f)
    return 0 if failures == 0 else 1


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="tdlabel")
    parser.add_argument("--budget-config", help="JSON file overriding budget constants")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a witnessed instance")
    p.add_argument("--scheme", choices=SCHEMES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--weights", choices=["random", "unit"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("label", help="label an instance file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("verify", help="verify an instance (optionally stored labels)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--labels")
    p.add_argument("--fault-bits", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="label-length sweep, CSV output")
    p.add_argument("--scheme", choices=SCHEMES, required=True)
    p.add_argument("--n-list", required=True, help="comma-separated ascending sizes")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weights", choices=["random", "unit"])
    p.add_argument("--no-timings", action="store_true", help="zero the ms column")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("selftest", help="verify the built-in corpus")
    p.add_argument("--max-n", type=int, default=400)
    p.set_defaults(func=cmd_selftest)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
