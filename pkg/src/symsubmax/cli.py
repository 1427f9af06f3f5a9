"""Command-line surface: solve / exact / verify / bench / tight-example.

Reports are JSON with sorted keys so reruns of deterministic commands are
byte-identical; wall-clock timing is therefore opt-in (--timing) for solve
and exact. Exit codes: 0 ok, 1 input error, 2 infeasible solver output
(signals a bug), 3 validation violations found.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time

from . import algorithms, constraints, exact, generators, oracle as oracle_mod

ALGORITHMS = {
    "greedy-card",
    "sample-greedy-card",
    "greedy-matroid",
    "mw-packing",
    "knapsack-enum",
}


class UsageError(Exception):
    pass


def _hash_file(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _write_report(report, out):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(instance_path, constraint_path):
    orc = oracle_mod.load_instance(instance_path)
    cons = constraints.load_constraint(constraint_path, n=orc.n)
    return orc, cons


def _run_solver(orc, cons, args):
    algo = args.algorithm
    if algo == "greedy-card":
        if not isinstance(cons, constraints.CardinalityConstraint):
            raise UsageError("greedy-card requires a cardinality constraint")
        return algorithms.greedy_cardinality(orc, cons.k)
    if algo == "sample-greedy-card":
        if not isinstance(cons, constraints.CardinalityConstraint):
            raise UsageError("sample-greedy-card requires a cardinality constraint")
        if args.epsilon is None:
            raise UsageError("sample-greedy-card requires --epsilon")
        return algorithms.sample_greedy_cardinality(
            orc, cons.k, args.epsilon, seed=args.seed
        )
    if algo == "greedy-matroid":
        if not isinstance(cons, constraints.Matroid):
            raise UsageError("greedy-matroid requires a matroid constraint")
        if args.epsilon is None:
            raise UsageError("greedy-matroid requires --epsilon")
        return algorithms.greedy_matroid(orc, cons, args.epsilon)
    if algo == "mw-packing":
        if isinstance(cons, constraints.KnapsackConstraint):
            packing, allowed = cons.to_packing()
            if args.epsilon is None:
                raise UsageError("mw-packing requires --epsilon")
            return algorithms.mw_packing(
                orc,
                packing,
                args.epsilon,
                lambda_override=args.lambda_override,
                allowed=allowed,
            )
        if not isinstance(cons, constraints.PackingConstraint):
            raise UsageError("mw-packing requires a packing or knapsack constraint")
        if args.epsilon is None:
            raise UsageError("mw-packing requires --epsilon")
        return algorithms.mw_packing(
            orc, packing=cons, epsilon=args.epsilon, lambda_override=args.lambda_override
        )
    if algo == "knapsack-enum":
        if not isinstance(cons, constraints.KnapsackConstraint):
            raise UsageError("knapsack-enum requires a knapsack constraint")
        eps = args.epsilon if args.epsilon is not None else 0.1
        return algorithms.knapsack_enum(orc, cons, epsilon=eps)
    raise UsageError(f"unknown algorithm {algo!r}")


def cmd_solve(args):
    orc, cons = _load(args.instance, args.constraint)
    t0 = time.perf_counter()
    trace = _run_solver(orc, cons, args)
    elapsed_ms = (time.perf_counter() - t0) * 1000.0
    feasible = cons.is_feasible(trace.final_set)
    report = {
        "command": "solve",
        "instance": args.instance,
        "instance_sha256": _hash_file(args.instance),
        "constraint": constraints.constraint_to_dict(cons),
        "algorithm": args.algorithm,
        "feasible": feasible,
    }
    report.update(trace.to_dict(include_rounds=args.trace))
    if args.lambda_override is not None:
        report["lambda_override"] = args.lambda_override
    if args.exact:
        res = exact.brute_force_opt(orc, cons)
        rat = exact.ratio(trace, res)
        report["opt_value"] = res.opt_value
        report["opt_witness"] = list(res.witness)
        report["ratio"] = "vacuous" if rat == exact.VACUOUS else rat
    if args.timing:
        report["duration_ms"] = elapsed_ms
    _write_report(report, args.out)
    return 0 if feasible else 2


def cmd_exact(args):
    orc, cons = _load(args.instance, args.constraint)
    res = exact.brute_force_opt(orc, cons)
    report = {
        "command": "exact",
        "instance": args.instance,
        "instance_sha256": _hash_file(args.instance),
        "constraint": constraints.constraint_to_dict(cons),
        "opt_value": res.opt_value,
        "witness": list(res.witness),
        "sets_enumerated": res.sets_enumerated,
    }
    _write_report(report, args.out)
    return 0


def cmd_verify(args):
    orc = oracle_mod.load_instance(args.instance)
    if args.exhaustive:
        rep = oracle_mod.validate(orc, mode="exhaustive")
    else:
        rep = oracle_mod.validate(orc, mode="sampled", trials=args.trials, seed=args.seed)
    report = {
        "command": "verify",
        "instance": args.instance,
        "instance_sha256": _hash_file(args.instance),
        **rep.to_dict(),
    }
    _write_report(report, args.out)
    return 0 if rep.valid else 3


def cmd_tight_example(args):
    te = generators.tight_example(args.k)
    sidecar = {
        "optimal_value": te.optimal_value,
        "witness": list(te.optimal_ids),
        "certified_by": te.certified_by,
        "k": te.k,
        "c": te.c,
        "greedy_value": te.greedy_value,
    }
    generators.write_instance_with_sidecar(te.graph, args.out, sidecar)
    return 0


def _bench_row(entry):
    ns = argparse.Namespace(
        algorithm=entry["algorithm"],
        epsilon=entry.get("epsilon"),
        seed=entry.get("seed", 0),
        lambda_override=entry.get("lambda_override"),
    )
    orc, cons = _load(entry["instance"], entry["constraint"])
    t0 = time.perf_counter()
    trace = _run_solver(orc, cons, ns)
    millis = (time.perf_counter() - t0) * 1000.0
    k = getattr(cons, "k", getattr(cons, "rank", ""))
    opt_s, ratio_s = "", ""
    if entry.get("exact"):
        res = exact.brute_force_opt(orc, cons)
        opt_s = f"{res.opt_value:.12g}"
        rat = exact.ratio(trace, res)
        ratio_s = "vacuous" if rat == exact.VACUOUS else f"{rat:.12g}"
    return [
        entry["instance"],
        entry["algorithm"],
        orc.n,
        k,
        f"{trace.final_value:.12g}",
        opt_s,
        ratio_s,
        trace.total_queries,
        f"{millis:.3f}",
    ]


def cmd_bench(args):
    try:
        with open(args.manifest, "r", encoding="utf-8") as fh:
            manifest = json.load(fh)
        if not isinstance(manifest, list):
            raise ValueError("manifest must be a list of run entries")
    except (OSError, ValueError) as exc:
        print(f"error: bad manifest: {exc}", file=sys.stderr)
        return 1
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["instance", "algorithm", "n", "k", "value", "opt", "ratio", "queries", "millis"]
    )
    for entry in manifest:
        writer.writerow(_bench_row(entry))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="symsubmax",
        description="Solvers and exact baselines for symmetric submodular maximization.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="run a solver on an instance/constraint pair")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--constraint", required=True)
    sp.add_argument("--algorithm", required=True, choices=sorted(ALGORITHMS))
    sp.add_argument("--epsilon", type=float)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trace", action="store_true", help="include per-round trace")
    sp.add_argument("--exact", action="store_true", help="attach brute-force optimum")
    sp.add_argument("--timing", action="store_true", help="include wall-clock duration")
    sp.add_argument("--lambda-override", type=float, dest="lambda_override")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_solve)

    ep = sub.add_parser("exact", help="brute-force optimum (n <= 24)")
    ep.add_argument("--instance", required=True)
    ep.add_argument("--constraint", required=True)
    ep.add_argument("--out")
    ep.set_defaults(func=cmd_exact)

    vp = sub.add_parser("verify", help="validate oracle symmetry/submodularity")
    vp.add_argument("--instance", required=True)
    vp.add_argument("--exhaustive", action="store_true")
    vp.add_argument("--trials", type=int, default=1000)
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--out")
    vp.set_defaults(func=cmd_verify)

    bp = sub.add_parser("bench", help="run a manifest of tuples, emit CSV")
    bp.add_argument("--manifest", required=True)
    bp.add_argument("--out")
    bp.set_defaults(func=cmd_bench)

    tp = sub.add_parser("tight-example", help="emit the worst-case greedy instance")
    tp.add_argument("--k", type=int, required=True)
    tp.add_argument("--out", required=True)
    tp.set_defaults(func=cmd_tight_example)

    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        UsageError,
        oracle_mod.OracleError,
        constraints.ConstraintError,
        algorithms.ParameterError,
        generators.GeneratorError,
        exact.InstanceTooLargeError,
        OSError,
        json.JSONDecodeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
