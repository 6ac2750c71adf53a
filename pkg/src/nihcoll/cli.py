"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage or parameter error.
All randomness flows from ``--seed`` (see ``nihcoll.rng``), so repeated
invocations with the same arguments write byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import bounds, bphp, collision, gadget, proofsim, reduction
from .bphp import LinearSystem
from .rng import derive_seed, make_rng

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6f}"
    return value


def format_csv(rows, fieldnames) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(fieldnames), lineterminator="\r\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(row[k]) for k in fieldnames})
    return buf.getvalue()


def emit_csv(rows, path, fieldnames) -> None:
    """Header plus one line per row; floats are written with six decimals."""
    text = format_csv(rows, fieldnames)
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror}") from exc


def _write(path, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- gadget ---------------------------------------------------------------


def cmd_gadget_verify(args) -> int:
    report = gadget.verify_gadget(args.k)
    sys.stdout.write(_dump_json(report.as_dict()))
    return EXIT_OK if report.property1_ok and report.property2_ok else EXIT_FAIL


def cmd_gadget_dump(args) -> int:
    pair = gadget.gadget_matrices(args.k)
    text = getattr(pair, args.which).dumps()
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- coll -----------------------------------------------------------------


def cmd_coll_run(args) -> int:
    if args.instance:
        inst = collision.CollInstance.from_json(Path(args.instance).read_text())
    else:
        m = args.m if args.m is not None else args.ell**args.k + 1
        inst = collision.random_instance(args.k, m, args.ell, args.seed)
    if args.save_instance:
        _write(args.save_instance, inst.to_json() + "\n")
    run = collision.greedy_protocol(inst)
    rows = []
    for p, msg in enumerate(run.transcript.messages):
        rows.append(
            {
                "round": p + 1,
                "player": msg.player,
                "live_before": run.sizes[p],
                "live_after": run.sizes[p + 1],
                "bits": msg.bits,
            }
        )
    if args.csv:
        emit_csv(rows, args.csv, ["round", "player", "live_before", "live_after", "bits"])
    ok = inst.collides(*run.pair)
    summary = {
        "k": inst.k,
        "m": inst.m,
        "ell": inst.ell,
        "pair": list(run.pair),
        "sizes": list(run.sizes),
        "bits_per_player": run.transcript.bits_per_player,
        "total_bits": run.transcript.total_bits,
        "verified": ok,
    }
    sys.stdout.write(_dump_json(summary))
    return EXIT_OK if ok else EXIT_FAIL


# -- reduce ---------------------------------------------------------------


def cmd_reduce_run(args) -> int:
    if args.trials < 1:
        raise ValueError("--trials must be at least 1")
    records = reduction.run_trials(
        args.k, args.m, args.solver, args.seed, args.trials, inputs=args.inputs, repetitions=args.repetitions
    )
    rows = [
        {
            "trial": r.trial,
            "verdict": "DISJOINT" if r.verdict_disjoint else "NOT-DISJOINT",
            "real_detected": r.real_detected,
            "bits_total": r.bits_total,
        }
        for r in records
    ]
    if args.csv:
        emit_csv(rows, args.csv, ["trial", "verdict", "real_detected", "bits_total"])
    if args.dump_artifact:
        rng = make_rng(derive_seed(args.seed, 0))
        disj = reduction.DisjInstance.random(args.k, args.m ** (args.k - 1), rng, intersecting=True)
        _write(args.dump_artifact, reduction.build_artifact(disj, args.m, rng).to_json() + "\n")

    intersecting = [r for r in records if not r.disjoint_input]
    disjoint = [r for r in records if r.disjoint_input]
    unsound = sum(1 for r in disjoint if not r.verdict_disjoint)
    summary = {
        "k": args.k,
        "m": args.m,
        "solver": args.solver,
        "trials": args.trials,
        "repetitions": args.repetitions,
        "tilde_m": reduction.tilde_rows(args.k, args.m),
        "intersecting_trials": len(intersecting),
        "disjoint_trials": len(disjoint),
        "unsound_verdicts": unsound,
    }
    if intersecting:
        copies = len(intersecting) * args.repetitions
        summary["per_copy_detection"] = round(sum(r.real_detected for r in intersecting) / copies, 6)
        summary["success_frequency"] = round(
            sum(1 for r in intersecting if not r.verdict_disjoint) / len(intersecting), 6
        )
        summary["per_copy_bound"] = round(reduction.PER_COPY_DETECTION, 6)
        summary["success_bound"] = round(reduction.success_bound(args.repetitions), 6)
    if disjoint:
        summary["disjoint_correct_frequency"] = round(1 - unsound / len(disjoint), 6)
    sys.stdout.write(_dump_json(summary))
    return EXIT_FAIL if unsound else EXIT_OK


def cmd_reduce_claims(args) -> int:
    report = reduction.check_claims_exhaustive(args.k, args.m)
    sys.stdout.write(_dump_json(report.as_dict()))
    return EXIT_OK if report.ok else EXIT_FAIL


# -- bphp -----------------------------------------------------------------


def cmd_bphp_gen(args) -> int:
    f = bphp.generate_bphp(args.n, args.m)
    text = bphp.to_dimacs(f)
    if args.dimacs:
        _write(args.dimacs, text)
    if args.ineq:
        _write(args.ineq, _dump_json(bphp.cnf_to_inequalities(f).to_dict()))
    if not args.dimacs and not args.ineq:
        sys.stdout.write(text)
    return EXIT_OK


# -- proof ----------------------------------------------------------------


def cmd_proof_synth(args) -> int:
    proof = proofsim.random_refutation(args.vars, args.leaves, derive_seed(args.seed, 0), shape=args.shape)
    _write(args.out, _dump_json(proof.to_dict()))
    return EXIT_OK


def cmd_proof_convert(args) -> int:
    proof = proofsim.ProofTree.from_json(Path(args.input).read_text())
    try:
        dt = proofsim.proof_to_dt(proof, trust=args.trust)
    except proofsim.UnsoundProof as exc:
        print(f"unsound proof: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _write(args.out, _dump_json(dt.to_dict()))
    if args.system_out:
        _write(args.system_out, _dump_json(proof.system.to_dict()))
    summary = {"size": proof.size, "depth": dt.depth, "depth_bound": proofsim.depth_bound(proof.size)}
    sys.stdout.write(_dump_json(summary))
    return EXIT_OK if dt.depth <= summary["depth_bound"] else EXIT_FAIL


def _parse_bits(text: str, n: int) -> list[int]:
    bits = [int(ch) for ch in text.strip() if ch in "01"]
    if len(bits) != n or len(bits) != len(text.strip()):
        raise ValueError(f"--assignment must be a string of {n} bits")
    return bits


def cmd_proof_run(args) -> int:
    dt = proofsim.ThresholdDecisionTree.from_json(Path(args.dt).read_text())
    system = LinearSystem.from_json(Path(args.system).read_text())
    partition = proofsim.VariablePartition.parse(args.partition, system.num_vars)
    protocol = proofsim.dt_to_protocol(dt, system, partition)
    if args.exhaustive:
        assignments = [list(map(int, x)) for x in bphp.all_assignments(system.num_vars)]
    else:
        assignments = [_parse_bits(args.assignment, system.num_vars)]
    rows = []
    failures = 0
    for x in assignments:
        run = protocol.run(x)
        agrees = run.axiom == proofsim.eval_dt(dt, system, x)
        violated = system.violated(run.axiom, x)
        failures += not (agrees and violated)
        rows.append(
            {
                "assignment": "".join(map(str, x)),
                "axiom": run.axiom,
                "violated": violated,
                "agrees_with_tree": agrees,
                "queries": run.queries,
                "bits": run.transcript.total_bits,
            }
        )
    if args.csv:
        emit_csv(rows, args.csv, ["assignment", "axiom", "violated", "agrees_with_tree", "queries", "bits"])
    if len(rows) == 1:
        summary = dict(rows[0])
    else:
        summary = {
            "assignments": len(rows),
            "failures": failures,
            "max_bits": max(r["bits"] for r in rows),
            "max_queries": max(r["queries"] for r in rows),
        }
    summary["k"] = partition.k
    summary["depth"] = dt.depth
    sys.stdout.write(_dump_json(summary))
    return EXIT_FAIL if failures else EXIT_OK


# -- bounds ---------------------------------------------------------------


def cmd_bounds_table(args) -> int:
    ks = args.k or [2, 3, 4]
    rows = []
    for k in ks:
        est = bounds.lower_bound_estimate(args.n, k)
        upper = bounds.greedy_upper_bound(args.n, k)
        rows.append(
            {
                "n": args.n,
                "k": k,
                "t_lb": est.t_lb,
                "size_exponent": est.size_exponent,
                "corollary_exponent": est.corollary_exponent,
                "greedy_upper_bits": "" if upper is None else upper,
            }
        )
    fields = ["n", "k", "t_lb", "size_exponent", "corollary_exponent", "greedy_upper_bits"]
    if args.csv:
        emit_csv(rows, args.csv, fields)
    else:
        sys.stdout.write(format_csv(rows, fields))
    return EXIT_OK


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nihcoll", description=__doc__.splitlines()[0])
    top = parser.add_subparsers(dest="command", required=True)

    g = top.add_parser("gadget", help="gadget matrices").add_subparsers(dest="action", required=True)
    p = g.add_parser("verify", help="exhaustively check both gadget properties")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_gadget_verify)
    p = g.add_parser("dump", help="print a gadget matrix in text form")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--which", choices=["m0", "m1", "f0", "f1"], required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gadget_dump)

    c = top.add_parser("coll", help="collision finding").add_subparsers(dest="action", required=True)
    p = c.add_parser("run", help="run the round-by-round protocol on a random instance")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--m", type=int, help="coordinates (default ell^k + 1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", help="per-round CSV output")
    p.add_argument("--instance", help="read the instance from JSON instead of sampling")
    p.add_argument("--save-instance", help="write the instance JSON")
    p.set_defaults(func=cmd_coll_run)

    r = top.add_parser("reduce", help="disjointness-to-collision reduction").add_subparsers(
        dest="action", required=True
    )
    p = r.add_parser("run", help="Monte Carlo trials of the disjointness decision")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--solver", choices=sorted(reduction.SOLVERS), default="scan")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--inputs", choices=["intersecting", "disjoint", "random"], default="intersecting")
    p.add_argument("--repetitions", type=int, default=reduction.REPETITIONS)
    p.add_argument("--csv", help="per-trial CSV output")
    p.add_argument("--dump-artifact", help="write one shuffled artifact as JSON")
    p.set_defaults(func=cmd_reduce_run)
    p = r.add_parser("claims", help="exhaustively check both structural claims")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    p.set_defaults(func=cmd_reduce_claims)

    b = top.add_parser("bphp", help="bit pigeonhole formulas").add_subparsers(dest="action", required=True)
    p = b.add_parser("gen", help="generate BPHP^n_m")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--dimacs", help="DIMACS output path")
    p.add_argument("--ineq", help="inequality-system JSON output path")
    p.set_defaults(func=cmd_bphp_gen)

    pr = top.add_parser("proof", help="proofs, decision trees, protocols").add_subparsers(
        dest="action", required=True
    )
    p = pr.add_parser("synth", help="write a random sound tree-like refutation")
    p.add_argument("--vars", type=int, default=6)
    p.add_argument("--leaves", type=int, default=16)
    p.add_argument("--shape", choices=["random", "balanced", "chain"], default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_proof_synth)
    p = pr.add_parser("convert", help="convert a refutation into a threshold decision tree")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--system-out", help="also write the proof's axiom system as JSON")
    p.add_argument("--trust", action="store_true", help="skip the soundness enumeration")
    p.set_defaults(func=cmd_proof_convert)
    p = pr.add_parser("run", help="run a decision tree as a k-party protocol")
    p.add_argument("--dt", required=True)
    p.add_argument("--system", required=True)
    p.add_argument("--partition", default="even:2", help="even:<k>")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--assignment", help="0/1 string, one bit per variable")
    mode.add_argument("--exhaustive", action="store_true")
    p.add_argument("--csv", help="per-assignment CSV output")
    p.set_defaults(func=cmd_proof_run)

    bd = top.add_parser("bounds", help="bound calculators").add_subparsers(dest="action", required=True)
    p = bd.add_parser("table", help="lower-bound formulas and the greedy upper bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, action="append", help="repeatable; default 2 3 4")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_bounds_table)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError, collision.NoMonochromaticSubset) as exc:
        print(f"nihcoll: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
