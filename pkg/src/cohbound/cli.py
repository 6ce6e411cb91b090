"""Command-line interface.

Exit codes: 0 success, 1 a violated audit record was found, 2 invalid input.
"""
import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import bounds as B
from . import harness as H
from .coherence import c_l1, coherence_profile
from .ensembles import paper_example_state
from .errors import CohboundError, InputError, PreconditionError
from .qmatrix import DensityMatrix, StateVector, pure_to_density

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


def max_qubits():
    raw = os.environ.get("COHBOUND_MAX_QUBITS", "10")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"COHBOUND_MAX_QUBITS must be an integer, got {raw!r}")


# state files ----------------------------------------------------------------


def _pair(z):
    return [float(z.real), float(z.imag)]


def state_to_json(state):
    if isinstance(state, StateVector):
        data = [_pair(z) for z in state.amplitudes]
        kind = "pure"
    else:
        data = [[_pair(z) for z in row] for row in state.matrix]
        kind = "density"
    return {"n_qubits": state.n_qubits, "kind": kind, "data": data}


def state_from_json(obj):
    try:
        n = obj["n_qubits"]
        kind = obj["kind"]
        data = obj["data"]
    except (KeyError, TypeError):
        raise InputError("state file needs n_qubits, kind and data")
    if not isinstance(n, int) or n < 1:
        raise InputError(f"n_qubits must be a positive integer, got {n!r}")
    if n > max_qubits():
        raise InputError(f"n_qubits {n} exceeds COHBOUND_MAX_QUBITS={max_qubits()}")
    d = 2**n
    try:
        arr = np.array(data, dtype=np.float64)
    except (TypeError, ValueError):
        raise InputError("data must hold [re, im] number pairs")
    if kind == "pure":
        if arr.shape != (d, 2):
            raise InputError(f"pure state needs {d} [re, im] pairs, got shape {arr.shape}")
        return StateVector(n, arr[:, 0] + 1j * arr[:, 1])
    if kind == "density":
        if arr.shape != (d, d, 2):
            raise InputError(f"density matrix needs {d}x{d} [re, im] pairs, got shape {arr.shape}")
        return DensityMatrix(n, arr[..., 0] + 1j * arr[..., 1])
    raise InputError(f"kind must be 'pure' or 'density', got {kind!r}")


def load_state(path):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}")
    return state_from_json(obj)


def save_state(state, path):
    # repr() of a float is the shortest string that round-trips exactly
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_json(state), fh)
        fh.write("\n")


def _density(state):
    return pure_to_density(state) if isinstance(state, StateVector) else state


# output helpers -------------------------------------------------------------


def _g(v):
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "nan"
    return f"{v:.12g}"


def _tuple(vals):
    return "(" + ", ".join(_g(v) for v in vals) + ")"


def _write_json(obj, dest, out):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if dest in (None, "-"):
        out.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)


def _write_csv(header, rows, dest, out):
    if dest in (None, "-"):
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return
    with open(dest, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _csv_list(text, name):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"{name} must be a comma-separated list of numbers")
    if not vals:
        raise InputError(f"{name} is empty")
    return vals


def _ordering(text):
    if text is None:
        return None
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise InputError("ordering must be comma-separated party numbers")


def _params(args, m=1):
    if args.x is not None and (args.k is not None or args.delta is not None):
        raise InputError("--x is mutually exclusive with --k/--delta")
    if args.x is None and args.k is None:
        raise InputError("one of --x or --k is required")
    return B.BoundParams.make(args.alpha, args.beta, k=args.k, delta=args.delta, x=args.x, m=m)


# commands -------------------------------------------------------------------


def cmd_coherence(args, out):
    state = load_state(args.state)
    profile = coherence_profile(_density(state), _ordering(args.ordering))
    if args.json:
        _write_json(
            {"full": profile.full, "C": list(profile.C), "T": list(profile.T), "ordering": list(profile.ordering)},
            "-",
            out,
        )
        return EXIT_OK
    out.write(f"full = {_g(profile.full)}\n")
    out.write(f"C = {_tuple(profile.C)}\n")
    out.write(f"T = {_tuple(profile.T)}\n")
    out.write(f"ordering = {' '.join(map(str, profile.ordering))}\n")
    return EXIT_OK


def _evaluate(profile, args):
    variant = args.variant or ("thm1" if args.beta == 1 else "thm3")
    n = profile.n
    if variant == "plain_superadditivity":
        return B.plain_superadditivity(profile)
    if n < 3:
        raise InputError(f"{variant} needs at least three parties")
    if variant.startswith(("thm2_", "thm4_")):
        tag, kind = variant.split("_", 1)
        fn = B.thm2_bound if tag == "thm2" else B.thm4_bound
        return fn(profile, _params(args, n - 2), kind)
    ms = [args.m] if args.m is not None else list(range(1, n - 1))
    best = None
    failures = []
    for m in ms:
        try:
            if variant == "eq4":
                bv = B.prior_bound_eq4(profile, args.alpha, m)
            elif variant == "eq5":
                k = args.k if args.k is not None else args.x
                if k is None:
                    raise InputError("eq5 needs --k (or --x)")
                bv = B.prior_bound_eq5(profile, args.alpha, k, m, hypotheses=args.hypotheses)
            elif variant == "thm1":
                bv = B.thm1_bound(profile, _params(args, m), args.hypotheses)
            elif variant == "thm3":
                bv = B.thm3_bound(profile, _params(args, m), args.hypotheses)
            else:
                raise InputError(f"unknown variant {variant!r}")
        except PreconditionError as exc:
            failures.append(exc)
            continue
        if best is None or bv.value > best.value:
            best = bv
    if best is None:
        raise failures[0]
    return best


def cmd_bound(args, out):
    profile = coherence_profile(_density(load_state(args.state)))
    try:
        bv = _evaluate(profile, args)
    except PreconditionError as exc:
        sys.stderr.write(f"infeasible: {exc}\n")
        if args.variant in (None, "thm1", "thm3", "eq5") and profile.n >= 3:
            beta = args.beta if args.variant in (None, "thm3") else 1.0
            for m, iv in enumerate(B.partition_and_feasibility(profile, beta, args.hypotheses), start=1):
                sys.stderr.write(f"  m={m}: lo={_g(iv.lo)} hi={_g(iv.upper)} feasible={iv.feasible}\n")
        return EXIT_INPUT
    out.write(f"{bv.variant} = {_g(bv.value)}\n")
    if bv.params is not None:
        p = bv.params
        out.write(
            f"alpha={_g(p.alpha)} beta={_g(p.beta)} k={_g(p.k)} delta={_g(p.delta)} x={_g(p.x)} m={p.m}\n"
        )
    return EXIT_OK


def cmd_optimize(args, out):
    profile = coherence_profile(_density(load_state(args.state)))
    if profile.n < 3:
        raise InputError("optimize needs at least three parties")
    res = B.optimize_bound(profile, args.alpha, args.beta, args.hypotheses)
    for m, iv in enumerate(res.intervals, start=1):
        out.write(f"m={m}: lo={_g(iv.lo)} hi={_g(iv.upper)} feasible={iv.feasible}\n")
    if not res.feasible:
        out.write("infeasible: no (m, x) satisfies the conditions\n")
        return EXIT_OK
    out.write(f"{res.best.variant} = {_g(res.best.value)}\n")
    out.write(f"m={res.m} x={_g(res.x)}\n")
    return EXIT_OK


def cmd_audit(args, out):
    state = load_state(args.state)
    profile = coherence_profile(_density(state), _ordering(args.ordering))
    params = _params(args)
    if profile.n >= 3 and args.m is not None and not 1 <= args.m <= profile.n - 2:
        raise InputError(f"--m must lie in [1, {profile.n - 2}]")
    records, chains = H.audit_profile(
        profile, os.path.basename(args.state), params, m=args.m, hypotheses=args.hypotheses
    )
    out.write(f"state = {args.state}\n")
    out.write(f"full = {_g(profile.full)}  C = {_tuple(profile.C)}  T = {_tuple(profile.T)}\n")
    for label, links in chains.items():
        out.write(f"chain {label}:\n")
        for link in links:
            out.write(
                f"  step {link.step} {link.stage}: lhs={_g(link.lhs)} rhs={_g(link.rhs)} "
                f"residual={_g(link.residual)} (superadditivity {_g(link.superadditivity_slack)}, "
                f"lemma {_g(link.lemma_slack)})\n"
            )
    out.write("bounds:\n")
    for r in records:
        note = f" [{r.finding}]" if r.finding else ""
        out.write(
            f"  {r.variant:<24} m={r.m} x={_g(r.x)} claimed={_g(r.claimed)} "
            f"actual={_g(r.actual)} residual={_g(r.residual)} verdict={r.verdict}{note}\n"
        )
    if args.csv:
        _write_csv(H.CSV_COLUMNS, [r.csv_row() for r in records], args.csv, out)
    return EXIT_VIOLATION if any(r.verdict == "violated" for r in records) else EXIT_OK


def cmd_fig1(args, out):
    rows = H.fig1_sweep(args.alpha_min, args.alpha_max, args.step)
    _write_csv(H.SWEEP_COLUMNS, [r.csv_row() for r in rows], args.out, out)
    return EXIT_OK


def cmd_verify(args, out):
    if not 1 <= args.n <= max_qubits():
        raise InputError(f"--n must lie in [1, {max_qubits()}] (COHBOUND_MAX_QUBITS)")
    if args.samples < 0:
        raise InputError("--samples must be nonnegative")
    ensemble = H.EnsembleSpec(args.ensemble, args.seed, args.rank)
    alphas = _csv_list(args.alphas, "--alphas")
    betas = _csv_list(args.betas, "--betas")
    if min(alphas) < 1 or min(betas) < 1:
        raise InputError("alphas and betas must be >= 1")
    result = {
        "config": {
            "ensemble": args.ensemble,
            "rank": args.rank,
            "n": args.n,
            "samples": args.samples,
            "seed": args.seed,
            "alphas": alphas,
            "betas": betas,
            "all_orderings": args.all_orderings,
            "hypotheses": args.hypotheses,
        }
    }
    records = []
    if args.campaign in ("all", "superadditivity"):
        sa = H.verify_superadditivity(ensemble, args.n, args.samples, args.workers)
        result["superadditivity"] = sa.report.to_dict()
        records.extend(sa.records)
    if args.campaign in ("all", "theorems") and args.n >= 3:
        th = H.verify_theorems(
            ensemble, args.n, args.samples, alphas, betas, args.all_orderings, args.hypotheses, args.workers
        )
        result["theorems"] = th.report.to_dict()
        records.extend(th.records)
    if args.campaign in ("all", "tightness") and args.n >= 3:
        tt = H.tightness_compare(ensemble, args.n, args.samples, alphas, hypotheses=args.hypotheses)
        result["tightness"] = tt.to_dict()
    _write_json(result, args.json, out)
    if args.csv:
        _write_csv(H.CSV_COLUMNS, [r.csv_row() for r in records], args.csv, out)
    return EXIT_VIOLATION if any(r.verdict == "violated" for r in records) else EXIT_OK


def cmd_example(args, out):
    save_state(paper_example_state(), args.out)
    out.write(f"wrote {args.out}\n")
    return EXIT_OK


# parser ---------------------------------------------------------------------


def _bound_flags(p):
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--k", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--x", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--hypotheses", choices=B.HYPOTHESES, default=B.PRINTED)


def build_parser():
    parser = argparse.ArgumentParser(prog="cohbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coherence", help="l1-norm coherence and profile of a state file")
    p.add_argument("state")
    p.add_argument("--ordering")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_coherence)

    p = sub.add_parser("bound", help="evaluate one bound variant")
    p.add_argument("state")
    _bound_flags(p)
    p.add_argument("--variant", choices=B.VARIANTS)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("optimize", help="best partition bound over (m, x)")
    p.add_argument("state")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--hypotheses", choices=B.HYPOTHESES, default=B.PRINTED)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("audit", help="chain residuals and every bound variant with verdicts")
    p.add_argument("state")
    _bound_flags(p)
    p.add_argument("--ordering")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("fig1", help="alpha sweep of the three-qubit comparison curves (CSV)")
    p.add_argument("--alpha-min", type=float, default=1.0)
    p.add_argument("--alpha-max", type=float, default=3.0)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("verify", help="randomized verification campaign")
    p.add_argument("--ensemble", choices=H.ENSEMBLES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rank", type=int, help="Ginibre rank (default: full)")
    p.add_argument("--alphas", default="1,1.5,2,3")
    p.add_argument("--betas", default="1")
    p.add_argument("--all-orderings", action="store_true")
    p.add_argument("--hypotheses", choices=B.HYPOTHESES, default=B.PRINTED)
    p.add_argument("--campaign", choices=("all", "superadditivity", "theorems", "tightness"), default="all")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", default="-", help="report destination (default stdout)")
    p.add_argument("--csv", help="audit record CSV destination")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("example", help="write the three-qubit example state")
    p.add_argument("out")
    p.set_defaults(func=cmd_example)
    return parser


def run(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (CohboundError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


def main():
    sys.exit(run())
