"""Command-line interface: gen, recover, bench, sweep, phase.

Exit codes: 0 success, 2 configuration/usage error, 3 numerical failure of
a requested single recovery.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from .cosamp import alg_l2l1, cosamp_c
from .gbp import alg_gbp
from .greedy import omp_c, omp_hd, omp_ihd
from .heatmap import render_phase_svg
from .lp import LpSolveError, bp_classic
from .matio import read_bundle, write_bundle
from .model import Problem, RankDeficientError, densify, lift, lift_instance

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hdsparse",
                                description="Sparse recovery algorithms and benchmarks")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a seeded problem bundle")
    g.add_argument("outdir")
    g.add_argument("--n", type=int, required=True, help="rows of Q")
    g.add_argument("--l", type=int, required=True, help="columns of Q")
    g.add_argument("--kappa", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--coeff-dist", choices=("normal", "uniform"), default="normal")

    r = sub.add_parser("recover", help="run one algorithm on a problem bundle")
    r.add_argument("bundle")
    r.add_argument("--alg", required=True, choices=bench_mod.ALGORITHM_IDS)
    r.add_argument("--lambda", dest="lam", type=int, default=2,
                   help="candidates per iteration (alg_l2l1)")
    r.add_argument("--n-ite", type=int, default=None, help="iteration cap (alg_l2l1)")
    r.add_argument("--warm-start", action="store_true",
                   help="start alg_gbp from the l1-minimal point")
    r.add_argument("--kappa", type=int, default=None, help="override bundle kappa")

    for name, descr in (("bench", "run a benchmark suite"),
                        ("sweep", "run suites over a kappa grid"),
                        ("phase", "run a (kappa/N, N) phase grid")):
        q = sub.add_parser(name, help=descr)
        q.add_argument("--config", required=True, help="JSON config file")
        q.add_argument("--out", required=True, help="output directory")
        q.add_argument("--workers", type=int, default=1)
    return p


def _load_config(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ValueError(f"config file not found: {path}") from None
    except json.JSONDecodeError as err:
        raise ValueError(f"config file {path} is not valid JSON: {err}") from None


def _cmd_gen(args) -> int:
    prob, s_true = bench_mod.gen_problem(args.n, args.l, args.kappa, seed=args.seed,
                                         coeff_dist=args.coeff_dist)
    meta = {"N": args.n, "L": args.l, "kappa": args.kappa, "seed": args.seed,
            "coeff_dist": args.coeff_dist}
    write_bundle(args.outdir, prob.Q, prob.x, meta, s_true=s_true)
    print(json.dumps({"written": str(Path(args.outdir)), **meta}))
    return EXIT_OK


def _cmd_recover(args) -> int:
    Q, x, s_true, meta = read_bundle(args.bundle)
    kappa = args.kappa if args.kappa is not None else int(meta.get("kappa", 0))
    if kappa < 1:
        raise ValueError("kappa must be >= 1 (from meta.json or --kappa)")
    prob = Problem(Q=Q, x=x, kappa=kappa)
    t0 = time.perf_counter()
    extras = {}
    if args.alg in ("omp_hd", "omp_ihd", "alg_gbp", "alg_l2l1"):
        system = lift(prob.Q)
        instance = lift_instance(system, prob.x)
        if args.alg == "omp_hd":
            est = omp_hd(system, instance, kappa)
            iters = len(est)
        elif args.alg == "omp_ihd":
            est = omp_ihd(system, instance, kappa)
            iters = len(est)
        elif args.alg == "alg_gbp":
            est, trace = alg_gbp(system, instance, kappa, warm_start=args.warm_start)
            iters = len(trace.records)
            extras["trace"] = trace.to_json()
            if trace.status == "failed_numerical":
                print(json.dumps({"algorithm": args.alg, "error": "LP numerical failure",
                                  **extras}), file=sys.stderr)
                return EXIT_NUMERICAL
        else:
            est, iters = alg_l2l1(system, instance, kappa, lam=args.lam, n_ite=args.n_ite)
    elif args.alg == "omp_c":
        est = omp_c(prob)
        iters = len(est)
    elif args.alg == "bp_c":
        est = bp_classic(prob)
        iters = len(est)
    else:
        est, iters = cosamp_c(prob, return_iterations=True)
    elapsed = time.perf_counter() - t0
    out = {"algorithm": args.alg, "kappa": kappa,
           "support": list(est.support),
           "coeffs": [float(c) for c in est.coeffs],
           "iterations": int(iters), "elapsed_s": elapsed, **extras}
    if s_true is not None:
        val = bench_mod.snr_db(Q, s_true, densify(est, prob.L))
        out["snr_db"] = val if np.isfinite(val) else repr(val)
        out["success"] = bench_mod.judge(s_true, est, Q)
    print(json.dumps(out))
    return EXIT_OK


def _cmd_bench(args) -> int:
    cfg = bench_mod.SuiteConfig.from_dict(_load_config(args.config))
    report = bench_mod.run_suite(cfg, workers=args.workers)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "report.csv").write_text(report.csv_text())
    (outdir / "report.json").write_text(
        json.dumps(report.json_dict(), indent=2) + "\n")
    print(report.csv_text(), end="")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = bench_mod.SweepConfig.from_dict(_load_config(args.config))
    report = bench_mod.run_sweep(cfg, workers=args.workers)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "sweep.csv").write_text(report.csv_text())
    (outdir / "sweep.json").write_text(json.dumps(report.json_dict(), indent=2) + "\n")
    print(report.csv_text(), end="")
    return EXIT_OK


def _cmd_phase(args) -> int:
    cfg = bench_mod.PhaseConfig.from_dict(_load_config(args.config))
    report = bench_mod.run_phase(cfg, workers=args.workers)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for spec in cfg.algorithms:
        (outdir / f"phase_{spec.label}.csv").write_text(report.csv_text(spec.label))
    svg = render_phase_svg(report.matrices, cfg.ratio_grid, cfg.n_grid)
    (outdir / "phase.svg").write_text(svg)
    (outdir / "phase.json").write_text(json.dumps(report.json_dict(), indent=2) + "\n")
    print(f"wrote {len(cfg.algorithms)} csv files + phase.svg to {outdir}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        # argparse exits 2 on usage errors already; normalize other codes
        return EXIT_CONFIG if err.code not in (0, None) else 0
    handlers = {"gen": _cmd_gen, "recover": _cmd_recover, "bench": _cmd_bench,
                "sweep": _cmd_sweep, "phase": _cmd_phase}
    try:
        return handlers[args.command](args)
    # RankDeficientError subclasses ValueError: numerical routing must come first
    except (RankDeficientError, LpSolveError, np.linalg.LinAlgError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, KeyError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
