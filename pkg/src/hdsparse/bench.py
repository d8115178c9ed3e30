"""Seeded Monte-Carlo benchmarking: suites, sparsity sweeps, phase grids.

Every sample j of a suite draws its own counter-based generator from the
entropy tuple (master_seed, N, L, kappa, j), so reports are reproducible
bit for bit regardless of how samples are scheduled across workers, and
every algorithm in a suite consumes the identical problem stream.  Wall
times are measured per algorithm call and kept out of the CSV outputs
(JSON carries them) so CSV files are byte-identical across runs.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .cosamp import alg_l2l1, cosamp_c
from .gbp import alg_gbp
from .greedy import omp_c, omp_hd, omp_ihd
from .lp import bp_classic
from .model import (
    Problem,
    SparseEstimate,
    densify,
    lift,
    lift_instance,
    normalize_columns,
    top_indices,
)

__all__ = [
    "ALGORITHM_IDS",
    "AlgorithmSpec",
    "SuiteConfig",
    "SweepConfig",
    "PhaseConfig",
    "TrialRecord",
    "AlgorithmStats",
    "SuiteReport",
    "SweepReport",
    "PhaseReport",
    "gen_problem",
    "suite_sample",
    "snr_db",
    "judge",
    "run_suite",
    "run_sweep",
    "run_phase",
]

ALGORITHM_IDS = ("omp_c", "bp_c", "omp_hd", "omp_ihd", "alg_gbp", "cosamp_c", "alg_l2l1")

SNR_EXACT_RTOL = 1e-15


@dataclass(frozen=True)
class AlgorithmSpec:
    """One algorithm entry of a suite; lam/n_ite apply to alg_l2l1 only."""

    id: str
    lam: int = 2
    n_ite: int = None
    warm_start: bool = False

    def __post_init__(self):
        if self.id not in ALGORITHM_IDS:
            raise ValueError(f"unknown algorithm id {self.id!r}; choose from {ALGORITHM_IDS}")
        if self.lam < 1:
            raise ValueError("lambda must be >= 1")
        if self.n_ite is not None and self.n_ite < 1:
            raise ValueError("n_ite must be >= 1")

    @property
    def label(self) -> str:
        out = self.id
        if self.id == "alg_l2l1":
            out += f"_lam{self.lam}"
            if self.n_ite is not None:
                out += f"_nite{self.n_ite}"
        if self.id == "alg_gbp" and self.warm_start:
            out += "_ws"
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "AlgorithmSpec":
        if "id" not in d:
            raise ValueError("algorithm entry needs an 'id' field")
        known = {"id", "lambda", "lam", "n_ite", "warm_start"}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown algorithm fields: {sorted(extra)}")
        return cls(id=d["id"], lam=int(d.get("lambda", d.get("lam", 2))),
                   n_ite=d.get("n_ite"), warm_start=bool(d.get("warm_start", False)))


def _parse_algorithms(entries) -> tuple:
    if not entries:
        raise ValueError("at least one algorithm is required")
    specs = tuple(
        e if isinstance(e, AlgorithmSpec)
        else AlgorithmSpec.from_dict(e) if isinstance(e, dict)
        else AlgorithmSpec(id=str(e))
        for e in entries
    )
    labels = [s.label for s in specs]
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate algorithm entries: {labels}")
    return specs


def _check_common(J, master_seed, coeff_dist):
    if J < 1:
        raise ValueError("J must be >= 1")
    if not 0 <= int(master_seed) < 2 ** 64:
        raise ValueError("master_seed must be a 64-bit unsigned integer")
    if coeff_dist not in ("normal", "uniform"):
        raise ValueError("coeff_dist must be 'normal' or 'uniform'")


@dataclass(frozen=True)
class SuiteConfig:
    kappa: int
    N: int
    L: int
    J: int
    master_seed: int
    algorithms: tuple
    snr_threshold_db: float = 40.0
    coeff_dist: str = "normal"

    def __post_init__(self):
        if not 0 <= self.kappa <= self.N or not self.N < self.L:
            raise ValueError(f"need 0 <= kappa <= N < L, got ({self.kappa}, {self.N}, {self.L})")
        _check_common(self.J, self.master_seed, self.coeff_dist)
        object.__setattr__(self, "algorithms", _parse_algorithms(self.algorithms))

    @classmethod
    def from_dict(cls, d: dict) -> "SuiteConfig":
        known = {"kappa", "N", "L", "J", "master_seed", "algorithms",
                 "snr_threshold_db", "coeff_dist"}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config fields: {sorted(extra)}")
        try:
            return cls(kappa=int(d["kappa"]), N=int(d["N"]), L=int(d["L"]),
                       J=int(d["J"]), master_seed=int(d["master_seed"]),
                       algorithms=d["algorithms"],
                       snr_threshold_db=float(d.get("snr_threshold_db", 40.0)),
                       coeff_dist=d.get("coeff_dist", "normal"))
        except KeyError as k:
            raise ValueError(f"missing config field: {k}") from None


@dataclass(frozen=True)
class TrialRecord:
    sample_index: int
    algorithm: str
    success: bool
    snr_db: float
    iterations: int
    wall_time: float
    sample_hash: str


@dataclass(frozen=True)
class AlgorithmStats:
    label: str
    j_ok: int
    j: int
    rho_ok: float
    mean_iterations: float
    median_iterations: float
    mean_wall_time: float


@dataclass(frozen=True)
class SuiteReport:
    config: SuiteConfig
    stats: tuple
    trials: tuple
    lift_seconds_mean: float
    gen_seconds_mean: float
    # (sample_index, label) -> (support tuple, coeffs tuple, extras dict)
    estimates: dict = field(default=None, repr=False)

    def stats_for(self, label: str) -> AlgorithmStats:
        for st in self.stats:
            if st.label == label:
                return st
        raise KeyError(label)

    def csv_text(self) -> str:
        cfg = self.config
        lines = [
            f"# bench kappa={cfg.kappa} N={cfg.N} L={cfg.L} J={cfg.J} "
            f"master_seed={cfg.master_seed} snr_threshold_db={cfg.snr_threshold_db:g} "
            f"coeff_dist={cfg.coeff_dist}",
            "algorithm,j_ok,j,rho_ok_pct,mean_iterations,median_iterations",
        ]
        for st in self.stats:
            lines.append(
                f"{st.label},{st.j_ok},{st.j},{100.0 * st.rho_ok:.2f},"
                f"{st.mean_iterations:.4f},{st.median_iterations:.1f}"
            )
        return "\n".join(lines) + "\n"

    def json_dict(self, include_trials: bool = False) -> dict:
        cfg = self.config
        out = {
            "config": {
                "kappa": cfg.kappa, "N": cfg.N, "L": cfg.L, "J": cfg.J,
                "master_seed": cfg.master_seed,
                "snr_threshold_db": cfg.snr_threshold_db,
                "coeff_dist": cfg.coeff_dist,
                "algorithms": [
                    {"id": s.id, "lambda": s.lam, "n_ite": s.n_ite,
                     "warm_start": s.warm_start, "label": s.label}
                    for s in cfg.algorithms
                ],
            },
            "results": [
                {"algorithm": st.label, "j_ok": st.j_ok, "j": st.j,
                 "rho_ok": st.rho_ok, "rho_ok_pct": round(100.0 * st.rho_ok, 2),
                 "mean_iterations": st.mean_iterations,
                 "median_iterations": st.median_iterations,
                 "mean_wall_time_s": st.mean_wall_time}
                for st in self.stats
            ],
            "timing": {
                "lift_seconds_mean": self.lift_seconds_mean,
                "gen_seconds_mean": self.gen_seconds_mean,
            },
        }
        if include_trials:
            out["trials"] = [
                {"sample_index": t.sample_index, "algorithm": t.algorithm,
                 "success": t.success, "snr_db": _json_float(t.snr_db),
                 "iterations": t.iterations, "wall_time_s": t.wall_time,
                 "sample_hash": t.sample_hash}
                for t in self.trials
            ]
        return out


def _json_float(v: float):
    return float(v) if np.isfinite(v) else repr(float(v))


def gen_problem(N: int, L: int, kappa: int, seed, coeff_dist: str = "normal") -> tuple:
    """Seeded instance: column-normalized Gaussian Q and a planted kappa-sparse s.

    seed may be an int or a sequence of ints (fed to a counter-based
    generator); identical seeds give bit-identical (Problem, s_true).
    Returns (Problem, s_true).
    """
    if not 0 <= kappa <= N or not N < L:
        raise ValueError(f"need 0 <= kappa <= N < L, got ({kappa}, {N}, {L})")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    Q = normalize_columns(rng.standard_normal((N, L)))
    support = rng.permutation(L)[:kappa]
    if coeff_dist == "normal":
        vals = rng.standard_normal(kappa)
    elif coeff_dist == "uniform":
        vals = rng.uniform(0.5, 1.5, size=kappa) * rng.choice([-1.0, 1.0], size=kappa)
    else:
        raise ValueError("coeff_dist must be 'normal' or 'uniform'")
    s_true = np.zeros(L)
    s_true[support] = vals
    return Problem(Q=Q, x=Q @ s_true, kappa=kappa), s_true


def suite_sample(cfg: SuiteConfig, j: int) -> tuple:
    """The j-th (Problem, s_true) of a suite; shared by all its algorithms."""
    return gen_problem(cfg.N, cfg.L, cfg.kappa,
                       seed=(cfg.master_seed, cfg.N, cfg.L, cfg.kappa, j),
                       coeff_dist=cfg.coeff_dist)


def snr_db(Q, s_true, s_hat) -> float:
    """10*log10(||Q s_true||^2 / ||Q (s_true - s_hat)||^2).

    Returns +inf when the error energy is below 1e-15 of the signal, and
    NaN when s_true is zero (the ratio is undefined).
    """
    Q = np.asarray(Q, dtype=np.float64)
    s_true = np.asarray(s_true, dtype=np.float64).reshape(-1)
    s_hat = np.asarray(s_hat, dtype=np.float64).reshape(-1)
    sig = float(np.linalg.norm(Q @ s_true))
    if sig == 0.0:
        return float("nan")
    err = float(np.linalg.norm(Q @ (s_true - s_hat)))
    if err <= SNR_EXACT_RTOL * sig:
        return float("inf")
    return 10.0 * np.log10((sig / err) ** 2)


def judge(s_true, est: SparseEstimate, Q, threshold_db: float = 40.0) -> bool:
    """Success = exact support detection, or estimation SNR above threshold.

    The detected support is the ||s_true||_0 largest-magnitude entries of
    the densified estimate.
    """
    s_true = np.asarray(s_true, dtype=np.float64).reshape(-1)
    true_support = set(np.flatnonzero(s_true).tolist())
    dense = densify(est, s_true.shape[0])
    detected = set(top_indices(dense, len(true_support)))
    if detected == true_support:
        return True
    val = snr_db(Q, s_true, dense)
    return bool(val > threshold_db) if np.isfinite(val) or val == float("inf") else False


def _run_algorithm(spec: AlgorithmSpec, prob: Problem, system, instance) -> tuple:
    """Returns (estimate, iterations, ok, extras); never raises."""
    try:
        if spec.id == "omp_c":
            est = omp_c(prob)
            return est, len(est), True, {}
        if spec.id == "bp_c":
            est, lp = bp_classic(prob, return_lp=True)
            return est, (lp.iterations if lp is not None else 0), True, {}
        if spec.id == "omp_hd":
            est = omp_hd(system, instance, prob.kappa)
            return est, len(est), True, {}
        if spec.id == "omp_ihd":
            est = omp_ihd(system, instance, prob.kappa)
            return est, len(est), True, {}
        if spec.id == "cosamp_c":
            est, iters = cosamp_c(prob, return_iterations=True)
            return est, iters, True, {}
        if spec.id == "alg_gbp":
            est, trace = alg_gbp(system, instance, prob.kappa, warm_start=spec.warm_start)
            extras = {"status": trace.status}
            if trace.records and trace.status != "failed_numerical":
                extras["final_l1"] = trace.records[-1].l1_value
            return est, len(trace.records), trace.status != "failed_numerical", extras
        if spec.id == "alg_l2l1":
            est, iters = alg_l2l1(system, instance, prob.kappa, lam=spec.lam, n_ite=spec.n_ite)
            return est, iters, True, {}
        raise ValueError(f"unhandled algorithm {spec.id}")
    except Exception as err:  # noqa: BLE001 - a failing trial must not kill the suite
        return SparseEstimate(), 0, False, {"error": repr(err)}


def _run_sample(args) -> dict:
    cfg, j, collect = args
    t0 = time.perf_counter()
    prob, s_true = suite_sample(cfg, j)
    gen_s = time.perf_counter() - t0
    digest = hashlib.sha256(prob.Q.tobytes() + prob.x.tobytes()).hexdigest()[:16]
    needs_lift = any(s.id in ("omp_hd", "omp_ihd", "alg_gbp", "alg_l2l1")
                     for s in cfg.algorithms)
    system = instance = None
    lift_s = 0.0
    if needs_lift:
        t0 = time.perf_counter()
        system = lift(prob.Q)
        instance = lift_instance(system, prob.x)
        lift_s = time.perf_counter() - t0
    rows = []
    for spec in cfg.algorithms:
        t0 = time.perf_counter()
        est, iters, ok, extras = _run_algorithm(spec, prob, system, instance)
        wall = time.perf_counter() - t0
        val = snr_db(prob.Q, s_true, densify(est, cfg.L))
        success = bool(ok and judge(s_true, est, prob.Q, cfg.snr_threshold_db))
        row = {"label": spec.label, "success": success, "snr_db": val,
               "iterations": int(iters), "wall": wall}
        if collect:
            row["support"] = tuple(est.support)
            row["coeffs"] = tuple(float(c) for c in est.coeffs)
            row["extras"] = extras
        rows.append(row)
    return {"j": j, "hash": digest, "gen_s": gen_s, "lift_s": lift_s, "rows": rows}


def run_suite(cfg: SuiteConfig, workers: int = 1, collect_estimates: bool = False) -> SuiteReport:
    """Run every configured algorithm on the suite's J shared samples.

    The report is deterministic for a fixed master_seed regardless of
    workers; per-trial failures are recorded as unsuccessful trials.
    """
    tasks = [(cfg, j, collect_estimates) for j in range(cfg.J)]
    if workers <= 1:
        outs = [_run_sample(t) for t in tasks]
    else:
        with multiprocessing.get_context("fork").Pool(workers) as pool:
            outs = pool.map(_run_sample, tasks, chunksize=max(1, cfg.J // (4 * workers)))
    outs.sort(key=lambda o: o["j"])
    trials = []
    estimates = {} if collect_estimates else None
    for out in outs:
        for row in out["rows"]:
            trials.append(TrialRecord(
                sample_index=out["j"], algorithm=row["label"], success=row["success"],
                snr_db=row["snr_db"], iterations=row["iterations"],
                wall_time=row["wall"], sample_hash=out["hash"]))
            if collect_estimates:
                estimates[(out["j"], row["label"])] = (
                    row["support"], row["coeffs"], row["extras"])
    stats = []
    for spec in cfg.algorithms:
        mine = [t for t in trials if t.algorithm == spec.label]
        j_ok = sum(t.success for t in mine)
        stats.append(AlgorithmStats(
            label=spec.label, j_ok=j_ok, j=len(mine), rho_ok=j_ok / len(mine),
            mean_iterations=float(statistics.fmean(t.iterations for t in mine)),
            median_iterations=float(statistics.median(t.iterations for t in mine)),
            mean_wall_time=float(statistics.fmean(t.wall_time for t in mine))))
    return SuiteReport(
        config=cfg, stats=tuple(stats), trials=tuple(trials),
        lift_seconds_mean=float(statistics.fmean(o["lift_s"] for o in outs)),
        gen_seconds_mean=float(statistics.fmean(o["gen_s"] for o in outs)),
        estimates=estimates)


@dataclass(frozen=True)
class SweepConfig:
    N: int
    L: int
    kappa_grid: tuple
    J: int
    master_seed: int
    algorithms: tuple
    snr_threshold_db: float = 40.0
    coeff_dist: str = "normal"

    def __post_init__(self):
        grid = tuple(int(k) for k in self.kappa_grid)
        if not grid:
            raise ValueError("kappa_grid must be nonempty")
        if any(not 0 <= k <= self.N for k in grid) or not self.N < self.L:
            raise ValueError("kappa_grid entries must satisfy 0 <= kappa <= N < L")
        _check_common(self.J, self.master_seed, self.coeff_dist)
        object.__setattr__(self, "kappa_grid", grid)
        object.__setattr__(self, "algorithms", _parse_algorithms(self.algorithms))

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        known = {"N", "L", "kappa_grid", "J", "master_seed", "algorithms",
                 "snr_threshold_db", "coeff_dist"}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config fields: {sorted(extra)}")
        try:
            return cls(N=int(d["N"]), L=int(d["L"]),
                       kappa_grid=tuple(d["kappa_grid"]), J=int(d["J"]),
                       master_seed=int(d["master_seed"]), algorithms=d["algorithms"],
                       snr_threshold_db=float(d.get("snr_threshold_db", 40.0)),
                       coeff_dist=d.get("coeff_dist", "normal"))
        except KeyError as k:
            raise ValueError(f"missing config field: {k}") from None

    def suite_for(self, kappa: int) -> SuiteConfig:
        return SuiteConfig(kappa=kappa, N=self.N, L=self.L, J=self.J,
                           master_seed=self.master_seed, algorithms=self.algorithms,
                           snr_threshold_db=self.snr_threshold_db,
                           coeff_dist=self.coeff_dist)


@dataclass(frozen=True)
class SweepReport:
    config: SweepConfig
    reports: tuple  # aligned with config.kappa_grid

    def csv_text(self) -> str:
        cfg = self.config
        labels = [s.label for s in cfg.algorithms]
        lines = [
            f"# sweep N={cfg.N} L={cfg.L} J={cfg.J} master_seed={cfg.master_seed} "
            f"snr_threshold_db={cfg.snr_threshold_db:g} coeff_dist={cfg.coeff_dist}",
            "kappa,kappa_over_n," + ",".join(labels),
        ]
        for kappa, rep in zip(cfg.kappa_grid, self.reports):
            cells = ",".join(f"{100.0 * rep.stats_for(lb).rho_ok:.2f}" for lb in labels)
            lines.append(f"{kappa},{kappa / cfg.N:.6f},{cells}")
        return "\n".join(lines) + "\n"

    def json_dict(self) -> dict:
        return {
            "config": {
                "N": self.config.N, "L": self.config.L,
                "kappa_grid": list(self.config.kappa_grid), "J": self.config.J,
                "master_seed": self.config.master_seed,
                "algorithms": [s.label for s in self.config.algorithms],
            },
            "rows": [
                {"kappa": kappa, "kappa_over_n": kappa / self.config.N,
                 "rho_ok_pct": {st.label: round(100.0 * st.rho_ok, 2) for st in rep.stats},
                 "mean_wall_time_s": {st.label: st.mean_wall_time for st in rep.stats}}
                for kappa, rep in zip(self.config.kappa_grid, self.reports)
            ],
        }


def run_sweep(cfg: SweepConfig, workers: int = 1) -> SweepReport:
    """One suite per kappa in the grid, identical algorithms throughout."""
    reports = tuple(run_suite(cfg.suite_for(k), workers=workers) for k in cfg.kappa_grid)
    return SweepReport(config=cfg, reports=reports)


def _phase_kappa(N: int, ratio: float) -> int:
    # half-up rounding, clamped to [1, N]: a cell always plants at least one atom
    return min(N, max(1, int(np.floor(ratio * N + 0.5))))


@dataclass(frozen=True)
class PhaseConfig:
    n_grid: tuple
    ratio_grid: tuple
    J: int
    master_seed: int
    algorithms: tuple
    l_factor: int = 2
    snr_threshold_db: float = 40.0
    coeff_dist: str = "normal"

    def __post_init__(self):
        n_grid = tuple(int(n) for n in self.n_grid)
        ratio_grid = tuple(float(r) for r in self.ratio_grid)
        if not n_grid or not ratio_grid:
            raise ValueError("n_grid and ratio_grid must be nonempty")
        if any(n < 2 for n in n_grid):
            raise ValueError("n_grid entries must be >= 2")
        if any(not 0.0 < r <= 1.0 for r in ratio_grid):
            raise ValueError("ratio_grid entries must lie in (0, 1]")
        if self.l_factor < 2:
            raise ValueError("l_factor must be >= 2 (need L > N)")
        _check_common(self.J, self.master_seed, self.coeff_dist)
        object.__setattr__(self, "n_grid", n_grid)
        object.__setattr__(self, "ratio_grid", ratio_grid)
        object.__setattr__(self, "algorithms", _parse_algorithms(self.algorithms))

    @classmethod
    def from_dict(cls, d: dict) -> "PhaseConfig":
        known = {"n_grid", "ratio_grid", "J", "master_seed", "algorithms",
                 "l_factor", "snr_threshold_db", "coeff_dist"}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config fields: {sorted(extra)}")
        try:
            return cls(n_grid=tuple(d["n_grid"]), ratio_grid=tuple(d["ratio_grid"]),
                       J=int(d["J"]), master_seed=int(d["master_seed"]),
                       algorithms=d["algorithms"], l_factor=int(d.get("l_factor", 2)),
                       snr_threshold_db=float(d.get("snr_threshold_db", 40.0)),
                       coeff_dist=d.get("coeff_dist", "normal"))
        except KeyError as k:
            raise ValueError(f"missing config field: {k}") from None


@dataclass(frozen=True)
class PhaseReport:
    config: PhaseConfig
    # label -> matrix of rho_ok, rows = ratio_grid, cols = n_grid
    matrices: dict

    def csv_text(self, label: str) -> str:
        cfg = self.config
        mat = self.matrices[label]
        lines = [
            f"# phase algorithm={label} J={cfg.J} master_seed={cfg.master_seed} "
            f"l_factor={cfg.l_factor}",
            "kappa_over_n," + ",".join(f"N={n}" for n in cfg.n_grid),
        ]
        for r, ratio in enumerate(cfg.ratio_grid):
            cells = ",".join(f"{100.0 * mat[r, c]:.2f}" for c in range(len(cfg.n_grid)))
            lines.append(f"{ratio:.6f},{cells}")
        return "\n".join(lines) + "\n"

    def json_dict(self) -> dict:
        return {
            "config": {
                "n_grid": list(self.config.n_grid),
                "ratio_grid": list(self.config.ratio_grid),
                "J": self.config.J, "master_seed": self.config.master_seed,
                "l_factor": self.config.l_factor,
                "algorithms": [s.label for s in self.config.algorithms],
            },
            "matrices": {lb: m.tolist() for lb, m in self.matrices.items()},
        }


def run_phase(cfg: PhaseConfig, workers: int = 1) -> PhaseReport:
    """Monte-Carlo recovery-rate surface over (kappa/N, N) cells.

    Cell (ratio, N) runs a suite at kappa = round(ratio*N) (half-up,
    clamped to [1, N]) and L = l_factor*N.
    """
    labels = [s.label for s in cfg.algorithms]
    mats = {lb: np.zeros((len(cfg.ratio_grid), len(cfg.n_grid))) for lb in labels}
    for c, n in enumerate(cfg.n_grid):
        for r, ratio in enumerate(cfg.ratio_grid):
            suite = SuiteConfig(
                kappa=_phase_kappa(n, ratio), N=n, L=cfg.l_factor * n, J=cfg.J,
                master_seed=cfg.master_seed, algorithms=cfg.algorithms,
                snr_threshold_db=cfg.snr_threshold_db, coeff_dist=cfg.coeff_dist)
            rep = run_suite(suite, workers=workers)
            for lb in labels:
                mats[lb][r, c] = rep.stats_for(lb).rho_ok
    return PhaseReport(config=cfg, matrices=mats)
