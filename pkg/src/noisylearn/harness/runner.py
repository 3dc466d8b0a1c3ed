"""
Seeded parameter sweeps.

Every unit of work is addressed by ``(grid_index, trial_index)`` and gets
its own generator seeded with

    child_seed = SeedSequence(master_seed, spawn_key=(grid_index, trial_index))
                     .generate_state(1, uint64)[0]

so any single trial can be replayed from its recorded seed, and results do
not depend on how work is split across processes.
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.stats import binomtest

from .. import happy, lemmas, simon
from ..bell import MAX_MIXED, sample_bell_batch, signal
from ..pauli import PauliString, phase_form, random_pauli
from ..protocols.identify import identify_pauli, required_samples_ident
from ..protocols.shadows import shadow_collect, shadow_estimate
from ..protocols.swap import purity_test_noisy
from .config import ExperimentConfig

SIG_DIGITS = 12


def child_seed(master_seed: int, grid_index: int, trial_index: int) -> int:
    ss = np.random.SeedSequence(master_seed, spawn_key=(grid_index, trial_index))
    return int(ss.generate_state(1, np.uint64)[0])


def rounded(x):
    """Round floats to 12 significant digits so text round-trips are exact."""
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.{SIG_DIGITS}g}")
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


@dataclass(frozen=True)
class TrialReport:
    task: str
    grid_index: int
    trial: int
    params: dict
    ground_truth: str
    decision: str
    success: bool | None
    stats: dict
    wall_us: int
    seed: int

    def to_row(self) -> dict:
        row = {"task": self.task, "grid_index": self.grid_index}
        row.update(self.params)
        row.update(trial=self.trial, ground_truth=self.ground_truth, decision=self.decision, success=self.success)
        row.update(self.stats)
        row.update(wall_us=self.wall_us, seed=self.seed)
        return row


@dataclass(frozen=True)
class TaskDef:
    grid_keys: tuple[str, ...]
    param_keys: tuple[str, ...]
    stat_keys: tuple[str, ...]
    run: Callable  # (params, cfg, trial_index, rng) -> (ground_truth, decision, success, stats)
    units: Callable = lambda cfg: cfg.trials

    def trial_fields(self) -> tuple[str, ...]:
        return ("task", "grid_index", *self.param_keys, "trial", "ground_truth", "decision", "success",
                *self.stat_keys, "wall_us", "seed")


# ---------------------------------------------------------------- tasks

def _arm(cfg: ExperimentConfig, trial: int, rng) -> str:
    if cfg.arm != "both":
        return cfg.arm
    return "H1" if trial % 2 == 0 else "H0"


def _run_identify(params, cfg, trial, rng):
    n, lam, T = params["n"], params["lambda"], params["T"]
    truth = _arm(cfg, trial, rng)
    if truth == "H1":
        p = random_pauli(n, include_identity=False, rng=rng)
        samples = sample_bell_batch(p, lam, T, rng)
    else:
        p = None
        samples = sample_bell_batch(MAX_MIXED, lam, T, rng, n=n)
    res = identify_pauli(samples, n, lam)
    ok = res.decision == truth and (truth == "H0" or res.argmax_pauli == p)
    argmax = res.argmax_pauli.label if res.argmax_pauli is not None else ""
    return truth, res.decision, ok, {"z_max": res.z_max, "threshold": res.threshold, "argmax": argmax,
                                     "target": p.label if p is not None else ""}


def _target_pauli(cfg, n, rng) -> PauliString:
    if cfg.pauli:
        p = PauliString.from_label(cfg.pauli)
        if p.n != n:
            raise ValueError(f"pauli {cfg.pauli!r} has {p.n} qubits but n = {n}")
        return p
    return random_pauli(n, include_identity=False, rng=rng)


def _run_bell(params, cfg, trial, rng):
    n, lam, T = params["n"], params["lambda"], params["T"]
    p = _target_pauli(cfg, n, rng)
    sx, sz = sample_bell_batch(p, lam, T, rng)
    par = (np.bitwise_count((sx & np.uint64(p.z)) ^ (sz & np.uint64(p.x))) & 1) ^ phase_form(p)
    moment = float(np.mean(1.0 - 2.0 * par))
    expected = signal(p, lam)
    sigma = np.sqrt(max(1.0 - expected**2, 0.0) / T)
    ok = abs(moment - expected) <= 3 * sigma + 1e-12
    first = f"{(int(sx[0]) << n) | int(sz[0]):0{(2 * n + 3) // 4}x}"
    return p.label, "consistent" if ok else "inconsistent", ok, {
        "moment": moment, "expected": expected, "first_sample": first}


def _run_shadows(params, cfg, trial, rng):
    n, lam, N = params["n"], params["lambda"], params["N"]
    p = _target_pauli(cfg, n, rng)
    data = shadow_collect(p, n, lam, N, rng)
    est = shadow_estimate(data, p, lam)
    ok = abs(est.value - 1.0) <= cfg.eps
    return p.label, "within" if ok else "outside", ok, {"estimate": est.value, "batches": est.batch_count}


def _run_purity(params, cfg, trial, rng):
    res = purity_test_noisy(params["n"], params["lambda"], params["T"], rng)
    return res.truth, res.decision, res.correct, {"accept_fraction": res.accept_fraction}


@lru_cache(maxsize=8)
def _tiling(R: int) -> happy.Tiling:
    return happy.build_tiling(R)


def _run_happy(params, cfg, trial, rng):
    R, r, rate, reps = params["R"], params["r"], params["rate"], params["swap_reps"]
    tiling = _tiling(R)
    nb = tiling.boundary_legs.size
    pure = bool(rng.random() < 0.5)
    ok_a = happy.greedy_decode(tiling, rng.random(nb) < rate, r)
    ok_b = happy.greedy_decode(tiling, rng.random(nb) < rate, r)
    if ok_a and ok_b:
        p_acc = happy.swap_accept_probability(happy.bulk_leg_count(r), pure)
        said_pure = bool((rng.random(reps) < p_acc).all())
    else:
        said_pure = bool(rng.random() < 0.5)
    truth = "pure" if pure else "mixed"
    decision = "pure" if said_pure else "mixed"
    return truth, decision, truth == decision, {"decode_a": ok_a, "decode_b": ok_b}


def _run_simon(params, cfg, trial, rng):
    n, lam = params["n"], params["lambda"]
    if cfg.mode == "tv":
        tv = simon.tv_oracle_vs_identity(n, lam, params["depth"])
        return "", "", None, {"tv": tv, "secret": "", "recovered": ""}
    o = simon.make_simon_instance(n, "two-to-one", rng)
    run = simon.run_noisy_simon(o, lam, params["queries"], rng)
    rec = "" if run.recovered is None else format(run.recovered, f"0{n}b")
    return format(o.secret, f"0{n}b"), rec or "failure", run.success, {
        "tv": None, "secret": format(o.secret, f"0{n}b"), "recovered": rec}


LEMMA_CHECKS = ("depol_swap", "depol_swap_product", "depol_swap2", "purity_trace",
                *(f"node_concentration_{s}" for s in lemmas.POVM_SOURCES))


def _run_lemma(params, cfg, trial, rng):
    n, lam = params["n"], params["lambda"]
    name = LEMMA_CHECKS[trial]
    states = cfg.trials
    if name == "depol_swap":
        rep = lemmas.check_depol_swap(n, lam, "haar", states, rng)
    elif name == "depol_swap_product":
        rep = lemmas.check_depol_swap(n, lam, "product", states, rng)
    elif name == "depol_swap2":
        rep = lemmas.check_depol_swap2(n, lam, states, rng)
    elif name == "purity_trace":
        rep = lemmas.check_purity_trace_identity(n, lam)
    else:
        source = name.removeprefix("node_concentration_")
        rep = lemmas.check_node_concentration(n, lam, source, max(1, states // 10), rng)
    return rep.kind, "pass" if rep.passed else "fail", rep.passed, {
        "lemma_id": rep.lemma_id, "observed": rep.observed, "bound_or_target": rep.bound_or_target}


TASK_DEFS = {
    "identify-pauli": TaskDef(("n", "lambda", "T"), ("n", "lambda", "T"),
                              ("z_max", "threshold", "argmax", "target"), _run_identify),
    "bell-sample": TaskDef(("n", "lambda"), ("n", "lambda", "T"), ("moment", "expected", "first_sample"), _run_bell),
    "shadows": TaskDef(("n", "lambda"), ("n", "lambda", "N"), ("estimate", "batches"), _run_shadows),
    "purity": TaskDef(("n", "lambda"), ("n", "lambda", "T"), ("accept_fraction",), _run_purity),
    "happy": TaskDef(("R", "r", "rate"), ("R", "r", "rate", "swap_reps"), ("decode_a", "decode_b"), _run_happy),
    "simon": TaskDef(("n", "lambda"), ("n", "lambda", "queries", "depth"), ("tv", "secret", "recovered"), _run_simon,
                     units=lambda cfg: 1 if cfg.mode == "tv" else cfg.trials),
    "verify-lemmas": TaskDef(("n", "lambda"), ("n", "lambda", "states"),
                             ("lemma_id", "observed", "bound_or_target"), _run_lemma,
                             units=lambda cfg: len(LEMMA_CHECKS)),
}


def grid_points(cfg: ExperimentConfig) -> list[dict]:
    """Parameter dicts in canonical order (later keys vary fastest)."""
    t = cfg.task
    if t == "happy":
        pts = itertools.product(cfg.R, cfg.r, cfg.erasure_rate)
        return [{"R": R, "r": r, "rate": rate, "swap_reps": cfg.swap_reps} for R, r, rate in pts]
    points = []
    for n, lam in itertools.product(cfg.n, cfg.lam):
        if t == "identify-pauli":
            Ts = cfg.T or (required_samples_ident(n, lam, cfg.C),)
            points += [{"n": n, "lambda": lam, "T": T} for T in Ts]
        elif t in ("bell-sample", "purity"):
            default_T = 1000 if t == "bell-sample" else 20
            points += [{"n": n, "lambda": lam, "T": T} for T in (cfg.T or (default_T,))]
        elif t == "shadows":
            points.append({"n": n, "lambda": lam, "N": cfg.N})
        elif t == "simon":
            points.append({"n": n, "lambda": lam, "queries": cfg.queries if cfg.mode == "recover" else 0,
                           "depth": cfg.depth})
        else:
            points.append({"n": n, "lambda": lam, "states": cfg.trials})
    return points


def _run_unit(args) -> TrialReport:
    cfg, grid_index, params, trial = args
    task = TASK_DEFS[cfg.task]
    seed = child_seed(cfg.seed, grid_index, trial)
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    try:
        truth, decision, success, stats = task.run(params, cfg, trial, rng)
    except Exception as exc:
        raise type(exc)(f"grid point {grid_index} {params}, trial {trial}: {exc}") from exc
    wall = int((time.perf_counter() - start) * 1e6) if cfg.timing else 0
    return TrialReport(cfg.task, grid_index, trial, {k: rounded(v) for k, v in params.items()},
                       truth, decision, None if success is None else bool(success),
                       {k: rounded(v) for k, v in stats.items()}, wall, seed)


def wilson_interval(successes: int, trials: int) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    ci = binomtest(successes, trials).proportion_ci(confidence_level=0.95, method="wilson")
    return float(ci.low), float(ci.high)


def summary_fields(task: str) -> tuple[str, ...]:
    d = TASK_DEFS[task]
    extra = {"happy": ("decode_fail_rate", "bound"), "simon": ("tv",),
             "identify-pauli": ("h1_success", "h0_false_alarm")}.get(task, ())
    return ("task", "grid_index", *d.param_keys, "trials", "successes", "success_rate", "ci_low", "ci_high", *extra)


def summarize(task: str, points: list[dict], reports: list[TrialReport]) -> list[dict]:
    by_point: dict[int, list[TrialReport]] = {i: [] for i in range(len(points))}
    for rep in reports:
        by_point[rep.grid_index].append(rep)
    rows = []
    for i, params in enumerate(points):
        reps = by_point[i]
        judged = [r for r in reps if r.success is not None]
        wins = sum(r.success for r in judged)
        row = {"task": task, "grid_index": i}
        row.update({k: rounded(v) for k, v in params.items()})
        rate = wins / len(judged) if judged else None
        lo, hi = wilson_interval(wins, len(judged)) if judged else (None, None)
        row.update(trials=len(reps), successes=wins, success_rate=rounded(rate), ci_low=rounded(lo), ci_high=rounded(hi))
        if task == "happy":
            decodes = [d for r in reps for d in (r.stats["decode_a"], r.stats["decode_b"])]
            row["decode_fail_rate"] = rounded(1 - sum(decodes) / len(decodes))
            row["bound"] = rounded(happy.failure_bound(params["r"], params["R"], params["rate"]))
        elif task == "simon":
            row["tv"] = reps[0].stats["tv"] if reps else None
        elif task == "identify-pauli":
            h1 = [r.success for r in reps if r.ground_truth == "H1"]
            h0 = [not r.success for r in reps if r.ground_truth == "H0"]
            row["h1_success"] = rounded(sum(h1) / len(h1)) if h1 else None
            row["h0_false_alarm"] = rounded(sum(h0) / len(h0)) if h0 else None
        rows.append(row)
    return rows


@dataclass(frozen=True)
class SweepResult:
    config: ExperimentConfig
    points: list[dict]
    reports: list[TrialReport]
    summary: list[dict]

    def passed(self) -> bool:
        """Acceptance check for the invoked suite.

        Lemma checks must all pass. Other tasks pass when every grid point
        reaches ``min_success`` (always, if no threshold is set).
        """
        if self.config.task == "verify-lemmas":
            return all(r.success for r in self.reports)
        if self.config.min_success is None:
            return True
        return all(row["success_rate"] is not None and row["success_rate"] >= self.config.min_success
                   for row in self.summary)


def run_sweep(cfg: ExperimentConfig, workers: int | None = None) -> SweepResult:
    """Run every ``(grid point, trial)`` unit; results come back in canonical order."""
    points = grid_points(cfg)
    task = TASK_DEFS[cfg.task]
    units = [(cfg, i, p, t) for i, p in enumerate(points) for t in range(task.units(cfg))]
    workers = cfg.workers if workers is None else workers
    if workers <= 1:
        reports = [_run_unit(u) for u in units]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run_unit, units, chunksize=max(1, len(units) // (4 * workers))))
    reports.sort(key=lambda r: (r.grid_index, r.trial))
    return SweepResult(cfg, points, reports, summarize(cfg.task, points, reports))
