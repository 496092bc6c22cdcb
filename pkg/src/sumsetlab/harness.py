"""Reproducible Monte Carlo experiments.

Every trial draws its own seed from ``(master_seed, trial_index)`` alone, so
results do not depend on how trials are scheduled across worker threads.
Records are always returned sorted by ``trial_index``.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from . import ballsboxes, theory
from .core import ThresholdSpec, derive_seed, sample_set, window_bounds
from .errors import ConfigurationError, DomainError
from .repcount import ENGINES, rep_counts, underrepresented_count

log = logging.getLogger(__name__)

KINDS = ("basis", "bhg", "ballsboxes")
BALLS_MODES = ("threshold", "waiting")

SUMMARY_COLUMNS = (
    "A", "n", "alpha", "g", "p", "trials", "successes", "p_hat", "ci_lo", "ci_hi",
    "mean_X", "lambda_exact", "lambda_paper", "lambda_asymptotic", "limit_prob", "sc_bound",
)


def worker_count(workers: int | None = None) -> int:
    """Resolve a worker count; ``None`` reads ``SUMSETLAB_THREADS`` (0 = all cores)."""
    if workers is None:
        raw = os.environ.get("SUMSETLAB_THREADS", "0")
        try:
            workers = int(raw)
        except ValueError:
            raise ConfigurationError(f"SUMSETLAB_THREADS must be an integer, got {raw!r}")
    if workers < 0:
        raise ConfigurationError(f"worker count must be >= 0, got {workers}")
    return workers or (os.cpu_count() or 1)


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str = "basis"
    spec: ThresholdSpec | None = None
    trials: int = 100
    master_seed: int = 0
    engine: str = "convolution"
    p: float | None = None
    A_grid: tuple[float, ...] | None = None
    # bhg: p = k_scale * n^(g/(h(g+1))) / n when no p override is given
    k_scale: float = 1.0
    # ballsboxes
    boxes: int | None = None
    balls: int | None = None
    mode: str = "threshold"
    K_corr: float = 1.0
    L_t1: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigurationError(f"trials must be a positive integer, got {self.trials!r}")
        if self.engine not in ENGINES:
            raise ConfigurationError(f"engine must be one of {ENGINES}, got {self.engine!r}")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigurationError("master_seed must be a 64-bit unsigned integer")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise DomainError(f"p must lie in [0, 1], got {self.p}")
        if self.A_grid is not None:
            grid = tuple(float(a) for a in self.A_grid)
            if not all(math.isfinite(a) for a in grid):
                raise ConfigurationError("A_grid values must be finite")
            object.__setattr__(self, "A_grid", grid)
        if self.kind in ("basis", "bhg") and self.spec is None:
            raise ConfigurationError(f"kind={self.kind} needs a spec")
        if self.kind == "ballsboxes":
            if self.boxes is None or self.boxes < 1:
                raise ConfigurationError("kind=ballsboxes needs boxes >= 1")
            if self.mode not in BALLS_MODES:
                raise ConfigurationError(f"mode must be one of {BALLS_MODES}, got {self.mode!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigurationError(f"unknown config fields: {sorted(unknown)}")
        spec = d.get("spec")
        if isinstance(spec, dict):
            d["spec"] = ThresholdSpec(**spec)
        if d.get("A_grid") is not None:
            d["A_grid"] = tuple(d["A_grid"])
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            return cls.from_dict(json.loads(text))
        except (TypeError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"bad config: {exc}") from exc

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.A_grid is not None:
            d["A_grid"] = list(self.A_grid)
        return d


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one trial.

    For ``kind=basis``, ``X`` counts window targets with fewer than ``g``
    representations. For ``kind=bhg`` it counts sums realised more than ``g``
    ways, and for ``kind=ballsboxes`` boxes holding more than ``g`` balls. In
    every case ``is_basis`` records that the event of interest holds, i.e.
    ``X == 0``.
    """

    trial_index: int
    derived_seed: int
    set_size: int
    X: int
    is_basis: bool
    wall_time_ms: float = field(default=0.0, compare=False)

    def to_dict(self, include_timing: bool = False) -> dict:
        d = {
            "trial_index": self.trial_index,
            "derived_seed": self.derived_seed,
            "set_size": self.set_size,
            "X": self.X,
            "is_basis": self.is_basis,
        }
        if include_timing:
            d["wall_time_ms"] = round(self.wall_time_ms, 3)
        return d


@dataclass(frozen=True)
class Estimate:
    successes: int
    trials: int
    p_hat: float
    ci_lo: float
    ci_hi: float
    mean_X: float
    se_X: float

    @classmethod
    def from_records(cls, records: Sequence[TrialRecord], z: float = 1.96) -> "Estimate":
        trials = len(records)
        successes = sum(r.is_basis for r in records)
        xs = np.array([r.X for r in records], dtype=np.float64)
        lo, hi = wilson_ci(successes, trials, z)
        se = float(xs.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
        return cls(successes, trials, successes / trials, lo, hi, float(xs.mean()), se)

    @property
    def half_width(self) -> float:
        return (self.ci_hi - self.ci_lo) / 2.0


def wilson_ci(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1 or not 0 <= successes <= trials or not z > 0:
        raise DomainError(f"need 0 <= successes <= trials, trials >= 1, z > 0; got {successes}, {trials}, {z}")
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    centre = (phat + z2 / (2 * trials)) / denom
    half = z / denom * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials))
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return lo, hi


# ---------------------------------------------------------------------------
# trial bodies


def selection_probability(config: ExperimentConfig) -> float:
    if config.p is not None:
        return float(config.p)
    spec = config.spec
    if config.kind == "basis":
        return theory.threshold_p(spec)
    if config.kind == "bhg":
        k = config.k_scale * theory.bhg_threshold_size(spec.n, spec.h, spec.g)
        return min(1.0, k / spec.n)
    raise ConfigurationError("kind=ballsboxes has no selection probability")


def _basis_trial(config: ExperimentConfig, p: float) -> Callable[[int], tuple[int, int]]:
    spec = config.spec
    w = window_bounds(spec.n, spec.alpha, spec.h)

    def body(seed: int) -> tuple[int, int]:
        A = sample_set(spec.n, p, seed)
        prof = rep_counts(A, spec.h, config.engine)
        return len(A), underrepresented_count(prof, w, spec.g)

    return body


def _bhg_trial(config: ExperimentConfig, p: float) -> Callable[[int], tuple[int, int]]:
    spec = config.spec

    def body(seed: int) -> tuple[int, int]:
        A = sample_set(spec.n, p, seed)
        counts = rep_counts(A, spec.h, config.engine).counts
        return len(A), int(np.count_nonzero(counts > spec.g))

    return body


def _packing_trial(config: ExperimentConfig, g: int) -> Callable[[int], tuple[int, int]]:
    balls = config.balls if config.balls is not None else packing_balls(config.boxes, g)

    def body(seed: int) -> tuple[int, int]:
        res = ballsboxes.allocate(balls, config.boxes, seed)
        return balls, ballsboxes.overfull_underfull(res, g)[0]

    return body


def packing_balls(boxes: int, g: int) -> int:
    return max(0, round(boxes ** (g / (g + 1))))


def _run(body: Callable[[int], tuple[int, int]], trials: int, master_seed: int,
         workers: int | None) -> list[TrialRecord]:
    def one(i: int) -> TrialRecord:
        seed = derive_seed(master_seed, i)
        t0 = time.perf_counter()
        size, X = body(seed)
        ms = (time.perf_counter() - t0) * 1e3
        return TrialRecord(i, seed, int(size), int(X), X == 0, ms)

    nw = min(worker_count(workers), trials)
    if nw <= 1:
        return [one(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=nw) as pool:
        records = list(pool.map(one, range(trials)))
    records.sort(key=lambda r: r.trial_index)
    return records


def run_trials(config: ExperimentConfig, workers: int | None = None) -> tuple[Estimate, list[TrialRecord]]:
    """Run ``config.trials`` independent trials and aggregate them."""
    if config.kind == "basis":
        body = _basis_trial(config, selection_probability(config))
    elif config.kind == "bhg":
        body = _bhg_trial(config, selection_probability(config))
    else:
        if config.mode != "threshold":
            raise ConfigurationError("waiting-time experiments go through run_balls_boxes")
        g = config.spec.g if config.spec is not None else 1
        body = _packing_trial(config, g)
    records = _run(body, config.trials, config.master_seed, workers)
    return Estimate.from_records(records), records


def run_balls_boxes(boxes: int, g: int, trials: int, seed: int, mode: str = "threshold",
                    balls: int | None = None, workers: int | None = None) -> list[tuple[int, int, int]]:
    """Rows ``(trial, derived_seed, value)``.

    ``threshold`` mode reports the number of overfull boxes after ``balls``
    throws (default ``N^(g/(g+1))``); ``waiting`` mode reports ``V_g``.
    """
    if trials < 1:
        raise ConfigurationError(f"trials must be >= 1, got {trials}")
    if mode not in BALLS_MODES:
        raise ConfigurationError(f"mode must be one of {BALLS_MODES}, got {mode!r}")
    if mode == "threshold":
        nb = balls if balls is not None else packing_balls(boxes, g)

        def value(s):
            return ballsboxes.overfull_underfull(ballsboxes.allocate(nb, boxes, s), g)[0]
    else:
        def value(s):
            return ballsboxes.waiting_time(boxes, g, s)

    def one(i):
        s = derive_seed(seed, i)
        return i, s, int(value(s))

    nw = min(worker_count(workers), trials)
    if nw <= 1:
        return [one(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=nw) as pool:
        return list(pool.map(one, range(trials)))


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepRow:
    A: float
    n: int
    alpha: float
    g: int
    p: float
    estimate: Estimate
    lambda_exact: float
    lambda_paper: float
    lambda_asymptotic: float
    limit_prob: float
    sc_bound: float

    def summary(self) -> dict:
        e = self.estimate
        return {
            "A": self.A, "n": self.n, "alpha": self.alpha, "g": self.g, "p": self.p,
            "trials": e.trials, "successes": e.successes, "p_hat": e.p_hat,
            "ci_lo": e.ci_lo, "ci_hi": e.ci_hi, "mean_X": e.mean_X,
            "lambda_exact": self.lambda_exact, "lambda_paper": self.lambda_paper,
            "lambda_asymptotic": self.lambda_asymptotic, "limit_prob": self.limit_prob,
            "sc_bound": self.sc_bound,
        }


def theory_row(spec: ThresholdSpec, p: float, K_corr: float = 1.0, L_t1: float = 1.0) -> dict:
    """Theoretical columns of a summary row for ``h = 2``; NaN where undefined."""
    n, a, g = spec.n, spec.alpha, spec.g
    nan = float("nan")
    if not 0.0 < p < 1.0:
        return {"lambda_exact": nan, "lambda_paper": nan, "lambda_asymptotic": nan,
                "limit_prob": theory.limit_probability(spec), "sc_bound": nan}
    try:
        lam_asym = theory.poisson_lambda(n, a, p, g, "asymptotic")
    except DomainError:
        lam_asym = nan
    return {
        "lambda_exact": theory.poisson_lambda(n, a, p, g, "exact"),
        "lambda_paper": theory.poisson_lambda(n, a, p, g, "paper"),
        "lambda_asymptotic": lam_asym,
        "limit_prob": theory.limit_probability(spec),
        "sc_bound": theory.stein_chen_bound(n, a, p, g, K_corr, L_t1),
    }


def sweep(config: ExperimentConfig, workers: int | None = None,
          on_point: Callable[[int, list[TrialRecord]], None] | None = None) -> list[SweepRow]:
    """One :func:`run_trials` per offset in ``config.A_grid``.

    Grid point ``k`` uses master seed ``derive_seed(master_seed, k)``.
    """
    if config.kind != "basis":
        raise ConfigurationError("sweep supports kind=basis only")
    grid = config.A_grid
    if not grid:
        raise ConfigurationError("A_grid must be nonempty")
    if list(grid) != sorted(grid):
        raise ConfigurationError("A_grid must be sorted ascending")
    if config.spec.h != 2:
        raise ConfigurationError("sweep compares against the h = 2 limit law; set h = 2")
    rows = []
    for k, A in enumerate(grid):
        spec = replace(config.spec, A=A)
        cfg = replace(config, spec=spec, A_grid=None, master_seed=derive_seed(config.master_seed, k))
        p = selection_probability(cfg)
        est, records = run_trials(cfg, workers)
        if on_point is not None:
            on_point(k, records)
        th = theory_row(spec, p, config.K_corr, config.L_t1)
        rows.append(SweepRow(A, spec.n, spec.alpha, spec.g, p, est, **th))
    return rows


# ---------------------------------------------------------------------------
# serialisation


def records_to_jsonl(records: Iterable[TrialRecord], include_timing: bool = False) -> str:
    return "".join(json.dumps(r.to_dict(include_timing)) + "\n" for r in records)


def records_to_csv(records: Iterable[TrialRecord], include_timing: bool = False) -> str:
    records = list(records)
    cols = ["trial_index", "derived_seed", "set_size", "X", "is_basis"]
    if include_timing:
        cols.append("wall_time_ms")
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in records:
        d = r.to_dict(include_timing)
        d["is_basis"] = "true" if d["is_basis"] else "false"
        w.writerow(d)
    return buf.getvalue()


def rows_to_csv(rows: Iterable[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({c: _fmt(row[c]) for c in columns})
    return buf.getvalue()


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v
