"""Seeded benchmark sweeps, CSV emission, and summary statistics.

One trial is a (planner, sample count, seed) triple. Trials with the same
seed and sample count share the exact same configuration array across
planners, so comparisons are paired. Wall time excludes sampling and graph
construction, which a separate column records.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np
from scipy.stats import binom

from ..multigraph import LayerSchedule, build
from ..planners import (
    PlanRequest,
    SearchTrace,
    plan_bmrfmt,
    plan_fmt,
    plan_mrfmt,
)
from .scenarios import Scenario

PLANNERS = ("fmt", "mrfmt", "bmrfmt")

_PLAN_FUNCS = {"fmt": plan_fmt, "mrfmt": plan_mrfmt, "bmrfmt": plan_bmrfmt}


@dataclass
class SweepConfig:
    """One sweep: scenario x planners x sample counts x seeds."""

    scenario: Scenario
    planners: list[str]
    sample_counts: list[int]
    layers: int = 4
    schedule_kind: str = "linear"
    seeds: list[int] | None = None
    heuristic: bool = True
    time_budget_ms: float | None = 60000.0

    def __post_init__(self) -> None:
        if self.seeds is None:
            self.seeds = list(range(50))
        if not self.planners or not self.sample_counts or not self.seeds:
            raise ValueError("planners, sample_counts, and seeds must be nonempty")
        for p in self.planners:
            if p not in PLANNERS:
                raise ValueError(f"unknown planner {p!r}; known: {', '.join(PLANNERS)}")
        if any(n <= 0 for n in self.sample_counts):
            raise ValueError("sample counts must be positive")
        if self.schedule_kind not in ("linear", "exponential"):
            raise ValueError(f"unknown schedule kind {self.schedule_kind!r}")
        if self.layers < 1:
            raise ValueError("layers must be >= 1")


@dataclass
class TrialRecord:
    """One CSV row; field order is the column order."""

    scenario: str
    planner: str
    n_samples: int
    layers: int
    schedule: str
    seed: int
    status: str
    cost: float  # inf encodes failure and is written as an empty cell
    wall_time_ms: float
    edge_evaluations: int
    collision_point_checks: int
    neighbor_queries: int
    layer_switches: int
    build_time_ms: float


def _schedule_for(planner: str, n: int, layers: int, kind: str) -> LayerSchedule:
    if planner == "fmt" or layers == 1:
        return LayerSchedule.linear(n, 1)
    if kind == "exponential":
        return LayerSchedule.exponential(n, layers)
    return LayerSchedule.linear(n, layers)


def run_trial(
    scenario: Scenario,
    planner: str,
    n: int,
    seed: int,
    layers: int = 4,
    schedule_kind: str = "linear",
    heuristic: bool = True,
    time_budget_ms: float | None = 60000.0,
    trace: SearchTrace | None = None,
):
    """Build the layered set for one seed and run one planner on it.

    Returns (record, layered, result). Identical (n, seed) pairs rebuild
    identical sample arrays regardless of the planner, keeping comparisons
    paired.
    """
    schedule = _schedule_for(planner, n, layers, schedule_kind)
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    layered = build(
        scenario.world,
        scenario.space,
        schedule,
        scenario.neighbor_spec,
        scenario.x_init,
        scenario.goal.config,
        rng,
    )
    build_ms = (time.perf_counter() - t0) * 1e3
    request = PlanRequest(
        world=scenario.world,
        space=scenario.space,
        x_init=scenario.x_init,
        goal=scenario.goal,
        time_budget_ms=time_budget_ms,
        heuristic=heuristic,
    )
    result = _PLAN_FUNCS[planner](request, layered, trace=trace)
    record = TrialRecord(
        scenario=scenario.name,
        planner=planner,
        n_samples=n,
        layers=schedule.L,
        schedule=schedule.kind,
        seed=seed,
        status=result.status.value,
        cost=result.cost,
        wall_time_ms=result.stats.wall_time_ms,
        edge_evaluations=result.stats.edge_evaluations,
        collision_point_checks=result.stats.collision_point_checks,
        neighbor_queries=result.stats.neighbor_queries,
        layer_switches=result.stats.layer_switch_count,
        build_time_ms=build_ms,
    )
    return record, layered, result


def run_sweep(config: SweepConfig, on_result=None) -> list[TrialRecord]:
    """Run every (planner, N, seed) trial and return sorted records.

    ``on_result(scenario, planner, n, seed, layered, result, trace)`` is
    called after each trial when given; it sees the full planner output,
    not just the record row.
    """
    records: list[TrialRecord] = []
    for planner in config.planners:
        for n in config.sample_counts:
            for seed in config.seeds:
                trace = SearchTrace() if on_result is not None else None
                record, layered, result = run_trial(
                    config.scenario,
                    planner,
                    n,
                    seed,
                    layers=config.layers,
                    schedule_kind=config.schedule_kind,
                    heuristic=config.heuristic,
                    time_budget_ms=config.time_budget_ms,
                    trace=trace,
                )
                records.append(record)
                if on_result is not None:
                    on_result(config.scenario, planner, n, seed, layered, result, trace)
    records.sort(key=lambda r: (r.planner, r.n_samples, r.seed))
    return records


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

CSV_COLUMNS = tuple(f.name for f in fields(TrialRecord))


def _format_cell(name: str, value) -> str:
    if name == "cost" and math.isinf(value):
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def records_to_csv(records: list[TrialRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([_format_cell(name, getattr(r, name)) for name in CSV_COLUMNS])
    return buf.getvalue()


def write_csv(records: list[TrialRecord], path: str | Path) -> None:
    Path(path).write_text(records_to_csv(records), encoding="utf-8")


# ---------------------------------------------------------------------------
# Summaries
# ---------------------------------------------------------------------------


@dataclass
class SummaryRow:
    planner: str
    n_samples: int
    trials: int
    success_rate: float
    success_lo: float
    success_hi: float
    median_cost: float
    cost_lo: float
    cost_hi: float
    median_time_ms: float
    median_build_ms: float
    median_edge_evaluations: float
    median_collision_point_checks: float
    median_neighbor_queries: float
    median_layer_switches: float


def wilson_interval(successes: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if n == 0:
        return 0.0, 1.0
    phat = successes / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == n else min(1.0, center + half)
    return lo, hi


def median_order_interval(values: list[float], confidence: float = 0.95) -> tuple[float, float, float]:
    """Median plus a nonparametric confidence interval from order statistics.

    The interval endpoints are the order statistics whose ranks bound the
    median with the requested coverage under a Binomial(n, 1/2) count.
    """
    v = sorted(values)
    n = len(v)
    med = float(np.median(v))
    if n == 1:
        return med, v[0], v[0]
    alpha = 1.0 - confidence
    lo_rank = int(binom.ppf(alpha / 2.0, n, 0.5))
    hi_rank = int(binom.ppf(1.0 - alpha / 2.0, n, 0.5))
    lo_rank = min(max(lo_rank, 0), n - 1)
    hi_rank = min(max(hi_rank, lo_rank), n - 1)
    return med, v[lo_rank], v[hi_rank]


def summarize(records: list[TrialRecord]) -> list[SummaryRow]:
    """Per-(planner, N) aggregates; failed trials contribute infinite cost."""
    if not records:
        raise ValueError("cannot summarize an empty record list")
    groups: dict[tuple[str, int], list[TrialRecord]] = {}
    for r in sorted(records, key=lambda r: (r.planner, r.n_samples, r.seed)):
        groups.setdefault((r.planner, r.n_samples), []).append(r)
    rows = []
    for (planner, n), rs in sorted(groups.items()):
        successes = sum(1 for r in rs if r.status == "Solved")
        s_lo, s_hi = wilson_interval(successes, len(rs))
        costs = [r.cost if r.status == "Solved" else math.inf for r in rs]
        med_cost, c_lo, c_hi = median_order_interval(costs)
        rows.append(
            SummaryRow(
                planner=planner,
                n_samples=n,
                trials=len(rs),
                success_rate=successes / len(rs),
                success_lo=s_lo,
                success_hi=s_hi,
                median_cost=med_cost,
                cost_lo=c_lo,
                cost_hi=c_hi,
                median_time_ms=float(np.median([r.wall_time_ms for r in rs])),
                median_build_ms=float(np.median([r.build_time_ms for r in rs])),
                median_edge_evaluations=float(np.median([r.edge_evaluations for r in rs])),
                median_collision_point_checks=float(np.median([r.collision_point_checks for r in rs])),
                median_neighbor_queries=float(np.median([r.neighbor_queries for r in rs])),
                median_layer_switches=float(np.median([r.layer_switches for r in rs])),
            )
        )
    return rows


def format_summary(rows: list[SummaryRow]) -> str:
    header = (
        f"{'planner':<8} {'N':>7} {'succ':>6} {'succ 95% CI':>15} "
        f"{'med cost':>10} {'cost 95% CI':>19} {'med ms':>9} {'edges':>8} {'queries':>8}"
    )
    lines = [header, "-" * len(header)]
    for r in rows:
        cost = "inf" if math.isinf(r.median_cost) else f"{r.median_cost:.4f}"
        c_lo = "inf" if math.isinf(r.cost_lo) else f"{r.cost_lo:.4f}"
        c_hi = "inf" if math.isinf(r.cost_hi) else f"{r.cost_hi:.4f}"
        lines.append(
            f"{r.planner:<8} {r.n_samples:>7} {r.success_rate:>6.2f} "
            f"[{r.success_lo:>5.2f}, {r.success_hi:>5.2f}] "
            f"{cost:>10} [{c_lo:>8}, {c_hi:>8}] "
            f"{r.median_time_ms:>9.1f} {r.median_edge_evaluations:>8.0f} {r.median_neighbor_queries:>8.0f}"
        )
    return "\n".join(lines)
