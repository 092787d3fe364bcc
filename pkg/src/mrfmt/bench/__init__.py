"""Benchmark harness: scenarios, seeded sweeps, CSV metrics, SVG rendering."""

from .scenarios import (
    Scenario,
    builtin_scenarios,
    bugtrap_se2,
    bugtrap_se2_fixed_radius,
    corridor2d,
    empty2d,
    links_planar,
    load_scenario,
    random_boxes,
    save_scenario,
    scenario_by_name,
)
from .sweep import SweepConfig, TrialRecord, format_summary, run_sweep, run_trial, summarize, write_csv
from .render import PALETTE, render_svg

__all__ = [
    "Scenario",
    "SweepConfig",
    "TrialRecord",
    "PALETTE",
    "builtin_scenarios",
    "bugtrap_se2",
    "bugtrap_se2_fixed_radius",
    "corridor2d",
    "empty2d",
    "format_summary",
    "links_planar",
    "load_scenario",
    "random_boxes",
    "render_svg",
    "run_sweep",
    "run_trial",
    "save_scenario",
    "scenario_by_name",
    "summarize",
    "write_csv",
]
