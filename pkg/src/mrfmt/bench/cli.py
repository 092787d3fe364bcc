"""Command-line benchmark front end.

    bench run --scenario corridor2d --planners fmt,mrfmt --samples 200,1000 \
        --layers 4 --schedule linear --seeds 50 --heuristic on \
        --timeout-ms 60000 --out results.csv [--svg-dir out/]
    bench scenarios [--export DIR]
    bench render --scenario corridor2d --planner mrfmt --samples 2000 \
        --seed 0 --out trial.svg

``--seeds`` takes either a count (``50`` means seeds 0..49) or an explicit
comma-separated list. Exit status is 0 on success and 1 on scenario or IO
errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..errors import QueryInCollisionError, RenderUnsupportedError, SamplingStarvedError
from ..planners import SearchTrace
from .render import render_svg
from .scenarios import Scenario, builtin_names, load_scenario, save_scenario, scenario_by_name
from .sweep import PLANNERS, SweepConfig, format_summary, run_sweep, run_trial, summarize, write_csv


def _resolve_scenario(name: str) -> Scenario:
    if name in builtin_names():
        return scenario_by_name(name)
    path = Path(name)
    if path.exists():
        return load_scenario(path)
    raise ValueError(f"no builtin scenario or file named {name!r}")


def _parse_seeds(text: str) -> list[int]:
    if "," in text:
        return [int(s) for s in text.split(",") if s]
    return list(range(int(text)))


def _parse_int_list(text: str) -> list[int]:
    return [int(s) for s in text.split(",") if s]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", required=True, help="builtin name or scenario JSON file")
    parser.add_argument("--layers", type=int, default=4)
    parser.add_argument("--schedule", choices=["linear", "exponential"], default="linear")
    parser.add_argument("--heuristic", choices=["on", "off"], default="on")
    parser.add_argument("--timeout-ms", type=float, default=60000.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bench", description="motion-planning benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a seeded sweep and write a CSV")
    _add_common(run)
    run.add_argument("--planners", default="fmt,mrfmt,bmrfmt", help="comma list of fmt,mrfmt,bmrfmt")
    run.add_argument("--samples", required=True, help="comma list of sample counts")
    run.add_argument("--seeds", default="50", help="seed count or comma list")
    run.add_argument("--out", required=True, help="CSV output path")
    run.add_argument("--svg-dir", default=None, help="also render every trial into this directory")

    scen = sub.add_parser("scenarios", help="list builtin scenarios")
    scen.add_argument("--export", default=None, help="write every builtin as JSON into this directory")

    render = sub.add_parser("render", help="replay one trial and write an SVG")
    _add_common(render)
    render.add_argument("--planner", choices=list(PLANNERS), default="mrfmt")
    render.add_argument("--samples", type=int, required=True)
    render.add_argument("--seed", type=int, default=0)
    render.add_argument("--out", required=True, help="SVG output path")
    return parser


def _cmd_run(args) -> int:
    scenario = _resolve_scenario(args.scenario)
    config = SweepConfig(
        scenario=scenario,
        planners=[p for p in args.planners.split(",") if p],
        sample_counts=_parse_int_list(args.samples),
        layers=args.layers,
        schedule_kind=args.schedule,
        seeds=_parse_seeds(args.seeds),
        heuristic=args.heuristic == "on",
        time_budget_ms=args.timeout_ms,
    )
    on_result = None
    if args.svg_dir is not None:
        svg_dir = Path(args.svg_dir)
        svg_dir.mkdir(parents=True, exist_ok=True)
        warned = [False]

        def on_result(scen, planner, n, seed, layered, result, trace):
            try:
                svg = render_svg(scen, layered, trace.trees, result.path)
            except RenderUnsupportedError as exc:
                if not warned[0]:
                    print(f"note: {exc}; skipping SVG output", file=sys.stderr)
                    warned[0] = True
                return
            (svg_dir / f"{planner}_n{n}_seed{seed}.svg").write_text(svg, encoding="utf-8")

    records = run_sweep(config, on_result=on_result)
    write_csv(records, args.out)
    print(format_summary(summarize(records)))
    print(f"wrote {len(records)} rows to {args.out}")
    return 0


def _cmd_scenarios(args) -> int:
    for name in builtin_names():
        scenario = scenario_by_name(name)
        robot = type(scenario.world.robot).__name__
        print(f"{name:<20} d={scenario.space.d:<3} robot={robot:<12} {scenario.notes}")
        if args.export is not None:
            out_dir = Path(args.export)
            out_dir.mkdir(parents=True, exist_ok=True)
            save_scenario(scenario, out_dir / f"{name}.json")
    if args.export is not None:
        print(f"exported {len(builtin_names())} scenario files to {args.export}")
    return 0


def _cmd_render(args) -> int:
    scenario = _resolve_scenario(args.scenario)
    trace = SearchTrace()
    record, layered, result = run_trial(
        scenario,
        args.planner,
        args.samples,
        args.seed,
        layers=args.layers,
        schedule_kind=args.schedule,
        heuristic=args.heuristic == "on",
        time_budget_ms=args.timeout_ms,
        trace=trace,
    )
    svg = render_svg(scenario, layered, trace.trees, result.path)
    Path(args.out).write_text(svg, encoding="utf-8")
    print(f"{record.status}: cost={record.cost:.4f} edges={record.edge_evaluations} -> {args.out}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "scenarios":
            return _cmd_scenarios(args)
        return _cmd_render(args)
    except (ValueError, OSError, QueryInCollisionError, SamplingStarvedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
