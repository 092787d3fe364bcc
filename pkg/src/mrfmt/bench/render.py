"""Deterministic SVG rendering of 2D scenes, search trees, and paths.

Palette (matching the sample-state convention used throughout the suite):
unvisited samples black, open green, closed yellow, forward-tree edges
blue, backward-tree edges purple, solution path red, obstacles gray.
Counterpart edges connect identical configurations and are omitted.
Element order is fixed so renders diff cleanly: obstacles, tree edges,
samples, path, endpoints.
"""

from __future__ import annotations

import numpy as np

from ..errors import RenderUnsupportedError
from ..multigraph import LayeredSampleSet
from ..planners import SearchTree, _CLOSED, _OPEN
from ..world import Aabb, ConvexPolygon, OccupancyGrid, PlanarChain
from .scenarios import Scenario

PALETTE = {
    "background": "#ffffff",
    "bounds": "#333333",
    "obstacle": "#9e9e9e",
    "unvisited": "#000000",
    "open": "#2e8b57",
    "closed": "#e6c229",
    "tree": "#1f77b4",
    "tree_backward": "#8c4bb8",
    "path": "#d62728",
    "chain": "#1f77b4",
}

_SAMPLE_CLASS = {0: "unvisited", 1: "open", 2: "closed"}


def _fmt(x: float) -> str:
    return f"{x:.6f}"


class _Canvas:
    """Maps world coordinates into a y-up SVG viewport."""

    def __init__(self, lo, hi, size: float = 640.0, margin: float = 10.0):
        self.lo = lo
        span = np.maximum(hi - lo, 1e-9)
        self.scale = (size - 2 * margin) / float(max(span[0], span[1]))
        self.margin = margin
        self.width = margin * 2 + span[0] * self.scale
        self.height = margin * 2 + span[1] * self.scale

    def pt(self, p) -> tuple[float, float]:
        x = self.margin + (p[0] - self.lo[0]) * self.scale
        y = self.height - (self.margin + (p[1] - self.lo[1]) * self.scale)
        return x, y


def _aggregate_states(layered: LayeredSampleSet, trees: list[SearchTree]) -> np.ndarray:
    """Final per-configuration state: closed beats open beats unvisited."""
    agg = np.zeros(layered.num_configs, dtype=int)
    for tree in trees:
        opened = (tree.state == _OPEN).any(axis=0)
        closed = (tree.state == _CLOSED).any(axis=0)
        agg = np.maximum(agg, np.where(closed, 2, np.where(opened, 1, 0)))
    return agg


def _obstacle_svg(ob, canvas: _Canvas) -> list[str]:
    color = PALETTE["obstacle"]
    if isinstance(ob, Aabb):
        x0, y0 = canvas.pt([ob.lower[0], ob.upper[1]])
        x1, y1 = canvas.pt([ob.upper[0], ob.lower[1]])
        return [
            f'<rect class="obstacle" x="{_fmt(x0)}" y="{_fmt(y0)}" '
            f'width="{_fmt(x1 - x0)}" height="{_fmt(y1 - y0)}" fill="{color}"/>'
        ]
    if isinstance(ob, ConvexPolygon):
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (canvas.pt(v) for v in ob.vertices))
        return [f'<polygon class="obstacle" points="{pts}" fill="{color}"/>']
    if isinstance(ob, OccupancyGrid):
        out = []
        nx, ny = ob.cells.shape
        for i in range(nx):
            for j in range(ny):
                if not ob.cells[i, j]:
                    continue
                lo = ob.origin + np.array([i, j]) * ob.cell_size
                hi = lo + ob.cell_size
                x0, y0 = canvas.pt([lo[0], hi[1]])
                x1, y1 = canvas.pt([hi[0], lo[1]])
                out.append(
                    f'<rect class="obstacle" x="{_fmt(x0)}" y="{_fmt(y0)}" '
                    f'width="{_fmt(x1 - x0)}" height="{_fmt(y1 - y0)}" fill="{color}"/>'
                )
        return out
    return []


def render_svg(
    scenario: Scenario,
    layered: LayeredSampleSet | None = None,
    trees: list[SearchTree] | None = None,
    path: list[np.ndarray] | None = None,
) -> str:
    """Render a scenario, and optionally its samples, trees, and path.

    Spaces project to their first two coordinates; chain robots instead
    draw forward-kinematics poses at the path waypoints. Raises
    RenderUnsupportedError when no planar projection exists.
    """
    trees = trees or []
    chain = scenario.world.robot if isinstance(scenario.world.robot, PlanarChain) else None
    if scenario.space.d > 3 and chain is None:
        raise RenderUnsupportedError(f"rendering unsupported for this space (d={scenario.space.d})")

    canvas = _Canvas(scenario.world.bounds_lower[:2], scenario.world.bounds_upper[:2])
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(canvas.width)}" '
        f'height="{_fmt(canvas.height)}" viewBox="0 0 {_fmt(canvas.width)} {_fmt(canvas.height)}">',
        f'<rect class="background" x="0" y="0" width="{_fmt(canvas.width)}" '
        f'height="{_fmt(canvas.height)}" fill="{PALETTE["background"]}"/>',
    ]
    x0, y0 = canvas.pt([scenario.world.bounds_lower[0], scenario.world.bounds_upper[1]])
    x1, y1 = canvas.pt([scenario.world.bounds_upper[0], scenario.world.bounds_lower[1]])
    parts.append(
        f'<rect class="bounds" x="{_fmt(x0)}" y="{_fmt(y0)}" width="{_fmt(x1 - x0)}" '
        f'height="{_fmt(y1 - y0)}" fill="none" stroke="{PALETTE["bounds"]}" stroke-width="1.5"/>'
    )
    for ob in scenario.world.obstacles:
        parts.extend(_obstacle_svg(ob, canvas))

    if chain is None:
        # Tree edges first so samples draw on top of them.
        for t_id, tree in enumerate(trees):
            color = PALETTE["tree"] if t_id == 0 else PALETTE["tree_backward"]
            cls = "tree" if t_id == 0 else "tree-backward"
            edges = []
            for node in tree.members():
                if node == tree.root:
                    continue
                parent = tree.parent_of(node)
                if parent.index == node.index:
                    continue  # counterpart edge: zero-length in configuration space
                edges.append((node.index, node.layer, parent.index))
            for child_i, _, parent_i in sorted(edges):
                ax, ay = canvas.pt(tree.layered.configs[parent_i][:2])
                bx, by = canvas.pt(tree.layered.configs[child_i][:2])
                parts.append(
                    f'<line class="{cls}" x1="{_fmt(ax)}" y1="{_fmt(ay)}" x2="{_fmt(bx)}" '
                    f'y2="{_fmt(by)}" stroke="{color}" stroke-width="1"/>'
                )
        if layered is not None:
            states = _aggregate_states(layered, trees)
            for i in range(layered.num_configs):
                cls = _SAMPLE_CLASS[int(states[i])]
                cx, cy = canvas.pt(layered.configs[i][:2])
                parts.append(
                    f'<circle class="sample-{cls}" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="2" '
                    f'fill="{PALETTE[cls]}"/>'
                )
        if path:
            pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (canvas.pt(q[:2]) for q in path))
            parts.append(
                f'<polyline class="path" points="{pts}" fill="none" '
                f'stroke="{PALETTE["path"]}" stroke-width="2.5"/>'
            )
    elif path:
        # Chain worlds: draw the arm pose at every waypoint plus the base trace.
        for q in path:
            pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (canvas.pt(p) for p in chain.joint_points(q)))
            parts.append(
                f'<polyline class="chain" points="{pts}" fill="none" '
                f'stroke="{PALETTE["chain"]}" stroke-width="1.5"/>'
            )
        base = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (canvas.pt(q[:2]) for q in path))
        parts.append(
            f'<polyline class="path" points="{base}" fill="none" '
            f'stroke="{PALETTE["path"]}" stroke-width="2.5"/>'
        )

    for cls, cfg in (("init", scenario.x_init), ("goal", scenario.goal.config)):
        cx, cy = canvas.pt(np.asarray(cfg)[:2])
        parts.append(
            f'<circle class="{cls}" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="4" fill="{PALETTE["path"]}" '
            f'stroke="{PALETTE["bounds"]}" stroke-width="1"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
