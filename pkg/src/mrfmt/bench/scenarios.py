"""Built-in planning scenarios and the JSON scenario file format.

Every scenario bundles a space, a world, the query endpoints, and the
default connection rule. The JSON schema mirrors the Scenario fields
one-for-one so external tools can replay the exact same problems; all
built-ins can be exported with ``save_scenario``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..cspace import TWO_PI, SpaceSpec, Topology
from ..multigraph import NeighborSpec, connection_radius
from ..planners import GoalSpec
from ..world import (
    Aabb,
    ConvexPolygon,
    DiscRobot,
    Obstacle,
    OccupancyGrid,
    PlanarChain,
    PointRobot,
    PolygonBody,
    RobotModel,
    WorldModel,
)


@dataclass
class Scenario:
    """A complete planning problem plus its benchmark defaults."""

    name: str
    space: SpaceSpec
    world: WorldModel
    x_init: np.ndarray
    goal: GoalSpec
    neighbor_spec: NeighborSpec
    notes: str = ""

    def __post_init__(self) -> None:
        self.x_init = self.space.normalize(np.asarray(self.x_init, dtype=float))
        if not self.space.contains(self.x_init):
            raise ValueError(f"scenario {self.name}: x_init outside space bounds")
        if not self.world.is_free(self.x_init):
            raise ValueError(f"scenario {self.name}: x_init in collision")
        goal_cfg = self.space.normalize(self.goal.config)
        if not self.world.is_free(goal_cfg):
            raise ValueError(f"scenario {self.name}: goal configuration in collision")

    @property
    def eps(self) -> float:
        return self.world.eps


# ---------------------------------------------------------------------------
# Built-in worlds
# ---------------------------------------------------------------------------


def corridor2d(width: float = 0.1) -> Scenario:
    """Unit square split by a full-height wall with one gap of the given width.

    The wall is 0.1 thick around x = 0.5; the gap is centered vertically.
    """
    if not 0.0 < width < 0.9:
        raise ValueError("corridor width must be in (0, 0.9)")
    y0, y1 = 0.5 - width / 2.0, 0.5 + width / 2.0
    world = WorldModel(
        bounds_lower=np.zeros(2),
        bounds_upper=np.ones(2),
        obstacles=[
            Aabb(np.array([0.45, 0.0]), np.array([0.55, y0])),
            Aabb(np.array([0.45, y1]), np.array([0.55, 1.0])),
        ],
        robot=PointRobot(),
        eps=min(0.1, width) / 2.0,
    )
    return Scenario(
        name=f"corridor2d({width:g})",
        space=SpaceSpec.euclidean(np.zeros(2), np.ones(2)),
        world=world,
        x_init=np.array([0.1, 0.5]),
        goal=GoalSpec.exact(np.array([0.9, 0.5])),
        neighbor_spec=NeighborSpec.rdisk(),
        notes="narrow-gap wall crossing; gap width sets the passage difficulty",
    )


def empty2d() -> Scenario:
    """Obstacle-free unit square with a diagonal query; optimum is 0.8*sqrt(2)."""
    world = WorldModel(np.zeros(2), np.ones(2), [], PointRobot(), eps=0.05)
    return Scenario(
        name="empty2d",
        space=SpaceSpec.euclidean(np.zeros(2), np.ones(2)),
        world=world,
        x_init=np.array([0.1, 0.1]),
        goal=GoalSpec.exact(np.array([0.9, 0.9])),
        neighbor_spec=NeighborSpec.rdisk(),
        notes="optimality baseline; straight-line optimum is 0.8*sqrt(2)",
    )


def bugtrap_se2() -> Scenario:
    """C-shaped trap around the start; the mouth sits below the centerline.

    A small rectangular rigid body must leave the trap through a 0.04-wide
    opening in the right wall and reach a goal pose outside. The opening
    barely clears the body, so coarse sample layers rarely thread it.
    """
    t = 0.03  # wall thickness
    mouth_lo, mouth_hi = 0.385, 0.425
    walls = [
        Aabb(np.array([0.30, 0.32]), np.array([0.30 + t, 0.68])),   # left
        Aabb(np.array([0.30, 0.32]), np.array([0.62, 0.32 + t])),   # bottom
        Aabb(np.array([0.30, 0.68 - t]), np.array([0.62, 0.68])),   # top
        Aabb(np.array([0.62 - t, 0.32]), np.array([0.62, mouth_lo])),  # right below mouth
        Aabb(np.array([0.62 - t, mouth_hi]), np.array([0.62, 0.68])),  # right above mouth
    ]
    body = PolygonBody(np.array([[-0.03, -0.015], [0.03, -0.015], [0.03, 0.015], [-0.03, 0.015]]))
    world = WorldModel(np.zeros(2), np.ones(2), walls, body, eps=t / 2.0)
    return Scenario(
        name="bugtrap_se2",
        space=SpaceSpec.se2(np.zeros(2), np.ones(2)),
        world=world,
        x_init=np.array([0.45, 0.5, 0.0]),
        goal=GoalSpec.exact(np.array([0.85, 0.5, 0.0])),
        neighbor_spec=NeighborSpec.rdisk(),
        notes="start enclosed by a C-shaped trap; straight init-goal motion is blocked",
    )


def bugtrap_se2_fixed_radius(n_ref: int = 5000) -> Scenario:
    """Bug trap with one shared connection radius across every layer.

    The radius comes from the densest layer's size, so the densest layer of
    a multi-resolution build matches the plain single-resolution graph;
    this is the configuration the layer-schedule comparison uses.
    """
    scenario = bugtrap_se2()
    r = connection_radius(
        NeighborSpec.rdisk(1.1), n_ref + 2, scenario.space.d, scenario.space.metric_measure()
    )
    scenario.neighbor_spec = NeighborSpec.fixed_radius(r)
    return scenario


def random_boxes(d: int = 2, count: int = 12, size: float = 0.2, layout_seed: int = 7) -> Scenario:
    """Axis-aligned boxes scattered in a unit d-cube, point robot.

    Box placement comes from a fixed layout seed so the scenario is a
    deterministic function of its parameters; boxes keep a small clearance
    around the init and goal corners.
    """
    if d < 2:
        raise ValueError("random_boxes needs d >= 2")
    rng = np.random.default_rng(layout_seed)
    x_init = np.full(d, 0.05)
    x_goal = np.full(d, 0.95)
    obstacles: list[Obstacle] = []
    attempts = 0
    while len(obstacles) < count and attempts < 1000 * count:
        attempts += 1
        center = rng.uniform(0.1, 0.9, size=d)
        lo = np.clip(center - size / 2.0, 0.0, 1.0)
        hi = np.clip(center + size / 2.0, 0.0, 1.0)
        box = Aabb(lo, hi)
        if box.collides_disc(x_init, 0.05) or box.collides_disc(x_goal, 0.05):
            continue
        obstacles.append(box)
    if len(obstacles) < count:
        raise ValueError("random_boxes: could not place the requested boxes")
    world = WorldModel(np.zeros(d), np.ones(d), obstacles, PointRobot(), eps=size / 4.0)
    return Scenario(
        name=f"random_boxes({d},{count},{size:g})",
        space=SpaceSpec.euclidean(np.zeros(d), np.ones(d)),
        world=world,
        x_init=x_init,
        goal=GoalSpec.exact(x_goal),
        neighbor_spec=NeighborSpec.rdisk(),
        notes="clutter world with per-dimension interval collision logic",
    )


def links_planar(k: int = 6) -> Scenario:
    """A k-link chain on a mobile base crossing a wall through a gap.

    The space is (2+k)-dimensional: base position plus cumulative joint
    angles weighted by the chain length remaining after each joint. The
    arm starts and ends folded upward on opposite sides of the wall; the
    gap is shorter than the arm, so crossing requires sweeping the arm
    near horizontal while the base passes through.
    """
    if not 1 <= k <= 12:
        raise ValueError("links_planar supports 1..12 links")
    reach = 0.6  # total arm length, independent of the link count
    lengths = np.full(k, reach / k)
    reach_weights = np.array([reach * (k - i) / k for i in range(k)])
    space = SpaceSpec(
        lower=np.concatenate([np.zeros(2), np.zeros(k)]),
        upper=np.concatenate([np.ones(2), np.full(k, TWO_PI)]),
        topology=(Topology.EUCLIDEAN,) * 2 + (Topology.ANGULAR,) * k,
        weight=np.concatenate([np.ones(2), reach_weights]),
    )
    obstacles = [
        Aabb(np.array([0.45, 0.0]), np.array([0.55, 0.35])),
        Aabb(np.array([0.45, 0.65]), np.array([0.55, 1.0])),
    ]
    chain = PlanarChain(lengths)
    world = WorldModel(np.zeros(2), np.ones(2), obstacles, chain, eps=0.025)
    up = np.zeros(k)
    up[0] = math.pi / 2.0  # arm folded straight up
    x_init = np.concatenate([[0.2, 0.2], up])
    x_goal = np.concatenate([[0.8, 0.2], up])
    return Scenario(
        name=f"links_planar({k})",
        space=space,
        world=world,
        x_init=x_init,
        goal=GoalSpec.exact(x_goal),
        neighbor_spec=NeighborSpec.knearest(1.0),
        notes="mobile-base chain threading a wall gap shorter than its reach",
    )


_BUILTINS = {
    "corridor2d": lambda: corridor2d(0.1),
    "corridor2d_narrow": lambda: corridor2d(0.05),
    "empty2d": empty2d,
    "bugtrap_se2": bugtrap_se2,
    "random_boxes2": lambda: random_boxes(2),
    "links_planar6": lambda: links_planar(6),
}


def builtin_scenarios() -> list[Scenario]:
    """All built-in scenarios at their canonical parameters."""
    return [make() for make in _BUILTINS.values()]


def scenario_by_name(name: str) -> Scenario:
    if name not in _BUILTINS:
        raise ValueError(f"unknown scenario {name!r}; known: {', '.join(_BUILTINS)}")
    return _BUILTINS[name]()


def builtin_names() -> list[str]:
    return list(_BUILTINS)


# ---------------------------------------------------------------------------
# JSON scenario files
# ---------------------------------------------------------------------------


def _space_to_dict(space: SpaceSpec) -> dict:
    return {
        "lower": space.lower.tolist(),
        "upper": space.upper.tolist(),
        "topology": [t.value for t in space.topology],
        "weight": space.weight.tolist(),
    }


def _space_from_dict(d: dict) -> SpaceSpec:
    topo = tuple(Topology(t) for t in d["topology"])
    return SpaceSpec(np.array(d["lower"]), np.array(d["upper"]), topo, np.array(d["weight"]))


def _obstacle_to_dict(ob: Obstacle) -> dict:
    if isinstance(ob, Aabb):
        return {"type": "aabb", "lower": ob.lower.tolist(), "upper": ob.upper.tolist()}
    if isinstance(ob, ConvexPolygon):
        return {"type": "convex_polygon", "vertices": ob.vertices.tolist()}
    if isinstance(ob, OccupancyGrid):
        return {
            "type": "occupancy_grid",
            "origin": ob.origin.tolist(),
            "cell_size": ob.cell_size,
            "cells": ob.cells.astype(int).tolist(),
        }
    raise TypeError(f"unsupported obstacle {type(ob).__name__}")


def _obstacle_from_dict(d: dict) -> Obstacle:
    kind = d["type"]
    if kind == "aabb":
        return Aabb(np.array(d["lower"]), np.array(d["upper"]))
    if kind == "convex_polygon":
        return ConvexPolygon(np.array(d["vertices"]))
    if kind == "occupancy_grid":
        return OccupancyGrid(np.array(d["origin"]), float(d["cell_size"]), np.array(d["cells"], dtype=bool))
    raise ValueError(f"unknown obstacle type {kind!r}")


def _robot_to_dict(robot: RobotModel) -> dict:
    if isinstance(robot, PointRobot):
        return {"type": "point"}
    if isinstance(robot, DiscRobot):
        return {"type": "disc", "radius": robot.radius}
    if isinstance(robot, PolygonBody):
        return {"type": "polygon_body", "vertices": robot.vertices.tolist()}
    if isinstance(robot, PlanarChain):
        return {
            "type": "planar_chain",
            "link_lengths": robot.link_lengths.tolist(),
            "base_xy": None if robot.base_xy is None else robot.base_xy.tolist(),
            "link_radius": robot.link_radius,
        }
    raise TypeError(f"unsupported robot {type(robot).__name__}")


def _robot_from_dict(d: dict) -> RobotModel:
    kind = d["type"]
    if kind == "point":
        return PointRobot()
    if kind == "disc":
        return DiscRobot(float(d["radius"]))
    if kind == "polygon_body":
        return PolygonBody(np.array(d["vertices"]))
    if kind == "planar_chain":
        base = d.get("base_xy")
        return PlanarChain(
            np.array(d["link_lengths"]),
            None if base is None else np.array(base),
            float(d.get("link_radius", 0.0)),
        )
    raise ValueError(f"unknown robot type {kind!r}")


def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "name": scenario.name,
        "space": _space_to_dict(scenario.space),
        "world": {
            "bounds_lower": scenario.world.bounds_lower.tolist(),
            "bounds_upper": scenario.world.bounds_upper.tolist(),
            "obstacles": [_obstacle_to_dict(ob) for ob in scenario.world.obstacles],
            "robot": _robot_to_dict(scenario.world.robot),
        },
        "x_init": scenario.x_init.tolist(),
        "goal": {"config": scenario.goal.config.tolist(), "radius": scenario.goal.radius},
        "eps": scenario.world.eps,
        "neighbor": {"kind": scenario.neighbor_spec.kind, "value": scenario.neighbor_spec.value},
        "notes": scenario.notes,
    }


def scenario_from_dict(d: dict) -> Scenario:
    for field_name in ("name", "space", "world", "x_init", "goal", "eps", "neighbor"):
        if field_name not in d:
            raise ValueError(f"scenario file missing field {field_name!r}")
    w = d["world"]
    world = WorldModel(
        np.array(w["bounds_lower"]),
        np.array(w["bounds_upper"]),
        [_obstacle_from_dict(ob) for ob in w["obstacles"]],
        _robot_from_dict(w["robot"]),
        eps=float(d["eps"]),
    )
    goal = GoalSpec(np.array(d["goal"]["config"]), float(d["goal"].get("radius", 0.0)))
    return Scenario(
        name=d["name"],
        space=_space_from_dict(d["space"]),
        world=world,
        x_init=np.array(d["x_init"]),
        goal=goal,
        neighbor_spec=NeighborSpec(d["neighbor"]["kind"], float(d["neighbor"]["value"])),
        notes=d.get("notes", ""),
    )


def save_scenario(scenario: Scenario, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(scenario), indent=2) + "\n", encoding="utf-8")


def load_scenario(path: str | Path) -> Scenario:
    return scenario_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
