"""Multi-resolution layered sample sets and their neighbor relation.

N uniform free-space samples are sliced into L nested layers by a strictly
increasing threshold sequence; layer l consists of the first n_l samples
plus the init and goal configurations, which belong to every layer. Nodes
at adjacent layers that share a configuration are linked by zero-cost
counterpart edges; same-layer nodes connect within a per-layer radius (or
k-nearest count) derived from the layer size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy.spatial import cKDTree

from .cspace import Config, SpaceSpec
from .errors import QueryInCollisionError, SamplingStarvedError
from .world import WorldModel


class NodeId(NamedTuple):
    """A sample at one sparsity level; compares lexicographically."""

    index: int
    layer: int


class EdgeKind(Enum):
    METRIC = "metric"
    COUNTERPART = "counterpart"


class Neighbor(NamedTuple):
    node: NodeId
    cost: float
    kind: EdgeKind


# ---------------------------------------------------------------------------
# Layer schedules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LayerSchedule:
    """Strictly increasing layer-size thresholds n_1 < ... < n_L = N."""

    thresholds: tuple[int, ...]
    kind: str = "explicit"

    def __post_init__(self) -> None:
        t = self.thresholds
        if not t or any(int(x) != x for x in t):
            raise ValueError("thresholds must be positive integers")
        if t[0] < 1 or any(t[i] >= t[i + 1] for i in range(len(t) - 1)):
            raise ValueError("thresholds must be strictly increasing and positive")
        if 4 * len(t) > t[-1]:
            raise ValueError(f"need L <= N/4, got L={len(t)}, N={t[-1]}")
        if self.kind == "linear" and t != self._linear_thresholds(t[-1], len(t)):
            raise ValueError("thresholds do not follow the linear rule")
        if self.kind == "exponential" and t != self._exponential_thresholds(t[-1], len(t)):
            raise ValueError("thresholds do not follow the exponential rule")
        if self.kind not in ("linear", "exponential", "explicit"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")

    @property
    def L(self) -> int:
        return len(self.thresholds)

    @property
    def N(self) -> int:
        return self.thresholds[-1]

    @staticmethod
    def _linear_thresholds(n: int, layers: int) -> tuple[int, ...]:
        return tuple(l * n // layers for l in range(1, layers + 1))

    @staticmethod
    def _exponential_thresholds(n: int, layers: int) -> tuple[int, ...]:
        return tuple(n // 2 ** (layers - l) for l in range(1, layers + 1))

    @classmethod
    def linear(cls, n: int, layers: int) -> "LayerSchedule":
        """Layer sizes floor(l*N/L); layer density grows linearly."""
        return cls(cls._linear_thresholds(n, layers), "linear")

    @classmethod
    def exponential(cls, n: int, layers: int) -> "LayerSchedule":
        """Layer sizes floor(N / 2^(L-l)); each layer doubles the last."""
        return cls(cls._exponential_thresholds(n, layers), "exponential")

    @classmethod
    def explicit(cls, thresholds) -> "LayerSchedule":
        return cls(tuple(int(x) for x in thresholds), "explicit")


# ---------------------------------------------------------------------------
# Connection rules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NeighborSpec:
    """Same-layer connection rule: r-disk, k-nearest, or a fixed radius."""

    kind: str
    value: float

    def __post_init__(self) -> None:
        if self.kind not in ("rdisk", "knearest", "fixed_radius"):
            raise ValueError(f"unknown neighbor rule {self.kind!r}")
        if self.kind == "rdisk" and self.value <= 1.0:
            raise ValueError("r-disk multiplier must be strictly above 1")
        if self.value <= 0.0:
            raise ValueError("neighbor rule value must be positive")

    @classmethod
    def rdisk(cls, multiplier: float = 1.1) -> "NeighborSpec":
        return cls("rdisk", multiplier)

    @classmethod
    def knearest(cls, multiplier: float = 1.0) -> "NeighborSpec":
        return cls("knearest", multiplier)

    @classmethod
    def fixed_radius(cls, radius: float) -> "NeighborSpec":
        return cls("fixed_radius", radius)


def unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def connection_radius(spec: NeighborSpec, n: int, d: int, measure: float):
    """Per-layer connection rule for a layer of n samples.

    Returns the shrinking radius multiplier*2*(1/d)^(1/d)*(measure/zeta_d)^(1/d)
    * (log n / n)^(1/d) for r-disk graphs, the given radius for fixed-radius
    graphs, and the integer neighbor count ceil(multiplier*e*(1+1/d)*log n)
    for k-nearest graphs.
    """
    if n < 2:
        raise ValueError("need at least 2 samples per layer")
    if spec.kind == "fixed_radius":
        return spec.value
    if spec.kind == "knearest":
        return int(math.ceil(spec.value * math.e * (1.0 + 1.0 / d) * math.log(n)))
    gamma = spec.value * 2.0 * (1.0 / d) ** (1.0 / d) * (measure / unit_ball_volume(d)) ** (1.0 / d)
    return gamma * (math.log(n) / n) ** (1.0 / d)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def sample_free(
    world: WorldModel,
    space: SpaceSpec,
    n: int,
    rng: np.random.Generator,
    max_attempts: int | None = None,
) -> tuple[np.ndarray, int]:
    """Rejection-sample n collision-free configurations.

    Returns the (n, d) sample array and the rejection count. Raises
    SamplingStarvedError once the attempt budget (default 1000*n) runs out,
    which signals a degenerate world rather than bad luck.
    """
    if n < 1:
        raise ValueError("need n >= 1 samples")
    budget = 1000 * n if max_attempts is None else max_attempts
    out = np.empty((n, space.d))
    kept = 0
    rejected = 0
    drawn = 0
    while drawn < budget:
        chunk = min(max(64, n - kept), budget - drawn)
        draws = rng.uniform(space.lower, space.upper, size=(chunk, space.d))
        drawn += chunk
        free_idx = np.nonzero(world.is_free_batch(draws))[0]
        take = min(len(free_idx), n - kept)
        if take:
            out[kept : kept + take] = draws[free_idx[:take]]
            kept += take
        if kept == n:
            # rejections among the draws up to and including the last one kept
            rejected += int(free_idx[take - 1]) + 1 - take
            return out, rejected
        rejected += chunk - len(free_idx)
    raise SamplingStarvedError(
        f"free-space sampling starved: {kept}/{n} samples after {budget} attempts"
    )


# ---------------------------------------------------------------------------
# Layered sample set
# ---------------------------------------------------------------------------


def _embed(space: SpaceSpec, pts: np.ndarray) -> np.ndarray:
    """Map configurations to a Euclidean proxy space for the kd-tree.

    Euclidean dimensions are scaled by their weight; angular dimensions map
    to a weighted circle (cos, sin), whose chord never exceeds the arc, so a
    radius query in the proxy space returns a superset of the true r-ball.
    """
    cols = []
    for i, ang in enumerate(space._angular):
        w = space.weight[i]
        if ang:
            cols.append(w * np.cos(pts[:, i]))
            cols.append(w * np.sin(pts[:, i]))
        else:
            cols.append(w * pts[:, i])
    return np.column_stack(cols)


class LayeredSampleSet:
    """N+2 shared configurations sliced into L nested resolution layers.

    Immutable after :func:`build`; neighbor queries are read-only and safe
    to share across planner runs. Indices N and N+1 are the init and goal
    configurations and belong to every layer.
    """

    def __init__(
        self,
        space: SpaceSpec,
        configs: np.ndarray,
        schedule: LayerSchedule,
        neighbor_spec: NeighborSpec,
        rejections: int = 0,
    ):
        self.space = space
        self.configs = configs
        self.schedule = schedule
        self.neighbor_spec = neighbor_spec
        self.rejections = rejections
        n_free = schedule.N
        if configs.shape != (n_free + 2, space.d):
            raise ValueError("config array must hold N free samples plus init and goal")
        d = space.d
        measure = space.metric_measure()
        # Radii use the effective layer size n_l + 2 (init and goal included).
        values = [connection_radius(neighbor_spec, n_l + 2, d, measure) for n_l in schedule.thresholds]
        if neighbor_spec.kind == "knearest":
            self.layer_ks = tuple(int(v) for v in values)
            self.layer_radii = None
        else:
            self.layer_radii = tuple(float(v) for v in values)
            self.layer_ks = None
        self._embedded = _embed(space, configs)
        self._tree = cKDTree(self._embedded)

    # -- indices -----------------------------------------------------------

    @property
    def num_free(self) -> int:
        return self.schedule.N

    @property
    def num_configs(self) -> int:
        return self.schedule.N + 2

    @property
    def init_index(self) -> int:
        return self.schedule.N

    @property
    def goal_index(self) -> int:
        return self.schedule.N + 1

    @property
    def init_node(self) -> NodeId:
        return NodeId(self.init_index, 1)

    @property
    def goal_node(self) -> NodeId:
        return NodeId(self.goal_index, 1)

    def layer_size(self, layer: int) -> int:
        return self.schedule.thresholds[layer - 1]

    def in_layer(self, index: int, layer: int) -> bool:
        return index >= self.num_free or index < self.layer_size(layer)

    def config(self, node: NodeId) -> Config:
        return self.configs[node.index]

    # -- neighbor relation ---------------------------------------------------

    def counterparts(self, node: NodeId) -> list[NodeId]:
        """Same-configuration nodes at adjacent layers, sparser first."""
        i, l = node
        out = []
        if l > 1 and self.in_layer(i, l - 1):
            out.append(NodeId(i, l - 1))
        if l < self.schedule.L:
            out.append(NodeId(i, l + 1))
        return out

    def metric_neighbors(self, node: NodeId) -> tuple[np.ndarray, np.ndarray]:
        """Ascending same-layer neighbor indices of ``node`` and their distances."""
        i, l = node
        if not self.in_layer(i, l):
            raise ValueError(f"{node} is not a member of layer {l}")
        n_l = self.layer_size(l)
        q = self.configs[i]
        if self.layer_ks is not None:
            members = np.concatenate([np.arange(n_l), [self.init_index, self.goal_index]])
            members = members[members != i]
            dists = self.space.distance_many(q, self.configs[members])
            k = min(self.layer_ks[l - 1], len(members))
            order = np.lexsort((members, dists))[:k]
            keep = order[np.argsort(members[order])]
            return members[keep], dists[keep]
        r = self.layer_radii[l - 1]
        cand = self._tree.query_ball_point(self._embedded[i], r * (1.0 + 1e-9) + 1e-12)
        cand = np.asarray(sorted(cand), dtype=int)
        cand = cand[(cand != i) & ((cand < n_l) | (cand >= self.num_free))]
        if len(cand) == 0:
            return cand, np.empty(0)
        dists = self.space.distance_many(q, self.configs[cand])
        keep = dists <= r
        return cand[keep], dists[keep]

    def neighbors(self, node: NodeId, stats=None) -> list[Neighbor]:
        """All graph neighbors of ``node``: same-layer metric edges within the
        layer's connection rule plus zero-cost counterpart edges, ordered by
        (index, layer)."""
        if stats is not None:
            stats.neighbor_queries += 1
        idx, dists = self.metric_neighbors(node)
        out = [Neighbor(NodeId(int(j), node.layer), float(c), EdgeKind.METRIC) for j, c in zip(idx, dists)]
        out.extend(Neighbor(c, 0.0, EdgeKind.COUNTERPART) for c in self.counterparts(node))
        out.sort(key=lambda nb: nb.node)
        return out


def build(
    world: WorldModel,
    space: SpaceSpec,
    schedule: LayerSchedule,
    neighbor_spec: NeighborSpec,
    x_init: Config,
    x_goal: Config,
    rng: np.random.Generator,
) -> LayeredSampleSet:
    """Sample N free configurations, append init and goal, index everything."""
    x_init = space.normalize(x_init)
    x_goal = space.normalize(x_goal)
    for label, q in (("init", x_init), ("goal", x_goal)):
        if not space.contains(q):
            raise QueryInCollisionError(f"{label} configuration outside space bounds")
        if not world.is_free(q):
            raise QueryInCollisionError(f"query state in collision: {label}")
    samples, rejections = sample_free(world, space, schedule.N, rng)
    configs = np.vstack([samples, x_init[None, :], x_goal[None, :]])
    return LayeredSampleSet(space, configs, schedule, neighbor_spec, rejections)
