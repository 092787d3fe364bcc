"""Configuration spaces: weighted L2 metric, interpolation, uniform sampling.

A space is a box in R^d (d >= 2) where each dimension is either a bounded
interval (EUCLIDEAN) or a wrap-around angle spanning exactly [0, 2*pi)
(ANGULAR). Distances are weighted L2 with shortest-arc differences on
angular dimensions; interpolation follows the shorter arc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

TWO_PI = 2.0 * math.pi

# A configuration is a 1-D float array of length SpaceSpec.d.
Config = np.ndarray


class Topology(Enum):
    EUCLIDEAN = "euclidean"
    ANGULAR = "angular"


@dataclass
class SpaceSpec:
    """Bounds, per-dimension topology, and metric weights of a planning space.

    Immutable by convention; instances are shared freely between planners and
    concurrent benchmark trials. Angular dimensions must span [0, 2*pi) and
    all configurations handed to the metric are assumed normalized into that
    interval (use :meth:`normalize` at construction boundaries).
    """

    lower: np.ndarray
    upper: np.ndarray
    topology: tuple[Topology, ...]
    weight: np.ndarray

    def __post_init__(self) -> None:
        self.topology = tuple(self.topology)
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        self.weight = np.asarray(self.weight, dtype=float)
        d = len(self.topology)
        if d < 2:
            raise ValueError(f"need d >= 2 dimensions, got {d}")
        for name, arr in (("lower", self.lower), ("upper", self.upper), ("weight", self.weight)):
            if arr.shape != (d,):
                raise ValueError(f"{name} must have shape ({d},), got {arr.shape}")
        if np.any(self.weight <= 0.0):
            raise ValueError("metric weights must be strictly positive")
        self._angular = np.array([t is Topology.ANGULAR for t in self.topology])
        for i, ang in enumerate(self._angular):
            if ang:
                if self.lower[i] != 0.0 or not math.isclose(self.upper[i], TWO_PI):
                    raise ValueError(f"angular dimension {i} must span exactly [0, 2*pi)")
            elif not self.lower[i] < self.upper[i]:
                raise ValueError(f"dimension {i}: lower must be < upper")
        self._has_angular = bool(self._angular.any())

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def euclidean(cls, lower, upper, weight=None) -> "SpaceSpec":
        """All-Euclidean box; unit weights unless given."""
        lower = np.asarray(lower, dtype=float)
        d = lower.shape[0]
        if weight is None:
            weight = np.ones(d)
        return cls(lower, upper, (Topology.EUCLIDEAN,) * d, weight)

    @classmethod
    def se2(cls, lower_xy, upper_xy, rotation_weight: float = 0.5) -> "SpaceSpec":
        """Planar position plus heading. Default rotation weight is 0.5."""
        lower = np.array([lower_xy[0], lower_xy[1], 0.0])
        upper = np.array([upper_xy[0], upper_xy[1], TWO_PI])
        topo = (Topology.EUCLIDEAN, Topology.EUCLIDEAN, Topology.ANGULAR)
        return cls(lower, upper, topo, np.array([1.0, 1.0, rotation_weight]))

    # ------------------------------------------------------------------
    # Basic queries
    # ------------------------------------------------------------------

    @property
    def d(self) -> int:
        return len(self.topology)

    def _require(self, q: Config) -> None:
        if np.shape(q) != (self.d,):
            raise ValueError(f"configuration has shape {np.shape(q)}, expected ({self.d},)")

    def normalize(self, q: Config) -> Config:
        """Return a copy with angular coordinates wrapped into [0, 2*pi)."""
        self._require(q)
        out = np.array(q, dtype=float)
        if self._has_angular:
            out[self._angular] = np.mod(out[self._angular], TWO_PI)
        return out

    def contains(self, q: Config) -> bool:
        """Bounds check; angular coordinates must already be normalized."""
        self._require(q)
        return bool(np.all(q >= self.lower - 1e-12) and np.all(q <= self.upper + 1e-12))

    def metric_measure(self) -> float:
        """Volume of the space in metric units (extents scaled by weights)."""
        return float(np.prod(self.weight * (self.upper - self.lower)))

    # ------------------------------------------------------------------
    # Metric and interpolation
    # ------------------------------------------------------------------

    def distance(self, a: Config, b: Config) -> float:
        """Weighted L2 distance with angular wrap-around.

        Shares the vectorized code path so scalar and batch queries agree
        bitwise; stored tree costs stay exactly reproducible.
        """
        self._require(b)
        return float(self.distance_many(a, np.asarray(b, dtype=float)[None, :])[0])

    def distance_many(self, a: Config, pts: np.ndarray) -> np.ndarray:
        """Distances from one configuration to each row of ``pts``."""
        self._require(a)
        diff = np.abs(pts - a[None, :])
        if self._has_angular:
            ang = self._angular
            diff[:, ang] = np.minimum(diff[:, ang], TWO_PI - diff[:, ang])
        diff *= self.weight[None, :]
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))

    def _delta(self, a: Config, b: Config) -> np.ndarray:
        """Signed per-dimension step from a to b, shortest arc on angular dims."""
        delta = np.asarray(b, dtype=float) - np.asarray(a, dtype=float)
        if self._has_angular:
            ang = self._angular
            delta[ang] = np.mod(delta[ang] + math.pi, TWO_PI) - math.pi
        return delta

    def interpolate(self, a: Config, b: Config, t: float) -> Config:
        """Point at parameter t in [0, 1] on the geodesic from a to b."""
        self._require(a)
        self._require(b)
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"interpolation parameter {t} outside [0, 1]")
        out = np.asarray(a, dtype=float) + t * self._delta(a, b)
        if self._has_angular:
            out[self._angular] = np.mod(out[self._angular], TWO_PI)
        return out

    def interpolate_many(self, a: Config, b: Config, ts: np.ndarray) -> np.ndarray:
        """Row-stacked interpolants for each parameter in ``ts``."""
        self._require(a)
        self._require(b)
        out = a[None, :] + np.asarray(ts, dtype=float)[:, None] * self._delta(a, b)[None, :]
        if self._has_angular:
            out[:, self._angular] = np.mod(out[:, self._angular], TWO_PI)
        return out

    # ------------------------------------------------------------------
    # Sampling
    # ------------------------------------------------------------------

    def sample_uniform(self, rng: np.random.Generator) -> Config:
        """One coordinate-wise uniform draw; deterministic for a seeded rng."""
        return rng.uniform(self.lower, self.upper)
