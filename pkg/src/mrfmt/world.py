"""Geometric worlds: obstacles, robot models, point and swept-motion checks.

Obstacles answer four primitive queries (point, disc, segment, convex
polygon); robot models map a configuration to the primitives they occupy.
``motion_free`` discretizes a straight configuration-space motion at the
world's resolution ``eps`` and checks every intermediate state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cspace import Config, SpaceSpec

_TINY = 1e-12


# ---------------------------------------------------------------------------
# 2D geometry helpers
# ---------------------------------------------------------------------------


def _segment_hits_box(p0: np.ndarray, p1: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> bool:
    """Slab-clipping segment/box overlap test; works in any dimension."""
    tmin, tmax = 0.0, 1.0
    for i in range(len(lo)):
        d = p1[i] - p0[i]
        if abs(d) < _TINY:
            if p0[i] < lo[i] or p0[i] > hi[i]:
                return False
        else:
            t1 = (lo[i] - p0[i]) / d
            t2 = (hi[i] - p0[i]) / d
            if t1 > t2:
                t1, t2 = t2, t1
            tmin = max(tmin, t1)
            tmax = min(tmax, t2)
            if tmin > tmax:
                return False
    return True


def _segments_hit_box(p0: np.ndarray, p1: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Vectorized slab test for a batch of segments, rows of p0/p1."""
    m, dim = p0.shape
    tmin = np.zeros(m)
    tmax = np.ones(m)
    hit = np.ones(m, dtype=bool)
    for i in range(dim):
        di = p1[:, i] - p0[:, i]
        parallel = np.abs(di) < _TINY
        hit &= ~(parallel & ((p0[:, i] < lo[i]) | (p0[:, i] > hi[i])))
        with np.errstate(divide="ignore", invalid="ignore"):
            t1 = (lo[i] - p0[:, i]) / di
            t2 = (hi[i] - p0[:, i]) / di
        t_lo = np.where(parallel, 0.0, np.minimum(t1, t2))
        t_hi = np.where(parallel, 1.0, np.maximum(t1, t2))
        tmin = np.maximum(tmin, t_lo)
        tmax = np.minimum(tmax, t_hi)
    return hit & (tmin <= tmax)


def _point_segment_dist(p, a, b) -> float:
    ab = b - a
    denom = float(np.dot(ab, ab))
    if denom < _TINY:
        return float(np.linalg.norm(p - a))
    t = float(np.dot(p - a, ab)) / denom
    t = min(1.0, max(0.0, t))
    return float(np.linalg.norm(p - (a + t * ab)))


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a, b, p) -> bool:
    return (
        min(a[0], b[0]) - _TINY <= p[0] <= max(a[0], b[0]) + _TINY
        and min(a[1], b[1]) - _TINY <= p[1] <= max(a[1], b[1]) + _TINY
    )


def _segments_intersect(p0, p1, q0, q1) -> bool:
    d1 = _orient(q0, q1, p0)
    d2 = _orient(q0, q1, p1)
    d3 = _orient(p0, p1, q0)
    d4 = _orient(p0, p1, q1)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
        return True
    if abs(d1) < _TINY and _on_segment(q0, q1, p0):
        return True
    if abs(d2) < _TINY and _on_segment(q0, q1, p1):
        return True
    if abs(d3) < _TINY and _on_segment(p0, p1, q0):
        return True
    if abs(d4) < _TINY and _on_segment(p0, p1, q1):
        return True
    return False


def _segment_segment_dist(p0, p1, q0, q1) -> float:
    if _segments_intersect(p0, p1, q0, q1):
        return 0.0
    return min(
        _point_segment_dist(p0, q0, q1),
        _point_segment_dist(p1, q0, q1),
        _point_segment_dist(q0, p0, p1),
        _point_segment_dist(q1, p0, p1),
    )


def _box_corners(lo, hi) -> np.ndarray:
    return np.array([[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]])


def _polygon_contains(vertices: np.ndarray, p) -> bool:
    """Convex, counterclockwise polygon containment (boundary counts)."""
    m = len(vertices)
    for i in range(m):
        if _orient(vertices[i], vertices[(i + 1) % m], p) < -_TINY:
            return False
    return True


def _convex_polygons_collide(a: np.ndarray, b: np.ndarray) -> bool:
    """Separating-axis test for two convex polygons."""
    for poly_a, poly_b in ((a, b), (b, a)):
        m = len(poly_a)
        for i in range(m):
            edge = poly_a[(i + 1) % m] - poly_a[i]
            axis = np.array([-edge[1], edge[0]])
            pa = poly_a @ axis
            pb = poly_b @ axis
            if pa.max() < pb.min() - _TINY or pb.max() < pa.min() - _TINY:
                return False
    return True


def _segment_hits_polygon(vertices: np.ndarray, a, b) -> bool:
    if _polygon_contains(vertices, a) or _polygon_contains(vertices, b):
        return True
    m = len(vertices)
    for i in range(m):
        if _segments_intersect(a, b, vertices[i], vertices[(i + 1) % m]):
            return True
    return False


def _segment_polygon_dist(vertices: np.ndarray, a, b) -> float:
    if _polygon_contains(vertices, a) or _polygon_contains(vertices, b):
        return 0.0
    m = len(vertices)
    best = math.inf
    for i in range(m):
        best = min(best, _segment_segment_dist(a, b, vertices[i], vertices[(i + 1) % m]))
        if best == 0.0:
            return 0.0
    return best


def _segment_box_dist(a, b, lo, hi) -> float:
    if _segment_hits_box(a, b, lo, hi):
        return 0.0
    corners = _box_corners(lo, hi)
    return min(_segment_segment_dist(a, b, corners[i], corners[(i + 1) % 4]) for i in range(4))


# ---------------------------------------------------------------------------
# Obstacles
# ---------------------------------------------------------------------------


class Obstacle:
    """Primitive collision queries against one obstacle.

    ``collides_point`` and ``collides_segment`` accept workspace points of
    the obstacle's own dimension; disc and polygon queries are planar only.
    """

    def collides_point(self, p: np.ndarray) -> bool:
        raise NotImplementedError

    def collides_points(self, pts: np.ndarray) -> np.ndarray:
        """Batch form of collides_point; rows of pts."""
        return np.fromiter((self.collides_point(p) for p in pts), dtype=bool, count=len(pts))

    def collides_disc(self, center: np.ndarray, radius: float) -> bool:
        raise NotImplementedError

    def collides_segment(self, a: np.ndarray, b: np.ndarray, radius: float = 0.0) -> bool:
        raise NotImplementedError

    def collides_segments(self, p0: np.ndarray, p1: np.ndarray) -> np.ndarray:
        """Batch form of collides_segment for zero-width segments."""
        return np.fromiter(
            (self.collides_segment(a, b) for a, b in zip(p0, p1)), dtype=bool, count=len(p0)
        )

    def collides_polygon(self, vertices: np.ndarray) -> bool:
        raise NotImplementedError

    def collides_polygons(self, verts: np.ndarray) -> np.ndarray:
        """Batch form of collides_polygon; verts has shape (T, m, 2)."""
        return np.fromiter(
            (self.collides_polygon(v) for v in verts), dtype=bool, count=len(verts)
        )


@dataclass
class Aabb(Obstacle):
    """Axis-aligned box; any dimension."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        if self.lower.shape != self.upper.shape or np.any(self.lower >= self.upper):
            raise ValueError("box needs lower < upper componentwise")

    def collides_point(self, p) -> bool:
        return bool(np.all(p >= self.lower) and np.all(p <= self.upper))

    def collides_points(self, pts) -> np.ndarray:
        return np.all((pts >= self.lower) & (pts <= self.upper), axis=1)

    def collides_disc(self, center, radius) -> bool:
        nearest = np.clip(center, self.lower, self.upper)
        return float(np.linalg.norm(center - nearest)) <= radius

    def collides_segment(self, a, b, radius=0.0) -> bool:
        if radius <= 0.0:
            return _segment_hits_box(a, b, self.lower, self.upper)
        return _segment_box_dist(a, b, self.lower, self.upper) <= radius

    def collides_segments(self, p0, p1) -> np.ndarray:
        return _segments_hit_box(p0, p1, self.lower, self.upper)

    def collides_polygon(self, vertices) -> bool:
        return _convex_polygons_collide(_box_corners(self.lower, self.upper), vertices)

    def collides_polygons(self, verts) -> np.ndarray:
        # vectorized separating-axis test: box axes, then body edge normals
        separated = np.zeros(len(verts), dtype=bool)
        for i in (0, 1):
            pv = verts[..., i]
            separated |= (pv.max(axis=1) < self.lower[i] - _TINY) | (
                pv.min(axis=1) > self.upper[i] + _TINY
            )
        edges = np.roll(verts, -1, axis=1) - verts
        axes = np.stack([-edges[..., 1], edges[..., 0]], axis=-1)
        body_proj = np.einsum("tae,tve->tav", axes, verts)
        box_proj = np.einsum("tae,ve->tav", axes, _box_corners(self.lower, self.upper))
        gap = (body_proj.max(axis=2) < box_proj.min(axis=2) - _TINY) | (
            box_proj.max(axis=2) < body_proj.min(axis=2) - _TINY
        )
        separated |= gap.any(axis=1)
        return ~separated


@dataclass
class ConvexPolygon(Obstacle):
    """Convex polygon with counterclockwise vertices; planar."""

    vertices: np.ndarray

    def __post_init__(self) -> None:
        self.vertices = np.asarray(self.vertices, dtype=float)
        if self.vertices.ndim != 2 or self.vertices.shape[0] < 3 or self.vertices.shape[1] != 2:
            raise ValueError("polygon needs at least 3 planar vertices")
        m = len(self.vertices)
        for i in range(m):
            if _orient(self.vertices[i], self.vertices[(i + 1) % m], self.vertices[(i + 2) % m]) < -_TINY:
                raise ValueError("polygon must be convex and counterclockwise")

    def collides_point(self, p) -> bool:
        return _polygon_contains(self.vertices, p)

    def collides_points(self, pts) -> np.ndarray:
        v = self.vertices
        edges = np.roll(v, -1, axis=0) - v
        rel_x = pts[:, None, 0] - v[None, :, 0]
        rel_y = pts[:, None, 1] - v[None, :, 1]
        cross = edges[None, :, 0] * rel_y - edges[None, :, 1] * rel_x
        return np.all(cross >= -_TINY, axis=1)

    def collides_disc(self, center, radius) -> bool:
        if _polygon_contains(self.vertices, center):
            return True
        m = len(self.vertices)
        return any(
            _point_segment_dist(center, self.vertices[i], self.vertices[(i + 1) % m]) <= radius
            for i in range(m)
        )

    def collides_segment(self, a, b, radius=0.0) -> bool:
        if radius <= 0.0:
            return _segment_hits_polygon(self.vertices, a, b)
        return _segment_polygon_dist(self.vertices, a, b) <= radius

    def collides_polygon(self, vertices) -> bool:
        return _convex_polygons_collide(self.vertices, vertices)


@dataclass
class OccupancyGrid(Obstacle):
    """Boolean cell grid; cell (i, j) spans origin + [i, i+1) x [j, j+1) cells."""

    origin: np.ndarray
    cell_size: float
    cells: np.ndarray

    def __post_init__(self) -> None:
        self.origin = np.asarray(self.origin, dtype=float)
        self.cells = np.asarray(self.cells, dtype=bool)
        if self.cell_size <= 0.0:
            raise ValueError("cell size must be positive")
        if self.cells.ndim != 2:
            raise ValueError("cells must be a 2-D boolean array")

    def _cell_box(self, i: int, j: int) -> tuple[np.ndarray, np.ndarray]:
        lo = self.origin + np.array([i, j]) * self.cell_size
        return lo, lo + self.cell_size

    def _cells_in_range(self, lo, hi):
        nx, ny = self.cells.shape
        i0 = max(0, int(math.floor((lo[0] - self.origin[0]) / self.cell_size)))
        j0 = max(0, int(math.floor((lo[1] - self.origin[1]) / self.cell_size)))
        i1 = min(nx - 1, int(math.floor((hi[0] - self.origin[0]) / self.cell_size)))
        j1 = min(ny - 1, int(math.floor((hi[1] - self.origin[1]) / self.cell_size)))
        for i in range(i0, i1 + 1):
            for j in range(j0, j1 + 1):
                if self.cells[i, j]:
                    yield i, j

    def collides_point(self, p) -> bool:
        rel = (np.asarray(p) - self.origin) / self.cell_size
        i, j = int(math.floor(rel[0])), int(math.floor(rel[1]))
        nx, ny = self.cells.shape
        if 0 <= i < nx and 0 <= j < ny:
            return bool(self.cells[i, j])
        return False

    def collides_points(self, pts) -> np.ndarray:
        rel = np.floor((pts - self.origin) / self.cell_size).astype(int)
        nx, ny = self.cells.shape
        inside = (rel[:, 0] >= 0) & (rel[:, 0] < nx) & (rel[:, 1] >= 0) & (rel[:, 1] < ny)
        out = np.zeros(len(pts), dtype=bool)
        out[inside] = self.cells[rel[inside, 0], rel[inside, 1]]
        return out

    def collides_disc(self, center, radius) -> bool:
        for i, j in self._cells_in_range(center - radius, center + radius):
            lo, hi = self._cell_box(i, j)
            nearest = np.clip(center, lo, hi)
            if float(np.linalg.norm(center - nearest)) <= radius:
                return True
        return False

    def collides_segment(self, a, b, radius=0.0) -> bool:
        lo = np.minimum(a, b) - radius
        hi = np.maximum(a, b) + radius
        for i, j in self._cells_in_range(lo, hi):
            clo, chi = self._cell_box(i, j)
            if radius <= 0.0:
                if _segment_hits_box(a, b, clo, chi):
                    return True
            elif _segment_box_dist(a, b, clo, chi) <= radius:
                return True
        return False

    def collides_polygon(self, vertices) -> bool:
        lo = vertices.min(axis=0)
        hi = vertices.max(axis=0)
        for i, j in self._cells_in_range(lo, hi):
            clo, chi = self._cell_box(i, j)
            if _convex_polygons_collide(_box_corners(clo, chi), vertices):
                return True
        return False


# ---------------------------------------------------------------------------
# Robot models
# ---------------------------------------------------------------------------


class RobotModel:
    def config_dim(self, workspace_dim: int) -> int:
        raise NotImplementedError


class PointRobot(RobotModel):
    """Configuration is the workspace point itself."""

    def config_dim(self, workspace_dim: int) -> int:
        return workspace_dim


@dataclass
class DiscRobot(RobotModel):
    radius: float

    def __post_init__(self) -> None:
        if self.radius <= 0.0:
            raise ValueError("disc radius must be positive")

    def config_dim(self, workspace_dim: int) -> int:
        return 2


@dataclass
class PolygonBody(RobotModel):
    """Rigid convex body; posed by an (x, y, theta) configuration."""

    vertices: np.ndarray

    def __post_init__(self) -> None:
        self.vertices = np.asarray(self.vertices, dtype=float)
        ConvexPolygon(self.vertices)  # reuse the shape validation

    def config_dim(self, workspace_dim: int) -> int:
        return 3

    def posed(self, q: Config) -> np.ndarray:
        c, s = math.cos(q[2]), math.sin(q[2])
        rot = np.array([[c, -s], [s, c]])
        return self.vertices @ rot.T + q[:2]

    def posed_batch(self, qs: np.ndarray) -> np.ndarray:
        """Posed vertices for every configuration row; shape (T, m, 2)."""
        c, s = np.cos(qs[:, 2]), np.sin(qs[:, 2])
        rot = np.empty((len(qs), 2, 2))
        rot[:, 0, 0] = c
        rot[:, 0, 1] = -s
        rot[:, 1, 0] = s
        rot[:, 1, 1] = c
        return np.einsum("tij,vj->tvi", rot, self.vertices) + qs[:, None, :2]


@dataclass
class PlanarChain(RobotModel):
    """Serial chain of straight links in the plane.

    With ``base_xy`` unset the first two configuration coordinates place the
    base (a mobile chain); the remaining coordinates are cumulative joint
    angles. Links are zero-width segments unless ``link_radius`` is set.
    """

    link_lengths: np.ndarray
    base_xy: np.ndarray | None = None
    link_radius: float = 0.0

    def __post_init__(self) -> None:
        self.link_lengths = np.asarray(self.link_lengths, dtype=float)
        if np.any(self.link_lengths <= 0.0):
            raise ValueError("link lengths must be positive")
        if self.base_xy is not None:
            self.base_xy = np.asarray(self.base_xy, dtype=float)

    @property
    def mobile(self) -> bool:
        return self.base_xy is None

    def config_dim(self, workspace_dim: int) -> int:
        return len(self.link_lengths) + (2 if self.mobile else 0)

    def joint_points(self, q: Config) -> np.ndarray:
        """Base point followed by each link endpoint, shape (k+1, 2)."""
        if self.mobile:
            base = np.asarray(q[:2], dtype=float)
            angles = np.asarray(q[2:], dtype=float)
        else:
            base = self.base_xy
            angles = np.asarray(q, dtype=float)
        if len(angles) != len(self.link_lengths):
            raise ValueError("configuration does not match link count")
        phi = np.cumsum(angles)
        steps = self.link_lengths[:, None] * np.stack([np.cos(phi), np.sin(phi)], axis=1)
        pts = np.empty((len(angles) + 1, 2))
        pts[0] = base
        pts[1:] = base + np.cumsum(steps, axis=0)
        return pts

    def joint_points_batch(self, qs: np.ndarray) -> np.ndarray:
        """Joint points for every configuration row; shape (T, k+1, 2)."""
        if self.mobile:
            base = qs[:, :2]
            angles = qs[:, 2:]
        else:
            base = np.broadcast_to(self.base_xy, (len(qs), 2))
            angles = qs
        phi = np.cumsum(angles, axis=1)
        steps = self.link_lengths[None, :, None] * np.stack([np.cos(phi), np.sin(phi)], axis=2)
        pts = np.empty((len(qs), angles.shape[1] + 1, 2))
        pts[:, 0] = base
        pts[:, 1:] = base[:, None, :] + np.cumsum(steps, axis=1)
        return pts


def forward_kinematics(chain: PlanarChain, q: Config) -> np.ndarray:
    """Cumulative-angle planar FK; returns the link endpoints in order."""
    return chain.joint_points(q)[1:]


# ---------------------------------------------------------------------------
# World
# ---------------------------------------------------------------------------


@dataclass
class WorldModel:
    """Workspace bounds, obstacle set, robot model, and motion resolution.

    Immutable after construction; all queries are read-only and safe to run
    concurrently. ``eps`` is the configuration-space arc-length step used by
    :func:`motion_free`; scenarios choose it from obstacle feature sizes.
    """

    bounds_lower: np.ndarray
    bounds_upper: np.ndarray
    obstacles: list[Obstacle] = field(default_factory=list)
    robot: RobotModel = field(default_factory=PointRobot)
    eps: float = 0.01

    def __post_init__(self) -> None:
        self.bounds_lower = np.asarray(self.bounds_lower, dtype=float)
        self.bounds_upper = np.asarray(self.bounds_upper, dtype=float)
        if np.any(self.bounds_lower >= self.bounds_upper):
            raise ValueError("workspace bounds need lower < upper")
        if self.eps <= 0.0:
            raise ValueError("eps must be positive")

    def _require_dim(self, q: Config) -> None:
        expected = self.robot.config_dim(len(self.bounds_lower))
        if np.shape(q) != (expected,):
            raise ValueError(f"configuration has shape {np.shape(q)}, robot expects ({expected},)")

    def is_free(self, q: Config) -> bool:
        """True iff the robot posed at q is inside bounds and off all obstacles."""
        self._require_dim(q)
        robot = self.robot
        lo, hi = self.bounds_lower, self.bounds_upper
        if isinstance(robot, PointRobot):
            p = np.asarray(q, dtype=float)
            if np.any(p < lo) or np.any(p > hi):
                return False
            return not any(ob.collides_point(p) for ob in self.obstacles)
        if isinstance(robot, DiscRobot):
            c = np.asarray(q[:2], dtype=float)
            r = robot.radius
            if np.any(c - r < lo) or np.any(c + r > hi):
                return False
            return not any(ob.collides_disc(c, r) for ob in self.obstacles)
        if isinstance(robot, PolygonBody):
            verts = robot.posed(q)
            if np.any(verts < lo[None, :]) or np.any(verts > hi[None, :]):
                return False
            return not any(ob.collides_polygon(verts) for ob in self.obstacles)
        if isinstance(robot, PlanarChain):
            pts = robot.joint_points(q)
            r = robot.link_radius
            if np.any(pts - r < lo[None, :]) or np.any(pts + r > hi[None, :]):
                return False
            for i in range(len(pts) - 1):
                a, b = pts[i], pts[i + 1]
                if any(ob.collides_segment(a, b, r) for ob in self.obstacles):
                    return False
            return True
        raise TypeError(f"unsupported robot model {type(robot).__name__}")

    def is_free_batch(self, states: np.ndarray) -> np.ndarray:
        """Vectorized is_free over configuration rows; same answers."""
        robot = self.robot
        lo, hi = self.bounds_lower, self.bounds_upper
        states = np.asarray(states, dtype=float)
        if isinstance(robot, PointRobot):
            free = np.all((states >= lo) & (states <= hi), axis=1)
            for ob in self.obstacles:
                if not free.any():
                    break
                free &= ~ob.collides_points(states)
            return free
        if isinstance(robot, PlanarChain) and robot.link_radius <= 0.0:
            pts = robot.joint_points_batch(states)
            free = np.all((pts >= lo) & (pts <= hi), axis=(1, 2))
            p0 = pts[:, :-1, :].reshape(-1, 2)
            p1 = pts[:, 1:, :].reshape(-1, 2)
            n_links = pts.shape[1] - 1
            for ob in self.obstacles:
                if not free.any():
                    break
                hits = ob.collides_segments(p0, p1).reshape(len(states), n_links)
                free &= ~hits.any(axis=1)
            return free
        if isinstance(robot, PolygonBody):
            verts = robot.posed_batch(states)
            free = np.all((verts >= lo) & (verts <= hi), axis=(1, 2))
            for ob in self.obstacles:
                if not free.any():
                    break
                free &= ~ob.collides_polygons(verts)
            return free
        return np.fromiter((self.is_free(q) for q in states), dtype=bool, count=len(states))


def motion_free(world: WorldModel, space: SpaceSpec, a: Config, b: Config, stats=None) -> bool:
    """Check the straight motion a -> b at resolution ``world.eps``.

    Evenly spaced, endpoint-inclusive discretization with ceil(dist/eps)+1
    states; the step count comes from the symmetric metric so the check is
    direction-independent. States are evaluated in vectorized chunks with
    early exit between chunks; every evaluated state counts one collision
    point check on ``stats`` when given.
    """
    dist = space.distance(a, b)
    m = int(math.ceil(dist / world.eps)) if dist > 0.0 else 0
    if m == 0:
        states = np.asarray(a, dtype=float)[None, :]
    else:
        states = space.interpolate_many(a, b, np.linspace(0.0, 1.0, m + 1))
        states[0] = a
        states[-1] = b
    chunk = 16
    for start in range(0, len(states), chunk):
        block = states[start : start + chunk]
        if stats is not None:
            stats.collision_point_checks += len(block)
        if not world.is_free_batch(block).all():
            return False
    return True
