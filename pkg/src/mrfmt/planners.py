"""FMT*-family planners over layered sample sets.

All three planners share one search engine: a forward dynamic-programming
recursion that repeatedly expands the cheapest open node of the current
sparsity layer and lazily connects its unvisited neighbors through locally
optimal edges. Zero-cost counterpart edges are accepted without collision
checks, which is what lets the search move between resolutions: the layer
pointer drops whenever a sparser node opens and rises when the current
layer's wavefront empties.

``plan_fmt`` is the single-layer special case, ``plan_mrfmt`` the
multi-resolution search, and ``plan_bmrfmt`` the bidirectional variant that
grows a second tree from the goal and stops at the cheapest meeting node.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .cspace import Config, SpaceSpec
from .errors import QueryInCollisionError
from .multigraph import EdgeKind, LayeredSampleSet, NodeId
from .world import WorldModel, motion_free

_UNVISITED = 0
_PENDING = 1  # connected during the current expansion, queue insert deferred
_OPEN = 2
_CLOSED = 3


class PlanStatus(Enum):
    SOLVED = "Solved"
    FAILURE = "Failure"
    TIMEOUT = "Timeout"


@dataclass
class Stats:
    """Instrumentation counters for one planner run.

    ``edge_evaluations`` counts swept-motion checks on metric edges (never
    on counterpart edges), ``collision_point_checks`` the individual states
    tested inside them. ``max_node_expansions`` tracks the per-node
    expansion maximum, which the expand-once invariant pins at 1.
    """

    edge_evaluations: int = 0
    collision_point_checks: int = 0
    neighbor_queries: int = 0
    expansions: int = 0
    layer_switch_count: int = 0
    wall_time_ms: float = 0.0
    max_node_expansions: int = 0


@dataclass
class GoalSpec:
    """Goal region: the appended goal sample itself, or a metric ball.

    ``config`` always names a concrete goal configuration; it becomes the
    appended goal sample and, for the bidirectional planner, the backward
    tree root. ``radius`` == 0 means only the goal node itself qualifies.
    """

    config: np.ndarray
    radius: float = 0.0

    def __post_init__(self) -> None:
        self.config = np.asarray(self.config, dtype=float)
        if self.radius < 0.0:
            raise ValueError("goal radius must be nonnegative")

    @classmethod
    def exact(cls, config) -> "GoalSpec":
        return cls(config, 0.0)

    @classmethod
    def ball(cls, center, radius: float) -> "GoalSpec":
        if radius <= 0.0:
            raise ValueError("goal ball radius must be positive")
        return cls(center, radius)


@dataclass
class PlanRequest:
    world: WorldModel
    space: SpaceSpec
    x_init: np.ndarray
    goal: GoalSpec
    time_budget_ms: float | None = None
    heuristic: bool = False

    def __post_init__(self) -> None:
        if self.time_budget_ms is not None and self.time_budget_ms <= 0.0:
            raise ValueError("time budget must be positive")


@dataclass
class PlanResult:
    status: PlanStatus
    path: list[Config]
    cost: float
    stats: Stats

    @property
    def solved(self) -> bool:
        return self.status is PlanStatus.SOLVED


@dataclass
class SearchTrace:
    """Optional replay log: expansion order, layer-pointer changes, trees.

    ``pointer_log`` rows are (expansion count, tree id, old p, new p); tree
    id 0 is the forward tree, 1 the backward one.
    """

    expanded: list[NodeId] = field(default_factory=list)
    pointer_log: list[tuple[int, int, int, int]] = field(default_factory=list)
    trees: list["SearchTree"] = field(default_factory=list)


class SearchTree:
    """Parent, cost-to-come, and per-layer open queues for one direction.

    Node bookkeeping lives in dense (layer, index) arrays. Open queues are
    binary heaps with lazy deletion: closing a node leaves a stale heap
    entry that is skipped the next time the queue front is inspected (node
    costs never change after connection, so staleness is purely a state
    check). Heap entries order by (key, index, layer), which makes equal-key
    ties deterministic.
    """

    def __init__(
        self,
        layered: LayeredSampleSet,
        root: NodeId,
        heuristic_target: Config | None = None,
        heuristic_slack: float = 0.0,
    ):
        layers = layered.schedule.L
        m = layered.num_configs
        self.layered = layered
        self.root = root
        self.state = np.zeros((layers, m), dtype=np.int8)
        self.cost = np.full((layers, m), np.inf)
        self.parent_index = np.full((layers, m), -1, dtype=np.int64)
        self.parent_layer = np.zeros((layers, m), dtype=np.int64)
        self.expansion_counts = np.zeros((layers, m), dtype=np.int32)
        self.queues: list[list[tuple[float, int, int]]] = [[] for _ in range(layers)]
        self.p = 1
        self._h_target = heuristic_target
        self._h_slack = heuristic_slack
        self._h_cache = np.full(m, np.nan) if heuristic_target is not None else None
        i, l = root
        self.state[l - 1, i] = _OPEN
        self.cost[l - 1, i] = 0.0
        heapq.heappush(self.queues[l - 1], (self._key(i, 0.0), i, l))

    # -- keys and queues -----------------------------------------------------

    def _h(self, index: int) -> float:
        if self._h_target is None:
            return 0.0
        v = self._h_cache[index]
        if math.isnan(v):
            d = self.layered.space.distance(self.layered.configs[index], self._h_target)
            v = max(0.0, d - self._h_slack)
            self._h_cache[index] = v
        return float(v)

    def _key(self, index: int, cost: float) -> float:
        return cost + self._h(index)

    def _clean(self, layer: int) -> None:
        q = self.queues[layer - 1]
        state = self.state
        while q and state[q[0][2] - 1, q[0][1]] != _OPEN:
            heapq.heappop(q)

    def queue_empty(self, layer: int) -> bool:
        self._clean(layer)
        return not self.queues[layer - 1]

    def peek_min(self) -> NodeId | None:
        """Cheapest open node of the current layer, or None if it is empty."""
        self._clean(self.p)
        q = self.queues[self.p - 1]
        if not q:
            return None
        return NodeId(q[0][1], q[0][2])

    def push_open(self, node: NodeId) -> None:
        i, l = node
        self.state[l - 1, i] = _OPEN
        heapq.heappush(self.queues[l - 1], (self._key(i, float(self.cost[l - 1, i])), i, l))

    # -- node accessors --------------------------------------------------------

    def contains(self, node: NodeId) -> bool:
        return bool(np.isfinite(self.cost[node.layer - 1, node.index]))

    def node_state(self, node: NodeId) -> int:
        return int(self.state[node.layer - 1, node.index])

    def cost_of(self, node: NodeId) -> float:
        return float(self.cost[node.layer - 1, node.index])

    def parent_of(self, node: NodeId) -> NodeId:
        i, l = node
        return NodeId(int(self.parent_index[l - 1, i]), int(self.parent_layer[l - 1, i]))

    def members(self) -> list[NodeId]:
        ls, idx = np.nonzero(np.isfinite(self.cost))
        return [NodeId(int(i), int(l + 1)) for l, i in zip(ls, idx)]

    def parent_map(self) -> dict[NodeId, NodeId]:
        return {n: self.parent_of(n) for n in self.members() if n != self.root}

    def cost_map(self) -> dict[NodeId, float]:
        return {n: self.cost_of(n) for n in self.members()}


def extract_path(tree: SearchTree, node: NodeId) -> list[Config]:
    """Root-to-node configuration sequence with counterpart hops collapsed."""
    if not tree.contains(node):
        raise ValueError(f"{node} is not in the tree")
    chain = [node]
    while chain[-1] != tree.root:
        chain.append(tree.parent_of(chain[-1]))
    chain.reverse()
    path: list[Config] = []
    last_index = -1
    for nd in chain:
        if nd.index != last_index:
            path.append(tree.layered.configs[nd.index].copy())
            last_index = nd.index
    return path


@dataclass
class _Meet:
    node: NodeId | None = None
    cost_sum: float = math.inf


class _Search:
    """One planner run: owns the trees, stats, and the neighbor cache."""

    def __init__(self, request: PlanRequest, layered: LayeredSampleSet, trace: SearchTrace | None):
        self.world = request.world
        self.space = request.space
        self.goal = request.goal
        self.layered = layered
        self.stats = Stats()
        self.trace = trace
        self._deadline = (
            time.perf_counter() + request.time_budget_ms / 1e3
            if request.time_budget_ms is not None
            else None
        )
        # Neighbor lookups repeat many times per node before it connects;
        # the cache keeps kd-tree work amortized while the query counter
        # still counts every logical query.
        self._nbr_cache: dict[NodeId, tuple[np.ndarray, np.ndarray, list[NodeId]]] = {}
        self._heuristic = request.heuristic

    # -- shared plumbing -----------------------------------------------------

    def _neighbors(self, node: NodeId):
        self.stats.neighbor_queries += 1
        cached = self._nbr_cache.get(node)
        if cached is None:
            idx, dist = self.layered.metric_neighbors(node)
            cached = (idx, dist, self.layered.counterparts(node))
            self._nbr_cache[node] = cached
        return cached

    def _in_goal(self, node: NodeId) -> bool:
        if self.goal.radius <= 0.0:
            return node.index == self.layered.goal_index
        return self.space.distance(self.layered.configs[node.index], self.goal.config) <= self.goal.radius

    def _timed_out(self) -> bool:
        return self._deadline is not None and time.perf_counter() > self._deadline

    def _set_p(self, tree: SearchTree, tree_id: int, new_p: int) -> None:
        if self.trace is not None:
            self.trace.pointer_log.append((self.stats.expansions, tree_id, tree.p, new_p))
        tree.p = new_p
        self.stats.layer_switch_count += 1

    def _make_tree(self, root: NodeId, target: Config | None, slack: float) -> SearchTree:
        tree = SearchTree(self.layered, root, target if self._heuristic else None, slack)
        if self.trace is not None:
            self.trace.trees.append(tree)
        return tree

    # -- expansion -------------------------------------------------------------

    def expand(
        self,
        tree: SearchTree,
        tree_id: int,
        z: NodeId,
        other: SearchTree | None = None,
        meet: _Meet | None = None,
    ) -> bool:
        """Expand the cheapest open node z of tree's current layer.

        Connects each unvisited neighbor of z to its cheapest open layer-p
        parent when the motion is free (counterpart edges connect without a
        check), closes z, opens the new nodes in their own layers, then
        moves the layer pointer: down to the sparsest newly opened layer,
        up while the current layer's queue is empty. Returns False when
        every queue is exhausted.
        """
        assert tree.node_state(z) == _OPEN and z.layer == tree.p
        assert tree.peek_min() == z
        self.stats.expansions += 1
        i_z, l_z = z
        count = int(tree.expansion_counts[l_z - 1, i_z]) + 1
        tree.expansion_counts[l_z - 1, i_z] = count
        if count > self.stats.max_node_expansions:
            self.stats.max_node_expansions = count
        if self.trace is not None:
            self.trace.expanded.append(z)

        p = tree.p
        state = tree.state
        configs = self.layered.configs
        idx, _, cps = self._neighbors(z)
        z_near = [NodeId(int(j), l_z) for j in idx[state[l_z - 1, idx] == _UNVISITED]]
        z_near.extend(cp for cp in cps if state[cp.layer - 1, cp.index] == _UNVISITED)
        z_near.sort()

        v_new: list[NodeId] = []
        for x in z_near:
            i_x, l_x = x
            x_idx, x_dist, x_cps = self._neighbors(x)
            best_cost = math.inf
            best_index = -1
            best_kind = EdgeKind.METRIC
            if l_x == p and len(x_idx):
                open_mask = state[p - 1, x_idx] == _OPEN
                if open_mask.any():
                    open_idx = x_idx[open_mask]
                    costs = tree.cost[p - 1, open_idx] + x_dist[open_mask]
                    k = int(np.argmin(costs))  # first minimum = smallest index
                    best_cost = float(costs[k])
                    best_index = int(open_idx[k])
            for cp in x_cps:
                if cp.layer == p and state[p - 1, cp.index] == _OPEN:
                    c = float(tree.cost[p - 1, cp.index])
                    if c < best_cost or (c == best_cost and cp.index < best_index):
                        best_cost = c
                        best_index = cp.index
                        best_kind = EdgeKind.COUNTERPART
            if best_index < 0:
                continue
            if best_kind is EdgeKind.METRIC:
                self.stats.edge_evaluations += 1
                if not motion_free(self.world, self.space, configs[best_index], configs[i_x], self.stats):
                    continue  # lazy skip: x stays unvisited
            tree.cost[l_x - 1, i_x] = best_cost
            tree.parent_index[l_x - 1, i_x] = best_index
            tree.parent_layer[l_x - 1, i_x] = p
            state[l_x - 1, i_x] = _PENDING
            v_new.append(x)
            if other is not None:
                other_cost = float(other.cost[l_x - 1, i_x])
                if math.isfinite(other_cost) and best_cost + other_cost < meet.cost_sum:
                    meet.node = x
                    meet.cost_sum = best_cost + other_cost

        state[l_z - 1, i_z] = _CLOSED
        for x in v_new:
            tree.push_open(x)
            if x.layer < tree.p:
                self._set_p(tree, tree_id, x.layer)
        while tree.queue_empty(tree.p):
            if tree.p < self.layered.schedule.L:
                self._set_p(tree, tree_id, tree.p + 1)
            else:
                return False
        return True

    # -- main loops --------------------------------------------------------------

    def run_unidirectional(self) -> PlanResult:
        tree = self._make_tree(self.layered.init_node, self.goal.config, self.goal.radius)
        z = tree.root
        while True:
            if self._in_goal(z):
                return self._finish(PlanStatus.SOLVED, extract_path(tree, z), tree.cost_of(z))
            if self._timed_out():
                return self._finish(PlanStatus.TIMEOUT)
            if not self.expand(tree, 0, z):
                return self._finish(PlanStatus.FAILURE)
            z = tree.peek_min()

    def run_bidirectional(self, x_init: Config) -> PlanResult:
        fwd = self._make_tree(self.layered.init_node, self.goal.config, self.goal.radius)
        bwd = self._make_tree(self.layered.goal_node, x_init, 0.0)
        ids = {id(fwd): 0, id(bwd): 1}
        meet = _Meet()
        cur, oth = fwd, bwd
        z = cur.root
        while True:
            if meet.node is not None:
                break
            if self._timed_out():
                return self._finish(PlanStatus.TIMEOUT)
            ok = self.expand(cur, ids[id(cur)], z, other=oth, meet=meet)
            other_alive = not oth.queue_empty(oth.p)
            if not ok and not other_alive:
                break
            if other_alive:
                cur, oth = oth, cur
            z = cur.peek_min()
        if meet.node is None:
            return self._finish(PlanStatus.FAILURE)
        fwd_path = extract_path(fwd, meet.node)
        bwd_path = extract_path(bwd, meet.node)
        path = fwd_path + bwd_path[-2::-1]
        deduped = [path[0]]
        for cfg in path[1:]:
            if not np.array_equal(cfg, deduped[-1]):
                deduped.append(cfg)
        return self._finish(PlanStatus.SOLVED, deduped, meet.cost_sum)

    def _finish(self, status: PlanStatus, path: list[Config] | None = None, cost: float = math.inf) -> PlanResult:
        return PlanResult(status, path or [], cost if status is PlanStatus.SOLVED else math.inf, self.stats)


def _plan(request: PlanRequest, layered: LayeredSampleSet, bidirectional: bool, trace: SearchTrace | None) -> PlanResult:
    t0 = time.perf_counter()
    space = request.space
    x_init = space.normalize(request.x_init)
    goal_cfg = space.normalize(request.goal.config)
    if not np.allclose(x_init, layered.configs[layered.init_index], atol=1e-9):
        raise ValueError("request init does not match the sample set's init configuration")
    if not np.allclose(goal_cfg, layered.configs[layered.goal_index], atol=1e-9):
        raise ValueError("request goal does not match the sample set's goal configuration")
    for label, q in (("init", x_init), ("goal", goal_cfg)):
        if not request.world.is_free(q):
            raise QueryInCollisionError(f"query state in collision: {label}")
    search = _Search(request, layered, trace)
    if bidirectional:
        result = search.run_bidirectional(x_init)
    else:
        result = search.run_unidirectional()
    result.stats.wall_time_ms = (time.perf_counter() - t0) * 1e3
    return result


def plan_fmt(request: PlanRequest, layered: LayeredSampleSet, trace: SearchTrace | None = None) -> PlanResult:
    """Single-resolution FMT*; requires a one-layer sample set."""
    if layered.schedule.L != 1:
        raise ValueError("plan_fmt needs a single-layer sample set")
    return _plan(request, layered, bidirectional=False, trace=trace)


def plan_mrfmt(request: PlanRequest, layered: LayeredSampleSet, trace: SearchTrace | None = None) -> PlanResult:
    """Multi-resolution FMT*: selective densification across the layers."""
    return _plan(request, layered, bidirectional=False, trace=trace)


def plan_bmrfmt(request: PlanRequest, layered: LayeredSampleSet, trace: SearchTrace | None = None) -> PlanResult:
    """Bidirectional multi-resolution FMT*; trees meet at the cheapest shared node."""
    return _plan(request, layered, bidirectional=True, trace=trace)
