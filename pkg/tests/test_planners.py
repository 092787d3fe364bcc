import math

import numpy as np
import pytest

import mrfmt
from mrfmt import (
    Aabb,
    GoalSpec,
    LayerSchedule,
    LayeredSampleSet,
    NeighborSpec,
    NodeId,
    PlanRequest,
    PlanStatus,
    PointRobot,
    QueryInCollisionError,
    SearchTrace,
    SpaceSpec,
    WorldModel,
    build,
    extract_path,
    motion_free,
    plan_bmrfmt,
    plan_fmt,
    plan_mrfmt,
)
from mrfmt.bench import corridor2d, empty2d, random_boxes
from mrfmt.planners import _Search

import oracles


def make_request(scenario, heuristic=False, budget=None):
    return PlanRequest(
        world=scenario.world,
        space=scenario.space,
        x_init=scenario.x_init,
        goal=scenario.goal,
        time_budget_ms=budget,
        heuristic=heuristic,
    )


def build_for(scenario, n, layers, seed, kind="linear"):
    schedule = LayerSchedule.linear(n, layers) if kind == "linear" else LayerSchedule.exponential(n, layers)
    return build(
        scenario.world, scenario.space, schedule, scenario.neighbor_spec,
        scenario.x_init, scenario.goal.config, np.random.default_rng(seed),
    )


def walled_scenario():
    """Unit square fully split by a solid wall: no path exists."""
    sc = corridor2d(0.1)
    world = WorldModel(
        np.zeros(2), np.ones(2),
        [Aabb(np.array([0.45, 0.0]), np.array([0.55, 1.0]))],
        PointRobot(), eps=0.05,
    )
    sc.world = world
    return sc


# ---------------------------------------------------------------------------
# FMT* against the explicit-graph Dijkstra oracle
# ---------------------------------------------------------------------------


def test_fmt_matches_dijkstra_in_empty_world():
    sc = empty2d()
    for seed in range(3):
        layered = build_for(sc, 200, 1, seed)
        result = plan_fmt(make_request(sc), layered)
        adj = oracles.explicit_rdisk_edges(sc.space, layered.configs, layered.layer_radii[0])
        dist = oracles.dijkstra(adj, layered.init_index)
        assert result.status is PlanStatus.SOLVED
        assert result.cost == pytest.approx(dist[layered.goal_index], rel=1e-9)


def test_fmt_requires_single_layer():
    sc = empty2d()
    layered = build_for(sc, 100, 2, 0)
    with pytest.raises(ValueError):
        plan_fmt(make_request(sc), layered)


def test_fully_walled_world_fails():
    sc = walled_scenario()
    layered = build_for(sc, 150, 3, 0)
    result = plan_mrfmt(make_request(sc), layered)
    assert result.status is PlanStatus.FAILURE
    assert result.path == [] and math.isinf(result.cost)
    assert result.stats.max_node_expansions <= 1


def test_bmrfmt_fully_walled_world_fails():
    sc = walled_scenario()
    layered = build_for(sc, 150, 3, 0)
    result = plan_bmrfmt(make_request(sc), layered)
    assert result.status is PlanStatus.FAILURE


def test_corridor_solved_when_graph_connects():
    sc = corridor2d(0.1)
    layered = build_for(sc, 400, 1, 1)
    connected = oracles.layer_connects(sc.space, sc.world, layered, 1)
    result = plan_fmt(make_request(sc), layered)
    assert connected  # seed chosen so the free graph crosses the corridor
    assert result.status is PlanStatus.SOLVED


# ---------------------------------------------------------------------------
# L=1 reduction: plan_mrfmt must be plan_fmt
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("heuristic", [False, True])
def test_single_layer_mrfmt_identical_to_fmt(heuristic):
    sc = corridor2d(0.1)
    for seed in range(5):
        layered = build_for(sc, 300, 1, seed)
        request = make_request(sc, heuristic=heuristic)
        t_fmt, t_mr = SearchTrace(), SearchTrace()
        r_fmt = plan_fmt(request, layered, trace=t_fmt)
        r_mr = plan_mrfmt(request, layered, trace=t_mr)
        assert r_fmt.status == r_mr.status
        assert r_fmt.cost == r_mr.cost  # exact float equality: same code path
        assert t_fmt.expanded == t_mr.expanded
        assert t_fmt.trees[0].parent_map() == t_mr.trees[0].parent_map()
        assert t_fmt.trees[0].cost_map() == t_mr.trees[0].cost_map()


# ---------------------------------------------------------------------------
# Multi-resolution behavior on the corridor
# ---------------------------------------------------------------------------


GOLDEN_SEED = 2  # layers 1 and 2 disconnected, layer 3 connected (re-verified below)


def test_corridor_densification_golden_walkthrough():
    sc = corridor2d(0.05)
    layered = build_for(sc, 900, 3, GOLDEN_SEED)
    assert not oracles.layer_connects(sc.space, sc.world, layered, 1)
    assert not oracles.layer_connects(sc.space, sc.world, layered, 2)
    assert oracles.layer_connects(sc.space, sc.world, layered, 3)

    trace = SearchTrace()
    result = plan_mrfmt(make_request(sc), layered, trace=trace)
    assert result.status is PlanStatus.SOLVED
    assert result.stats.layer_switch_count >= 1

    ps = [trace.pointer_log[0][2]] + [entry[3] for entry in trace.pointer_log]
    assert ps[0] == 1
    assert max(ps) == 3  # had to reach the densest layer to cross
    peak = ps.index(3)
    assert min(ps[peak:]) < 3  # and came back down to sparser layers after


def test_layer_pointer_dynamics_replay():
    # p decreases only when a sparser node opened during that expansion;
    # p increases only by one when the current queue empties.
    sc = corridor2d(0.05)
    layered = build_for(sc, 900, 3, GOLDEN_SEED)
    trace = SearchTrace()
    plan_mrfmt(make_request(sc), layered, trace=trace)
    for expansion, tree_id, old_p, new_p in trace.pointer_log:
        assert tree_id == 0
        assert new_p != old_p
        if new_p > old_p:
            assert new_p == old_p + 1
        else:
            assert new_p < old_p  # drop to the sparsest newly opened layer


def test_expansion_order_nondecreasing_cost_single_layer():
    sc = empty2d()
    layered = build_for(sc, 300, 1, 3)
    trace = SearchTrace()
    plan_fmt(make_request(sc, heuristic=False), layered, trace=trace)
    costs = [trace.trees[0].cost_of(n) for n in trace.expanded]
    assert all(a <= b + 1e-12 for a, b in zip(costs, costs[1:]))


def test_tree_consistency_cost_equals_parent_plus_edge():
    sc = corridor2d(0.05)
    layered = build_for(sc, 900, 3, GOLDEN_SEED)
    trace = SearchTrace()
    plan_mrfmt(make_request(sc), layered, trace=trace)
    tree = trace.trees[0]
    for node, parent in tree.parent_map().items():
        edge = (
            0.0
            if node.index == parent.index
            else sc.space.distance(layered.configs[node.index], layered.configs[parent.index])
        )
        assert tree.cost_of(node) == tree.cost_of(parent) + edge


def test_no_motion_check_on_counterpart_edges(monkeypatch):
    sc = corridor2d(0.05)
    layered = build_for(sc, 900, 3, GOLDEN_SEED)
    checked_pairs = []
    real = mrfmt.planners.motion_free

    def spy(world, space, a, b, stats=None):
        checked_pairs.append((a.copy(), b.copy()))
        return real(world, space, a, b, stats)

    monkeypatch.setattr(mrfmt.planners, "motion_free", spy)
    result = plan_mrfmt(make_request(sc), layered)
    assert result.status is PlanStatus.SOLVED
    assert checked_pairs
    for a, b in checked_pairs:
        assert not np.array_equal(a, b)  # identical configs = counterpart edge


def test_counterpart_connected_without_edge_evaluation():
    # All samples isolated (tiny fixed radius): the only edges are the
    # vertical zero-cost ones, so the init's dense counterpart joins the
    # tree for free.
    space = SpaceSpec.euclidean(np.zeros(2), np.ones(2))
    world = WorldModel(np.zeros(2), np.ones(2), [], PointRobot(), eps=0.05)
    rng = np.random.default_rng(0)
    configs = np.vstack([rng.uniform(0.3, 0.7, (8, 2)), [[0.1, 0.1], [0.9, 0.9]]])
    layered = LayeredSampleSet(space, configs, LayerSchedule.explicit([4, 8]),
                               NeighborSpec.fixed_radius(1e-9))
    request = PlanRequest(world, space, np.array([0.1, 0.1]), GoalSpec.exact(np.array([0.9, 0.9])))
    search = _Search(request, layered, trace=None)
    tree = search._make_tree(layered.init_node, None, 0.0)
    assert search.expand(tree, 0, layered.init_node)
    dense_init = NodeId(layered.init_index, 2)
    assert tree.contains(dense_init)
    assert tree.cost_of(dense_init) == 0.0
    assert tree.parent_of(dense_init) == layered.init_node
    assert search.stats.edge_evaluations == 0


def test_expand_once_across_runs():
    sc = corridor2d(0.05)
    for seed in (0, GOLDEN_SEED, 11):
        layered = build_for(sc, 600, 3, seed)
        for planner in (plan_mrfmt, plan_bmrfmt):
            result = planner(make_request(sc, heuristic=True), layered)
            assert result.stats.max_node_expansions <= 1


# ---------------------------------------------------------------------------
# Bidirectional planner
# ---------------------------------------------------------------------------


def test_bmrfmt_meets_near_middle_in_symmetric_world():
    space = SpaceSpec.euclidean(np.zeros(2), np.ones(2))
    world = WorldModel(np.zeros(2), np.ones(2), [], PointRobot(), eps=0.05)
    from mrfmt.bench import Scenario

    sc = Scenario(
        name="sym",
        space=space,
        world=world,
        x_init=np.array([0.1, 0.5]),
        goal=GoalSpec.exact(np.array([0.9, 0.5])),
        neighbor_spec=NeighborSpec.rdisk(),
    )
    costs = []
    for seed in range(10):
        layered = build_for(sc, 2000, 2, seed)
        trace = SearchTrace()
        result = plan_bmrfmt(make_request(sc, heuristic=True), layered, trace=trace)
        assert result.status is PlanStatus.SOLVED
        costs.append(result.cost)
        # the cheapest node shared by both trees sits within one sparse
        # connection radius of the segment midpoint
        fwd, bwd = trace.trees
        meet_candidates = [n for n in fwd.members() if bwd.contains(n)]
        assert meet_candidates
        best = min(meet_candidates, key=lambda n: fwd.cost_of(n) + bwd.cost_of(n))
        midpoint = np.array([0.5, 0.5])
        assert sc.space.distance(layered.configs[best.index], midpoint) <= layered.layer_radii[0] + 0.05
        # every metric edge fits inside the sparsest (largest) radius, so
        # Dijkstra on that graph lower-bounds any mixed-layer path
        adj = oracles.explicit_rdisk_edges(sc.space, layered.configs, layered.layer_radii[0])
        dist = oracles.dijkstra(adj, layered.init_index)
        assert result.cost >= dist[layered.goal_index] - 1e-9
    # first-meet termination costs a little over the optimum; the 5% bound
    # holds in the median over paired seeds
    assert float(np.median(costs)) <= 0.8 * 1.05


def test_bmrfmt_edge_evaluations_not_worse_in_median():
    # paired-seed benchmark on the corridor: the bidirectional search stops
    # at the meeting node, so it should not evaluate more edges overall
    sc = corridor2d(0.1)
    edges_m, edges_b = [], []
    for seed in range(50):
        layered = build_for(sc, 1200, 3, seed)
        request = make_request(sc, heuristic=True)
        edges_m.append(plan_mrfmt(request, layered).stats.edge_evaluations)
        edges_b.append(plan_bmrfmt(request, layered).stats.edge_evaluations)
    assert float(np.median(edges_b)) <= float(np.median(edges_m))


def test_expand_with_no_unvisited_neighbors_closes_z():
    # a complete graph: the first expansion visits everything, so the second
    # expansion has an empty unvisited neighborhood but must still close z
    from mrfmt.planners import _CLOSED

    space = SpaceSpec.euclidean(np.zeros(2), np.ones(2))
    world = WorldModel(np.zeros(2), np.ones(2), [], PointRobot(), eps=0.05)
    rng = np.random.default_rng(1)
    configs = np.vstack([rng.uniform(0.2, 0.8, (8, 2)), [[0.1, 0.1], [0.9, 0.9]]])
    layered = LayeredSampleSet(space, configs, LayerSchedule.explicit([8]),
                               NeighborSpec.fixed_radius(10.0))
    request = PlanRequest(world, space, np.array([0.1, 0.1]), GoalSpec.exact(np.array([0.9, 0.9])))
    search = _Search(request, layered, trace=None)
    tree = search._make_tree(layered.init_node, None, 0.0)
    assert search.expand(tree, 0, layered.init_node)
    assert len(tree.members()) == 10
    z = tree.peek_min()
    assert search.expand(tree, 0, z)
    assert tree.node_state(z) == _CLOSED
    assert len(tree.members()) == 10  # no new connections


def test_bmrfmt_path_endpoints_and_cost():
    sc = corridor2d(0.1)
    layered = build_for(sc, 500, 2, 4)
    result = plan_bmrfmt(make_request(sc), layered)
    assert result.status is PlanStatus.SOLVED
    assert np.allclose(result.path[0], sc.x_init)
    assert np.allclose(result.path[-1], sc.goal.config)
    recomputed = sum(
        sc.space.distance(a, b) for a, b in zip(result.path, result.path[1:])
    )
    assert recomputed == pytest.approx(result.cost, abs=1e-9)
    for a, b in zip(result.path, result.path[1:]):
        assert motion_free(sc.world, sc.space, a, b)


# ---------------------------------------------------------------------------
# Path extraction
# ---------------------------------------------------------------------------


def test_extract_path_root_only():
    sc = empty2d()
    layered = build_for(sc, 100, 1, 0)
    trace = SearchTrace()
    plan_fmt(make_request(sc), layered, trace=trace)
    tree = trace.trees[0]
    path = extract_path(tree, tree.root)
    assert len(path) == 1
    assert np.allclose(path[0], sc.x_init)


def test_extract_path_collapses_counterpart_hops():
    sc = corridor2d(0.05)
    layered = build_for(sc, 900, 3, GOLDEN_SEED)
    trace = SearchTrace()
    result = plan_mrfmt(make_request(sc), layered, trace=trace)
    assert result.status is PlanStatus.SOLVED
    for a, b in zip(result.path, result.path[1:]):
        assert not np.array_equal(a, b)
    recomputed = sum(sc.space.distance(a, b) for a, b in zip(result.path, result.path[1:]))
    assert recomputed == pytest.approx(result.cost, abs=1e-9)


def test_extract_path_rejects_unknown_node():
    sc = walled_scenario()
    layered = build_for(sc, 150, 1, 0)
    trace = SearchTrace()
    result = plan_fmt(make_request(sc), layered, trace=trace)
    assert result.status is PlanStatus.FAILURE
    with pytest.raises(ValueError):
        extract_path(trace.trees[0], layered.goal_node)  # goal never joined the tree


# ---------------------------------------------------------------------------
# Requests, goals, termination
# ---------------------------------------------------------------------------


def test_query_in_collision_raises():
    sc = corridor2d(0.1)
    layered = build_for(sc, 200, 1, 0)
    bad = PlanRequest(sc.world, sc.space, np.array([0.5, 0.2]), sc.goal)
    with pytest.raises((QueryInCollisionError, ValueError)):
        plan_fmt(bad, layered)


def test_ball_goal_any_node_inside_qualifies():
    sc = empty2d()
    sc.goal = GoalSpec.ball(np.array([0.9, 0.9]), 0.15)
    layered = build_for(sc, 300, 2, 5)
    result = plan_mrfmt(make_request(sc), layered)
    assert result.status is PlanStatus.SOLVED
    assert sc.space.distance(result.path[-1], np.array([0.9, 0.9])) <= 0.15


def test_ball_goal_bidirectional_roots_at_center():
    # the backward tree roots at the ball center, so the path ends there
    sc = empty2d()
    sc.goal = GoalSpec.ball(np.array([0.9, 0.9]), 0.15)
    layered = build_for(sc, 300, 2, 5)
    result = plan_bmrfmt(make_request(sc), layered)
    assert result.status is PlanStatus.SOLVED
    assert np.allclose(result.path[-1], [0.9, 0.9])
    assert np.allclose(result.path[0], sc.x_init)


def test_timeout_status():
    sc = corridor2d(0.05)
    layered = build_for(sc, 2000, 3, 0)
    result = plan_mrfmt(make_request(sc, budget=1e-3), layered)
    assert result.status is PlanStatus.TIMEOUT
    assert math.isinf(result.cost)


def test_heuristic_does_not_change_status_on_golden_scenarios():
    for sc_build in (lambda: corridor2d(0.1), lambda: corridor2d(0.05), lambda: random_boxes(2)):
        sc = sc_build()
        for seed in range(4):
            layered = build_for(sc, 500, 2, seed)
            r_off = plan_mrfmt(make_request(sc, heuristic=False), layered)
            r_on = plan_mrfmt(make_request(sc, heuristic=True), layered)
            assert r_off.status == r_on.status
            if r_on.status is PlanStatus.SOLVED:
                for a, b in zip(r_on.path, r_on.path[1:]):
                    assert motion_free(sc.world, sc.space, a, b)


def test_request_mismatched_init_rejected():
    sc = empty2d()
    layered = build_for(sc, 100, 1, 0)
    request = PlanRequest(sc.world, sc.space, np.array([0.2, 0.2]), sc.goal)
    with pytest.raises(ValueError):
        plan_fmt(request, layered)


def test_solved_paths_validate_at_scenario_eps():
    sc = corridor2d(0.05)
    for seed in range(4):
        layered = build_for(sc, 900, 3, seed)
        for planner in (plan_mrfmt, plan_bmrfmt):
            result = planner(make_request(sc, heuristic=True), layered)
            if result.status is PlanStatus.SOLVED:
                assert np.allclose(result.path[0], sc.x_init)
                for a, b in zip(result.path, result.path[1:]):
                    assert motion_free(sc.world, sc.space, a, b)
