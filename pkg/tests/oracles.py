"""Independent oracles used by the test suite.

These deliberately avoid the library's own search and spatial-index code:
graph construction is brute force over all pairs, shortest paths come from
a textbook Dijkstra, connectivity from union-find, and geometry
cross-checks go through shapely.
"""

from __future__ import annotations

import heapq
import math

import numpy as np


def brute_force_ball(space, configs: np.ndarray, center_index: int, radius: float) -> list[int]:
    """All indices within ``radius`` of configs[center_index], excluding itself."""
    dists = space.distance_many(configs[center_index], configs)
    return [i for i in range(len(configs)) if i != center_index and dists[i] <= radius]


def explicit_rdisk_edges(space, configs: np.ndarray, radius: float) -> dict[int, list[tuple[int, float]]]:
    """Adjacency of the r-disk graph over all configurations, by brute force."""
    adj: dict[int, list[tuple[int, float]]] = {i: [] for i in range(len(configs))}
    for i in range(len(configs)):
        dists = space.distance_many(configs[i], configs[i + 1 :])
        for off, d in enumerate(dists):
            j = i + 1 + off
            if d <= radius:
                adj[i].append((j, float(d)))
                adj[j].append((i, float(d)))
    return adj


def dijkstra(adj: dict[int, list[tuple[int, float]]], source: int) -> list[float]:
    dist = [math.inf] * len(adj)
    dist[source] = 0.0
    done = [False] * len(adj)
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


def layer_connects(space, world, layered, layer: int) -> bool:
    """Union-find check: does layer ``layer``'s collision-free r-disk graph
    connect init to goal? Edges are validated with the library's motion
    check but the connectivity logic is independent of the planners."""
    from mrfmt.world import motion_free

    n_l = layered.layer_size(layer)
    members = list(range(n_l)) + [layered.init_index, layered.goal_index]
    pos = {m: k for k, m in enumerate(members)}
    r = layered.layer_radii[layer - 1]
    uf = UnionFind(len(members))
    pts = layered.configs[members]
    for a_k, m in enumerate(members):
        dists = space.distance_many(pts[a_k], pts)
        for b_k in range(a_k + 1, len(members)):
            if dists[b_k] <= r and motion_free(world, space, pts[a_k], pts[b_k]):
                uf.union(a_k, b_k)
    return uf.connected(pos[layered.init_index], pos[layered.goal_index])


# ---------------------------------------------------------------------------
# Geometry cross-checks via shapely
# ---------------------------------------------------------------------------


def shapely_segment_hits_box(a, b, lo, hi) -> bool:
    from shapely.geometry import LineString, box

    return LineString([tuple(a), tuple(b)]).intersects(box(lo[0], lo[1], hi[0], hi[1]))


def shapely_segment_hits_polygon(a, b, vertices) -> bool:
    from shapely.geometry import LineString, Polygon

    return LineString([tuple(a), tuple(b)]).intersects(Polygon([tuple(v) for v in vertices]))


def shapely_polygons_collide(verts_a, verts_b) -> bool:
    from shapely.geometry import Polygon

    return Polygon([tuple(v) for v in verts_a]).intersects(Polygon([tuple(v) for v in verts_b]))
