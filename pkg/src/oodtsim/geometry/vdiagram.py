"""Boundary-pair visibility space and the grid-connectivity search oracle.

A configuration is a pair of boundary points (x, y) with x - D <= y <= x:
the chain from y clockwise to x is the cleared part of the boundary.  The
start line y = x (nothing cleared) and goal line y = x - D (everything
cleared) are both degenerate pairs.  Quotienting out the x -> x + D
periodicity turns the band into a cylinder indexed by (lead sample, gap).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .polygon import Polygon
from .visibility import boundary_samples, mutual_visibility_matrix, reflex_rays


@dataclass
class VisibilityGrid:
    """Pairwise mutual-visibility samples along the boundary."""

    polygon: Polygon
    resolution: int
    arclengths: np.ndarray  # (M,) clockwise sample positions
    points: np.ndarray      # (M, 2)
    vis: np.ndarray         # (M, M) symmetric bool, True diagonal

    @property
    def D(self) -> float:
        return self.polygon.D

    def free(self, i: int, j: int) -> bool:
        """Is the pair (sample i, sample j) mutually visible?"""
        return bool(self.vis[i % len(self.arclengths), j % len(self.arclengths)])


def visibility_grid(poly: Polygon, resolution: int) -> VisibilityGrid:
    """Sample vertices plus ``resolution`` points per edge and mark visible pairs."""
    if resolution < 4:
        raise ValueError("resolution must be >= 4")
    ss, pts = boundary_samples(poly, resolution)
    vis = mutual_visibility_matrix(poly, pts)
    return VisibilityGrid(poly, resolution, ss, pts, vis)


def _cylinder_free(vis: np.ndarray) -> np.ndarray:
    """Free cells on the (lead sample, gap index) cylinder, gap in 0..M."""
    m = len(vis)
    i = np.arange(m)[:, None]
    k = np.arange(m + 1)[None, :]
    j = (i - k) % m
    free = vis[i, j].copy()
    free[:, 0] = True
    free[:, m] = True
    return free


class _UnionFind:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, a):
        while self.p[a] != a:
            self.p[a] = self.p[self.p[a]]
            a = self.p[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[ra] = rb


def _rims_connected(free: np.ndarray) -> bool:
    m = free.shape[0]
    labels, count = ndimage.label(free, structure=np.ones((3, 3), dtype=int))
    if count == 0:
        return False
    uf = _UnionFind(count + 1)
    # the lead coordinate wraps: stitch row m-1 back onto row 0
    top = labels[0]
    bot = labels[m - 1]
    width = free.shape[1]
    for k in range(width):
        if bot[k] == 0:
            continue
        for dk in (-1, 0, 1):
            kk = k + dk
            if 0 <= kk < width and top[kk] != 0:
                uf.union(bot[k], top[kk])
    start = labels[0, 0]          # gap-0 rim (all free, one component)
    goal = labels[0, width - 1]   # gap-D rim
    return uf.find(start) == uf.find(goal)


def oracle_searchable(poly: Polygon, resolution: int) -> bool:
    """Brute-force searchability: an 8-connected free path from the start
    line to the goal line of the sampled visibility band."""
    grid = visibility_grid(poly, resolution)
    return oracle_searchable_from_grid(grid)


def oracle_searchable_from_grid(grid: VisibilityGrid) -> bool:
    return _rims_connected(_cylinder_free(grid.vis))


# -- skeleton bones ----------------------------------------------------------


@dataclass(frozen=True)
class Bones:
    """Axis-aligned obstruction segments of one reflex vertex in V-space."""

    vertex_index: int
    sl: tuple[tuple[float, float], tuple[float, float]]
    el: tuple[tuple[float, float], tuple[float, float]]
    nl: tuple[tuple[float, float], tuple[float, float]]
    wl: tuple[tuple[float, float], tuple[float, float]]


@dataclass
class SkeletonDiagram:
    polygon: Polygon
    bones: dict[int, Bones]

    @property
    def D(self) -> float:
        return self.polygon.D


def skeleton_diagram(poly: Polygon) -> SkeletonDiagram:
    """Bones of every reflex vertex: the southward/eastward pair of the
    barrier corner on the start line and the mirrored northward/westward
    pair of the corner on the goal line."""
    D = poly.D
    bones = {}
    for r in poly.reflex_indices():
        rr = reflex_rays(poly, r)
        s_r = poly.vertex_arclength(r)
        back = s_r - poly.cw_distance(rr.back.s, s_r)   # lifted, <= s_r
        forw = s_r + poly.cw_distance(s_r, rr.forw.s)   # lifted, >= s_r
        bones[r] = Bones(
            vertex_index=r,
            sl=((s_r, s_r), (s_r, back)),
            el=((s_r, s_r), (forw, s_r)),
            nl=((D + s_r, s_r), (D + s_r, forw)),
            wl=((D + back, s_r), (D + s_r, s_r)),
        )
    return SkeletonDiagram(poly, bones)
