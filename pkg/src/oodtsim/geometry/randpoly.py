"""Seeded random simple polygon generation (2-opt untangling)."""

from __future__ import annotations

import numpy as np

from ..errors import PolygonError
from .polygon import Polygon, polygon_new, _cross


def _proper_cross(p1, p2, p3, p4) -> bool:
    d1 = _cross(p3[0], p3[1], p4[0], p4[1], p1[0], p1[1])
    d2 = _cross(p3[0], p3[1], p4[0], p4[1], p2[0], p2[1])
    d3 = _cross(p1[0], p1[1], p2[0], p2[1], p3[0], p3[1])
    d4 = _cross(p1[0], p1[1], p2[0], p2[1], p4[0], p4[1])
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


def _untangle(pts: np.ndarray, max_rounds: int = 4000) -> np.ndarray | None:
    """Remove ring self-crossings by reversing sub-paths (2-opt)."""
    n = len(pts)
    order = list(range(n))
    for _ in range(max_rounds):
        crossed = False
        for i in range(n):
            a, b = order[i], order[(i + 1) % n]
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                c, d = order[j], order[(j + 1) % n]
                if _proper_cross(pts[a], pts[b], pts[c], pts[d]):
                    lo, hi = i + 1, j
                    order[lo:hi + 1] = order[lo:hi + 1][::-1]
                    crossed = True
                    break
            if crossed:
                break
        if not crossed:
            return pts[order]
    return None


def random_simple_polygon(n: int, rng: np.random.Generator,
                          max_attempts: int = 60) -> Polygon:
    """Random simple polygon with n vertices in the unit square."""
    for _ in range(max_attempts):
        pts = rng.random((n, 2))
        ring = _untangle(pts)
        if ring is None:
            continue
        try:
            return polygon_new(ring)
        except PolygonError:
            continue
    raise RuntimeError(f"could not generate a simple {n}-gon")


def random_convex_polygon(n: int, rng: np.random.Generator) -> Polygon:
    """Random convex polygon (vertices on a jittered circle hull)."""
    from scipy.spatial import ConvexHull
    while True:
        pts = rng.random((max(n * 3, 12), 2))
        hull = ConvexHull(pts)
        verts = pts[hull.vertices]
        if len(verts) >= n:
            verts = verts[np.sort(rng.choice(len(verts), size=n, replace=False))]
        try:
            return polygon_new(verts)
        except PolygonError:
            continue


def polygon_corpus(count: int, seed: int, n_min: int = 4, n_max: int = 12) -> list[Polygon]:
    """Deterministic mixed corpus used by the agreement tests."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(n_min, n_max + 1))
        out.append(random_simple_polygon(n, rng))
    return out
