"""Simple polygon with clockwise boundary parameterization."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import CollinearDegenerate, DuplicateVertex, SelfIntersecting

# Relative tolerance for all geometric predicates (scaled by polygon extent).
REL_TOL = 1e-9


def _cross(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


class Polygon:
    """Simple polygon stored as a clockwise vertex ring.

    Boundary points are addressed by arclength, measured clockwise from
    vertex 0 and wrapping modulo the total boundary length ``D``.
    """

    __slots__ = ("vertices", "n", "D", "reflex_flags", "arclengths",
                 "edge_lengths", "scale", "tol")

    def __init__(self, vertices: np.ndarray):
        # assumes `vertices` already validated and clockwise
        self.vertices = vertices
        self.n = len(vertices)
        d = np.diff(np.vstack([vertices, vertices[:1]]), axis=0)
        self.edge_lengths = np.hypot(d[:, 0], d[:, 1])
        self.arclengths = np.concatenate([[0.0], np.cumsum(self.edge_lengths)])
        self.D = float(self.arclengths[-1])
        self.scale = float(max(np.abs(vertices).max(), self.D))
        self.tol = REL_TOL * self.scale
        self.reflex_flags = _reflex_flags(vertices)

    # -- boundary parameterization ------------------------------------

    def wrap(self, s: float) -> float:
        return s % self.D

    def point_at(self, s: float) -> tuple[float, float]:
        """Boundary point at clockwise arclength ``s`` (wraps mod D)."""
        s = s % self.D
        i = int(np.searchsorted(self.arclengths, s, side="right") - 1)
        i = min(i, self.n - 1)
        t = s - self.arclengths[i]
        x0, y0 = self.vertices[i]
        x1, y1 = self.vertices[(i + 1) % self.n]
        L = self.edge_lengths[i]
        if L <= 0:
            return float(x0), float(y0)
        u = t / L
        return float(x0 + (x1 - x0) * u), float(y0 + (y1 - y0) * u)

    def vertex_arclength(self, i: int) -> float:
        return float(self.arclengths[i % self.n])

    def edge_index_at(self, s: float) -> int:
        s = s % self.D
        i = int(np.searchsorted(self.arclengths, s, side="right") - 1)
        return min(i, self.n - 1)

    def arclength_of_point(self, pt) -> float | None:
        """Arclength of a point on the boundary, or ``None`` if off it."""
        px, py = pt
        best = None
        best_d = 4.0 * self.tol
        for i in range(self.n):
            ax, ay = self.vertices[i]
            bx, by = self.vertices[(i + 1) % self.n]
            L = self.edge_lengths[i]
            if L <= 0:
                continue
            t = ((px - ax) * (bx - ax) + (py - ay) * (by - ay)) / (L * L)
            t = min(1.0, max(0.0, t))
            qx, qy = ax + (bx - ax) * t, ay + (by - ay) * t
            d = math.hypot(px - qx, py - qy)
            if d < best_d:
                best_d = d
                best = self.arclengths[i] + t * L
        if best is None:
            return None
        return float(best % self.D)

    def cw_distance(self, s_from: float, s_to: float) -> float:
        """Clockwise arclength from ``s_from`` to ``s_to``."""
        return (s_to - s_from) % self.D

    # -- containment ----------------------------------------------------

    def on_boundary(self, pt) -> bool:
        return self.arclength_of_point(pt) is not None

    def contains(self, pt) -> bool:
        """True for points in the closed region (boundary included)."""
        if self.on_boundary(pt):
            return True
        return self.contains_interior(pt)

    def contains_interior(self, pt) -> bool:
        # ray cast; only trustworthy for points clear of the boundary
        px, py = pt
        inside = False
        vx = self.vertices[:, 0]
        vy = self.vertices[:, 1]
        j = self.n - 1
        for i in range(self.n):
            if (vy[i] > py) != (vy[j] > py):
                xint = vx[i] + (py - vy[i]) * (vx[j] - vx[i]) / (vy[j] - vy[i])
                if px < xint:
                    inside = not inside
            j = i
        return inside

    # -- misc -------------------------------------------------------------

    def reflex_indices(self) -> list[int]:
        return [i for i in range(self.n) if self.reflex_flags[i]]

    def is_convex(self) -> bool:
        return not self.reflex_flags.any()

    def __repr__(self):
        return f"Polygon(n={self.n}, D={self.D:.6g}, reflex={int(self.reflex_flags.sum())})"


@dataclass(frozen=True)
class BoundaryPoint:
    """Point on a polygon boundary, addressed by clockwise arclength."""

    polygon: Polygon
    s: float

    def __post_init__(self):
        object.__setattr__(self, "s", self.s % self.polygon.D)

    def point(self) -> tuple[float, float]:
        return self.polygon.point_at(self.s)


def _reflex_flags(vertices: np.ndarray) -> np.ndarray:
    n = len(vertices)
    flags = np.zeros(n, dtype=bool)
    for i in range(n):
        ax, ay = vertices[i - 1]
        bx, by = vertices[i]
        cx, cy = vertices[(i + 1) % n]
        # clockwise ring: (prev-cur) x (next-cur) < 0 iff interior angle > 180 degrees
        flags[i] = _cross(bx, by, ax, ay, cx, cy) < 0
    return flags


def _signed_area(vertices: np.ndarray) -> float:
    x = vertices[:, 0]
    y = vertices[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _segments_intersect(p1, p2, p3, p4, tol_area) -> bool:
    """Do closed segments p1p2 and p3p4 share any point?"""
    d1 = _cross(p3[0], p3[1], p4[0], p4[1], p1[0], p1[1])
    d2 = _cross(p3[0], p3[1], p4[0], p4[1], p2[0], p2[1])
    d3 = _cross(p1[0], p1[1], p2[0], p2[1], p3[0], p3[1])
    d4 = _cross(p1[0], p1[1], p2[0], p2[1], p4[0], p4[1])
    if ((d1 > tol_area and d2 < -tol_area) or (d1 < -tol_area and d2 > tol_area)) and \
       ((d3 > tol_area and d4 < -tol_area) or (d3 < -tol_area and d4 > tol_area)):
        return True

    def on_seg(a, b, c):
        if abs(_cross(a[0], a[1], b[0], b[1], c[0], c[1])) > tol_area:
            return False
        return (min(a[0], b[0]) - 1e-12 <= c[0] <= max(a[0], b[0]) + 1e-12 and
                min(a[1], b[1]) - 1e-12 <= c[1] <= max(a[1], b[1]) + 1e-12)

    return (on_seg(p3, p4, p1) or on_seg(p3, p4, p2) or
            on_seg(p1, p2, p3) or on_seg(p1, p2, p4))


def polygon_new(points) -> Polygon:
    """Build a validated clockwise Polygon from a point sequence.

    Counterclockwise input is reversed.  Rejects rings with duplicate
    vertices, three consecutive collinear vertices, or self-intersections.
    """
    pts = np.asarray([(float(x), float(y)) for x, y in points], dtype=float)
    if len(pts) < 3:
        raise DuplicateVertex("polygon needs at least 3 distinct points")
    if not np.isfinite(pts).all():
        raise DuplicateVertex("polygon coordinates must be finite")
    n = len(pts)
    scale = max(1e-30, float(np.abs(pts).max()))
    tol = REL_TOL * scale
    tol_area = tol * scale

    for i in range(n):
        for j in range(i + 1, n):
            if math.hypot(*(pts[i] - pts[j])) <= 2 * tol:
                raise DuplicateVertex(f"vertices {i} and {j} coincide")

    for i in range(n):
        a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
        if abs(_cross(b[0], b[1], a[0], a[1], c[0], c[1])) <= tol_area:
            raise CollinearDegenerate(f"vertices {(i - 1) % n},{i},{(i + 1) % n} are collinear")

    for i in range(n):
        p1, p2 = pts[i], pts[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # adjacent edges share a vertex by construction
            p3, p4 = pts[j], pts[(j + 1) % n]
            if _segments_intersect(p1, p2, p3, p4, tol_area):
                raise SelfIntersecting(f"edges {i} and {j} intersect")

    if _signed_area(pts) > 0:  # counterclockwise input
        pts = pts[::-1].copy()
    return Polygon(pts)
