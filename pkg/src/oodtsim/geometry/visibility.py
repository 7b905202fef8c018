"""Visibility predicates and ray shooting inside a simple polygon.

Degenerate incidences (segments or rays passing exactly through a vertex)
are tie-broken as if every vertex were displaced inward by an
infinitesimal amount: a reflex vertex therefore blocks anything grazing
it, while a convex vertex lets tangential contact pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from ..errors import NotReflex, PointOutsidePolygon
from .polygon import BoundaryPoint, Polygon


def _edge_arrays(poly: Polygon):
    v = poly.vertices
    nxt = np.roll(v, -1, axis=0)
    return v[:, 0].copy(), v[:, 1].copy(), nxt[:, 0].copy(), nxt[:, 1].copy()


def _reflex_arrays(poly: Polygon):
    idx = poly.reflex_indices()
    if not idx:
        return np.empty(0), np.empty(0)
    r = poly.vertices[idx]
    return r[:, 0].copy(), r[:, 1].copy()


def visible(poly: Polygon, a, b, *, strict: bool = True) -> bool:
    """True iff the closed segment ab lies inside the closed polygon.

    With ``strict`` (default) a segment grazing a reflex vertex strictly
    between its endpoints counts as blocked (inward perturbation rule);
    schedule replay uses ``strict=False`` to accept limit configurations.
    """
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    if not poly.contains((ax, ay)) or not poly.contains((bx, by)):
        raise PointOutsidePolygon("visibility endpoints must lie in the closed polygon")
    vx, vy, nx, ny = _edge_arrays(poly)
    rx, ry = _reflex_arrays(poly) if strict else (np.empty(0), np.empty(0))
    return bool(_seg_visible(ax, ay, bx, by, vx, vy, nx, ny, rx, ry,
                             poly.tol, poly.tol * poly.scale))


def mutual_visibility_matrix(poly: Polygon, points: np.ndarray) -> np.ndarray:
    """Pairwise strict visibility over boundary points (symmetric, True diagonal)."""
    vx, vy, nx, ny = _edge_arrays(poly)
    rx, ry = _reflex_arrays(poly)
    pts = np.asarray(points, dtype=float)
    return _vis_matrix(pts[:, 0].copy(), pts[:, 1].copy(), vx, vy, nx, ny,
                       rx, ry, poly.tol, poly.tol * poly.scale)


def boundary_samples(poly: Polygon, per_edge: int):
    """Arclengths and coordinates of vertices plus ``per_edge`` interior points per edge."""
    ss = []
    for i in range(poly.n):
        s0 = poly.arclengths[i]
        L = poly.edge_lengths[i]
        ss.append(float(s0))
        for k in range(1, per_edge + 1):
            ss.append(float(s0 + L * k / (per_edge + 1)))
    ss = np.array(ss)
    pts = np.array([poly.point_at(s) for s in ss])
    return ss, pts


# -- ray shooting -----------------------------------------------------------


@dataclass(frozen=True)
class ReflexRays:
    """Boundary hits of the two ray extensions through a reflex vertex."""

    vertex_index: int
    back: BoundaryPoint
    forw: BoundaryPoint


def reflex_rays(poly: Polygon, r: int) -> ReflexRays:
    """Rays Succ(r)->r and Pred(r)->r extended to their first boundary exits."""
    if not poly.reflex_flags[r]:
        raise NotReflex(f"vertex {r} is not reflex")
    v = poly.vertices
    n = poly.n
    origin = v[r]
    back_pt = ray_exit_point(poly, origin, origin - v[(r + 1) % n])
    forw_pt = ray_exit_point(poly, origin, origin - v[(r - 1) % n])
    sb = poly.arclength_of_point(back_pt)
    sf = poly.arclength_of_point(forw_pt)
    return ReflexRays(r, BoundaryPoint(poly, sb), BoundaryPoint(poly, sf))


def ray_exit_point(poly: Polygon, origin, direction) -> tuple[float, float]:
    """First point where the ray from ``origin`` leaves the closed polygon.

    ``origin`` may lie on the boundary; the ray must immediately enter the
    closed region.  Grazed reflex vertices terminate the ray (perturbation
    rule); tangential contact with convex vertices is passed through.
    """
    ox, oy = float(origin[0]), float(origin[1])
    dx, dy = float(direction[0]), float(direction[1])
    norm = math.hypot(dx, dy)
    dx, dy = dx / norm, dy / norm
    tol = poly.tol
    tol_area = tol * poly.scale
    min_param = 8.0 * tol
    v = poly.vertices
    n = poly.n

    params: list[float] = []
    for k in range(n):
        px, py = v[k]
        qx, qy = v[(k + 1) % n]
        ex, ey = qx - px, qy - py
        elen = poly.edge_lengths[k]
        denom = dx * ey - dy * ex
        wx, wy = px - ox, py - oy
        if abs(denom) > 1e-12 * elen:
            s = (wx * ey - wy * ex) / denom
            u = (wx * dy - wy * dx) / denom
            if s > min_param and -1e-9 <= u <= 1 + 1e-9:
                params.append(s)
        else:
            # parallel; collinear overlap contributes both endpoints
            if abs(wx * dy - wy * dx) <= tol:
                for cx, cy in ((px, py), (qx, qy)):
                    s = (cx - ox) * dx + (cy - oy) * dy
                    if s > min_param:
                        params.append(s)

    # grazed reflex vertices cut the ray (inward perturbation)
    graze = math.inf
    for i in poly.reflex_indices():
        cx, cy = v[i]
        s = (cx - ox) * dx + (cy - oy) * dy
        if s > min_param:
            hx, hy = ox + s * dx, oy + s * dy
            if math.hypot(hx - cx, hy - cy) <= 2 * tol:
                graze = min(graze, s)

    contacts = sorted(s for s in params if s < graze - tol)
    if math.isfinite(graze):
        contacts.append(graze)
    exit_s = math.nan
    prev = min_param
    for s in contacts:
        if s - prev > 4 * tol:
            mx, my = ox + 0.5 * (prev + s) * dx, oy + 0.5 * (prev + s) * dy
            if not poly.contains((mx, my)):
                exit_s = prev  # the ray left at the previous contact
                break
        prev = max(prev, s)
    else:
        exit_s = prev  # final boundary contact is the exit

    if not math.isfinite(exit_s) or exit_s <= min_param:
        raise PointOutsidePolygon("ray never enters the polygon (degenerate input)")
    return ox + exit_s * dx, oy + exit_s * dy


# -- numba kernels ----------------------------------------------------------


@njit(cache=True)
def _point_in_closed(px, py, vx, vy, nx, ny, tol):
    n = len(vx)
    inside = False
    for i in range(n):
        if (vy[i] > py) != (ny[i] > py):
            xint = vx[i] + (py - vy[i]) * (nx[i] - vx[i]) / (ny[i] - vy[i])
            if px < xint:
                inside = not inside
    if inside:
        return True
    # boundary counts as inside
    for i in range(n):
        ex, ey = nx[i] - vx[i], ny[i] - vy[i]
        L2 = ex * ex + ey * ey
        if L2 <= 0.0:
            continue
        t = ((px - vx[i]) * ex + (py - vy[i]) * ey) / L2
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        qx = vx[i] + ex * t - px
        qy = vy[i] + ey * t - py
        if qx * qx + qy * qy <= tol * tol * 16.0:
            return True
    return False


@njit(cache=True)
def _seg_visible(ax, ay, bx, by, vx, vy, nx, ny, rx, ry, tol, tol_area):
    sx, sy = bx - ax, by - ay
    seg_len = math.hypot(sx, sy)
    if seg_len <= 2 * tol:
        return True
    n = len(vx)
    ts = np.empty(2 * n + 2)
    ts[0] = 0.0
    ts[1] = 1.0
    m = 2
    for k in range(n):
        px, py = vx[k], vy[k]
        qx, qy = nx[k], ny[k]
        o1 = sx * (py - ay) - sy * (px - ax)
        o2 = sx * (qy - ay) - sy * (qx - ax)
        ex, ey = qx - px, qy - py
        o3 = ex * (ay - py) - ey * (ax - px)
        o4 = ex * (by - py) - ey * (bx - px)
        if ((o1 > tol_area and o2 < -tol_area) or (o1 < -tol_area and o2 > tol_area)) and \
           ((o3 > tol_area and o4 < -tol_area) or (o3 < -tol_area and o4 > tol_area)):
            return False
        col1 = abs(o1) <= tol_area
        col2 = abs(o2) <= tol_area
        if col1 and col2:
            # collinear with the segment's line: clip both endpoints in
            for cx, cy in ((px, py), (qx, qy)):
                t = ((cx - ax) * sx + (cy - ay) * sy) / (seg_len * seg_len)
                if -1e-9 <= t <= 1 + 1e-9:
                    ts[m] = min(1.0, max(0.0, t))
                    m += 1
        else:
            if col1:
                t = ((px - ax) * sx + (py - ay) * sy) / (seg_len * seg_len)
                if -1e-9 <= t <= 1 + 1e-9:
                    hx = ax + t * sx - px
                    hy = ay + t * sy - py
                    if hx * hx + hy * hy <= 16 * tol * tol:
                        ts[m] = min(1.0, max(0.0, t))
                        m += 1
            if col2:
                t = ((qx - ax) * sx + (qy - ay) * sy) / (seg_len * seg_len)
                if -1e-9 <= t <= 1 + 1e-9:
                    hx = ax + t * sx - qx
                    hy = ay + t * sy - qy
                    if hx * hx + hy * hy <= 16 * tol * tol:
                        ts[m] = min(1.0, max(0.0, t))
                        m += 1

    # inward perturbation: reflex vertices block grazing segments
    t_eps = 2 * tol / seg_len
    for i in range(len(rx)):
        t = ((rx[i] - ax) * sx + (ry[i] - ay) * sy) / (seg_len * seg_len)
        if t_eps < t < 1.0 - t_eps:
            hx = ax + t * sx - rx[i]
            hy = ay + t * sy - ry[i]
            if hx * hx + hy * hy <= tol * tol * 4.0:
                return False

    # insertion sort of contact parameters
    for i in range(1, m):
        key = ts[i]
        j = i - 1
        while j >= 0 and ts[j] > key:
            ts[j + 1] = ts[j]
            j -= 1
        ts[j + 1] = key

    prev = ts[0]
    for i in range(1, m):
        t = ts[i]
        if (t - prev) * seg_len > 4 * tol:
            mx = ax + 0.5 * (prev + t) * sx
            my = ay + 0.5 * (prev + t) * sy
            if not _point_in_closed(mx, my, vx, vy, nx, ny, tol):
                return False
        if t > prev:
            prev = t
    return True


@njit(cache=True)
def _vis_matrix(sx, sy, vx, vy, nx, ny, rx, ry, tol, tol_area):
    m = len(sx)
    out = np.ones((m, m), dtype=np.bool_)
    for i in range(m):
        for j in range(i + 1, m):
            ok = _seg_visible(sx[i], sy[i], sx[j], sy[j],
                              vx, vy, nx, ny, rx, ry, tol, tol_area)
            out[i, j] = ok
            out[j, i] = ok
    return out
