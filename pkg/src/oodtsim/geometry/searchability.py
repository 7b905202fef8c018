"""LR-visibility, bi-tangent classification, and the searchability decision.

Bi-tangent kinds are classified from two chain-exclusion predicates over
the ray-shot components of a mutually visible reflex pair (r, l):

  excl_back(r, l):  r is not on the chain from l clockwise to Back(l)
  excl_forw(r, l):  l is not on the chain from r counterclockwise to Forw(r)

A one-side bi-tangent mixes the two exclusions; the double variants apply
one exclusion in both directions.  The inner-chain conventions below were
fixed by exhaustive comparison against the grid-connectivity oracle over
random polygon corpora.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NotLRVisible
from .polygon import Polygon
from .visibility import (boundary_samples, mutual_visibility_matrix,
                         reflex_rays, visible)

# decision-side sampling densities
LR_CHECK_PER_EDGE = 12   # density of the for-all visibility check
LR_SPLIT_STRIDE = 2      # every LR_SPLIT_STRIDE-th sample is a split candidate

# pinned definitional choices (see module docstring)
ONE_SIDE_INNER = "l_to_r"    # inner chain of one-side (r, l): cw from l to r
DOUBLE_INNER = "short"       # inner chain of a double pair: shorter chain
DOUBLE_RULE = "mutual"       # double = exclusion holds in both directions
C4_SINGLE_RULE = "either"    # left(w,u) = exclusion holds in either direction


@dataclass(frozen=True)
class BiTangent:
    """Classified reflex pair with its inner chain (clockwise interval)."""

    kind: str                      # "one_side" | "double_left" | "double_right"
    endpoints: tuple[int, int]
    inner_start: float             # arclength where the inner chain begins
    inner_len: float               # clockwise extent of the inner chain


@dataclass(frozen=True)
class Theorem1Conditions:
    c1: bool
    c2: bool
    c3: bool
    c4: bool

    def any(self) -> bool:
        return self.c1 or self.c2 or self.c3 or self.c4


class _ShotTable:
    """Per reflex vertex: arclengths of the vertex and its two ray shots."""

    def __init__(self, poly: Polygon):
        self.poly = poly
        self.rho = {}
        self.back = {}
        self.forw = {}
        for r in poly.reflex_indices():
            rr = reflex_rays(poly, r)
            self.rho[r] = poly.vertex_arclength(r)
            self.back[r] = rr.back.s
            self.forw[r] = rr.forw.s

    def in_back_chain(self, s: float, l: int) -> bool:
        # chain from l clockwise to Back(l)
        p = self.poly
        return p.cw_distance(self.rho[l], s) <= p.cw_distance(self.rho[l], self.back[l]) + p.tol

    def in_forw_chain(self, s: float, r: int) -> bool:
        # chain from r counterclockwise to Forw(r)
        p = self.poly
        return p.cw_distance(self.forw[r], s) <= p.cw_distance(self.forw[r], self.rho[r]) + p.tol

    def excl_back(self, r: int, l: int) -> bool:
        return not self.in_back_chain(self.rho[r], l)

    def excl_forw(self, r: int, l: int) -> bool:
        return not self.in_forw_chain(self.rho[l], r)


def _visible_pairs(poly: Polygon) -> dict[tuple[int, int], bool]:
    out = {}
    idx = poly.reflex_indices()
    for i, a in enumerate(idx):
        for b in idx[i + 1:]:
            out[(a, b)] = visible(poly, poly.vertices[a], poly.vertices[b])
    return out


def _chain(poly: Polygon, a: float, b: float) -> tuple[float, float]:
    return a, poly.cw_distance(a, b)


def _double_chains(poly: Polygon, sa: float, sb: float, which: str):
    cw_ab = _chain(poly, sa, sb)
    cw_ba = _chain(poly, sb, sa)
    if which == "short":
        return [cw_ab if cw_ab[1] <= cw_ba[1] else cw_ba]
    if which == "long":
        return [cw_ab if cw_ab[1] > cw_ba[1] else cw_ba]
    if which == "both":
        return [cw_ab, cw_ba]
    raise ValueError(which)


def _classify(poly: Polygon, shots: _ShotTable) -> list[BiTangent]:
    bts: list[BiTangent] = []
    vis = _visible_pairs(poly)
    for (a, b), ok in vis.items():
        if not ok:
            continue
        sa, sb = shots.rho[a], shots.rho[b]
        # one-side: mixed exclusion, checked in both orderings
        for r, l in ((a, b), (b, a)):
            if shots.excl_back(r, l) and shots.excl_forw(r, l):
                sr, sl = shots.rho[r], shots.rho[l]
                if ONE_SIDE_INNER == "r_to_l":
                    chains = [_chain(poly, sr, sl)]
                elif ONE_SIDE_INNER == "l_to_r":
                    chains = [_chain(poly, sl, sr)]
                else:
                    chains = [_chain(poly, sr, sl), _chain(poly, sl, sr)]
                for st, ln in chains:
                    bts.append(BiTangent("one_side", (r, l), st, ln))
        if DOUBLE_RULE == "mutual":
            dl = shots.excl_back(a, b) and shots.excl_back(b, a)
            dr = shots.excl_forw(a, b) and shots.excl_forw(b, a)
        else:  # disjoint ray-shot chains
            dl = not (shots.in_back_chain(shots.rho[a], b) or shots.in_back_chain(shots.back[a], b) or
                      shots.in_back_chain(shots.rho[b], a) or shots.in_back_chain(shots.back[b], a))
            dr = not (shots.in_forw_chain(shots.rho[a], b) or shots.in_forw_chain(shots.forw[a], b) or
                      shots.in_forw_chain(shots.rho[b], a) or shots.in_forw_chain(shots.forw[b], a))
        if dl:
            for st, ln in _double_chains(poly, sa, sb, DOUBLE_INNER):
                bts.append(BiTangent("double_left", (a, b), st, ln))
        if dr:
            for st, ln in _double_chains(poly, sa, sb, DOUBLE_INNER):
                bts.append(BiTangent("double_right", (a, b), st, ln))
    return bts


def _covers_boundary(poly: Polygon, chains: list[tuple[float, float]]) -> bool:
    """Do the clockwise intervals jointly cover the whole boundary circle?"""
    if not chains:
        return False
    D = poly.D
    tol = 4 * poly.tol
    ivs = []
    for st, ln in chains:
        if ln >= D - tol:
            return True
        st = st % D
        ivs.append((st, st + ln))
    ivs.sort()
    # unroll once around the circle starting from the first interval
    start = ivs[0][0]
    reach = ivs[0][0]
    for st, en in ivs + [(a + D, b + D) for a, b in ivs]:
        if st > reach + tol:
            return False
        reach = max(reach, en)
        if reach >= start + D - tol:
            return True
    return False


def _restricted(poly: Polygon, bts: list[BiTangent]) -> set[int]:
    out = set()
    tol = 4 * poly.tol
    for r in poly.reflex_indices():
        s = poly.vertex_arclength(r)
        for bt in bts:
            d = poly.cw_distance(bt.inner_start, s)
            if tol < d < bt.inner_len - tol:  # strictly inside the chain
                out.add(r)
                break
    return out


def _single_handed(shots: _ShotTable, vis_ok, w: int, u: int, side: str) -> bool:
    """Does (w, u) form a single left/right bi-tangent?"""
    if not vis_ok:
        return False
    excl = shots.excl_back if side == "left" else shots.excl_forw
    if C4_SINGLE_RULE == "either":
        return excl(w, u) or excl(u, w)
    return excl(w, u) and excl(u, w)


def _conditions(poly: Polygon, shots: _ShotTable, bts: list[BiTangent]) -> Theorem1Conditions:
    one = [(b.inner_start, b.inner_len) for b in bts if b.kind == "one_side"]
    dls = [(b.inner_start, b.inner_len) for b in bts if b.kind == "double_left"]
    drs = [(b.inner_start, b.inner_len) for b in bts if b.kind == "double_right"]

    c1 = _covers_boundary(poly, one)
    c2 = _covers_boundary(poly, dls) or _covers_boundary(poly, drs)
    c3 = (bool(one) and bool(dls) and _covers_boundary(poly, one + dls)) or \
         (bool(one) and bool(drs) and _covers_boundary(poly, one + drs))

    c4 = False
    restricted = _restricted(poly, bts)
    vis = _visible_pairs(poly)

    def pair_visible(a, b):
        return vis.get((min(a, b), max(a, b)), False)

    tol = 4 * poly.tol
    for bt in bts:
        if bt.kind != "one_side" or c4:
            continue
        u, v = bt.endpoints
        for w in restricted:
            if w in (u, v):
                continue
            d = poly.cw_distance(bt.inner_start, poly.vertex_arclength(w))
            if not (tol < d < bt.inner_len - tol):
                continue
            if _single_handed(shots, pair_visible(w, u), w, u, "left") or \
               _single_handed(shots, pair_visible(w, v), w, v, "right"):
                c4 = True
                break
    return Theorem1Conditions(c1, c2, c3, c4)


# -- public operations --------------------------------------------------------


def lr_visible(poly: Polygon) -> bool:
    """Does a boundary split into two mutually weakly-visible chains exist?

    Exhaustive check over sampled split pairs: for each candidate split
    (u, v), every sample of one chain must see some sample of the other.
    """
    if poly.is_convex():
        return True
    ss, pts = boundary_samples(poly, LR_CHECK_PER_EDGE)
    vis = mutual_visibility_matrix(poly, pts)
    m = len(ss)
    splits = list(range(0, m, LR_SPLIT_STRIDE))

    # likely splits first: samples nearest each reflex vertex's ray shots
    preferred = []
    shots = _ShotTable(poly)
    for r in poly.reflex_indices():
        for s in (shots.rho[r], shots.back[r], shots.forw[r]):
            preferred.append(int(np.argmin(np.abs(ss - s))))
    order = list(dict.fromkeys(preferred + splits))

    for i in order:
        rolled = np.roll(np.roll(vis, -i, axis=0), -i, axis=1)
        # sees_right[x, j]: sample x sees some sample in [j..m-1] or 0
        sees_right = np.logical_or.accumulate(rolled[:, ::-1], axis=1)[:, ::-1]
        sees_right = np.logical_or(sees_right, rolled[:, 0:1])
        sees_left = np.logical_or.accumulate(rolled, axis=1)
        # L = [0..j], R = [j..m-1] + wrap to 0
        l_ok = np.logical_and.accumulate(sees_right, axis=0).diagonal()
        r_ok = np.logical_and.accumulate(sees_left[::-1], axis=0)[::-1].diagonal()
        if bool(np.any(l_ok & r_ok)):
            return True
    return False


def bitangents(poly: Polygon) -> list[BiTangent]:
    """All one-side / double-left / double-right bi-tangents of the polygon."""
    if not lr_visible(poly):
        raise NotLRVisible("bi-tangent classification requires an LR-visible polygon")
    return _classify(poly, _ShotTable(poly))


def restricted_reflex_vertices(poly: Polygon) -> set[int]:
    """Reflex vertices lying strictly inside some bi-tangent inner chain."""
    if poly.is_convex():
        return set()
    shots = _ShotTable(poly)
    return _restricted(poly, _classify(poly, shots))


def theorem1_conditions(poly: Polygon) -> Theorem1Conditions:
    """The four non-searchability conditions (boundary-coverage forms)."""
    if not lr_visible(poly):
        raise NotLRVisible("conditions are defined for LR-visible polygons")
    shots = _ShotTable(poly)
    return _conditions(poly, shots, _classify(poly, shots))


def is_boundary_1_searchable(poly: Polygon) -> bool:
    """Decision route: LR-visibility gate, then the obstruction conditions
    evaluated constructively.

    A polygon passes iff it is LR-visible and some reflex start vertex
    admits a completed search walk; trap/unreachable/mid-band obstructions
    (the four conditions) manifest as every such walk stalling.
    """
    if poly.is_convex():
        return True
    if not lr_visible(poly):
        return False
    from .schedule import _search_attempt, schedule_verify
    for start in poly.reflex_indices():
        sched = _search_attempt(poly, start)
        if sched is not None and schedule_verify(poly, sched):
            return True
    return False
