"""Boundary search construction and schedule replay verification.

The searcher s sits on the boundary and aims a flashlight at boundary
point f; the chain from s clockwise to f (the gap) is cleared.  The
search engine advances f clockwise while s is parked, and walks s
counterclockwise to the next reflex vertex whenever f gets stuck.
The flashlight endpoint may jump backward to an occluding reflex vertex
(a recontamination event); the searcher never jumps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import MalformedSchedule, NoUnrestrictedStart, NotSearchable
from .polygon import BoundaryPoint, Polygon
from .visibility import visible

_MAX_EVENTS_FACTOR = 16  # hard cap on engine events, times n^2


@dataclass(frozen=True)
class SearchInstruction:
    actor: str        # "S" (searcher) or "F" (flashlight endpoint)
    kind: str         # "MOVE", "JUMP", "STAY"
    s_from: float     # arclength, clockwise convention of the polygon
    s_to: float

    def __post_init__(self):
        if self.actor not in ("S", "F") or self.kind not in ("MOVE", "JUMP", "STAY"):
            raise MalformedSchedule(f"bad instruction {self.actor} {self.kind}")


@dataclass
class SearchSchedule:
    polygon: Polygon
    start: BoundaryPoint
    instructions: list[SearchInstruction] = field(default_factory=list)
    searcher_distance: float = 0.0

    @property
    def m(self) -> int:
        return len(self.instructions)


class _Engine:
    """One search attempt from a fixed start vertex."""

    def __init__(self, poly: Polygon, start_arc: float):
        self.poly = poly
        self.s = start_arc % poly.D
        self.f = self.s
        self.gap = 0.0
        self.instr: list[SearchInstruction] = []
        self.s_dist = 0.0
        self.events = 0
        self.probe = max(poly.tol * 1e3, min(poly.edge_lengths) * 1e-4)
        self.reflex = [(i, poly.vertex_arclength(i), poly.vertices[i])
                       for i in poly.reflex_indices()]

    # -- helpers ----------------------------------------------------------

    def _pt(self, arc):
        return self.poly.point_at(arc)

    def _vis_pts(self, a_pt, b_pt) -> bool:
        try:
            return visible(self.poly, a_pt, b_pt, strict=False)
        except Exception:
            return False

    def _next_vertex_cw(self, arc):
        p = self.poly
        a = arc % p.D
        for s in p.arclengths[:-1]:
            if s > a + 4 * p.tol:
                return float(s)
        return float(p.arclengths[0]) + p.D

    def _prev_vertex_ccw(self, arc):
        p = self.poly
        a = arc % p.D
        best = None
        for s in p.arclengths[:-1]:
            d = (a - s) % p.D
            if d > 4 * p.tol and (best is None or d < best):
                best = d
        return best if best is not None else p.D

    def _next_reflex_ccw(self, arc):
        p = self.poly
        a = arc % p.D
        best = None
        for i, s, _ in self.reflex:
            d = (a - s) % p.D
            if d > 4 * p.tol and (best is None or d < best[0]):
                best = (d, s)
        return best

    def _tick(self) -> bool:
        self.events += 1
        return self.events <= _MAX_EVENTS_FACTOR * self.poly.n * self.poly.n

    # -- flashlight resync --------------------------------------------------

    def _resync_f(self) -> bool:
        """Restore s-f visibility by jumping f back to its occluder."""
        p = self.poly
        for _ in range(p.n):
            s_pt, f_pt = self._pt(self.s), self._pt(self.f)
            if self._vis_pts(s_pt, f_pt):
                return True
            best = None  # occluding reflex vertex nearest to s on the chord
            for _, w_arc, w_pt in self.reflex:
                back = (self.f - w_arc) % p.D
                if back <= 4 * p.tol or back > self.gap + 4 * p.tol:
                    continue  # only within the cleared chain
                dsf = math.hypot(f_pt[0] - s_pt[0], f_pt[1] - s_pt[1])
                if dsf <= p.tol:
                    continue
                t = ((w_pt[0] - s_pt[0]) * (f_pt[0] - s_pt[0]) +
                     (w_pt[1] - s_pt[1]) * (f_pt[1] - s_pt[1])) / (dsf * dsf)
                if not (1e-9 < t < 1 - 1e-9):
                    continue
                hx = s_pt[0] + t * (f_pt[0] - s_pt[0]) - w_pt[0]
                hy = s_pt[1] + t * (f_pt[1] - s_pt[1]) - w_pt[1]
                if math.hypot(hx, hy) > 64 * p.tol:
                    continue
                if not self._vis_pts(s_pt, w_pt):
                    continue
                if best is None or t < best[0]:
                    best = (t, w_arc)
            if best is None:
                return False
            self._jump_f(best[1])
        return False

    def _jump_f(self, w_arc):
        back = (self.f - w_arc) % self.poly.D
        self.instr.append(SearchInstruction("F", "JUMP", self.f, w_arc % self.poly.D))
        self.f = w_arc % self.poly.D
        self.gap -= back

    # -- flashlight advance ------------------------------------------------

    def _advance_f(self):
        """Move f clockwise until done or blocked. Returns status string."""
        p = self.poly
        moved_from = self.f
        total = 0.0

        def flush():
            if total > 4 * p.tol:
                if total >= p.D - 8 * p.tol:
                    half = (moved_from + total / 2.0) % p.D
                    self.instr.append(SearchInstruction("F", "MOVE", moved_from % p.D, half))
                    self.instr.append(SearchInstruction("F", "MOVE", half, self.f))
                else:
                    self.instr.append(SearchInstruction("F", "MOVE", moved_from % p.D, self.f))

        while True:
            if not self._tick():
                return "stall"
            remaining = p.D - self.gap
            if remaining <= 8 * p.tol:
                flush()
                return "done"
            nxt = self._next_vertex_cw(self.f)
            stretch = min((nxt - self.f % p.D) % p.D or p.D, remaining)
            adv, kind = self._first_stop_in_stretch(stretch, remaining)
            if adv > 0:
                self.f = (self.f + adv) % p.D
                self.gap += adv
                total += adv
            if kind == "done":
                flush()
                return "done"
            if kind == "blocked":
                flush()
                return "blocked"
            # kind == "free": crossed a benign vertex, keep sweeping

    def _first_stop_in_stretch(self, stretch, remaining):
        """Earliest stop within f's next straight stretch.

        Returns (advance, kind) with kind in "free", "done", "blocked".
        """
        p = self.poly
        s_pt = self._pt(self.s)
        p0 = self._pt(self.f)
        p1 = self._pt(self.f + stretch)
        ex, ey = p1[0] - p0[0], p1[1] - p0[1]
        elen = math.hypot(ex, ey)
        if elen <= p.tol:
            return stretch, "free"

        events = []  # fractions u along the stretch where the chord meets a reflex vertex
        for _, w_arc, w_pt in self.reflex:
            wx, wy = w_pt[0] - s_pt[0], w_pt[1] - s_pt[1]
            wlen = math.hypot(wx, wy)
            if wlen <= p.tol:
                continue  # parked at this vertex
            denom = wx * ey - wy * ex
            if abs(denom) <= 1e-13 * elen * wlen:
                continue
            qx, qy = p0[0] - s_pt[0], p0[1] - s_pt[1]
            t = (qx * ey - qy * ex) / denom      # stretch point at s + t*(w-s)
            u = (qx * wy - qy * wx) / denom      # fraction along the stretch
            if t <= 1.0 + 1e-9 or not (-1e-9 <= u <= 1.0 + 1e-9):
                continue  # w not strictly between s and the stretch point
            events.append(min(max(u, 0.0), 1.0))
        events.sort()

        for u in events:
            adv = u * stretch
            if adv >= remaining - 4 * p.tol:
                return remaining, "done"
            # occluding alignment?  probe just past it
            probe_u = min(u + self.probe / max(stretch, self.probe), 1.0)
            probe_pt = (p0[0] + probe_u * ex, p0[1] + probe_u * ey)
            if not self._vis_pts(s_pt, probe_pt):
                return adv, "blocked"

        if stretch >= remaining - 4 * p.tol:
            return remaining, "done"

        # stretch end: reflex vertex whose far side is hidden from s
        end_arc = (self.f + stretch) % p.D
        v_idx = self._vertex_at(end_arc)
        if v_idx is not None and p.reflex_flags[v_idx]:
            v = p.vertices[v_idx]
            nxt_v = p.vertices[(v_idx + 1) % p.n]
            gx, gy = nxt_v[0] - v[0], nxt_v[1] - v[1]
            glen = math.hypot(gx, gy)
            step = min(self.probe, glen / 2)
            probe_pt = (v[0] + gx / glen * step, v[1] + gy / glen * step)
            if not self._vis_pts(s_pt, probe_pt):
                return stretch, "blocked"
        return stretch, "free"

    def _vertex_at(self, arc):
        p = self.poly
        a = arc % p.D
        for i in range(p.n):
            if abs((p.arclengths[i] - a + p.D / 2) % p.D - p.D / 2) <= 8 * p.tol:
                return i
        return None

    # -- searcher relocation ------------------------------------------------

    def _move_s(self):
        """Walk s counterclockwise to the next reflex vertex, adjusting f."""
        p = self.poly
        nr = self._next_reflex_ccw(self.s)
        if nr is None:
            return "stall"
        ccw_total, _target = nr
        walked = 0.0
        while walked < ccw_total - 4 * p.tol:
            if not self._tick():
                return "stall"
            stretch = min(self._prev_vertex_ccw(self.s), ccw_total - walked)
            if self.gap + stretch >= p.D - 8 * p.tol:
                stretch = p.D - self.gap
                final = True
            else:
                final = False
            ev = self._first_adjust_in_stretch(stretch)
            if ev is None:
                self._emit_s_move(stretch)
                walked += stretch
                if final:
                    return "done"
                continue
            adv, w_arc = ev
            if adv > 4 * p.tol:
                if self.gap + adv >= p.D - 8 * p.tol:
                    self._emit_s_move(p.D - self.gap)
                    return "done"
                self._emit_s_move(adv)
                walked += adv
            back = (self.f - w_arc) % p.D
            if back > self.gap + 8 * p.tol or back <= 4 * p.tol:
                return "stall"  # occluder outside the cleared chain
            self._jump_f(w_arc)
            if not self._resync_f():
                return "stall"
        return "moved"

    def _emit_s_move(self, dist):
        p = self.poly
        if dist <= 4 * p.tol:
            return
        frm = self.s % p.D
        self.s = (self.s - dist) % p.D
        self.gap += dist
        self.s_dist += dist
        self.instr.append(SearchInstruction("S", "MOVE", frm, self.s))

    def _first_adjust_in_stretch(self, stretch):
        """Earliest point of s's ccw stretch where a reflex vertex occludes f.

        Returns (advance, occluder arclength) or None.
        """
        p = self.poly
        f_pt = self._pt(self.f)
        p0 = self._pt(self.s)
        p1 = self._pt(self.s - stretch)
        ex, ey = p1[0] - p0[0], p1[1] - p0[1]
        elen = math.hypot(ex, ey)
        if elen <= p.tol:
            return None
        best = None
        for _, w_arc, w_pt in self.reflex:
            back = (self.f - w_arc) % p.D
            if back <= 4 * p.tol or back > self.gap + 8 * p.tol:
                continue  # occluder must lie in the cleared chain
            wx, wy = f_pt[0] - w_pt[0], f_pt[1] - w_pt[1]
            wlen = math.hypot(wx, wy)
            if wlen <= p.tol:
                continue
            denom = ex * wy - ey * wx
            if abs(denom) <= 1e-13 * elen * wlen:
                continue
            qx, qy = w_pt[0] - p0[0], w_pt[1] - p0[1]
            u = (qx * wy - qy * wx) / denom   # fraction along s's stretch
            if not (-1e-9 <= u <= 1.0 + 1e-9):
                continue
            u = min(max(u, 0.0), 1.0)
            sx, sy = p0[0] + u * ex, p0[1] + u * ey
            seg = math.hypot(f_pt[0] - sx, f_pt[1] - sy)
            if seg <= p.tol:
                continue
            tw = math.hypot(w_pt[0] - sx, w_pt[1] - sy) / seg
            if not (1e-7 < tw < 1 - 1e-7):
                continue  # w must be strictly between the crossing point and f
            probe_u = min(u + self.probe / max(stretch, self.probe), 1.0)
            probe_pt = (p0[0] + probe_u * ex, p0[1] + probe_u * ey)
            if self._vis_pts(probe_pt, f_pt):
                continue  # tangential alignment, no occlusion
            if best is None or u < best[0]:
                best = (u, w_arc)
        if best is None:
            return None
        return best[0] * stretch, best[1]

    # -- driver -------------------------------------------------------------

    def run(self) -> SearchSchedule | None:
        p = self.poly
        start = self.s
        while self.gap < p.D - 8 * p.tol:
            status = self._advance_f()
            if status == "done":
                break
            if status == "stall":
                return None
            if not self._resync_f():
                return None
            status = self._move_s()
            if status == "done":
                break
            if status == "stall" or self.s_dist > 2 * p.D:
                return None
            if not self._resync_f():
                return None
        if self.gap < p.D - 8 * p.tol:
            return None
        if self.s_dist >= 2 * p.D or len(self.instr) >= p.n * p.n:
            return None
        return SearchSchedule(p, BoundaryPoint(p, start), self.instr, self.s_dist)


def _search_attempt(poly: Polygon, start_vertex: int) -> SearchSchedule | None:
    """Single search attempt from one start vertex; None when it stalls."""
    return _Engine(poly, poly.vertex_arclength(start_vertex)).run()


def _convex_schedule(poly: Polygon) -> SearchSchedule:
    instr = [SearchInstruction("F", "MOVE", poly.vertex_arclength(i),
                               poly.vertex_arclength((i + 1) % poly.n))
             for i in range(poly.n)]
    return SearchSchedule(poly, BoundaryPoint(poly, 0.0), instr, 0.0)


def bsa_search(poly: Polygon) -> SearchSchedule:
    """Compute a boundary search schedule or reject the polygon."""
    from .searchability import is_boundary_1_searchable, restricted_reflex_vertices

    if poly.is_convex():
        return _convex_schedule(poly)
    if not is_boundary_1_searchable(poly):
        raise NotSearchable("polygon fails the searchability decision")
    restricted = restricted_reflex_vertices(poly)
    starts = [i for i in poly.reflex_indices() if i not in restricted]
    if not starts:
        raise NoUnrestrictedStart("every reflex vertex is restricted")
    for st in starts:
        sched = _search_attempt(poly, st)
        if sched is not None and schedule_verify(poly, sched):
            return sched
    raise NoUnrestrictedStart("no unrestricted start admits a completed search")


# -- replay verification ---------------------------------------------------


def schedule_verify(poly: Polygon, schedule: SearchSchedule) -> bool:
    """Replay a schedule, asserting visibility throughout every move, the
    cleared-interval bookkeeping, full final coverage, and the travel and
    instruction-count bounds."""
    if not isinstance(schedule, SearchSchedule):
        raise MalformedSchedule("not a schedule")
    if abs(schedule.polygon.D - poly.D) > 4 * poly.tol:
        raise MalformedSchedule("schedule does not refer to this polygon")
    instr = schedule.instructions
    if not instr:
        return False
    D = poly.D
    tol = max(1e-9 * poly.scale, 1e-12)
    cont_tol = 1e-6 * poly.scale
    s_pos = f_pos = instr[0].s_from % D
    gap = 0.0
    s_dist = 0.0
    for ins in instr:
        if ins.kind == "STAY":
            if abs((ins.s_from - ins.s_to + D / 2) % D - D / 2) > 4 * tol:
                return False
            continue
        cur = s_pos if ins.actor == "S" else f_pos
        if abs((ins.s_from - cur + D / 2) % D - D / 2) > cont_tol:
            return False  # broken continuity
        if ins.actor == "S":
            if ins.kind != "MOVE":
                return False  # the searcher never jumps
            dist = (cur - ins.s_to) % D  # ccw walk
            if dist >= D - 4 * tol:
                return False
            if not _walk_visible(poly, cur, ins.s_to, f_pos, ccw=True):
                return False
            s_pos = ins.s_to % D
            gap += dist
            s_dist += dist
        elif ins.kind == "MOVE":
            dist = (ins.s_to - cur) % D  # cw sweep
            if not _walk_visible(poly, cur, ins.s_to, s_pos, ccw=False):
                return False
            f_pos = ins.s_to % D
            gap += dist
        else:  # F JUMP: allowed recontamination, backward along the cleared chain
            back = (cur - ins.s_to) % D
            if back <= tol or back > gap + cont_tol:
                return False
            if not visible(poly, poly.point_at(s_pos), poly.point_at(ins.s_to), strict=False):
                return False
            f_pos = ins.s_to % D
            gap -= back
        if gap > D + cont_tol:
            return False
    if abs(gap - D) > max(cont_tol, 1e-6 * D):
        return False  # boundary not fully cleared
    if s_dist >= 2 * D:
        return False
    if len(instr) >= poly.n * poly.n:
        return False
    if abs(s_dist - schedule.searcher_distance) > max(cont_tol, 1e-6 * D):
        return False
    return True


def _walk_visible(poly: Polygon, frm, to, other, *, ccw: bool, samples_per_edge=3) -> bool:
    """Visibility of a moving actor from `other` along a boundary walk."""
    D = poly.D
    dist = ((frm - to) % D) if ccw else ((to - frm) % D)
    other_pt = poly.point_at(other)
    marks = [0.0, dist]
    for i in range(poly.n):
        va = poly.arclengths[i]
        d = ((frm - va) % D) if ccw else ((va - frm) % D)
        if 4 * poly.tol < d < dist - 4 * poly.tol:
            marks.append(d)
    marks.sort()
    probes = list(marks)
    for a, b in zip(marks[:-1], marks[1:]):
        for k in range(1, samples_per_edge + 1):
            probes.append(a + (b - a) * k / (samples_per_edge + 1))
    for d in probes:
        arc = (frm - d) % D if ccw else (frm + d) % D
        try:
            if not visible(poly, poly.point_at(arc), other_pt, strict=False):
                return False
        except Exception:
            return False
    return True
