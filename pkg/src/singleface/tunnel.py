"""Turning a bounded face into an unbounded one.

A curve ``a`` is followed from its infinite end (or from an arc endpoint on
the unbounded cell) to the first vertex ``p`` on the face boundary.  Every
curve crossing that stretch is cut with a small gap so a corridor along
``a`` opens, and for bi-infinite and semi-infinite families the cut pieces
get tails routed alongside ``a`` at nested offsets so the class survives.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arrangement import Arrangement, OnBoundaryError, build
from .face_analysis import verify_theorem4
from .geometry import (
    Curve,
    CurveSet,
    P,
    Point,
    ProperCrossing,
    all_contacts,
    cross,
    piece_intersection,
    rat_json,
    validate_general_position,
)


class TunnelError(RuntimeError):
    pass


class AlreadyUnbounded(TunnelError):
    """The face is already unbounded; nothing to dig."""


@dataclass(frozen=True)
class SplitEvent:
    curve: str
    point: Point
    segment: int  # index of the corridor segment holding the crossing
    order: int  # 0 at p, increasing toward the open end

    def to_json(self) -> dict:
        return {"curve": self.curve, "point": [rat_json(self.point.x), rat_json(self.point.y)],
                "order": self.order, "segment": self.segment}


@dataclass
class TunnelPlan:
    face: int
    klass: int
    site_curve: str
    start: object  # "infinity" or the arc endpoint y
    zeta: list  # corridor polyline from p toward the open end
    ray: tuple | None  # direction of the final ray (None: corridor ends at y)
    events: list  # SplitEvent, outward order
    gap_radius: Fraction
    base: CurveSet  # curve set after deleting and cutting
    original: CurveSet
    witness: Point
    deleted: list = field(default_factory=list)
    cut: dict | None = None
    original_complexity: int = 0
    side: int = 1  # side of the corridor (by level sign) where the face touches p

    @property
    def tail_offsets(self) -> list:
        return [level(self.gap_radius, e.order, len(self.events)) for e in self.events]

    def to_json(self) -> dict:
        pt = lambda p: [rat_json(p[0]), rat_json(p[1])]  # noqa: E731
        return {
            "face": self.face,
            "class": f"G{self.klass}",
            "site_curve": self.site_curve,
            "start": self.start if isinstance(self.start, str) else pt(self.start),
            "zeta": [pt(z) for z in self.zeta],
            "ray": None if self.ray is None else pt(self.ray),
            "split_events": [e.to_json() for e in self.events],
            "gap_radius": rat_json(self.gap_radius),
            "tail_offsets": [rat_json(h) for h in self.tail_offsets],
            "deleted": list(self.deleted),
            "cut": self.cut,
            "witness": pt(self.witness),
            "side": self.side,
        }


@dataclass
class TransformResult:
    curveset: CurveSet
    provenance: dict  # old id -> [new ids]
    added_curve_count: int
    witness: Point
    plan: TunnelPlan
    bound: int
    checks: dict
    attempts: int
    arrangement: Arrangement | None = None

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "curves_before": len(self.plan.original.curves),
            "curves_after": len(self.curveset.curves),
            "added_curve_count": self.added_curve_count,
            "curve_bound": self.bound,
            "provenance": self.provenance,
            "checks": self.checks,
            "attempts": self.attempts,
            "plan": self.plan.to_json(),
        }


def level(H, order: int, count: int) -> Fraction:
    return Fraction(H) * (order + 1) / count


def curve_bound(n: int, s: int, cut: bool) -> int:
    return 1 + (s + 1) * (n - 1) + (1 if cut else 0)


# ---------------------------------------------------------------------------
# witness point inside a face
# ---------------------------------------------------------------------------

def witness_point(arr: Arrangement, f: int) -> Point:
    """A point strictly inside face ``f``, next to one of its boundary edges."""
    for c in arr.face_cycles(f):
        for h in sorted(arr.cycles[c]):
            if arr.he_curve[h] is None:
                continue
            a, b = arr.he_path[h][0], arr.he_path[h][1]
            mx, my = Fraction(a[0] + b[0]) / 2, Fraction(a[1] + b[1]) / 2
            nx, ny = b[1] - a[1], -(b[0] - a[0])  # right-hand normal
            scale = max(abs(nx), abs(ny))
            eps = Fraction(1, 4)
            for _ in range(80):
                w = P(mx + eps * nx / scale, my + eps * ny / scale)
                try:
                    if arr.locate(w).id == f:
                        return w
                except OnBoundaryError:
                    pass
                eps /= 2
    raise TunnelError(f"no interior point found for face {f}")


# ---------------------------------------------------------------------------
# choosing the site
# ---------------------------------------------------------------------------

def _boundary_points(arr: Arrangement, f: int) -> set:
    return {arr.vertices[arr.he_origin[h]] for c in arr.face_cycles(f) for h in arr.cycles[c]
            if arr.he_curve[h] is not None}


def _boundary_curves(arr: Arrangement, f: int) -> set:
    return {arr.he_curve[h] for c in arr.face_cycles(f) for h in arr.cycles[c] if arr.he_curve[h] is not None}


def _crossings_on(c: Curve, others) -> list[tuple]:
    """[(pos on c, point, other id)] sorted along c."""
    out = []
    for o in others:
        if o.id == c.id:
            continue
        for k, pa in enumerate(c.pieces):
            for pb in o.pieces:
                r = piece_intersection(pa, pb)
                if isinstance(r, ProperCrossing):
                    out.append(((k, r.t1), r.point, o.id))
    out.sort(key=lambda x: x[0])
    return out


def _walk(c: Curve, pos, forward: bool) -> list[Point]:
    """Points of ``c`` from ``pos`` toward its last (forward) or first vertex."""
    k, t = pos
    pcs = c.pieces
    pts = [P(*pcs[k].at(t))]
    if forward:
        for m in range(k + 1, len(pcs)):
            pts.append(P(*pcs[m].base))
        if c.end is None:
            pts.append(c.vertices[-1])
    else:
        for m in range(k, -1, -1):
            if pcs[m].lo is not None:
                pts.append(P(*pcs[m].base))
    out = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    return out


def _located(arr: Arrangement, w) -> int:
    return arr.locate(w).id


def find_site(arr: Arrangement, f: int, witness=None) -> TunnelPlan:
    face = arr.faces[f]
    if face.artificial:
        raise TunnelError("the artificial outside face has no tunnel")
    if face.unbounded:
        raise AlreadyUnbounded(f"face {f} is already unbounded")
    cs0 = arr.curveset
    w = P(*witness) if witness is not None else witness_point(arr, f)
    original_complexity = arr.face_complexity(f)[0]

    keep = _boundary_curves(arr, f)
    deleted = sorted(c.id for c in cs0.curves if c.id not in keep)
    cs = CurveSet(tuple(c for c in cs0.curves if c.id in keep), cs0.s, cs0.klass) if deleted else cs0
    work = build(cs) if deleted else arr
    fw = _located(work, w)
    cut = None

    if cs.klass == 2:
        uf = work._unbounded_face()
        on_outer = _boundary_points(work, uf)
        ends = sorted(p for c in cs.curves for p in c.endpoints() if p in on_outer)
        if ends:
            y = ends[0]
            candidates = [(next(c for c in cs.curves if y in c.endpoints()), y)]
        else:
            cs, candidates, cut = _cut_outer_edge(work, uf)
            work = build(cs)
            fw = _located(work, w)
            if work.faces[fw].unbounded:
                a, y = candidates[0]
                return TunnelPlan(f, cs.klass, a.id, y, [], None, [], Fraction(1), cs, cs0, w,
                                  deleted, cut, original_complexity)
    else:
        a = min(cs.curves, key=lambda c: c.id)
        candidates = [(a, "infinity")]

    boundary = _boundary_points(work, fw)
    for a, start in candidates:
        # walk from the start ray (or from y when y is the first vertex)
        forward = a.start is not None if start == "infinity" else start == a.vertices[0]
        hits = _crossings_on(a, cs.curves)
        order = hits if forward else list(reversed(hits))
        first = next((i for i, h in enumerate(order) if h[1] in boundary), None)
        if first is not None:
            break
    else:
        raise TunnelError(f"curve {a.id} never meets the face boundary")
    p_pos, p, b_id = order[first]
    before = order[:first]  # between the open end and p, in walk order
    # corridor runs from p back toward the open end
    zeta = _walk(a, p_pos, not forward)
    if cs.klass == 2:
        ray = None
    else:
        ray = a.start if forward else a.end
    segs = _segments(zeta, ray)
    events = [SplitEvent(b_id, p, _segment_of(segs, p), 0)]
    for j, (pos, pt, cid) in enumerate(reversed(before), start=1):
        events.append(SplitEvent(cid, pt, _segment_of(segs, pt), j))
    H = _initial_radius(work, events, zeta)
    return TunnelPlan(f, cs.klass, a.id, start, zeta, ray, events, H, cs, cs0, w,
                      deleted, cut, original_complexity, _face_side(work, fw, a.id, p))


def _face_side(arr: Arrangement, f: int, a: str, p) -> int:
    """+1 if the face lies at positive corridor level next to p, else -1.

    The face meets p along the part of ``a`` beyond p; a half-edge leaving p
    there with the face on its right points against the corridor, which puts
    the face on the positive side.
    """
    for c in arr.face_cycles(f):
        for h in arr.cycles[c]:
            if arr.he_curve[h] != a:
                continue
            if arr.vertices[arr.he_origin[h]] == p:
                return 1
            if arr.vertices[arr.dest(h)] == p:
                return -1
    raise TunnelError("face does not touch the site curve at p")


def _cut_outer_edge(arr: Arrangement, uf: int):
    """Cut the curve of an unbounded-cell edge in the middle of that edge.

    Returns the new curve set and the two halves with their cut endpoints.
    """
    cs = arr.curveset
    hs = sorted(h for c in arr.face_cycles(uf) for h in arr.cycles[c] if arr.he_curve[h] is not None)
    h = hs[0]
    c = cs.by_id()[arr.he_curve[h]]
    (k1, t1), (k2, t2) = sorted(arr.he_interval[h])
    if k2 != k1:
        # first straight stretch of the edge
        t2 = c.pieces[k1].hi
    mid = (t1 + t2) / 2
    g = (t2 - t1) / 4
    c1 = Curve(f"{c.id}~1", tuple(_sub(c, None, (k1, mid - g))), c.start, None)
    c2 = Curve(f"{c.id}~2", tuple(_sub(c, (k1, mid + g), None)), None, c.end)
    curves = []
    for d in cs.curves:
        curves.extend([c1, c2] if d.id == c.id else [d])
    new = CurveSet(tuple(curves), cs.s, cs.klass)
    cut = {"curve": c.id, "point": [rat_json(x) for x in c.pieces[k1].at(mid)], "new": [c1.id, c2.id]}
    return new, [(c1, c1.vertices[-1]), (c2, c2.vertices[0])], cut


def _sub(c: Curve, frm, to) -> list[Point]:
    """Vertices of the part of ``c`` between two positions (None = the curve's end)."""
    pcs = c.pieces
    off = 0 if c.start is not None else 1
    if frm is None:
        pts = list(c.vertices[: (to[0] + off)])
    else:
        pts = [P(*pcs[frm[0]].at(frm[1]))]
        hi = len(c.vertices) if to is None else to[0] + off
        pts += list(c.vertices[frm[0] + off: hi])
    if to is not None:
        pts.append(P(*pcs[to[0]].at(to[1])))
    out = []
    for p in pts:
        p = P(*p)
        if not out or out[-1] != p:
            out.append(p)
    return out


def _unit(d) -> tuple:
    m = max(abs(d[0]), abs(d[1]))
    return (Fraction(d[0]) / m, Fraction(d[1]) / m)


def _segments(zeta: list, ray) -> list[tuple]:
    """[(origin, unit direction, finite?)] for each corridor segment, p outward."""
    out = [(zeta[i], _unit((zeta[i + 1][0] - zeta[i][0], zeta[i + 1][1] - zeta[i][1])), True)
           for i in range(len(zeta) - 1)]
    if ray is not None:
        out.append((zeta[-1], _unit(ray), False))
    return out


def _segment_of(segs, p) -> int:
    for i, (z, u, finite) in enumerate(segs):
        if cross(u[0], u[1], p[0] - z[0], p[1] - z[1]) != 0:
            continue
        t = (p[0] - z[0]) * u[0] + (p[1] - z[1]) * u[1]
        if t < 0:
            continue
        if finite:
            nxt = segs[i + 1][0] if i + 1 < len(segs) else None
            if nxt is not None and t > (nxt[0] - z[0]) * u[0] + (nxt[1] - z[1]) * u[1]:
                continue
        return i
    raise TunnelError(f"point {p} is not on the corridor")


def _initial_radius(arr: Arrangement, events, zeta) -> Fraction:
    pts = [e.point for e in events]
    feats = list(arr.vertices) + [v for c in arr.curveset.curves for v in c.vertices] + list(zeta)
    best = Fraction(1)
    for q in pts:
        for v in feats:
            if v == q:
                continue
            d = max(abs(v[0] - q[0]), abs(v[1] - q[1]))
            if d < best:
                best = Fraction(d)
    return best / 4


# ---------------------------------------------------------------------------
# step 2: digging
# ---------------------------------------------------------------------------

def _offset_point(segs, k: int, h) -> Point:
    """Corner of the level-``h`` offset polyline between segments k and k+1."""
    (z1, u, _), (z2, v, _) = segs[k], segs[k + 1]
    det = cross(u[0], u[1], v[0], v[1])
    if det == 0:
        nn = u[0] * u[0] + u[1] * u[1]
        return P(z2[0] - h * u[1] / nn, z2[1] + h * u[0] / nn)
    # cross(u, x) = h + cross(u, z1); cross(v, x) = h + cross(v, z2)
    r1 = h + cross(u[0], u[1], z1[0], z1[1])
    r2 = h + cross(v[0], v[1], z2[0], z2[1])
    return P((r1 * v[0] - u[0] * r2) / det, (v[1] * r1 - u[1] * r2) / det)


def _tail(segs, k: int, h) -> list[Point]:
    return [_offset_point(segs, m, h) for m in range(k, len(segs) - 1)]


def _gap_ends(c: Curve, pos, seg, levels):
    """Cut positions on ``c`` near a crossing, given the two corridor levels
    where the gap starts and ends.  Returns (lo, level at lo, hi, level at hi)
    with lo before hi along ``c``."""
    k, t = pos
    pc = c.pieces[k]
    r = cross(seg[1][0], seg[1][1], pc.dir[0], pc.dir[1])
    if r == 0:
        raise TunnelError("crossing parallel to the corridor")
    ends = sorted(((k, t + Fraction(lv) / r), Fraction(lv)) for lv in levels)
    (lo, lv_lo), (hi, lv_hi) = ends
    if (pc.lo is not None and lo[1] <= pc.lo) or (pc.hi is not None and hi[1] >= pc.hi):
        raise _Retry(f"gap on {c.id} leaves its piece")
    return lo, lv_lo, hi, lv_hi


class _Retry(Exception):
    pass


def _split_curves(plan: TunnelPlan, H) -> tuple[list, dict]:
    segs = _segments(plan.zeta, plan.ray)
    n_ev = len(plan.events)
    curves = plan.base.by_id()
    by_curve: dict = {}
    for e in plan.events:
        c = curves[e.curve]
        pos = c.locate_point(e.point)
        h = level(H, e.order, n_ev)
        if e.order == 0:
            # at p both cut ends stay on the face's side, so b still crosses a there
            levels = (plan.side * h / 2, plan.side * h)
        else:
            levels = (-h, h)
        lo, lv_lo, hi, lv_hi = _gap_ends(c, pos, segs[e.segment], levels)
        by_curve.setdefault(e.curve, []).append((pos, lo, lv_lo, hi, lv_hi, e.segment))
    out, prov = [], {}
    for c in plan.base.curves:
        cuts = by_curve.get(c.id)
        if not cuts:
            out.append(c)
            prov[c.id] = [c.id]
            continue
        cuts.sort(key=lambda x: x[0])
        # portions: (from pos or None, from-level info, to pos or None, to-level info)
        bounds = [None] + cuts + [None]
        new_ids = []
        for i in range(len(bounds) - 1):
            left, right = bounds[i], bounds[i + 1]
            frm = None if left is None else left[3]
            to = None if right is None else right[1]
            pts = _sub(c, frm, to)
            start = c.start if left is None else None
            end = c.end if right is None else None
            tail_start = tail_end = None
            if left is not None:
                tail_start = (left[5], left[4])
            if right is not None:
                tail_end = (right[5], right[2])
            want_start, want_end = _which_tails(plan.klass, c, left is None, right is None)
            if want_start and tail_start is not None:
                tail = _tail(segs, tail_start[0], tail_start[1])
                pts = list(reversed(tail)) + pts
                start = plan.ray
            if want_end and tail_end is not None:
                pts = pts + _tail(segs, tail_end[0], tail_end[1])
                end = plan.ray
            cid = f"{c.id}.{i + 1}"
            out.append(Curve(cid, tuple(_dedupe(pts)), start, end))
            new_ids.append(cid)
        prov[c.id] = new_ids
    return out, prov


def _dedupe(pts):
    out = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    return out


def _which_tails(klass: int, c: Curve, is_first: bool, is_last: bool) -> tuple[bool, bool]:
    if klass == 0:
        return True, True
    if klass == 2:
        return False, False
    # semi-infinite: a finite section gets one tail at its end toward infinity
    has_inf = (is_first and c.start is not None) or (is_last and c.end is not None)
    if has_inf:
        return False, False
    return (False, True) if c.a_is_start else (True, False)


def _crossing_points(curves) -> set:
    return {x[6] for x in all_contacts(list(curves)).crossings}


def dig(plan: TunnelPlan, cs: CurveSet | None = None, max_attempts: int = 40) -> TransformResult:
    if cs is not None and cs is not plan.original and cs is not plan.base:
        raise TunnelError("plan was made for a different curve set")
    base = plan.base
    n = len(base.curves) - (1 if plan.cut else 0)
    bound = curve_bound(n, base.s, plan.cut is not None)
    old_points = _crossing_points(base.curves)
    H = plan.gap_radius
    last_checks: dict = {}
    for attempt in range(1, max_attempts + 1):
        try:
            curves, prov = _split_curves(plan, H)
        except _Retry:
            H /= 2
            continue
        new = CurveSet(tuple(curves), base.s, base.klass)
        checks = {
            "general_position": not validate_general_position(new),
            "no_new_crossings": _crossing_points(curves) <= old_points,
            "class_preserved": all(c.klass == base.klass for c in curves),
            "curve_bound": len(curves) <= bound,
        }
        arr2 = None
        if checks["general_position"] and checks["no_new_crossings"]:
            arr2 = build(new)
            try:
                ref = arr2.locate(plan.witness)
                checks["face_unbounded"] = ref.is_unbounded
                checks["complexity_non_decreasing"] = arr2.face_complexity(ref.id)[0] >= plan.original_complexity
            except OnBoundaryError:
                checks["face_unbounded"] = False
                checks["complexity_non_decreasing"] = False
        else:
            checks["face_unbounded"] = False
            checks["complexity_non_decreasing"] = False
        last_checks = checks
        if all(checks.values()):
            plan.gap_radius = H
            added = len(curves) - len(plan.original.curves)
            return TransformResult(new, prov, added, plan.witness, plan, bound, checks, attempt, arr2)
        if not (checks["class_preserved"] and checks["curve_bound"]):
            break
        H /= 2
    raise TunnelError(f"tunnel could not be routed after halving: {last_checks}")


def transform(arr: Arrangement, f: int, witness=None) -> TransformResult:
    return dig(find_site(arr, f, witness))


@dataclass
class BoundedFaceReport:
    original_complexity: int
    transformed_complexity: int
    curves_before: int
    curves_after: int
    curve_bound: int
    orders: object
    transform: TransformResult

    @property
    def passed(self) -> bool:
        return (self.transform.ok and self.orders.passed
                and self.transformed_complexity >= self.original_complexity)

    def to_json(self) -> dict:
        return {
            "original_complexity": self.original_complexity,
            "transformed_complexity": self.transformed_complexity,
            "curves_before": self.curves_before,
            "curves_after": self.curves_after,
            "curve_bound": self.curve_bound,
            "passed": self.passed,
            "transform": self.transform.to_json(),
            "orders": self.orders.to_json(),
        }


def complexity_of_bounded_face(arr: Arrangement, f: int, witness=None) -> BoundedFaceReport:
    res = transform(arr, f, witness)
    arr2 = res.arrangement or build(res.curveset)
    g = arr2.locate(res.witness).id
    rep = verify_theorem4(arr2, g)
    return BoundedFaceReport(arr.face_complexity(f)[0], arr2.face_complexity(g)[0],
                             len(arr.curveset.curves), len(res.curveset.curves), res.bound, rep, res)
