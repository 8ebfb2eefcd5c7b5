"""Exact rational geometry: points, polyline curves with optional terminal
rays, intersection predicates and general-position validation.

Every coordinate is an ``int`` or ``fractions.Fraction``; there is no
tolerance anywhere in this module.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Union

Rational = Union[int, Fraction]


class Point(NamedTuple):
    x: Rational
    y: Rational


class DegeneracyError(ValueError):
    def __init__(self, message: str, curves: tuple = (), point=None):
        super().__init__(message)
        self.curves = curves
        self.point = point


def q(v) -> Rational:
    """Coerce to an exact rational; ints stay ints."""
    if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
        if isinstance(v, Fraction) and v.denominator == 1:
            return v.numerator
        return v
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return q(Fraction(int(v[0]), int(v[1])))
    if isinstance(v, str):
        return q(Fraction(v))
    if isinstance(v, float):
        raise TypeError("floats are not exact; pass a Fraction or an int pair")
    raise TypeError(f"cannot read {v!r} as a rational")


def P(x, y) -> Point:
    return Point(q(x), q(y))


def cross(ax, ay, bx, by):
    return ax * by - ay * bx


def orient(a, b, c):
    """Twice the signed area of triangle abc (>0 for a left turn)."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _div(num, den) -> Rational:
    if den < 0:
        num, den = -num, -den
    if isinstance(num, int) and isinstance(den, int):
        if num % den == 0:
            return num // den
        return Fraction(num, den)
    r = Fraction(num) / den
    return r.numerator if r.denominator == 1 else r


# ---------------------------------------------------------------------------
# pieces: a curve is a chain of straight pieces, each ``base + t * dir`` with
# t in [lo, hi]; lo/hi of None mean unbounded (terminal rays)
# ---------------------------------------------------------------------------

class Piece(NamedTuple):
    base: Point
    dir: tuple
    lo: Rational | None
    hi: Rational | None

    def at(self, t) -> Point:
        return Point(self.base[0] + t * self.dir[0], self.base[1] + t * self.dir[1])

    def xrange(self):
        """(xmin, xmax) with None for unbounded sides."""
        return _range1(self.base[0], self.dir[0], self.lo, self.hi)

    def yrange(self):
        return _range1(self.base[1], self.dir[1], self.lo, self.hi)


def _range1(b, d, lo, hi):
    a = None if lo is None else b + lo * d
    c = None if hi is None else b + hi * d
    if d == 0:
        return b, b
    # along increasing t the coordinate increases iff d > 0
    if d > 0:
        return a, c
    return c, a


def _param_in(t, lo, hi) -> int:
    """2 = strictly inside, 1 = at a finite end, 0 = outside."""
    if lo is not None:
        if t < lo:
            return 0
        if t == lo:
            return 1
    if hi is not None:
        if t > hi:
            return 0
        if t == hi:
            return 1
    return 2


class ProperCrossing(NamedTuple):
    point: Point
    t1: Rational
    t2: Rational


class Degenerate(NamedTuple):
    kind: str
    point: Point | None


def piece_intersection(p1: Piece, p2: Piece):
    """Classify the contact of two straight pieces.

    Returns None, a :class:`ProperCrossing` (interiors cross at one point) or
    a :class:`Degenerate` whose kind is ``overlap``, ``shared-endpoint`` or
    ``endpoint-on-interior``.
    """
    (bx, by), (dx, dy) = p1.base, p1.dir
    (cx, cy), (ex, ey) = p2.base, p2.dir
    wx, wy = cx - bx, cy - by
    den = dx * ey - dy * ex
    if den == 0:
        if wx * dy - wy * dx != 0:
            return None
        # collinear: project p2's extent onto p1's parameter
        dd = dx * dx + dy * dy
        s0 = _div(wx * dx + wy * dy, dd)
        step = _div(ex * dx + ey * dy, dd)
        ends = []
        for u in (p2.lo, p2.hi):
            ends.append(None if u is None else s0 + u * step)
        if step > 0:
            lo2, hi2 = ends
        else:
            hi2, lo2 = ends
        lo = _max_none(p1.lo, lo2, low=True)
        hi = _max_none(p1.hi, hi2, low=False)
        if lo is not None and hi is not None:
            if lo > hi:
                return None
            if lo == hi:
                return Degenerate("shared-endpoint", p1.at(lo))
        return Degenerate("overlap", p1.at(lo) if lo is not None else p1.at(hi))
    t = _div(wx * ey - wy * ex, den)
    u = _div(wx * dy - wy * dx, den)
    a = _param_in(t, p1.lo, p1.hi)
    if not a:
        return None
    b = _param_in(u, p2.lo, p2.hi)
    if not b:
        return None
    pt = p1.at(t)
    if a == 2 and b == 2:
        return ProperCrossing(pt, t, u)
    if a == 1 and b == 1:
        return Degenerate("shared-endpoint", pt)
    return Degenerate("endpoint-on-interior", pt)


def _max_none(x, y, low: bool):
    # intersection of intervals; None = unbounded on that side
    if x is None:
        return y
    if y is None:
        return x
    return max(x, y) if low else min(x, y)


def segment_intersection(p1, p2, p3, p4):
    """Intersection of closed segments p1p2 and p3p4."""
    p1, p2, p3, p4 = (P(*p) for p in (p1, p2, p3, p4))
    if p1 == p2 or p3 == p4:
        raise ValueError("degenerate segment")
    s1 = Piece(p1, (p2.x - p1.x, p2.y - p1.y), 0, 1)
    s2 = Piece(p3, (p4.x - p3.x, p4.y - p3.y), 0, 1)
    return piece_intersection(s1, s2)


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------

CLASS_NAMES = {0: "G0", 1: "G1", 2: "G2"}


@dataclass(frozen=True)
class Curve:
    """Simple polyline; ``start``/``end`` is None for a finite end or a ray
    direction attached at the first/last vertex."""

    id: str
    vertices: tuple
    start: tuple | None = None
    end: tuple | None = None
    _pieces: tuple = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        verts = tuple(P(*v) for v in self.vertices)
        if not verts:
            raise ValueError(f"curve {self.id}: no vertices")
        object.__setattr__(self, "vertices", verts)
        for name in ("start", "end"):
            d = getattr(self, name)
            if d is not None:
                d = (q(d[0]), q(d[1]))
                if d == (0, 0):
                    raise ValueError(f"curve {self.id}: zero ray direction")
                object.__setattr__(self, name, d)
        if len(verts) == 1 and (self.start is None or self.end is None):
            if self.start is None and self.end is None:
                raise ValueError(f"curve {self.id}: a bounded curve needs two vertices")
        for a, b in zip(verts, verts[1:]):
            if a == b:
                raise ValueError(f"curve {self.id}: repeated vertex {a}")

    @property
    def klass(self) -> int:
        """Number of finite ends: 0, 1 or 2."""
        return (self.start is None) + (self.end is None)

    @property
    def pieces(self) -> tuple:
        if self._pieces is None:
            out = []
            v = self.vertices
            if self.start is not None:
                d = self.start
                out.append(Piece(v[0], (-d[0], -d[1]), None, 0))
            for a, b in zip(v, v[1:]):
                out.append(Piece(a, (b.x - a.x, b.y - a.y), 0, 1))
            if self.end is not None:
                out.append(Piece(v[-1], self.end, 0, None))
            object.__setattr__(self, "_pieces", tuple(out))
        return self._pieces

    def endpoints(self) -> list[Point]:
        """Finite ends: a(gamma) first (if any), then b(gamma)."""
        out = []
        if self.start is None:
            out.append(self.vertices[0])
        if self.end is None:
            out.append(self.vertices[-1])
        return out

    @property
    def a_point(self) -> Point | None:
        ends = self.endpoints()
        return ends[0] if ends else None

    @property
    def a_is_start(self) -> bool:
        """Orientation convention: + runs away from a(gamma).  For G0 curves
        the vertex order is used."""
        return self.start is None or self.end is not None

    def point_at(self, pos) -> Point:
        k, t = pos
        return self.pieces[k].at(t)

    def contains_point(self, p) -> bool:
        """Exact point-on-curve test."""
        p = P(*p)
        for pc in self.pieces:
            if _on_piece(pc, p):
                return True
        return False

    def locate_point(self, p) -> tuple | None:
        """Curve position of ``p`` or None if ``p`` is not on the curve."""
        p = P(*p)
        for k, pc in enumerate(self.pieces):
            t = _param_on_piece(pc, p)
            if t is not None:
                return (k, t)
        return None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "vertices": [[rat_json(v.x), rat_json(v.y)] for v in self.vertices],
            "start": "finite" if self.start is None else [rat_json(c) for c in self.start],
            "end": "finite" if self.end is None else [rat_json(c) for c in self.end],
        }

    @classmethod
    def from_json(cls, d: dict) -> "Curve":
        def kind(v):
            if v is None or v == "finite":
                return None
            return (q(v[0]), q(v[1]))

        return cls(str(d["id"]), tuple(P(q(x), q(y)) for x, y in d["vertices"]),
                   kind(d.get("start", "finite")), kind(d.get("end", "finite")))

    def scaled(self, factor, shift=(0, 0)) -> "Curve":
        sx, sy = q(shift[0]), q(shift[1])
        f = q(factor)
        verts = tuple(Point(v.x * f + sx, v.y * f + sy) for v in self.vertices)
        return Curve(self.id, verts, self.start, self.end)


def _param_on_piece(pc: Piece, p) -> Rational | None:
    (bx, by), (dx, dy) = pc.base, pc.dir
    wx, wy = p[0] - bx, p[1] - by
    if wx * dy - wy * dx != 0:
        return None
    t = _div(wx * dx + wy * dy, dx * dx + dy * dy)
    return t if _param_in(t, pc.lo, pc.hi) else None


def _on_piece(pc: Piece, p) -> bool:
    return _param_on_piece(pc, p) is not None


def rat_json(v) -> list[int]:
    v = Fraction(v)
    return [v.numerator, v.denominator]


# ---------------------------------------------------------------------------
# candidate pairs by an x-sweep over piece extents
# ---------------------------------------------------------------------------

def _lt_none(a, b) -> bool:
    # a < b where None on the left means -inf
    if a is None:
        return True
    return a < b


def sweep_pairs(items: list):
    """Yield index pairs (i, j), i < j, whose x- and y-extents overlap.

    ``items`` holds (xmin, xmax, ymin, ymax) with None for unbounded sides.
    Events are processed in increasing xmin; an item leaves the active list
    once its xmax is passed.
    """
    order = sorted(range(len(items)), key=lambda i: (items[i][0] is not None, items[i][0] if items[i][0] is not None else 0))
    active: list[int] = []
    for i in order:
        x0, _, y0, y1 = items[i]
        still = []
        for j in active:
            jx1 = items[j][1]
            if jx1 is not None and x0 is not None and jx1 < x0:
                continue
            still.append(j)
            jy0, jy1 = items[j][2], items[j][3]
            if (y1 is None or jy0 is None or jy0 <= y1) and (y0 is None or jy1 is None or y0 <= jy1):
                yield (j, i) if j < i else (i, j)
        still.append(i)
        active = still


def piece_boxes(pieces: list[Piece]) -> list[tuple]:
    out = []
    for pc in pieces:
        x0, x1 = pc.xrange()
        y0, y1 = pc.yrange()
        out.append((x0, x1, y0, y1))
    return out


# ---------------------------------------------------------------------------
# curve sets and validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    curves: tuple
    point: Point | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "curves": list(self.curves),
            "point": None if self.point is None else [rat_json(self.point.x), rat_json(self.point.y)],
            "detail": self.detail,
        }


@dataclass(frozen=True)
class CurveSet:
    curves: tuple
    s: int
    klass: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        if self.klass is None and self.curves:
            object.__setattr__(self, "klass", self.curves[0].klass)
        ids = [c.id for c in self.curves]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate curve ids")

    def __len__(self) -> int:
        return len(self.curves)

    def by_id(self) -> dict:
        cached = self.__dict__.get("_by_id")
        if cached is None:
            cached = {c.id: c for c in self.curves}
            object.__setattr__(self, "_by_id", cached)
        return cached

    def to_json(self) -> dict:
        return {
            "class": CLASS_NAMES[self.klass if self.klass is not None else 2],
            "s": self.s,
            "curves": [c.to_json() for c in self.curves],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, d: dict) -> "CurveSet":
        klass = {"G0": 0, "G1": 1, "G2": 2}[d["class"]]
        return cls(tuple(Curve.from_json(c) for c in d["curves"]), int(d["s"]), klass)

    @classmethod
    def load(cls, path) -> "CurveSet":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.dumps() + "\n")

    def scaled(self, factor, shift=(0, 0)) -> "CurveSet":
        return CurveSet(tuple(c.scaled(factor, shift) for c in self.curves), self.s, self.klass)


@dataclass
class PairContacts:
    """Raw result of intersecting every pair of pieces of a curve set."""

    # (curve index i, piece k, t, curve index j, piece l, u, point) for proper crossings
    crossings: list
    # (kind, curve index i, curve index j, point)
    degenerate: list


def all_contacts(curves) -> PairContacts:
    pieces, owner = [], []
    for ci, c in enumerate(curves):
        for k, pc in enumerate(c.pieces):
            pieces.append(pc)
            owner.append((ci, k))
    crossings, degenerate = [], []
    for i, j in sweep_pairs(piece_boxes(pieces)):
        ci, k = owner[i]
        cj, l = owner[j]
        if ci == cj:
            continue
        r = piece_intersection(pieces[i], pieces[j])
        if r is None:
            continue
        if isinstance(r, ProperCrossing):
            crossings.append((ci, k, r.t1, cj, l, r.t2, r.point))
        else:
            degenerate.append((r.kind, ci, cj, r.point))
    return PairContacts(crossings, degenerate)


def self_intersections(c: Curve) -> list[Point]:
    """Points where a curve fails to be simple."""
    bad = []
    pcs = c.pieces
    for i in range(len(pcs)):
        for j in range(i + 1, len(pcs)):
            r = piece_intersection(pcs[i], pcs[j])
            if r is None:
                continue
            if j == i + 1 and isinstance(r, Degenerate) and r.kind == "shared-endpoint":
                continue
            bad.append(r.point)
    return bad


def crossing_points(c1: Curve, c2: Curve) -> list[Point]:
    """Transversal crossings of two curves, ordered along ``c1``."""
    found = []
    for k, p1 in enumerate(c1.pieces):
        for l, p2 in enumerate(c2.pieces):
            r = piece_intersection(p1, p2)
            if r is None:
                continue
            if isinstance(r, Degenerate):
                raise DegeneracyError(
                    f"degenerate contact ({r.kind}) between {c1.id} and {c2.id} at {_fmt(r.point)}",
                    (c1.id, c2.id), r.point)
            found.append(((k, r.t1), r.point))
    found.sort(key=lambda kv: kv[0])
    return [p for _, p in found]


def _fmt(p) -> str:
    return "None" if p is None else f"({p[0]}, {p[1]})"


def validate_general_position(cs: CurveSet) -> list[Violation]:
    """All general-position violations of a curve set; empty means valid."""
    out: list[Violation] = []
    curves = cs.curves
    klasses = {c.klass for c in curves}
    if len(klasses) > 1 or (cs.klass is not None and klasses and klasses != {cs.klass}):
        out.append(Violation("mixed-class", tuple(c.id for c in curves), None,
                             f"classes present: {sorted(klasses)}"))
    for c in curves:
        for p in self_intersections(c):
            out.append(Violation("self-intersection", (c.id,), p))
    contacts = all_contacts(curves)
    ends = [set(c.endpoints()) for c in curves]
    for kind, i, j, pt in contacts.degenerate:
        a, b = curves[i], curves[j]
        if pt in ends[i] and pt in ends[j]:
            vk = "coincident-endpoints"
        elif pt in ends[i] or pt in ends[j]:
            vk = "endpoint-on-curve"
        else:
            vk = "tangency" if kind != "overlap" else "overlap"
        out.append(Violation(vk, tuple(sorted((a.id, b.id))), pt, kind))
    counts: dict = {}
    at_point: dict = {}
    for ci, _, _, cj, _, _, pt in contacts.crossings:
        key = (min(ci, cj), max(ci, cj))
        counts[key] = counts.get(key, 0) + 1
        at_point.setdefault(pt, set()).update((ci, cj))
    for pt, who in at_point.items():
        if len(who) >= 3:
            out.append(Violation("triple-point", tuple(sorted(curves[i].id for i in who)), pt))
    for (i, j), n in sorted(counts.items()):
        if n > cs.s:
            out.append(Violation("crossing-budget", (curves[i].id, curves[j].id), None,
                                 f"{n} crossings > s={cs.s}"))
    # deduplicate (a degenerate contact is reported once per piece pair)
    seen, uniq = set(), []
    for v in out:
        key = (v.kind, v.curves, v.point)
        if key not in seen:
            seen.add(key)
            uniq.append(v)
    return uniq


def pair_crossing_counts(curves) -> dict:
    """{(id_a, id_b): number of crossings} for every crossing pair, ids sorted."""
    contacts = all_contacts(curves)
    counts: dict = {}
    for ci, _, _, cj, _, _, _ in contacts.crossings:
        key = tuple(sorted((curves[ci].id, curves[cj].id)))
        counts[key] = counts.get(key, 0) + 1
    return counts


def parity_side(c: Curve, p, direction=(1, 0)) -> int:
    """Number of times the ray from ``p`` crosses ``c``, mod 2.

    ``direction`` must avoid all curve vertices and ray directions; for a
    bi-infinite curve the parity tells the side of the curve.
    """
    p = P(*p)
    probe = Piece(p, (q(direction[0]), q(direction[1])), 0, None)
    n = 0
    for pc in c.pieces:
        r = piece_intersection(probe, pc)
        if r is None:
            continue
        if isinstance(r, Degenerate):
            raise DegeneracyError("probe ray is not generic", (c.id,), r.point)
        n += 1
    return n % 2
