"""Lower envelopes of x-monotone, possibly partial, curves."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import ds_core
from .geometry import CurveSet, Curve, ProperCrossing, piece_intersection, rat_json
from .generators import is_x_monotone

GAP = None


class EnvelopeError(ValueError):
    pass


@dataclass(frozen=True)
class EnvelopeSequence:
    breakpoints: tuple  # strictly increasing x values
    owners: tuple  # len(breakpoints) + 1 entries; None marks a gap

    def __post_init__(self):
        if len(self.owners) != len(self.breakpoints) + 1:
            raise ValueError("owners must outnumber breakpoints by one")

    @property
    def complexity(self) -> int:
        """Number of maximal x-intervals attained by a curve."""
        return sum(1 for o in self.owners if o is not GAP)

    def curve_sequence(self) -> tuple:
        return tuple(o for o in self.owners if o is not GAP)

    def intervals(self) -> list[tuple]:
        xs = (None,) + self.breakpoints + (None,)
        return [(xs[i], xs[i + 1], o) for i, o in enumerate(self.owners)]

    def to_json(self) -> dict:
        return {"breakpoints": [rat_json(x) for x in self.breakpoints], "owners": list(self.owners),
                "complexity": self.complexity}


def _domain(c: Curve) -> tuple:
    xs = [v.x for v in c.vertices]
    lo, hi = min(xs), max(xs)
    if c.start is not None:
        if c.start[0] < 0:
            lo = None
        else:
            hi = None
    if c.end is not None:
        if c.end[0] < 0:
            lo = None
        else:
            hi = None
    return lo, hi


def value_at(c: Curve, x) -> Fraction | None:
    """y of the x-monotone curve ``c`` above ``x``; None outside its domain."""
    for pc in c.pieces:
        lo, hi = pc.xrange()
        if (lo is None or lo <= x) and (hi is None or x <= hi):
            t = Fraction(x - pc.base[0]) / pc.dir[0]
            return pc.base[1] + t * pc.dir[1]
    return None


def _pair_crossings(a: Curve, b: Curve) -> list:
    out = []
    for pa in a.pieces:
        for pb in b.pieces:
            r = piece_intersection(pa, pb)
            if isinstance(r, ProperCrossing):
                out.append(r.point.x)
    return sorted(out)


def _inside(x, lo, hi) -> bool:
    return (lo is None or lo < x) and (hi is None or x < hi)


def _sample(lo, hi):
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (Fraction(lo) + hi) / 2


class _Env:
    def __init__(self, cs: CurveSet):
        self.curves = cs.by_id()
        self.cache: dict = {}

    def crossings(self, a: str, b: str) -> list:
        key = (a, b) if a < b else (b, a)
        if key not in self.cache:
            self.cache[key] = _pair_crossings(self.curves[key[0]], self.curves[key[1]])
        return self.cache[key]

    def single(self, c: Curve) -> list:
        lo, hi = _domain(c)
        out = []
        if lo is not None:
            out.append((None, lo, GAP))
        out.append((lo, hi, c.id))
        if hi is not None:
            out.append((hi, None, GAP))
        return out

    def lower(self, a, b, x):
        ya, yb = value_at(self.curves[a], x), value_at(self.curves[b], x)
        return a if ya < yb else b

    def merge(self, e1: list, e2: list) -> list:
        xs = sorted({x for lo, hi, _ in e1 + e2 for x in (lo, hi) if x is not None})
        cuts = [None] + xs + [None]
        out = []
        for lo, hi in zip(cuts, cuts[1:]):
            probe = _sample(lo, hi)
            o1, o2 = _owner(e1, probe), _owner(e2, probe)
            if o1 is GAP or o2 is GAP:
                _push(out, lo, hi, o2 if o1 is GAP else o1)
                continue
            inner = [x for x in self.crossings(o1, o2) if _inside(x, lo, hi)]
            bounds = [lo] + inner + [hi]
            for l2, h2 in zip(bounds, bounds[1:]):
                _push(out, l2, h2, self.lower(o1, o2, _sample(l2, h2)))
        return out

    def envelope(self, curves: list) -> list:
        if len(curves) == 1:
            return self.single(curves[0])
        mid = len(curves) // 2
        return self.merge(self.envelope(curves[:mid]), self.envelope(curves[mid:]))


def _owner(env: list, x):
    for lo, hi, o in env:
        if (lo is None or lo <= x) and (hi is None or x < hi):
            return o
    return env[-1][2]


def _push(out: list, lo, hi, owner) -> None:
    if out and out[-1][2] == owner:
        out[-1] = (out[-1][0], hi, owner)
    else:
        out.append((lo, hi, owner))


def lower_envelope(cs: CurveSet) -> EnvelopeSequence:
    for c in cs.curves:
        if not is_x_monotone(c):
            raise EnvelopeError(f"curve {c.id} is not x-monotone")
    if not cs.curves:
        return EnvelopeSequence((), (GAP,))
    env = _Env(cs).envelope(sorted(cs.curves, key=lambda c: c.id))
    return EnvelopeSequence(tuple(lo for lo, _, _ in env[1:]), tuple(o for _, _, o in env))


def envelope_order(klass: int, s: int) -> int:
    return s + klass


def envelope_is_ds(env: EnvelopeSequence, klass: int, s: int) -> bool:
    return ds_core.is_ds(env.curve_sequence(), envelope_order(klass, s))


def below_point(cs: CurveSet, env: EnvelopeSequence):
    """A point strictly below the envelope, inside its first curve interval."""
    for lo, hi, o in env.intervals():
        if o is GAP:
            continue
        x = _sample(lo, hi)
        # the envelope is the minimum at x, so nothing lies below this point
        return (x, value_at(cs.by_id()[o], x) - 1)
    return None
