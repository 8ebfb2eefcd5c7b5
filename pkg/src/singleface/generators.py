"""Random general-position curve families with integer coordinates."""
from __future__ import annotations

import random

from .geometry import (
    Curve,
    CurveSet,
    Degenerate,
    ProperCrossing,
    pair_crossing_counts,
    piece_intersection,
    validate_general_position,
)

KINDS = {
    # kind: (class, default s, fixed s or None)
    "lines": (0, 1, 1),
    "wiggly-pseudolines": (0, 3, None),
    "rays": (1, 1, 1),
    "bent-rays": (1, 3, None),
    "segments": (2, 1, 1),
    "wiggly-arcs": (2, 3, None),
}


class GenerationError(ValueError):
    pass


def _box(pc):
    xs, ys = pc.xrange(), pc.yrange()
    return xs[0], xs[1], ys[0], ys[1]


def _overlap(lo1, hi1, lo2, hi2) -> bool:
    return (hi1 is None or lo2 is None or lo2 <= hi1) and (hi2 is None or lo1 is None or lo1 <= hi2)


class _Builder:
    """Accepts curves one at a time while the family stays in general position."""

    def __init__(self, s: int):
        self.s = s
        self.curves: list[Curve] = []
        self.boxes: list[list] = []
        self.points: set = set()

    def try_add(self, c: Curve) -> bool:
        mine = [_box(pc) for pc in c.pieces]
        new_points = []
        for other, oboxes in zip(self.curves, self.boxes):
            count = 0
            for pc, b1 in zip(c.pieces, mine):
                for po, b2 in zip(other.pieces, oboxes):
                    if not (_overlap(b1[0], b1[1], b2[0], b2[1]) and _overlap(b1[2], b1[3], b2[2], b2[3])):
                        continue
                    r = piece_intersection(pc, po)
                    if r is None:
                        continue
                    if isinstance(r, Degenerate):
                        return False
                    count += 1
                    new_points.append(r.point)
            if count > self.s:
                return False
        if len(set(new_points)) != len(new_points) or self.points.intersection(new_points):
            return False
        self.curves.append(c)
        self.boxes.append(mine)
        self.points.update(new_points)
        return True


def _line(rng, cid, n, klass):
    r = 2 * n + 6
    while True:
        d = (rng.randint(-6, 6), rng.randint(-6, 6))
        if d[0] != 0:
            break
    p = (rng.randint(-r, r), rng.randint(-r, r))
    if klass == 0:
        return Curve(cid, (p,), (-d[0], -d[1]), d)
    if klass == 1:
        return Curve(cid, (p,), None, d)
    while True:
        q = (rng.randint(-r, r), rng.randint(-r, r))
        if q[0] != p[0]:
            return Curve(cid, (p, q))


def _poly_values(xs, base, amp, roots, s):
    # 2^s * (base + amp * prod(x - r)) with half-integer roots r = k/2 (k odd): integer valued
    out = []
    for x in xs:
        v = amp
        for k in roots:
            v *= 2 * x - k
        out.append(base * 2 ** s + v)
    return out


def _wiggly(rng, cid, idx, n, s, klass, shared):
    width = max(2 * s + 4, n // 2 + 6)
    if klass == 0 or (idx < 2 and shared is not None):
        x0, x1 = 0, width
    elif klass == 1:
        x0, x1 = rng.randint(0, width // 2), width
    else:
        x0 = rng.randint(0, width - 2)
        x1 = rng.randint(x0 + 2, min(width, x0 + 2 + width // 2))
    xs = list(range(x0, x1 + 1))
    if idx < 2 and shared is not None:
        base, roots = shared
        amp = (1, -1)[idx] * rng.randint(1, 2)
    else:
        base = rng.randint(-3 * n, 3 * n)
        roots = sorted(rng.sample(range(1, 2 * width, 2), s))
        amp = rng.choice((-1, 1)) * rng.randint(1, 2)
    # keep amplitudes comparable to base spread
    ys = _poly_values(xs, base, amp, roots, s)
    verts = tuple(zip(xs, ys))
    if klass == 2:
        return Curve(cid, verts)
    end = (1, ys[-1])
    if klass == 1:
        return Curve(cid, verts, None, end)
    return Curve(cid, verts, (-1, ys[0]), end)


def generators(kind: str, n: int, seed: int, s: int | None = None, attempts: int = 200) -> CurveSet:
    """A deterministic general-position family of ``n`` curves."""
    if kind not in KINDS:
        raise GenerationError(f"unknown kind {kind!r}; expected one of {sorted(KINDS)}")
    klass, default_s, fixed = KINDS[kind]
    if s is None:
        s = default_s
    if fixed is not None and s != fixed:
        raise GenerationError(f"{kind} always has s = {fixed}")
    if n < 1 or s < 1:
        raise GenerationError("n and s must be positive")
    rng = random.Random(f"{kind}/{n}/{s}/{seed}")
    wiggly = fixed is None
    shared = None
    if wiggly and n >= 2:
        width = max(2 * s + 4, n // 2 + 6)
        # curves 0 and 1 share base and roots, so they cross exactly s times
        shared = (rng.randint(-n, n), sorted(rng.sample(range(1, 2 * width, 2), s)))
    b = _Builder(s)
    for i in range(n):
        cid = f"c{i}"
        for _ in range(attempts):
            if wiggly:
                c = _wiggly(rng, cid, i, n, s, klass, shared)
            else:
                c = _line(rng, cid, n, klass)
            if b.try_add(c):
                break
        else:
            raise GenerationError(f"could not place curve {i} of {kind} n={n} s={s} seed={seed}")
    cs = CurveSet(tuple(b.curves), s, klass)
    if shared is not None and max(pair_crossing_counts(cs.curves).values()) != s:
        raise GenerationError(f"{kind}: no pair reaches {s} crossings")
    bad = validate_general_position(cs)
    if bad:
        raise GenerationError(f"generated family is degenerate: {bad[0].kind}")
    return cs


def is_x_monotone(c: Curve) -> bool:
    """Strictly x-monotone: no vertical piece, x moves one way throughout."""
    signs = {(pc.dir[0] > 0) - (pc.dir[0] < 0) for pc in c.pieces}
    return 0 not in signs and len(signs) == 1
