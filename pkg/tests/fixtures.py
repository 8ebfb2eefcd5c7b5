"""Hand-built curve sets and instance collections shared by the tests."""
from __future__ import annotations

import random

from singleface.arrangement import build
from singleface.generators import generators
from singleface.geometry import Curve, CurveSet, validate_general_position

from oracles import Subdivision, canonical

L1, L2 = ("l1", "l2"), ("r1", "r2")


def seg(cid, a, b) -> Curve:
    return Curve(cid, (a, b))


def line(cid, a, b) -> Curve:
    """Bi-infinite line through a and b."""
    d = (b[0] - a[0], b[1] - a[1])
    return Curve(cid, (a, b), start=(-d[0], -d[1]), end=d)


def random_segments(n: int, seed: int, size: int = 30) -> CurveSet:
    rng = random.Random(seed)
    curves = []
    while len(curves) < n:
        p = (rng.randint(0, size), rng.randint(0, size))
        q = (rng.randint(0, size), rng.randint(0, size))
        if p == q:
            continue
        c = seg(f"s{len(curves)}", p, q)
        if not validate_general_position(CurveSet(tuple(curves) + (c,), 1, 2)):
            curves.append(c)
    return CurveSet(tuple(curves), 1, 2)


def triangle() -> CurveSet:
    return CurveSet((seg("a", (-2, 0), (12, 1)), seg("b", (10, -2), (3, 10)), seg("c", (5, 10), (-1, -2))), 1, 2)


def ring() -> CurveSet:
    """Two interlocking bent arcs crossing twice; the inner face has no arc endpoint."""
    u = Curve("u", ((-1, -1), (-3, 0), (0, 3), (3, 0), (1, -1)))
    lo = Curve("l", ((1, 1), (4, 0), (0, -3), (-4, 0), (-1, 1)))
    return CurveSet((u, lo), 2, 2)


def nested_rings() -> CurveSet:
    """Two concentric rings, each made of two arcs; the centre face is two rings deep."""
    def rg(tag, r):
        a = Curve(f"{tag}u", ((-r + 1, -1), (-r - 1, 0), (0, r + 1), (r + 1, 0), (r - 1, -1)))
        b = Curve(f"{tag}l", ((r - 1, 1), (r + 2, 0), (0, -r - 1), (-r - 2, 0), (-r + 1, 1)))
        return [a, b]
    return CurveSet(tuple(rg("i", 2) + rg("o", 6)), 2, 2)


def two_lines() -> CurveSet:
    return CurveSet((line("a", (0, 0), (2, 2)), line("b", (0, 2), (2, 0))), 1, 0)


def bounded_faces(kind: str, n: int, seed: int, s=None, limit: int = 2) -> list:
    """Up to ``limit`` (arrangement, face) pairs of bounded faces."""
    arr = build(generators(kind, n, seed, s))
    out = [(arr, f) for f in arr.face_ids() if not arr.faces[f].unbounded]
    return out[:limit]


def friendly_sequences(k: int, s: int, maxlen: int) -> list[tuple]:
    """All repeat-free, k-friendly sequences over l1,l2 | r1,r2 up to ``maxlen``
    whose collapsed side restrictions are DS of order s (two symbols: length ≤ s+1)."""
    out = []

    def rec(seq, cl, cr, run):
        if seq:
            out.append(tuple(seq))
        if len(seq) == maxlen:
            return
        for x in L1 + L2:
            if seq and seq[-1] == x:
                continue
            left = x in L1
            ncl, ncr = cl, cr
            if left:
                if not cl or cl[-1] != x:
                    ncl = cl + (x,)
                if len(ncl) > s + 1:
                    continue
            else:
                if not cr or cr[-1] != x:
                    ncr = cr + (x,)
                if len(ncr) > s + 1:
                    continue
            if seq and (seq[-1] in L1) != left:
                nrun = run + 1 if len(seq) >= 2 and seq[-2] == x else 2
            else:
                nrun = 1
            if nrun >= k + 1:
                continue
            seq.append(x)
            rec(seq, ncl, ncr, nrun)
            seq.pop()

    rec([], (), (), 0)
    return out


def oracle_of(cs: CurveSet) -> Subdivision:
    return Subdivision({c.id: (c.vertices[0], c.vertices[-1]) for c in cs.curves})


def face_signature(arr, f) -> tuple:
    # the builder keeps faces on the right; the oracle keeps them on the left
    cycles = []
    for c in arr.face_cycles(f):
        pts = [arr.vertices[arr.he_origin[h]] for h in arr.cycles[c]]
        cycles.append(canonical(list(reversed(pts))))
    return tuple(sorted(cycles))


def compare_with_oracle(cs: CurveSet) -> list[str]:
    arr = build(cs)
    orc = oracle_of(cs)
    bad = []
    if arr.true_counts() != (orc.V, orc.E, orc.F):
        bad.append(f"counts {arr.true_counts()} vs {(orc.V, orc.E, orc.F)}")
    mine = sorted(face_signature(arr, f) for f in arr.face_ids())
    if mine != orc.face_signatures():
        bad.append("boundary walks differ")
    if sorted(arr.face_complexity(f)[0] for f in arr.face_ids()) != orc.face_complexities():
        bad.append("face complexities differ")
    return bad
