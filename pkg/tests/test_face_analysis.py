from fractions import Fraction

import pytest

from singleface import ds_core
from singleface.arrangement import build
from singleface.face_analysis import (
    BoundarySequence,
    Entry,
    WitnessError,
    OrientedSymbol as Sym,
    check_cut_consistency,
    check_k_friendly_bound,
    check_structure,
    check_linear_consistency,
    cut_circular,
    face_sequences,
    quadruple_witnesses,
    side_entries,
    split_sides,
    verify_theorem4,
)
from singleface.generators import generators
from singleface.geometry import CurveSet

from fixtures import random_segments, seg, triangle, two_lines
from oracles import Subdivision


def entry(curve, side, lo, hi):
    return Entry(Sym(curve, side), [], (0, Fraction(lo)), (0, Fraction(hi)))


def synthetic(entries, kind="linear", klass=1):
    return BoundarySequence(entries, kind, 0, 0, klass)


def test_single_segment_sequence():
    arr = build(CurveSet((seg("g", (0, 0), (3, 1)),), 1, 2))
    (seq,) = face_sequences(arr, arr.unbounded_faces()[0])
    assert seq.kind == "circular"
    assert sorted(str(x) for x in seq.symbols) == ["g+", "g-"]
    assert [e.symbol.part for e in cut_circular(seq)] == [0, 0]


def test_two_lines_sequence():
    arr = build(two_lines())
    for f in arr.unbounded_faces():
        (seq,) = face_sequences(arr, f)
        assert seq.kind == "linear" and len(seq) == 2
        assert {x.curve for x in seq.symbols} == {"a", "b"}
        assert all(x.side == "" for x in seq.symbols)


def _merge_circular(symbols):
    out = []
    for x in symbols:
        if not out or out[-1] != x:
            out.append(x)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def _rotations(xs):
    return {tuple(xs[i:] + xs[:i]) for i in range(len(xs))}


@pytest.mark.parametrize("seed", range(6))
def test_sequences_match_oracle_walk(seed):
    cs = random_segments(6, 40 + seed)
    arr = build(cs)
    orc = Subdivision({c.id: (c.vertices[0], c.vertices[-1]) for c in cs.curves})
    forward = {(u, v): k for u, v, k in orc.edges}
    backward = {(v, u): k for u, v, k in orc.edges}
    expected = []
    for face in orc.faces():
        for cyc in face:
            walk = list(reversed(cyc))  # face on the right
            syms = []
            for i in range(len(walk)):
                e = (walk[i], walk[(i + 1) % len(walk)])
                syms.append(f"{forward[e]}+" if e in forward else f"{backward[e]}-")
            expected.append(_merge_circular(syms))
    got = [[str(x) for x in seq.symbols] for f in arr.face_ids() for seq in face_sequences(arr, f)]
    assert len(got) == len(expected)
    remaining = [_rotations(e) for e in expected]
    for g in got:
        hit = next(i for i, r in enumerate(remaining) if tuple(g) in r)
        remaining.pop(hit)


def test_split_sides_example():
    seq = synthetic([entry("a", "+", 0, 1), entry("b", "-", 0, 1), entry("a", "+", 2, 3)])
    left, right = split_sides(seq)
    assert right.items == (Sym("a", "+"),)
    assert left.items == (Sym("b", "-"),)
    assert [e.symbol for e in side_entries(seq, "+")] == [Sym("a", "+")]


def test_all_right_sequence_has_empty_left():
    seq = synthetic([entry("a", "+", 0, 1), entry("b", "+", 0, 1)])
    assert split_sides(seq)[0].items == ()


@pytest.mark.parametrize("seed", range(4))
def test_sides_equal_restrict_then_collapse(seed):
    arr = build(generators("bent-rays", 8, seed))
    for f in arr.unbounded_faces():
        for seq in face_sequences(arr, f):
            x = ds_core.Sequence(seq.symbols)
            for side, got in zip("-+", split_sides(seq)):
                alpha = {y for y in seq.symbols if y.side == side}
                assert got.items == ds_core.collapse(ds_core.restrict(x, alpha)).items
                assert tuple(e.symbol for e in side_entries(seq, side)) == got.items


def test_cut_splits_wrapping_symbol():
    seq = synthetic([entry("a", "+", 5, 6), entry("b", "+", 0, 1), entry("a", "+", 1, 2)], "circular", 2)
    assert not check_order_ok(seq.entries)
    cut = cut_circular(seq)
    assert len(cut) == 3
    assert [str(e.symbol) for e in cut] == ["a+#2", "b+", "a+#1"]
    assert check_cut_consistency(seq).ok


def check_order_ok(entries):
    return check_linear_consistency(synthetic(entries)).ok


@pytest.mark.parametrize("seed", range(5))
def test_cut_order_on_generated_arcs(seed):
    arr = build(generators("wiggly-arcs", 7, seed))
    for f in arr.face_ids():
        for seq in face_sequences(arr, f):
            if seq.kind == "circular":
                assert check_cut_consistency(seq).ok


def test_swapped_intervals_are_reported():
    seq = synthetic([entry("a", "+", 2, 3), entry("b", "+", 0, 1), entry("a", "+", 0, 1)])
    res = check_linear_consistency(seq)
    assert not res.ok
    assert res.witness["curve"] == "a" and res.witness["entries"] == [0, 2]


def test_unoriented_reverse_traversal_is_fine():
    seq = synthetic([entry("a", "", 5, 4), entry("b", "", 0, 1), entry("a", "", 2, 1)], klass=0)
    assert check_linear_consistency(seq).ok


@pytest.mark.parametrize("kind,n", [("rays", 12), ("bent-rays", 9)])
def test_generated_rays_are_consistent(kind, n):
    for seed in range(4):
        cs = generators(kind, n, seed)
        arr = build(cs)
        for f in arr.unbounded_faces():
            for seq in face_sequences(arr, f):
                if seq.kind == "linear":
                    assert check_linear_consistency(seq).ok
                assert check_k_friendly_bound(seq, cs.s).ok


def test_friendliness_violation():
    seq = synthetic([entry("l", "-", 0, 1), entry("r", "+", 0, 1), entry("l", "-", 2, 3), entry("r", "+", 2, 3)])
    res = check_k_friendly_bound(seq, 1)
    assert not res.ok and res.witness["k"] == 2


def _long_alternations(kind, n, seeds):
    for seed in seeds:
        arr = build(generators(kind, n, seed))
        for f in arr.unbounded_faces():
            for seq in face_sequences(arr, f):
                entries = cut_circular(seq) if seq.kind == "circular" and seq.klass == 2 else seq.entries
                syms = tuple(e.symbol for e in entries)
                for pair, length in ds_core.pair_alternations(syms).items():
                    if length >= 4 and pair[0].curve != pair[1].curve:
                        yield arr, entries, pair, length


def test_quadruple_witness_counts():
    seen = set()
    for arr, entries, pair, length in _long_alternations("wiggly-arcs", 8, range(6)):
        pts = quadruple_witnesses(entries, pair, arr)
        assert len(pts) == length - 3 == len(set(pts))
        curves = arr.curveset.by_id()
        for p in pts:
            assert curves[pair[0].curve].contains_point(p)
            assert curves[pair[1].curve].contains_point(p)
        seen.add(length)
    assert 4 in seen and max(seen) >= 5


def test_quadruple_without_crossings_is_a_violation():
    arr = build(CurveSet((seg("a", (0, 0), (1, 0)), seg("b", (0, 1), (1, 1))), 1, 2))
    ents = [entry("a", "+", 0, 1), entry("b", "+", 0, 1), entry("a", "+", 2, 3), entry("b", "+", 2, 3)]
    with pytest.raises(WitnessError):
        quadruple_witnesses(ents, (Sym("a", "+"), Sym("b", "+")), arr)


def test_orders_two_lines():
    arr = build(two_lines())
    for f in arr.unbounded_faces():
        rep = verify_theorem4(arr, f)
        assert rep.passed
        assert all(c.max_alternation <= 2 and c.order == 1 for c in rep.claims)


@pytest.mark.parametrize("kind,order,name", [("rays", 2, "S1R"), ("wiggly-arcs", 5, "S2")])
def test_orders_orders(kind, order, name):
    for seed in range(3):
        arr = build(generators(kind, 10, seed))
        for f in arr.unbounded_faces():
            rep = verify_theorem4(arr, f)
            assert rep.passed
            assert {c.order for c in rep.claims} == {order}
            assert name in {c.name for c in rep.claims}
            assert check_structure(arr, f).passed


def test_orders_refuses_bounded_face():
    arr = build(triangle())
    bounded = [f for f in arr.face_ids() if not arr.faces[f].unbounded]
    with pytest.raises(ValueError, match="bounded"):
        verify_theorem4(arr, bounded[0])
