"""Boundary sequences of a face and the checks built on them.

A boundary component is read keeping the face on the right.  Bounded-curve
and semi-infinite symbols are oriented: ``+`` when the curve is followed
away from its distinguished endpoint a(gamma), ``-`` otherwise.  Bi-infinite
symbols are unoriented.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from . import ds_core
from .arrangement import Arrangement
from .geometry import Curve, piece_intersection, ProperCrossing, rat_json

# k in the k-friendliness observation: an alternating run of s + 2 symbols
# between one left and one right symbol forces s + 1 crossings
def friendliness_k(s: int) -> int:
    return s + 1


class OrientedSymbol(NamedTuple):
    curve: str
    side: str  # "+", "-" or "" (unoriented)
    part: int = 0  # 0: not split, 1: first part, 2: second part

    def __str__(self) -> str:
        tail = f"#{self.part}" if self.part else ""
        return f"{self.curve}{self.side}{tail}"

    def to_json(self) -> dict:
        return {"curve": self.curve, "side": self.side or None, "part": self.part or None}


@dataclass
class Entry:
    symbol: OrientedSymbol
    half_edges: list
    # along-curve positions (piece, t) where the entry starts and ends, in walk order
    start: tuple
    stop: tuple

    @property
    def increasing(self) -> bool:
        return self.start <= self.stop

    def span(self) -> tuple:
        return (min(self.start, self.stop), max(self.start, self.stop))


@dataclass
class BoundarySequence:
    entries: list
    kind: str  # "circular" | "linear"
    face: int
    component: int
    klass: int

    @property
    def symbols(self) -> tuple:
        return tuple(e.symbol for e in self.entries)

    def sequence(self) -> ds_core.Sequence:
        return ds_core.Sequence(self.symbols)

    def __len__(self) -> int:
        return len(self.entries)

    def to_json(self) -> dict:
        return {
            "face": self.face,
            "component": self.component,
            "kind": self.kind,
            "class": f"G{self.klass}",
            "entries": [
                dict(e.symbol.to_json(), edges=list(e.half_edges),
                     start=[e.start[0], rat_json(e.start[1])], stop=[e.stop[0], rat_json(e.stop[1])])
                for e in self.entries
            ],
        }


@dataclass
class CheckResult:
    ok: bool
    name: str
    witness: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "witness": _jsonable(self.witness)}


def _jsonable(v):
    if isinstance(v, OrientedSymbol):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "numerator") and not isinstance(v, int):
        return rat_json(v)
    return v


# ---------------------------------------------------------------------------
# sequence association
# ---------------------------------------------------------------------------

def symbol_of(arr: Arrangement, h: int) -> OrientedSymbol:
    curve: Curve = arr.curveset.by_id()[arr.he_curve[h]]
    if curve.klass == 0:
        return OrientedSymbol(curve.id, "")
    plus = arr.he_forward[h] == curve.a_is_start
    return OrientedSymbol(curve.id, "+" if plus else "-")


def _merge(entries: list, circular: bool) -> list:
    out: list[Entry] = []
    for e in entries:
        if out and out[-1].symbol == e.symbol:
            last = out[-1]
            out[-1] = Entry(last.symbol, last.half_edges + e.half_edges, last.start, e.stop)
        else:
            out.append(e)
    if circular and len(out) > 1 and out[0].symbol == out[-1].symbol:
        last = out.pop()
        first = out[0]
        out[0] = Entry(first.symbol, last.half_edges + first.half_edges, last.start, first.stop)
    return out


def boundary_sequence(arr: Arrangement, f: int, component: int) -> BoundarySequence:
    comps = arr.components(f)
    if not 0 <= component < len(comps):
        raise IndexError(f"face {f} has {len(comps)} boundary components, not index {component}")
    comp = comps[component]
    raw = []
    for h in comp["half_edges"]:
        a, b = arr.he_interval[h]
        raw.append(Entry(symbol_of(arr, h), [h], a, b))
    circular = comp["kind"] == "circular"
    entries = _merge(raw, circular)
    if circular and entries:
        # break at the entry holding the half-edge leaving the smallest vertex
        best = min(range(len(entries)),
                   key=lambda i: min((arr.he_origin[h], h) for h in entries[i].half_edges))
        entries = entries[best:] + entries[:best]
    return BoundarySequence(entries, comp["kind"], f, component, arr.curveset.klass)


def face_sequences(arr: Arrangement, f: int) -> list[BoundarySequence]:
    return [boundary_sequence(arr, f, i) for i in range(len(arr.components(f)))]


# ---------------------------------------------------------------------------
# semi-infinite curves: left / right restrictions
# ---------------------------------------------------------------------------

def side_alphabets(seq: BoundarySequence) -> tuple[frozenset, frozenset]:
    syms = set(seq.symbols)
    left = frozenset(s for s in syms if s.side == "-")
    right = frozenset(s for s in syms if s.side == "+")
    return left, right


def split_sides(seq: BoundarySequence) -> tuple[ds_core.Sequence, ds_core.Sequence]:
    """(S_L, S_R): each side's restriction, collapsed."""
    x = seq.sequence()
    left, right = side_alphabets(seq)
    return ds_core.collapse(ds_core.restrict(x, left)), ds_core.collapse(ds_core.restrict(x, right))


def side_entries(seq: BoundarySequence, side: str) -> list[Entry]:
    """Entries of one side, restricted and collapsed; merged entries span
    from the first portion's start to the last portion's end."""
    return _merge([e for e in seq.entries if e.symbol.side == side], circular=False)


# ---------------------------------------------------------------------------
# bounded curves: cutting the circular sequence
# ---------------------------------------------------------------------------

def _orient_key(e: Entry) -> tuple:
    # position along the oriented symbol: walk direction of the entry
    a = e.start
    return a if e.increasing else (-a[0], -a[1])


def cut_circular(seq: BoundarySequence) -> list[Entry]:
    """Linearised, cut copy of a circular sequence (already broken at the
    deterministic break entry).  Length is preserved."""
    entries = seq.entries
    t = len(entries)
    where: dict = {}
    for i, e in enumerate(entries):
        where.setdefault(e.symbol, []).append(i)
    part = [0] * t
    for sym, idx in where.items():
        along = sorted(idx, key=lambda i: _orient_key(entries[i]))
        mu, nu = along[0], along[-1]
        if mu > nu:
            for i in idx:
                part[i] = 1 if i >= mu else 2
    return [Entry(OrientedSymbol(e.symbol.curve, e.symbol.side, part[i]), e.half_edges, e.start, e.stop)
            for i, e in enumerate(entries)]


def cut_sequence(seq: BoundarySequence) -> ds_core.Sequence:
    return ds_core.Sequence(tuple(e.symbol for e in cut_circular(seq)))


def check_order(entries: list, either_direction: bool = False, name: str = "consistency") -> CheckResult:
    """Every symbol's occurrences follow each other along the curve.

    For oriented symbols the order must agree with the traversal direction;
    with ``either_direction`` (unoriented symbols) a global reversal is
    allowed per symbol.
    """
    occ: dict = {}
    for i, e in enumerate(entries):
        occ.setdefault(e.symbol, []).append(i)
    for sym, idx in occ.items():
        if len(idx) < 2:
            continue
        spans = [entries[i].span() for i in idx]
        inc = all(spans[j][1] <= spans[j + 1][0] for j in range(len(spans) - 1))
        dec = all(spans[j + 1][1] <= spans[j][0] for j in range(len(spans) - 1))
        if either_direction:
            ok = inc or dec
        else:
            ok = inc if entries[idx[0]].increasing else dec
        if not ok:
            bad = _first_bad_pair(entries, idx, either_direction)
            return CheckResult(False, name, {"curve": sym.curve, "symbol": sym, "entries": bad})
    return CheckResult(True, name)


def _first_bad_pair(entries, idx, either):
    spans = [entries[i].span() for i in idx]
    want_inc = entries[idx[0]].increasing
    if either:
        want_inc = spans[0][1] <= spans[1][0] if len(spans) > 1 else True
    for j in range(len(idx) - 1):
        good = spans[j][1] <= spans[j + 1][0] if want_inc else spans[j + 1][1] <= spans[j][0]
        if not good:
            return [idx[j], idx[j + 1]]
    return idx[:2]


def check_linear_consistency(seq: BoundarySequence, arr: Arrangement | None = None) -> CheckResult:
    """Portions of each curve occur in along-curve order (G1 sides) or in
    along-curve order up to reversal (G0)."""
    if seq.klass == 0:
        return check_order(seq.entries, either_direction=True, name="linear-consistency")
    return check_order(seq.entries, name="linear-consistency")


def check_cut_consistency(seq: BoundarySequence) -> CheckResult:
    return check_order(cut_circular(seq), name="circular-consistency")


def check_k_friendly_bound(seq: BoundarySequence, s: int) -> CheckResult:
    left, right = side_alphabets(seq)
    k = friendliness_k(s)
    res = ds_core.is_k_friendly(seq.symbols, left, right, k)
    wit = {} if res.ok else {"k": k, "window": list(res.window),
                             "symbols": [str(x) for x in seq.symbols[res.window[0]:res.window[1]]]}
    return CheckResult(res.ok, "k-friendly", wit)


# ---------------------------------------------------------------------------
# quadruple witnesses
# ---------------------------------------------------------------------------

class WitnessError(RuntimeError):
    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


def curve_pair_crossings(a: Curve, b: Curve) -> list[tuple]:
    """[(pos_on_a, pos_on_b, point)] for all crossings of two curves."""
    out = []
    for k, pa in enumerate(a.pieces):
        for l, pb in enumerate(b.pieces):
            r = piece_intersection(pa, pb)
            if isinstance(r, ProperCrossing):
                out.append(((k, r.t1), (l, r.t2), r.point))
    return out


def _gap(e1: Entry, e2: Entry):
    lo1, hi1 = e1.span()
    lo2, hi2 = e2.span()
    if hi1 <= lo2:
        return hi1, lo2
    if hi2 <= lo1:
        return hi2, lo1
    return None


def _match(cands: list[list]) -> list | None:
    """Distinct representatives, one per candidate list (augmenting paths)."""
    owner: dict = {}

    def try_assign(i, seen):
        for c in cands[i]:
            if c in seen:
                continue
            seen.add(c)
            if c not in owner or try_assign(owner[c], seen):
                owner[c] = i
                return True
        return False

    for i in range(len(cands)):
        if not try_assign(i, set()):
            return None
    pick = [None] * len(cands)
    for c, i in owner.items():
        pick[i] = c
    return pick


def alternation_runs(entries: list, a, b) -> list[Entry]:
    """The longest alternation of symbols a, b as merged run entries."""
    runs: list[Entry] = []
    for e in entries:
        if e.symbol != a and e.symbol != b:
            continue
        if runs and runs[-1].symbol == e.symbol:
            last = runs[-1]
            runs[-1] = Entry(last.symbol, last.half_edges + e.half_edges, last.start, e.stop)
        else:
            runs.append(e)
    return runs


def quadruple_witnesses(entries: list, pair: tuple, arr: Arrangement) -> list:
    """One distinct crossing of the two curves for every consecutive quadruple
    of the alternation between ``pair``; raises :class:`WitnessError` if
    no such system of points exists."""
    a, b = pair
    runs = alternation_runs(entries, a, b)
    if len(runs) < 4:
        return []
    curves = arr.curveset.by_id()
    ca, cb = curves[a.curve], curves[b.curve]
    if ca.id == cb.id:
        raise WitnessError(f"alternation of length {len(runs)} between two symbols of curve {ca.id}",
                             {"pair": [str(a), str(b)]})
    crossings = curve_pair_crossings(ca, cb)
    cands = []
    for i in range(len(runs) - 3):
        x1, g1, x2, g2 = runs[i:i + 4]
        gx = _gap(x1, x2)
        gg = _gap(g1, g2)
        if gx is None or gg is None:
            raise WitnessError("overlapping portions in an alternation", {"quadruple": i})
        pos_x = 0 if x1.symbol.curve == ca.id else 1
        c = []
        for j, cr in enumerate(crossings):
            px, pg = cr[pos_x], cr[1 - pos_x]
            if gx[0] <= px <= gx[1] and gg[0] <= pg <= gg[1]:
                c.append(j)
        cands.append(c)
    pick = _match(cands)
    if pick is None:
        bad = next((i for i, c in enumerate(cands) if not c), None)
        raise WitnessError(f"no distinct crossings of {ca.id} and {cb.id} for the quadruples",
                             {"pair": [str(a), str(b)], "empty_quadruple": bad, "length": len(runs)})
    return [crossings[j][2] for j in pick]


# ---------------------------------------------------------------------------
# DS-order verification
# ---------------------------------------------------------------------------

def sequences_to_check(seq: BoundarySequence) -> dict:
    """The sequences whose DS order is bounded: name -> list of entries."""
    if seq.klass == 0:
        return {"S0": list(seq.entries)}
    if seq.klass == 1:
        return {"S1L": side_entries(seq, "-"), "S1R": side_entries(seq, "+")}
    if seq.kind == "circular":
        return {"S2": cut_circular(seq)}
    return {"S2": list(seq.entries)}


def allowed_order(klass: int, s: int) -> int:
    return s + klass


@dataclass
class ClaimResult:
    component: int
    name: str
    order: int
    length: int
    max_alternation: int
    witness_pair: tuple | None
    witness_indices: tuple
    adjacent_repeat: bool
    passed: bool

    @property
    def margin(self) -> int:
        return self.order + 1 - self.max_alternation

    def to_json(self) -> dict:
        return {
            "component": self.component,
            "sequence": self.name,
            "ds_order": self.order,
            "length": self.length,
            "max_alternation": self.max_alternation,
            "margin": self.margin,
            "witness_pair": None if self.witness_pair is None else [str(x) for x in self.witness_pair],
            "witness_indices": list(self.witness_indices),
            "adjacent_repeat": self.adjacent_repeat,
            "passed": self.passed,
        }


@dataclass
class FaceOrderReport:
    face: int
    klass: int
    s: int
    n: int
    complexity: int
    claims: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def to_json(self) -> dict:
        return {
            "face": self.face,
            "class": f"G{self.klass}",
            "s": self.s,
            "n": self.n,
            "complexity": self.complexity,
            "passed": self.passed,
            "claims": [c.to_json() for c in self.claims],
        }


def claim_for(entries: list, component: int, name: str, order: int) -> ClaimResult:
    rep = ds_core.ds_report(tuple(e.symbol for e in entries))
    return ClaimResult(component, name, order, len(entries), rep.max_alternation_length,
                       rep.witness_pair, rep.witness_indices, rep.has_adjacent_repeat, rep.is_ds(order))


def verify_theorem4(arr: Arrangement, f: int) -> FaceOrderReport:
    face = arr.faces[f]
    if face.artificial:
        raise ValueError(f"face {f} is the artificial outside-the-frame face")
    if not face.unbounded:
        raise ValueError(f"face {f} is bounded; make it unbounded with the tunnel transform first")
    cs = arr.curveset
    order = allowed_order(cs.klass, cs.s)
    claims = []
    for i, seq in enumerate(face_sequences(arr, f)):
        for name, entries in sequences_to_check(seq).items():
            claims.append(claim_for(entries, i, name, order))
    return FaceOrderReport(f, cs.klass, cs.s, len(cs.curves), arr.face_complexity(f)[0], claims)


@dataclass
class StructureReport:
    face: int
    checks: list  # CheckResult
    witnesses: int = 0

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {"face": self.face, "passed": self.passed, "witness_points": self.witnesses,
                "checks": [c.to_json() for c in self.checks if not c.ok]}


def check_structure(arr: Arrangement, f: int) -> StructureReport:
    """Consistency, friendliness, cutting and quadruple checks for one face."""
    cs = arr.curveset
    checks: list[CheckResult] = []
    nwit = 0
    entries_total = 0
    for i, seq in enumerate(face_sequences(arr, f)):
        entries_total += len(seq)
        if seq.klass in (0, 1) and seq.kind == "linear":
            checks.append(_tag(check_linear_consistency(seq, arr), i))
        if seq.klass == 1:
            checks.append(_tag(check_k_friendly_bound(seq, cs.s), i))
            left, right = side_alphabets(seq)
            dec = ds_core.fact1_decompose(seq.symbols, left, right)
            checks.append(CheckResult(dec.identity_holds(len(seq)), "decomposition-identity", {"component": i}))
        if seq.klass == 2 and seq.kind == "circular":
            cut = cut_circular(seq)
            n_alpha = len({e.symbol for e in cut})
            checks.append(CheckResult(len(cut) == len(seq), "cut-length", {"component": i}))
            checks.append(CheckResult(n_alpha <= 4 * len(cs.curves), "cut-alphabet",
                                      {"component": i, "alphabet": n_alpha}))
            checks.append(_tag(check_cut_consistency(seq), i))
        for name, entries in sequences_to_check(seq).items():
            res, count = _check_quadruples(entries, arr, f"{name}[{i}]")
            nwit += count
            checks.append(res)
    if arr.faces[f].unbounded:
        checks.append(_components_disjoint(arr, f))
    total, _ = arr.face_complexity(f)
    checks.append(CheckResult(entries_total <= total, "entries-within-complexity",
                              {"entries": entries_total, "complexity": total}))
    return StructureReport(f, checks, nwit)


def _components_disjoint(arr: Arrangement, f: int) -> CheckResult:
    """No curve shows up on two different boundary components of ``f``."""
    owner: dict = {}
    for i, seq in enumerate(face_sequences(arr, f)):
        for c in {x.curve for x in seq.symbols}:
            if owner.setdefault(c, i) != i:
                return CheckResult(False, "components-disjoint", {"curve": c, "components": [owner[c], i]})
    return CheckResult(True, "components-disjoint")


def _tag(res: CheckResult, component: int) -> CheckResult:
    res.witness = dict(res.witness, component=component)
    return res


def _check_quadruples(entries: list, arr: Arrangement, label: str) -> tuple[CheckResult, int]:
    syms = tuple(e.symbol for e in entries)
    pairs = ds_core.pair_alternations(syms)
    curves = arr.curveset.by_id()
    count = 0
    for (a, b), length in sorted(pairs.items()):
        if length < 4:
            continue
        if a.curve == b.curve:
            return CheckResult(False, "quadruple", {"sequence": label, "pair": [str(a), str(b)],
                                                    "reason": "same curve", "length": length}), count
        try:
            pts = quadruple_witnesses(entries, (a, b), arr)
        except WitnessError as exc:
            return CheckResult(False, "quadruple", dict(exc.witness, sequence=label)), count
        ok = (len(pts) == length - 3 and len(set(pts)) == len(pts)
              and all(curves[a.curve].contains_point(p) and curves[b.curve].contains_point(p) for p in pts))
        if not ok:
            return CheckResult(False, "quadruple", {"sequence": label, "pair": [str(a), str(b)],
                                                    "points": len(pts), "length": length}), count
        count += len(pts)
    return CheckResult(True, "quadruple", {"sequence": label}), count
