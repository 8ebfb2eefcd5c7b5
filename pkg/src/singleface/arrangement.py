"""Planar arrangement of a validated curve set as a half-edge structure.

Half-edges keep their face on the *right*, so following ``next`` walks a
face boundary the way the face-boundary sequences are read.  Edges are
polyline chains between arrangement vertices; polyline bends are not
vertices.  Curves with rays are clipped to a rectangular frame lying at
distance 1 beyond the bounding box of every true vertex and curve vertex;
frame vertices, frame edges and the face outside the frame are flagged
artificial and excluded from every count.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key

from .geometry import (
    CurveSet,
    DegeneracyError,
    Piece,
    Point,
    P,
    all_contacts,
    orient,
    piece_intersection,
    rat_json,
    ProperCrossing,
)


class ConsistencyError(RuntimeError):
    """The builder reached a state that validation should have excluded."""


class OnBoundaryError(ValueError):
    """A query point lies on a curve."""


@dataclass(frozen=True)
class FaceRef:
    id: int
    is_unbounded: bool
    component_count: int


@dataclass
class Face:
    outer: int | None  # cycle index of the outer boundary, None for the unbounded face
    holes: list = field(default_factory=list)
    artificial: bool = False
    unbounded: bool = False


def _half(d) -> int:
    return 0 if d[1] > 0 or (d[1] == 0 and d[0] > 0) else 1


def _angle_cmp(a, b) -> int:
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    c = a[0] * b[1] - a[1] * b[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


_angle_key = cmp_to_key(_angle_cmp)


def _exit_param(base, d, box):
    """Smallest tau > 0 with base + tau * d on the boundary of ``box``."""
    xmin, ymin, xmax, ymax = box
    best = None
    for lim, b, c in ((xmax, base[0], d[0]), (xmin, base[0], d[0]), (ymax, base[1], d[1]), (ymin, base[1], d[1])):
        if c == 0:
            continue
        tau = Fraction(lim - b) / c
        if tau > 0 and (best is None or tau < best):
            best = tau
    return best


def _frame_pos(p, box):
    """Position of a frame point along the frame perimeter, counterclockwise
    from the lower-left corner."""
    xmin, ymin, xmax, ymax = box
    w, h = xmax - xmin, ymax - ymin
    x, y = p
    if y == ymin and x < xmax:
        return x - xmin
    if x == xmax and y < ymax:
        return w + (y - ymin)
    if y == ymax and x > xmin:
        return w + h + (xmax - x)
    return 2 * w + h + (ymax - y)


class Arrangement:
    """Half-edge structure of A(cs).  Build with :func:`build`."""

    def __init__(self, cs: CurveSet):
        self.curveset = cs
        self.frame = None
        self.vertices: list[Point] = []
        self.vertex_kind: list[str] = []  # endpoint | crossing | exit | corner
        self.he_origin: list[int] = []
        self.he_twin: list[int] = []
        self.he_next: list[int] = []
        self.he_prev: list[int] = []
        self.he_face: list[int] = []
        self.he_curve: list = []  # curve id or None for frame edges
        self.he_forward: list[bool] = []  # runs in the curve's vertex order
        self.he_path: list[tuple] = []
        self.he_interval: list = []  # (pos_from, pos_to) along the curve, in walk direction
        self.he_cycle: list[int] = []
        self.cycles: list[list[int]] = []
        self.cycle_area: list = []
        self.faces: list[Face] = []

    # -- basic queries -----------------------------------------------------
    def is_artificial_vertex(self, v: int) -> bool:
        return self.vertex_kind[v] in ("exit", "corner")

    def is_artificial_he(self, h: int) -> bool:
        return self.he_curve[h] is None

    def dest(self, h: int) -> int:
        return self.he_origin[self.he_twin[h]]

    @property
    def n_half_edges(self) -> int:
        return len(self.he_origin)

    def true_counts(self) -> tuple[int, int, int]:
        """(V, E, F) of the arrangement proper, artificial features excluded."""
        V = sum(1 for k in self.vertex_kind if k in ("endpoint", "crossing"))
        E = sum(1 for h in range(self.n_half_edges) if self.he_curve[h] is not None) // 2
        F = sum(1 for f in self.faces if not f.artificial)
        return V, E, F

    def face_ref(self, f: int) -> FaceRef:
        return FaceRef(f, self.faces[f].unbounded, len(self.components(f)))

    def face_ids(self, include_artificial: bool = False) -> list[int]:
        return [i for i, f in enumerate(self.faces) if include_artificial or not f.artificial]

    def unbounded_faces(self) -> list[int]:
        return [i for i, f in enumerate(self.faces) if f.unbounded and not f.artificial]

    def face_cycles(self, f: int) -> list[int]:
        face = self.faces[f]
        out = [] if face.outer is None else [face.outer]
        return out + list(face.holes)

    def components(self, f: int) -> list[dict]:
        """True boundary components of face ``f``.

        Each is ``{"kind": "circular"|"linear", "half_edges": [...]}``.  A
        cycle without frame edges is one circular component; a cycle that
        touches the frame splits into linear chains between frame visits.
        """
        out = []
        for c in self.face_cycles(f):
            cyc = self.cycles[c]
            art = [self.is_artificial_he(h) for h in cyc]
            if not any(art):
                start = min(range(len(cyc)), key=lambda i: cyc[i])
                out.append({"kind": "circular", "half_edges": cyc[start:] + cyc[:start]})
                continue
            if all(art):
                continue
            # rotate so the cycle starts right after a frame half-edge
            m = len(cyc)
            s0 = next(i for i in range(m) if art[i] and not art[(i + 1) % m])
            rot = [cyc[(s0 + 1 + i) % m] for i in range(m)]
            run: list[int] = []
            for h in rot:
                if self.is_artificial_he(h):
                    if run:
                        out.append({"kind": "linear", "half_edges": run})
                        run = []
                else:
                    run.append(h)
            if run:
                out.append({"kind": "linear", "half_edges": run})
        return out

    def face_complexity(self, f: int) -> tuple[int, list[int]]:
        """Edges plus vertices met along every boundary walk, with multiplicity."""
        per = []
        for comp in self.components(f):
            m = len(comp["half_edges"])
            per.append(2 * m if comp["kind"] == "circular" else 2 * m - 1)
        return sum(per), per

    def is_on_curve(self, p) -> bool:
        return any(c.contains_point(p) for c in self.curveset.curves)

    # -- ray shooting --------------------------------------------------------
    def _segments(self):
        for h in range(self.n_half_edges):
            if h > self.he_twin[h]:
                continue
            path = self.he_path[h]
            for a, b in zip(path, path[1:]):
                yield h, a, b

    def _all_points(self):
        for path in self.he_path:
            yield from path

    def _generic_left_dir(self, p):
        """A direction (-1, delta) whose ray from ``p`` avoids every path point."""
        slopes = set()
        for w in self._all_points():
            if w[0] < p[0]:
                slopes.add(Fraction(w[1] - p[1]) / (p[0] - w[0]))
        k = 0
        while True:
            delta = Fraction(1, 7 + 2 * k) * (1 if k % 2 == 0 else -1)
            if delta not in slopes:
                return (-1, delta)
            k += 1

    def shoot(self, p, exclude_cycle: int | None = None):
        """Half-edge first hit by a generic leftward ray from ``p``, oriented
        so that ``p`` is on its right; None if the ray escapes."""
        d = self._generic_left_dir(p)
        ray = Piece(P(*p), d, 0, None)
        best_t, best = None, None
        for h, a, b in self._segments():
            if exclude_cycle is not None and (self.he_cycle[h] == exclude_cycle or self.he_cycle[self.he_twin[h]] == exclude_cycle):
                continue
            r = piece_intersection(ray, Piece(a, (b[0] - a[0], b[1] - a[1]), 0, 1))
            if r is None:
                continue
            if not isinstance(r, ProperCrossing):
                if r.point == P(*p):
                    continue
                raise ConsistencyError(f"ray from {p} is not generic: {r}")
            if r.t1 == 0:
                continue
            if best_t is None or r.t1 < best_t:
                best_t, best = r.t1, (h, a, b)
        if best is None:
            return None
        h, a, b = best
        if orient(a, b, p) < 0:
            return h
        return self.he_twin[h]

    def locate(self, p) -> FaceRef:
        p = P(*p)
        if self.is_on_curve(p):
            raise OnBoundaryError(f"point {tuple(p)} lies on a curve")
        if not self.curveset.curves:
            return self.face_ref(0)
        if self.frame is not None:
            xmin, ymin, xmax, ymax = self.frame
            if not (xmin < p[0] < xmax and ymin < p[1] < ymax):
                return self.face_ref(self._locate_outside(p))
        h = self.shoot(p)
        if h is None:
            return self.face_ref(self._unbounded_face())
        return self.face_ref(self.he_face[h])

    def _unbounded_face(self) -> int:
        for i, f in enumerate(self.faces):
            if f.outer is None:
                return i
        raise ConsistencyError("no unbounded face")

    def _locate_outside(self, p) -> int:
        # rebuild with a frame that contains p, then map back through a true half-edge
        big = build(self.curveset, include=[p])
        h = big.shoot(p)
        f = big.he_face[h]
        key = None
        for c in big.face_cycles(f):
            for g in big.cycles[c]:
                if big.he_curve[g] is not None:
                    key = big.he_key(g)
                    break
            if key is not None:
                break
        if key is None:
            raise ConsistencyError("face without a curve edge")
        return self.he_face[self.he_by_key()[key]]

    def he_key(self, h: int) -> tuple:
        """Frame-independent identity of a curve half-edge: (curve, index of
        the edge along the curve, forward flag)."""
        return (self.he_curve[h], self._edge_rank[h], self.he_forward[h])

    def he_by_key(self) -> dict:
        if not hasattr(self, "_key_index"):
            self._key_index = {self.he_key(h): h for h in range(self.n_half_edges) if self.he_curve[h] is not None}
        return self._key_index

    # -- invariants ------------------------------------------------------------
    def connected_components(self) -> int:
        parent = list(range(len(self.vertices)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for h in range(self.n_half_edges):
            a, b = find(self.he_origin[h]), find(self.dest(h))
            if a != b:
                parent[a] = b
        return len({find(v) for v in range(len(self.vertices))})

    def check_invariants(self) -> list[str]:
        """Structural invariants; returns a list of failures (empty is good)."""
        bad = []
        n = self.n_half_edges
        for h in range(n):
            t = self.he_twin[h]
            if self.he_twin[t] != h or t == h:
                bad.append(f"twin of {h}")
            if self.he_prev[self.he_next[h]] != h:
                bad.append(f"next/prev of {h}")
            if self.he_origin[self.he_next[h]] != self.dest(h):
                bad.append(f"next of {h} does not start at its destination")
        V, E, F = len(self.vertices), n // 2, len(self.faces)
        C = self.connected_components() if V else 0
        if V - E + F != 1 + C:
            bad.append(f"Euler: V-E+F = {V - E + F}, expected {1 + C}")
        deg = [0] * V
        for h in range(n):
            deg[self.he_origin[h]] += 1
        for v in range(V):
            if deg[v] != len(self._out[v]):
                bad.append(f"degree of vertex {v}")
        total = sum(len(self.cycles[c]) for f in range(F) for c in self.face_cycles(f))
        if total != n:
            bad.append(f"face boundaries cover {total} half-edges, expected {n}")
        return bad

    # -- serialisation ------------------------------------------------------------
    def to_json(self) -> dict:
        V, E, F = self.true_counts()
        return {
            "counts": {"V": V, "E": E, "F": F},
            "frame": None if self.frame is None else [rat_json(c) for c in self.frame],
            "vertices": [
                {"id": i, "x": rat_json(p[0]), "y": rat_json(p[1]), "kind": k,
                 "artificial": k in ("exit", "corner")}
                for i, (p, k) in enumerate(zip(self.vertices, self.vertex_kind))
            ],
            "half_edges": [
                {"id": h, "origin": self.he_origin[h], "twin": self.he_twin[h], "next": self.he_next[h],
                 "face": self.he_face[h], "curve": self.he_curve[h], "forward": self.he_forward[h],
                 "artificial": self.he_curve[h] is None}
                for h in range(self.n_half_edges)
            ],
            "faces": [
                {"id": i, "unbounded": f.unbounded, "artificial": f.artificial,
                 "complexity": None if f.artificial else self.face_complexity(i)[0],
                 "components": [] if f.artificial else
                 [{"kind": c["kind"], "half_edges": c["half_edges"]} for c in self.components(i)]}
                for i, f in enumerate(self.faces)
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _curve_nodes(arr: Arrangement, cs: CurveSet, contacts, box):
    """Per curve: sorted list of (pos, point, kind) nodes including frame exits."""
    nodes = [[] for _ in cs.curves]
    for ci, k, t, cj, l, u, pt in contacts.crossings:
        nodes[ci].append(((k, t), pt, "crossing"))
        nodes[cj].append(((l, u), pt, "crossing"))
    for ci, c in enumerate(cs.curves):
        pcs = c.pieces
        if c.start is None:
            nodes[ci].append(((0, 0), c.vertices[0], "endpoint"))
        else:
            tau = _exit_param(c.vertices[0], c.start, box)
            nodes[ci].append(((0, -tau), pcs[0].at(-tau), "exit"))
        last = len(pcs) - 1
        if c.end is None:
            nodes[ci].append(((last, 1), c.vertices[-1], "endpoint"))
        else:
            tau = _exit_param(c.vertices[-1], c.end, box)
            nodes[ci].append(((last, tau), pcs[last].at(tau), "exit"))
        nodes[ci].sort(key=lambda n: n[0])
    return nodes


def _path_between(c, a, b) -> tuple:
    """Polyline of curve ``c`` from position ``a`` to position ``b`` (a < b)."""
    pcs = c.pieces
    (k1, t1), (k2, t2) = a, b
    pts = [P(*pcs[k1].at(t1))]
    for m in range(k1 + 1, k2 + 1):
        pts.append(pcs[m].base)
    end = P(*pcs[k2].at(t2))
    if pts[-1] != end:
        pts.append(end)
    return tuple(pts)


def build(cs: CurveSet, include=()) -> Arrangement:
    """Construct the arrangement of a curve set that passed validation.

    ``include`` lists extra points the frame must contain (used to locate
    points far outside the default frame).
    """
    arr = Arrangement(cs)
    contacts = all_contacts(cs.curves)
    if contacts.degenerate:
        kind, i, j, pt = contacts.degenerate[0]
        raise DegeneracyError(f"degenerate contact ({kind}) between {cs.curves[i].id} and "
                              f"{cs.curves[j].id}", (cs.curves[i].id, cs.curves[j].id), pt)
    has_rays = any(c.start is not None or c.end is not None for c in cs.curves)
    box = None
    if has_rays:
        pts = [pt for *_, pt in contacts.crossings]
        for c in cs.curves:
            pts.extend(c.vertices)
        pts.extend(P(*p) for p in include)
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        box = (min(xs) - 1, min(ys) - 1, max(xs) + 1, max(ys) + 1)
        arr.frame = box
    nodes = _curve_nodes(arr, cs, contacts, box) if cs.curves else []

    # vertices
    kinds: dict = {}
    for lst in nodes:
        for _, pt, kind in lst:
            kinds[pt] = kind
    if box is not None:
        xmin, ymin, xmax, ymax = box
        for corner in ((xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)):
            corner = P(*corner)
            if corner not in kinds:
                kinds[corner] = "corner"
    order = sorted(kinds)
    vid = {p: i for i, p in enumerate(order)}
    arr.vertices = order
    arr.vertex_kind = [kinds[p] for p in order]

    # edges: (u, v, path, curve, interval, rank-along-curve)
    edges = []
    for ci, lst in enumerate(nodes):
        c = cs.curves[ci]
        for r, (a, b) in enumerate(zip(lst, lst[1:])):
            edges.append((vid[a[1]], vid[b[1]], _path_between(c, a[0], b[0]), c.id, (a[0], b[0]), r))
    if box is not None:
        on_frame = [p for p, k in kinds.items() if k in ("exit", "corner")]
        on_frame.sort(key=lambda p: _frame_pos(p, box))
        for a, b in zip(on_frame, on_frame[1:] + on_frame[:1]):
            edges.append((vid[a], vid[b], (a, b), None, None, None))

    # half-edges
    rank: list = []
    for u, v, path, cid, interval, r in edges:
        h = len(arr.he_origin)
        arr.he_origin += [u, v]
        arr.he_twin += [h + 1, h]
        arr.he_curve += [cid, cid]
        arr.he_forward += [True, False]
        arr.he_path += [path, tuple(reversed(path))]
        if interval is None:
            arr.he_interval += [None, None]
        else:
            arr.he_interval += [interval, (interval[1], interval[0])]
        rank += [r, r]
    n = len(arr.he_origin)

    # deterministic half-edge ids: by origin, then counterclockwise direction
    def direction(h):
        path = arr.he_path[h]
        return (path[1][0] - path[0][0], path[1][1] - path[0][1])

    perm = sorted(range(n), key=lambda h: (arr.he_origin[h], _angle_key(direction(h))))
    newid = {old: i for i, old in enumerate(perm)}
    arr.he_origin = [arr.he_origin[o] for o in perm]
    arr.he_twin = [newid[arr.he_twin[o]] for o in perm]
    arr.he_curve = [arr.he_curve[o] for o in perm]
    arr.he_forward = [arr.he_forward[o] for o in perm]
    arr.he_path = [arr.he_path[o] for o in perm]
    arr.he_interval = [arr.he_interval[o] for o in perm]
    arr._edge_rank = [rank[o] for o in perm]

    out = [[] for _ in order]
    for h in range(n):
        out[arr.he_origin[h]].append(h)  # already counterclockwise
    arr._out = out
    slot = [0] * n
    for lst in out:
        for i, h in enumerate(lst):
            slot[h] = i
    for lst in out:
        for i in range(len(lst) - 1):
            if _angle_cmp(direction(lst[i]), direction(lst[i + 1])) == 0:
                raise ConsistencyError(f"overlapping edges at vertex {tuple(order[arr.he_origin[lst[i]]])}")

    # next: the outgoing half-edge just counterclockwise of the twin
    arr.he_next = [0] * n
    arr.he_prev = [0] * n
    for h in range(n):
        t = arr.he_twin[h]
        lst = out[arr.he_origin[t]]
        nxt = lst[(slot[t] + 1) % len(lst)]
        arr.he_next[h] = nxt
        arr.he_prev[nxt] = h

    _build_faces(arr)
    return arr


def _cycle_area2(arr: Arrangement, cyc) -> Fraction:
    total = 0
    for h in cyc:
        path = arr.he_path[h]
        for a, b in zip(path, path[1:]):
            total += a[0] * b[1] - a[1] * b[0]
    return total


def _build_faces(arr: Arrangement) -> None:
    n = arr.n_half_edges
    arr.he_cycle = [-1] * n
    for h in range(n):
        if arr.he_cycle[h] != -1:
            continue
        c = len(arr.cycles)
        cyc = []
        g = h
        while arr.he_cycle[g] == -1:
            arr.he_cycle[g] = c
            cyc.append(g)
            g = arr.he_next[g]
        arr.cycles.append(cyc)
    arr.cycle_area = [_cycle_area2(arr, cyc) for cyc in arr.cycles]

    # faces from clockwise (negative area) cycles
    face_of_cycle = [None] * len(arr.cycles)
    faces: list[Face] = []
    for c, area in enumerate(arr.cycle_area):
        if area < 0:
            face_of_cycle[c] = len(faces)
            faces.append(Face(outer=c))
    unb = None
    holes = [c for c, area in enumerate(arr.cycle_area) if area >= 0]
    # resolve holes, leftmost first so enclosing holes are resolved earlier
    leftmost = {c: min(p for h in arr.cycles[c] for p in arr.he_path[h]) for c in holes}
    hit_cycle = {}
    for c in sorted(holes, key=lambda c: leftmost[c]):
        h = arr.shoot(leftmost[c], exclude_cycle=c)
        hit_cycle[c] = None if h is None else arr.he_cycle[h]
    for c in sorted(holes, key=lambda c: leftmost[c]):
        target = hit_cycle[c]
        if target is None:
            if unb is None:
                unb = len(faces)
                faces.append(Face(outer=None, unbounded=True))
            f = unb
        else:
            f = face_of_cycle[target]
            if f is None:
                raise ConsistencyError("hole resolved before its container")
        face_of_cycle[c] = f
        faces[f].holes.append(c)
    if not faces:
        faces.append(Face(outer=None, unbounded=True))
    arr.he_face = [face_of_cycle[arr.he_cycle[h]] for h in range(n)]

    if arr.frame is not None:
        for face in faces:
            if face.outer is None:
                face.artificial = True
            else:
                face.unbounded = any(arr.he_curve[h] is None for h in arr.cycles[face.outer])

    # deterministic face ids: by the smallest (origin, slot) half-edge on the face
    def key(i):
        hs = [h for c in ([faces[i].outer] if faces[i].outer is not None else []) + faces[i].holes
              for h in arr.cycles[c]]
        return min(hs) if hs else -1

    order = sorted(range(len(faces)), key=key)
    remap = {old: new for new, old in enumerate(order)}
    arr.faces = [faces[o] for o in order]
    arr.he_face = [remap[f] for f in arr.he_face]
