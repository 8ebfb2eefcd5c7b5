"""Command-line front end.

Exit codes: 0 success, 2 bad input or failed validation, 3 a verified claim
failed, 4 a resource budget ran out.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import ds_core
from .arrangement import OnBoundaryError, build
from .envelope import EnvelopeError, lower_envelope
from .face_analysis import check_structure, face_sequences, side_entries, cut_circular, verify_theorem4
from .generators import KINDS, GenerationError, generators
from .geometry import CurveSet, P, q, validate_general_position
from .tunnel import TunnelError, complexity_of_bounded_face

EXIT_OK, EXIT_INPUT, EXIT_CLAIM, EXIT_BUDGET = 0, 2, 3, 4


class InputError(Exception):
    pass


def _emit(obj, out=None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=1) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _point(text: str):
    try:
        x, y = text.split(",")
        return P(q(x.strip()), q(y.strip()))
    except Exception as exc:  # noqa: BLE001
        raise InputError(f"bad point {text!r}; expected x,y with integers or fractions") from exc


def _load(path: str, s: int | None = None, check: bool = True) -> CurveSet:
    try:
        cs = CurveSet.load(path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read curve set {path}: {exc}") from exc
    if s is not None:
        cs = CurveSet(cs.curves, s, cs.klass)
    if check:
        bad = validate_general_position(cs)
        if bad:
            raise InputError(json.dumps({"violations": [v.to_json() for v in bad]}, sort_keys=True))
    return cs


def _face_of(arr, args) -> int:
    if getattr(args, "face", None) is not None:
        if not 0 <= args.face < len(arr.faces) or arr.faces[args.face].artificial:
            raise InputError(f"no face {args.face}")
        return args.face
    if args.witness is None:
        raise InputError("give --witness x,y or --face id")
    try:
        return arr.locate(_point(args.witness)).id
    except OnBoundaryError as exc:
        raise InputError(str(exc)) from exc


# -- commands ---------------------------------------------------------------

def cmd_validate(args) -> int:
    cs = _load(args.file, args.s, check=False)
    bad = validate_general_position(cs)
    _emit({"valid": not bad, "class": f"G{cs.klass}", "s": cs.s, "curves": len(cs.curves),
           "violations": [v.to_json() for v in bad]}, args.out)
    return EXIT_OK if not bad else EXIT_INPUT


def cmd_arrange(args) -> int:
    arr = build(_load(args.file, args.s))
    V, E, F = arr.true_counts()
    body = {"V": V, "E": E, "F": F, "invariant_failures": arr.check_invariants()}
    if args.full:
        body["arrangement"] = arr.to_json()
    _emit(body, args.out)
    return EXIT_OK


def cmd_locate(args) -> int:
    arr = build(_load(args.file, args.s))
    try:
        ref = arr.locate(_point(args.witness))
    except OnBoundaryError as exc:
        raise InputError(str(exc)) from exc
    _emit({"face": ref.id, "unbounded": ref.is_unbounded, "components": ref.component_count}, args.out)
    return EXIT_OK


def cmd_face(args) -> int:
    arr = build(_load(args.file, args.s))
    f = _face_of(arr, args)
    total, per = arr.face_complexity(f)
    _emit({"face": f, "unbounded": arr.faces[f].unbounded, "complexity": total, "per_component": per,
           "components": [{"kind": c["kind"], "half_edges": c["half_edges"]} for c in arr.components(f)]},
          args.out)
    return EXIT_OK


def cmd_sequence(args) -> int:
    arr = build(_load(args.file, args.s))
    f = _face_of(arr, args)
    out = []
    for seq in face_sequences(arr, f):
        item = seq.to_json()
        if seq.klass == 1:
            item["left"] = [str(e.symbol) for e in side_entries(seq, "-")]
            item["right"] = [str(e.symbol) for e in side_entries(seq, "+")]
        if seq.klass == 2 and seq.kind == "circular":
            item["cut"] = [str(e.symbol) for e in cut_circular(seq)]
        item["symbols"] = [str(x) for x in seq.symbols]
        out.append(item)
    _emit({"face": f, "sequences": out}, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    arr = build(_load(args.file, args.s))
    if args.witness is not None or args.face is not None:
        faces = [_face_of(arr, args)]
    else:
        faces = arr.unbounded_faces()
    reports, ok = [], True
    for f in faces:
        if arr.faces[f].unbounded:
            rep = verify_theorem4(arr, f)
            struct = check_structure(arr, f)
            ok = ok and rep.passed and struct.passed
            reports.append({"orders": rep.to_json(), "structure": struct.to_json()})
        else:
            try:
                rep = complexity_of_bounded_face(arr, f)
            except TunnelError as exc:
                reports.append({"face": f, "tunnel_error": str(exc)})
                ok = False
                continue
            ok = ok and rep.passed
            reports.append({"bounded": rep.to_json()})
    _emit({"passed": ok, "faces": reports}, args.out)
    return EXIT_OK if ok else EXIT_CLAIM


def cmd_tunnel(args) -> int:
    arr = build(_load(args.file, args.s))
    if args.witness is None:
        raise InputError("tunnel needs --witness x,y inside a bounded face")
    f = _face_of(arr, args)
    if arr.faces[f].unbounded:
        _emit({"face": f, "unbounded": True, "note": "face already unbounded; nothing to do"}, args.report)
        return EXIT_OK
    try:
        rep = complexity_of_bounded_face(arr, f, _point(args.witness))
    except TunnelError as exc:
        _emit({"face": f, "tunnel_error": str(exc)}, args.report)
        return EXIT_CLAIM
    if args.out:
        rep.transform.curveset.dump(args.out)
    _emit(rep.to_json(), args.report)
    return EXIT_OK if rep.passed else EXIT_CLAIM


def cmd_lambda(args) -> int:
    try:
        value = ds_core.lambda_exact(args.n, args.s_order, budget=args.budget_nodes)
    except ds_core.BudgetExceeded as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_BUDGET
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    print(value)
    return EXIT_OK


def cmd_envelope(args) -> int:
    cs = _load(args.file, args.s)
    try:
        env = lower_envelope(cs)
    except EnvelopeError as exc:
        raise InputError(str(exc)) from exc
    _emit(env.to_json(), args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        cs = generators(args.kind, args.n, args.seed_pos if args.seed_pos is not None else args.seed, args.s)
    except GenerationError as exc:
        raise InputError(str(exc)) from exc
    if args.out:
        cs.dump(args.out)
    else:
        sys.stdout.write(cs.dumps() + "\n")
    return EXIT_OK


def cmd_render(args) -> int:
    from .render import render

    cs = _load(args.file, args.s)
    if not args.out:
        raise InputError("render needs --out FILE")
    arr, face, w = None, None, None
    if args.witness is not None:
        w = _point(args.witness)
        arr = build(cs)
        face = _face_of(arr, args)
    overlay = _load(args.overlay) if args.overlay else None
    out = args.out
    if args.format and "." not in out.rsplit("/", 1)[-1]:
        out = f"{out}.{args.format}"
    render(cs, out, arr=arr, face=face, overlay=overlay, witness=w)
    return EXIT_OK


def cmd_rays(args) -> int:
    from .experiments import rays_chart, rays_linearity

    try:
        sizes = [int(x) for x in args.sizes.split(",")]
    except ValueError as exc:
        raise InputError(f"bad --sizes {args.sizes!r}") from exc
    rows = rays_linearity(sizes, range(args.seed, args.seed + args.seeds))
    if args.chart:
        rays_chart(rows, args.chart)
    _emit({"rows": [r.to_json() for r in rows]}, args.out)
    return EXIT_OK


def parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="singleface", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_file=True):
        if needs_file:
            p.add_argument("file")
        p.add_argument("--s", type=int, default=None, help="override the crossing bound s")
        p.add_argument("--out", "-o", default=None)
        p.add_argument("--format", choices=("json", "svg", "png", "pdf"), default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget-nodes", type=int, default=5_000_000)
        p.add_argument("--witness", default=None, help="point x,y (fractions allowed)")
        p.add_argument("--face", type=int, default=None)
        return p

    common(sub.add_parser("validate")).set_defaults(func=cmd_validate)
    p = common(sub.add_parser("arrange"))
    p.add_argument("--full", action="store_true", help="include the half-edge structure")
    p.set_defaults(func=cmd_arrange)
    common(sub.add_parser("locate")).set_defaults(func=cmd_locate)
    common(sub.add_parser("face")).set_defaults(func=cmd_face)
    common(sub.add_parser("sequence")).set_defaults(func=cmd_sequence)
    common(sub.add_parser("verify")).set_defaults(func=cmd_verify)
    p = common(sub.add_parser("tunnel"))
    p.add_argument("--report", default=None, help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_tunnel)
    p = common(sub.add_parser("lambda"), needs_file=False)
    p.add_argument("n", type=int)
    p.add_argument("s_order", type=int, metavar="s")
    p.set_defaults(func=cmd_lambda)
    common(sub.add_parser("envelope")).set_defaults(func=cmd_envelope)
    p = common(sub.add_parser("gen"), needs_file=False)
    p.add_argument("kind", choices=sorted(KINDS))
    p.add_argument("n", type=int)
    p.add_argument("seed_pos", type=int, nargs="?", default=None, metavar="seed")
    p.set_defaults(func=cmd_gen)
    p = common(sub.add_parser("render"))
    p.add_argument("--overlay", default=None, help="second curve set drawn on top")
    p.set_defaults(func=cmd_render)
    p = common(sub.add_parser("rays", help="unbounded-face growth for random rays"), needs_file=False)
    p.add_argument("--sizes", default="10,20,40,80,160")
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--chart", default=None, help="write a line chart (svg/png/pdf) here")
    p.set_defaults(func=cmd_rays)
    return ap


def main(argv=None) -> int:
    args = parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
