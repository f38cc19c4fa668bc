"""Command-line interface: ``polyoverlap <command> ...``.

Every command writes JSON lines to standard output.  Exit status is 0 on
success, 2 for invalid input and 3 when a well-formed input violates a
precondition (for example a slice level above the maximum overlap).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from .approx import ApproxConfig
from .decompose import count_notches, decompose
from .errors import NoSuchSliceError, OverlapError, PreconditionError, ValidationError
from .geometry import ConvexPolygon, SimplePolygon
from .io import SvgCanvas, format_polygon, format_record, parse_polygon, polygon_to_dict, read_polygon
from .matcher import MatchConfig, PairSum, build_query_structure, match_polygons
from .oracle import grid_max_overlap
from .pairapprox import approx_convex_pair
from .slices import compute_slice

EXIT_OK, EXIT_VALIDATION, EXIT_PRECONDITION = 0, 2, 3


def _load(path) -> SimplePolygon:
    try:
        return read_polygon(path)
    except OSError as err:
        raise ValidationError(f"cannot read {path}: {err.strerror}") from None


def _convex(P: SimplePolygon, name: str) -> ConvexPolygon:
    if count_notches(P):
        raise ValidationError(f"{name} must be convex")
    return ConvexPolygon(P.ring)


def _approx_config(args) -> ApproxConfig:
    return ApproxConfig(c3=args.c3, c_r=args.cR, c4=args.c4, lp_seed=args.lp_seed)


def _match_config(args) -> MatchConfig:
    return MatchConfig(approx=_approx_config(args), use_slices=args.slices, parallel=args.parallel,
                       linear_scan=args.linear_scan, certified_stop=args.certified_stop)


def _emit(record: dict, out) -> None:
    out.write(format_record(record))


def cmd_decompose(args, out):
    P = _load(args.input)
    dec = decompose(P)
    result = SimplePolygon(P.ring, dec.parts)
    if args.out:
        Path(args.out).write_text(format_polygon(result))
        _emit({"command": "decompose", "parts": len(dec), "notches": dec.notches, "out": args.out}, out)
    else:
        out.write(format_polygon(result))
    if args.svg:
        canvas = SvgCanvas()
        canvas.parts(dec.parts)
        canvas.polygon(P.ring, fill="none", stroke="#000", opacity=1.0)
        canvas.save(args.svg)


def _context_record(P, Q, args) -> dict:
    return {
        "P": polygon_to_dict(P), "Q": polygon_to_dict(Q), "eps": args.eps,
        "config": {"c3": args.c3, "cR": args.cR, "c4": args.c4, "lp_seed": args.lp_seed,
                   "slices": args.slices},
    }


def cmd_match(args, out):
    P, Q = _load(args.P), _load(args.Q)
    res = match_polygons(P, Q, args.eps, _match_config(args))
    record = {
        "command": "match",
        "translation": [res.translation.x, res.translation.y],
        "value": res.value,
        "epsilon": res.epsilon,
        "pair_budget": res.pair_budget,
        "face_count": res.face_count,
        "parts_p": res.stats["parts_p"],
        "parts_q": res.stats["parts_q"],
        "branches": res.stats["branches"],
        "leaves": res.stats["leaves_built"],
        "stop": res.stats["stop"],
    }
    if args.timings:
        record["pair_seconds"] = res.stats["pair_seconds"]
        record["search_seconds"] = res.stats["search_seconds"]
    _emit(record, out)
    if args.context:
        Path(args.context).write_text(json.dumps(_context_record(P, Q, args)) + "\n")
    if args.svg:
        canvas = SvgCanvas()
        canvas.polygon(P.ring, fill="#8ecae6")
        canvas.polygon(Q.ring + np.asarray(res.translation), fill="#ffb703")
        canvas.save(args.svg)


def cmd_oracle(args, out):
    P, Q = _load(args.P), _load(args.Q)
    rep = grid_max_overlap(P, Q, base=args.base, levels=args.levels, pitch=args.pitch,
                           workers=args.workers)
    _emit({
        "command": "oracle",
        "best_translation": [rep.best_translation.x, rep.best_translation.y],
        "best_value": rep.best_value,
        "grid_pitch": rep.grid_pitch,
        "refinement_levels": rep.refinement_levels,
        "value_slack_bound": rep.value_slack_bound,
    }, out)


def cmd_slice(args, out):
    X = _convex(_load(args.X), "X")
    Y = _convex(_load(args.Y), "Y")
    sl = compute_slice(X, Y, args.alpha)
    ring = sl.boundary.vertices
    if args.out:
        Path(args.out).write_text(format_polygon(sl.boundary))
    _emit({"command": "slice", "alpha": args.alpha, "center": [sl.center.x, sl.center.y],
           "vertices": len(ring), "ring": ring.tolist()}, out)
    if args.svg:
        canvas = SvgCanvas()
        canvas.polygon(ring, fill="#90be6d")
        canvas.point(sl.center)
        canvas.save(args.svg)


def cmd_pair_approx(args, out):
    X = _convex(_load(args.X), "X")
    Y = _convex(_load(args.Y), "Y")
    psi = approx_convex_pair(X, Y, args.eps, _approx_config(args), use_slices=args.slices)
    polys = psi.event_polygons
    _emit({"command": "pair-approx", "branch": psi.branch, "eps": args.eps,
           "event_polygons": len(polys)}, out)
    for kind, poly in zip(psi.polygon_kinds, polys):
        _emit({"kind": kind, "ring": poly.vertices.tolist()}, out)
    if args.svg:
        canvas = SvgCanvas()
        for poly in polys:
            canvas.polygon(poly.vertices, fill="none", opacity=1.0)
        canvas.save(args.svg)


def _load_context(path):
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ValidationError(f"cannot read {path}: {err.strerror}") from None
    try:
        data = json.loads(text)
        P = parse_polygon(json.dumps(data["P"]))
        Q = parse_polygon(json.dumps(data["Q"]))
        eps = data["eps"]
        cfg = data["config"]
        approx = ApproxConfig(c3=cfg["c3"], c_r=cfg["cR"], c4=cfg["c4"], lp_seed=cfg["lp_seed"])
        slices = bool(cfg["slices"])
    except (json.JSONDecodeError, KeyError, TypeError) as err:
        raise ValidationError(f"malformed match context {path}: {err}") from None
    return P, Q, eps, approx, slices


def cmd_query(args, out):
    P, Q, eps, approx, slices = _load_context(args.context)
    config = MatchConfig(approx=approx, use_slices=slices, linear_scan=args.linear_scan)
    qs = build_query_structure(PairSum(P, Q, eps, config), config)
    for x, y in args.at:
        _emit({"command": "query", "t": [x, y], "value": qs((x, y))}, out)


# Python < 3.13 reads "-4.9e-09" as an option flag; accept signed numbers in
# scientific notation as values, like newer argparse versions do.
_SIGNED_NUMBER = re.compile(r"^-(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?$")


def _add_constants(p):
    d = ApproxConfig()
    p.add_argument("--c3", type=float, default=d.c3, help="rectangle shrink factor (default %(default)s)")
    p.add_argument("--cR", type=float, default=d.c_r, help="normalising window scale (default %(default)s)")
    p.add_argument("--c4", type=float, default=d.c4, help="resolution constant, N = ceil(c4/eps) (default %(default)s)")
    p.add_argument("--lp-seed", type=int, default=d.lp_seed, help="seed of the randomised LP solver")
    p.add_argument("--slices", action="store_true", help="use nested slices instead of lattice counts")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyoverlap",
                                     description="Maximum-overlap translation of simple polygons.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="convex decomposition of a polygon file")
    p.add_argument("input")
    p.add_argument("--out", help="write the polygon with its parts here instead of stdout")
    p.add_argument("--svg", help="render the parts")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("match", help="translation maximising the overlap of Q placed over P")
    p.add_argument("P")
    p.add_argument("Q")
    p.add_argument("--eps", type=float, default=0.25)
    _add_constants(p)
    p.add_argument("--linear-scan", action="store_true", help="locate faces by scanning all edges")
    p.add_argument("--parallel", action="store_true", help="build part-pair approximations in threads")
    p.add_argument("--certified-stop", action="store_true",
                   help="stop once the (1 - eps) guarantee is certified")
    p.add_argument("--timings", action="store_true", help="add wall-clock timings to the record")
    p.add_argument("--context", help="save the match context for later queries")
    p.add_argument("--svg", help="render P and Q at the returned translation")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("oracle", help="grid-search reference maximum")
    p.add_argument("P")
    p.add_argument("Q")
    p.add_argument("--base", type=int, default=201, help="grid points per axis on the base level")
    p.add_argument("--levels", type=int, default=3, help="refinement levels")
    p.add_argument("--pitch", type=float, help="base grid spacing (overrides --base)")
    p.add_argument("--workers", type=int, help="threads for grid evaluation")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("slice", help="convex superlevel set of the overlap of two convex polygons")
    p.add_argument("X")
    p.add_argument("Y")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--out", help="write the slice ring as a polygon file")
    p.add_argument("--svg", help="render the slice")
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("pair-approx", help="event polygons of a convex pair approximation")
    p.add_argument("X")
    p.add_argument("Y")
    p.add_argument("--eps", type=float, default=0.25)
    _add_constants(p)
    p.add_argument("--svg", help="render the event polygons")
    p.set_defaults(func=cmd_pair_approx)

    p = sub.add_parser("query", help="evaluate the approximation of a saved match context")
    p._negative_number_matcher = _SIGNED_NUMBER
    p.add_argument("context")
    p.add_argument("--at", nargs=2, type=float, action="append", required=True, metavar=("X", "Y"))
    p.add_argument("--linear-scan", action="store_true")
    p.set_defaults(func=cmd_query)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        args.func(args, out)
    except NoSuchSliceError as err:
        print(f"error: no such slice: {err}", file=sys.stderr)
        return EXIT_PRECONDITION
    except PreconditionError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ValidationError, OverlapError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
