"""Command-line entry point ``cremona``.

Exit status: 0 when every check passes, 1 when a check fails, 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from cremona import birmap, families, padic, spacefill
from cremona.errors import CremonaError
from cremona.parse import parse_map, parse_poly
from cremona.poly import RR
from cremona.report import dumps, envelope
from cremona.scenarios import REGISTRY, run_scenario
from cremona.wspace import analyze_sequence, sequence_limit

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _map(text: str, field: str) -> birmap.BirationalMap:
    lit = parse_map(text, field)
    t = lit.tuple
    if field == "QQ":
        return birmap.reduce(t)[0]
    return birmap.BirationalMap(t)


def _point(text: str, n: int, field: str) -> list:
    parts = [s.strip() for s in text.strip().strip("[]").replace(":", ",").split(",")]
    if len(parts) != n:
        raise UsageError(f"point needs {n} coordinates, got {len(parts)}")
    out = []
    for s in parts:
        c = parse_poly(s, 1, field)
        if c.degree != 0:
            raise UsageError(f"coordinate {s!r} is not a constant")
        out.append(c.coefficient((0,)))
    return out


def _emit(args, payload: dict) -> None:
    text = dumps(payload)
    if args.json == "-":
        sys.stdout.write(text)
    elif args.json:
        with open(args.json, "w") as fh:
            fh.write(text)


def _say(args, line: str) -> None:
    if args.json != "-":
        print(line)


# ---------------------------------------------------------------------------


def cmd_compose(args) -> int:
    f, g = _map(args.f, args.field), _map(args.g, args.field)
    red, cof = birmap.compose_with_cofactor(f, g)
    _say(args, str(red))
    if cof is not None:
        _say(args, f"cofactor: {cof}")
    _emit(args, envelope("compose", {"field": args.field, "f": str(f), "g": str(g), "result": str(red),
                                     "degree": red.degree, "cofactor": None if cof is None else str(cof)}))
    return EXIT_OK


def cmd_order(args) -> int:
    f = _map(args.f, args.field)
    k = birmap.order(f, args.max)
    _say(args, f"order: {k if k is not None else f'> {args.max} or infinite'}")
    _emit(args, envelope("order", {"field": args.field, "map": str(f), "max": args.max, "order": k}))
    return EXIT_OK


def cmd_eval(args) -> int:
    f = _map(args.f, args.field)
    pt = _point(args.point, f.n + 1, args.field)
    img = birmap.eval_point(f, pt)
    _say(args, "indeterminate" if img is None else "[" + " : ".join(str(c) for c in img) + "]")
    _emit(args, envelope("eval", {"field": args.field, "map": str(f), "point": pt,
                                  "image": None if img is None else list(img)}))
    return EXIT_OK


_FAMILIES = {
    "pointwise": lambda m, s: families.pointwise_member(m, RR),
    "oscillating": lambda m, s: spacefill.rho_oscillating(1.0 / m),
    "factorial": lambda m, s: families.factorial_member(m),
}


def cmd_limit(args) -> int:
    if args.maps:
        seq = [parse_map(t, args.field).tuple for t in args.maps]
        params = [float(x) for x in args.params.split(",")] if args.params else None
    else:
        ms = list(range(args.m_min, args.m_max + 1))
        if args.family == "nonlift":
            seq, params = spacefill.nonlift_sequence(args.s, args.m_max)
        elif args.family == "factorial":
            rep = analyze_sequence([_FAMILIES["factorial"](m, None) for m in ms])
            return _limit_out(args, rep)
        else:
            seq = [_FAMILIES[args.family](m, args.s) for m in ms]
            # the oscillating lifts wander inside the identity fiber; no extrapolation
            params = [1.0 / m for m in ms] if args.family == "pointwise" else None
    return _limit_out(args, sequence_limit(seq, params=params))


def _limit_out(args, rep) -> int:
    _say(args, f"verdict: {rep.verdict}")
    if rep.limit is not None:
        _say(args, f"limit: {rep.limit.tuple}")
    _emit(args, envelope("limit", rep.to_dict()))
    return EXIT_OK


def cmd_certify_inverse(args) -> int:
    f, g = _map(args.f, "QQ"), _map(args.g, "QQ")
    ok = birmap.certify_inverse(f, g)
    _say(args, "certified" if ok else "not inverse")
    _emit(args, envelope("certify-inverse", {"f": str(f), "g": str(g), "certified": ok}))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_padic_gate(args) -> int:
    f = _map(args.f, "QQ")
    tate = padic.chart_normalize(f, None, args.p, args.N, args.T)
    try:
        verdict = padic.identity_gate_padic(tate, args.D)
    except AssertionError as exc:
        _say(args, f"gate inconsistency: {exc}")
        return EXIT_FAIL
    _say(args, f"{type(verdict).__name__}: norm {verdict.norm}")
    _emit(args, envelope("padic-gate", {"chart": tate.to_dict(), "verdict": verdict.to_dict()}))
    return EXIT_OK


def cmd_cloud(args) -> int:
    cloud = spacefill.indeterminacy_cloud(args.eps, args.N, args.depth, args.seed)
    _say(args, f"covering radius: {cloud.covering_radius:.17g}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["re0", "im0", "re1", "im1", "re2", "im2"])
            for q in cloud.points:
                w.writerow([f"{v:.17g}" for z in q for v in (z.real, z.imag)])
    _emit(args, envelope("cloud", cloud.to_dict()))
    return EXIT_OK


def _scenario_params(pairs) -> dict:
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise UsageError(f"parameter {item!r} is not key=value")
        k, v = item.split("=", 1)
        try:
            out[k] = json.loads(v)
        except json.JSONDecodeError:
            out[k] = v
    return out


def cmd_scenario(args) -> int:
    if args.name == "list":
        for name, sc in REGISTRY.items():
            print(f"{name}: {sc.description}")
        return EXIT_OK
    rep = run_scenario(args.name, _scenario_params(args.param), args.seed)
    for a in rep["assertions"]:
        _say(args, f"{'PASS' if a['passed'] else 'FAIL'}  {a['name']}: {a['statement']}")
    _emit(args, rep)
    return EXIT_OK if rep["passed"] else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="QQ", help="QQ | RR | CC | Qp:<p>:<prec>")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")

    ap = argparse.ArgumentParser(prog="cremona", description="Computations with plane Cremona maps.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("compose", parents=[common], help="reduced composite f o g")
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("order", parents=[common], help="smallest k <= max with f^k = id")
    p.add_argument("f")
    p.add_argument("--max", type=int, default=12)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("eval", parents=[common], help="image of a point")
    p.add_argument("f")
    p.add_argument("point", help="coordinates, e.g. '0,1,1' or '[1/2:0:1]'")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("limit", parents=[common], help="limit of a sequence in W_d")
    p.add_argument("maps", nargs="*", help="map literals (at least three)")
    p.add_argument("--params", help="comma-separated parameter per map, tending to 0")
    p.add_argument("--family", choices=["pointwise", "oscillating", "factorial", "nonlift"], default="pointwise")
    p.add_argument("--m-min", type=int, default=10)
    p.add_argument("--m-max", type=int, default=40)
    p.add_argument("--s", type=float, default=0.0, help="cos target for the nonlift family")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("certify-inverse", parents=[common], help="check g = f^-1 exactly")
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(func=cmd_certify_inverse)

    p = sub.add_parser("padic-gate", parents=[common], help="p-adic identity gate")
    p.add_argument("f")
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--N", type=int, default=12)
    p.add_argument("--T", type=int, default=16)
    p.add_argument("--D", type=int, default=6)
    p.set_defaults(func=cmd_padic_gate)

    p = sub.add_parser("cloud", parents=[common], help="indeterminacy cloud of the oscillating family")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--N", type=int, default=1000)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--csv", metavar="PATH")
    p.set_defaults(func=cmd_cloud)

    p = sub.add_parser("scenario", parents=[common], help="run a named scenario ('list' to enumerate)")
    p.add_argument("name")
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.set_defaults(func=cmd_scenario)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (CremonaError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
