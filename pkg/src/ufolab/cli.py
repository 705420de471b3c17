"""Command-line front end: JSON in, a deterministic JSON report out.

Exit codes: 0 accept/success, 1 semantic reject, 2 input or usage error,
3 vertex budget exceeded. The UFOLAB_BUDGET_VERTICES environment variable
caps ball sizes (default 5e6).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import BudgetError, InputError, MarginError, RejectionError
from .graphs import NOT_FOUND, ends_lower_bound, to_dot
from .groups import FreeGroup
from .mirror import (ALLOWED, Pattern, build_matching, enumerate_patterns,
                     is_coherent, is_forbidden, is_matched, pattern_from_json,
                     symbol_code)
from .qi import qi_check_on_ball, transfer_ufo
from .serialize import (GraphContext, dump_ufo, load_graph, load_json_file,
                        load_qi_map, load_ufo, parse_constants, parse_params)
from .ufo import (Ufo, UfoParams, amenable_ufo, lift_ufo, multiended_ufo,
                  pentagon_ufo, verify_ufo, zd_ufo)

EXIT_ACCEPT = 0
EXIT_REJECT = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _emit(args, command, provenance, result, exit_code):
    report = {"tool": "ufolab", "version": __version__, "command": command,
              "provenance": provenance, "result": result}
    indent = getattr(args, "json_indent", None)
    print(json.dumps(report, indent=indent, sort_keys=True))
    return exit_code


def _write_dot(args, ctx: GraphContext, ufo: Ufo | None):
    if getattr(args, "dot", None):
        u = ufo.u if ufo else ()
        f = ufo.f if ufo else ()
        o = ufo.o if ufo else ()
        with open(args.dot, "w") as fh:
            fh.write(to_dot(ctx.ball, u, f, o))


def cmd_verify_ufo(args):
    ctx = load_graph(load_json_file(args.graph))
    ufo_spec = load_json_file(args.ufo)
    ufo, params = load_ufo(ufo_spec, ctx)
    if args.params:
        params = parse_params(args.params)
    if params is None:
        raise InputError("no params: give them in the ufo JSON or via --params")
    report = verify_ufo(ctx.ball, ufo, params)
    _write_dot(args, ctx, ufo)
    provenance = {"graph": args.graph, "ufo": args.ufo,
                  "params": params.to_json(), "ball_size": len(ctx.ball)}
    code = EXIT_ACCEPT if report.accept else EXIT_REJECT
    return _emit(args, "verify-ufo", provenance, report.to_json(ctx.encode), code)


def _family_zd(args):
    from .graphs import CayleyOracle, build_ball
    from .groups import FreeAbelian
    ufo, params = zd_ufo(args.d, args.m, args.r)
    oracle = CayleyOracle(FreeAbelian(args.d))
    ball = build_ball(oracle, ufo.u, max(params.k, params.r))
    ctx = GraphContext(kind="cayley", oracle=oracle, ball=ball, spec={})
    return ufo, params, ctx


def _family_pentagon(args):
    from .graphs import PentagonOracle, build_ball
    ufo, params = pentagon_ufo(args.m, args.r)
    oracle = PentagonOracle()
    ball = build_ball(oracle, ufo.u, max(params.k, params.r))
    ctx = GraphContext(kind="pentagon", oracle=oracle, ball=ball, spec={})
    return ufo, params, ctx


def _family_amenable(args):
    ctx = load_graph(load_json_file(args.graph))
    folner = [ctx.decode(v) for v in load_json_file(args.folner)]
    ufo, params = amenable_ufo(ctx.ball, folner, args.m)
    return ufo, params, ctx


def _family_multiended(args):
    ctx = load_graph(load_json_file(args.graph))
    cut = [ctx.decode(v) for v in load_json_file(args.cut)]
    ufo, params = multiended_ufo(ctx.ball, cut, args.m)
    return ufo, params, ctx


def _family_lift(args):
    # desk-scale preset: G = Z x F2, H = the Z factor
    from .graphs import CayleyOracle, product_factor_normalizer
    from .groups import DirectProduct, FreeAbelian
    from .ufo import interval_folner
    if args.preset != "zxf2":
        raise InputError("lift family supports --preset zxf2")
    group = DirectProduct([FreeAbelian(1), FreeGroup(2)])
    normalize = product_factor_normalizer(0)
    provider = interval_folner(group, 0)
    ms = args.ms
    cosets_u = [normalize(group.evaluate("a" * (i + 1))) for i in range(ms)]
    cosets_o = [normalize(group.evaluate("b" * (i + 1))) for i in range(ms)]
    schreier = Ufo(cosets_u, [normalize(group.identity)], cosets_o)
    params = UfoParams(ms, args.kappa, args.r)
    lifted, lifted_params, report, ball = lift_ufo(
        group, normalize, provider, schreier, params)
    ctx = GraphContext(kind="cayley", oracle=CayleyOracle(group), ball=ball,
                       spec={})
    return lifted, lifted_params, ctx


def cmd_make_ufo(args):
    makers = {"zd": _family_zd, "pentagon": _family_pentagon,
              "amenable": _family_amenable, "multiended": _family_multiended,
              "lift": _family_lift}
    if args.family not in makers:
        raise InputError(f"unknown family {args.family!r}")
    ufo, params, ctx = makers[args.family](args)
    report = verify_ufo(ctx.ball, ufo, params)
    payload = dump_ufo(ufo, params, ctx)
    if args.emit:
        with open(args.emit, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    _write_dot(args, ctx, ufo)
    provenance = {"family": args.family, "ball_size": len(ctx.ball)}
    result = {"ufo": payload, "report": report.to_json(ctx.encode)}
    code = EXIT_ACCEPT if report.accept else EXIT_REJECT
    return _emit(args, "make-ufo", provenance, result, code)


def cmd_transfer_ufo(args):
    ctx_g = load_graph(load_json_file(args.g))
    ctx_h = load_graph(load_json_file(args.g2))
    mapping, constants = load_qi_map(load_json_file(args.map), ctx_g, ctx_h)
    if args.constants:
        constants = parse_constants(args.constants)
    if constants is None:
        raise InputError("no constants: give them in the map JSON or --constants")
    ufo_spec = load_json_file(args.ufo)
    ufo, params = load_ufo(ufo_spec, ctx_g)
    if args.params:
        params = parse_params(args.params)
    if params is None:
        raise InputError("no params for the source UFO")
    result = transfer_ufo(ctx_g.ball, ctx_h.ball, mapping, constants, ufo,
                          params)
    _write_dot(args, ctx_h, result.ufo)
    provenance = {"g": args.g, "g2": args.g2, "map": args.map,
                  "ufo": args.ufo, "constants": constants.to_json(),
                  "params": params.to_json()}
    ok = (result.report.cond2 and result.report.cond3 and result.report.exact
          and result.separation_ok and result.size_bound_ok)
    return _emit(args, "transfer-ufo", provenance, result.to_json(ctx_h.encode),
                 EXIT_ACCEPT if ok else EXIT_REJECT)


def cmd_qi_check(args):
    ctx_g = load_graph(load_json_file(args.g))
    ctx_h = load_graph(load_json_file(args.g2))
    mapping, constants = load_qi_map(load_json_file(args.map), ctx_g, ctx_h)
    if args.constants:
        constants = parse_constants(args.constants)
    if constants is None:
        raise InputError("no constants: give them in the map JSON or --constants")
    result = qi_check_on_ball(ctx_g.ball, ctx_h.ball, mapping, constants,
                              max_sources=args.max_sources)
    provenance = {"g": args.g, "g2": args.g2, "map": args.map,
                  "constants": constants.to_json()}
    return _emit(args, "qi-check", provenance, result.to_json(ctx_h.encode),
                 EXIT_ACCEPT if result.ok else EXIT_REJECT)


def cmd_mirror_check(args):
    pattern = pattern_from_json(load_json_file(args.pattern))
    verdict = is_forbidden(pattern)
    result = {"classification": verdict,
              "coherent": is_coherent(pattern)}
    if result["coherent"]:
        matching = build_matching(pattern)
        result["matching"] = matching.to_json(pattern.oracle.key_json)
        result["matched"] = is_matched(pattern, matching)
    provenance = {"pattern": args.pattern, "rank": pattern.rank,
                  "k": pattern.k, "A": pattern.a}
    return _emit(args, "mirror-check", provenance, result,
                 EXIT_ACCEPT if verdict == ALLOWED else EXIT_REJECT)


def cmd_mirror_enumerate(args):
    counts = {"ALLOWED": 0, "COHERENCE_VIOLATION": 0, "MATCHING_VIOLATION": 0}
    forbidden = []
    examined = 0
    for pattern, verdict in enumerate_patterns(args.rank, args.k, args.A,
                                               args.budget):
        examined += 1
        counts[verdict] += 1
        if verdict != ALLOWED and len(forbidden) < args.keep:
            forbidden.append(pattern.to_json())
    result = {"examined": examined, "counts": counts,
              "first_forbidden": forbidden}
    provenance = {"rank": args.rank, "k": args.k, "A": args.A,
                  "budget": args.budget}
    return _emit(args, "mirror-enumerate", provenance, result, EXIT_ACCEPT)


def cmd_schreier_ends(args):
    ctx = load_graph(load_json_file(args.graph))
    count = ends_lower_bound(ctx.oracle, ctx.ball.vertices[0], args.n,
                             args.big_n)
    provenance = {"graph": args.graph, "n": args.n, "N": args.big_n}
    return _emit(args, "schreier-ends", provenance,
                 {"ends_lower_bound": count}, EXIT_ACCEPT)


def cmd_ball_stats(args):
    ctx = load_graph(load_json_file(args.graph))
    ball = ctx.ball
    result = {"vertices": len(ball), "edges": ball.edge_count(),
              "radius": ball.radius, "max_interior_degree": ball.maxdeg,
              "saturated": ball.saturated, "acyclic": not ball.has_cycle(),
              "degree_histogram": {str(k): v for k, v
                                   in ball.degree_histogram().items()}}
    _write_dot(args, ctx, None)
    provenance = {"graph": args.graph}
    return _emit(args, "ball-stats", provenance, result, EXIT_ACCEPT)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ufolab",
        description="Finite-ball UFO verification, transfer and "
                    "mirror-shift pattern machinery")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json-indent", type=int, default=None)
        p.add_argument("--dot", default=None, metavar="FILE")

    p = sub.add_parser("verify-ufo", help="check the three UFO conditions")
    p.add_argument("--graph", required=True)
    p.add_argument("--ufo", required=True)
    p.add_argument("--params", default=None, metavar="m,k,r")
    common(p)
    p.set_defaults(func=cmd_verify_ufo)

    p = sub.add_parser("make-ufo", help="construct a standard UFO family")
    p.add_argument("--family", required=True,
                   choices=["zd", "pentagon", "amenable", "multiended", "lift"])
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--graph", default=None)
    p.add_argument("--folner", default=None)
    p.add_argument("--cut", default=None)
    p.add_argument("--preset", default="zxf2")
    p.add_argument("--ms", type=int, default=2,
                   help="Schreier-side multiplicity (the lifted m is ms//2)")
    p.add_argument("--kappa", type=int, default=4)
    p.add_argument("--emit", default=None, metavar="FILE")
    common(p)
    p.set_defaults(func=cmd_make_ufo)

    p = sub.add_parser("transfer-ufo", help="push a UFO through a QI witness")
    p.add_argument("--g", required=True)
    p.add_argument("--g2", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--ufo", required=True)
    p.add_argument("--params", default=None, metavar="m,k,r")
    p.add_argument("--constants", default=None, metavar="A,B,C")
    common(p)
    p.set_defaults(func=cmd_transfer_ufo)

    p = sub.add_parser("qi-check", help="check the QI inequalities on balls")
    p.add_argument("--g", required=True)
    p.add_argument("--g2", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--constants", default=None, metavar="A,B,C")
    p.add_argument("--max-sources", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_qi_check)

    p = sub.add_parser("mirror-check", help="classify a pattern")
    p.add_argument("--pattern", required=True)
    common(p)
    p.set_defaults(func=cmd_mirror_check)

    p = sub.add_parser("mirror-enumerate",
                       help="stream pattern classifications under a budget")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--A", type=int, required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--keep", type=int, default=3,
                   help="forbidden patterns to include in the report")
    common(p)
    p.set_defaults(func=cmd_mirror_enumerate)

    p = sub.add_parser("schreier-ends",
                       help="ends lower bound after removing a ball")
    p.add_argument("--graph", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", dest="big_n", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_schreier_ends)

    p = sub.add_parser("ball-stats", help="size/degree/cycle report of a ball")
    p.add_argument("--graph", required=True)
    common(p)
    p.set_defaults(func=cmd_ball_stats)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors, which matches our contract
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except InputError as exc:
        print(json.dumps({"error": "input", "message": str(exc)}))
        return EXIT_INPUT
    except BudgetError as exc:
        print(json.dumps({"error": "budget", "message": str(exc)}))
        return EXIT_BUDGET
    except (RejectionError, MarginError) as exc:
        print(json.dumps({"error": "reject", "message": str(exc)}))
        return EXIT_REJECT


if __name__ == "__main__":
    sys.exit(main())
