"""Command-line front door: classify, plan, simulate, verify, atlas, render.

Exit codes: 0 success, 1 check failure, 2 usage/input error.  Parameters are
exact rationals ("8/5"); *-decimal variants accept terminating decimals.
Payloads go to standard output as JSON, CSV, or SVG.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import regions as reg
from .channel import make_channel, transmit
from .decode import peel_bits, peel_structure, receiver_view
from .exactmath import format_rat, parse_rat
from .oracle import LinearScheme, exhaustive_search, rank_decodable, witness_blocks
from .render import atlas_csv, atlas_svg, render_scheme
from .scheme import (
    NonIntegralBlocksError,
    build_assignment,
    check_validity,
    layout_for,
    load_frozen_layouts,
    minimal_n,
    validation_points,
)

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    pass


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2))


def _fail(code: int, message: str, **extra) -> int:
    _emit({"error": message, **extra})
    return code


def _parse_point(args) -> tuple[Fraction, Fraction]:
    if args.alpha is not None:
        alpha = parse_rat(args.alpha)
    elif getattr(args, "alpha_decimal", None) is not None:
        alpha = Fraction(args.alpha_decimal)
    else:
        raise UsageError("missing --alpha")
    if args.beta is not None:
        beta = parse_rat(args.beta)
    elif getattr(args, "beta_decimal", None) is not None:
        beta = Fraction(args.beta_decimal)
    else:
        raise UsageError("missing --beta")
    return alpha, beta


def _load_table(args):
    path = args.table or os.environ.get("DETIC_TABLE") or None
    return reg.load_region_table(path)


def _point_args(sub) -> None:
    sub.add_argument("--alpha", help='exact rational, e.g. "8/5"')
    sub.add_argument("--beta", help='exact rational, e.g. "9/10"')
    sub.add_argument("--alpha-decimal", help='terminating decimal, e.g. "1.6"')
    sub.add_argument("--beta-decimal", help='terminating decimal, e.g. "0.9"')


def _classify_payload(res: reg.ClassifyResult) -> dict:
    payload = {
        "alpha": format_rat(res.alpha),
        "beta": format_rat(res.beta),
        "region": res.region.id if res.covered else "-",
        "eps": format_rat(res.eps) if res.covered else None,
        "delta": format_rat(res.delta) if res.covered else None,
        "dsym": format_rat(res.dsym_value) if res.covered else None,
        "converseBound": format_rat(reg.converse_bound(res.alpha, res.beta)),
    }
    return payload


def cmd_classify(args) -> int:
    table = _load_table(args)
    alpha, beta = _parse_point(args)
    res = reg.classify(alpha, beta, table)
    _emit(_classify_payload(res))
    return EXIT_OK


def _plan(args, table):
    """Shared classify -> layout -> counts pipeline for plan/simulate/render."""
    alpha, beta = _parse_point(args)
    res = reg.classify(alpha, beta, table)
    if not res.covered:
        return None, _fail(EXIT_CHECK, "point is not covered by the region catalog",
                           alpha=format_rat(alpha), beta=format_rat(beta))
    layout = layout_for(res.region)
    need = minimal_n(res.region, res.eps, res.delta)
    n = args.n if args.n is not None else need
    try:
        assign = build_assignment(layout, res.region, alpha, beta, n)
    except NonIntegralBlocksError as exc:
        return None, _fail(EXIT_USAGE, str(exc), minimalN=exc.minimal_n)
    return (res, layout, assign, need), None


def cmd_plan(args) -> int:
    table = _load_table(args)
    planned, err = _plan(args, table)
    if err is not None:
        return err
    res, layout, assign, need = planned
    counts = [seg.count for seg in assign.segments]
    _emit(
        {
            **_classify_payload(res),
            "minimalN": need,
            "n": assign.n,
            "m": assign.m,
            "layout": layout.to_json_dict(),
            "counts": counts,
        }
    )
    return EXIT_OK


def cmd_simulate(args) -> int:
    table = _load_table(args)
    planned, err = _plan(args, table)
    if err is not None:
        return err
    res, layout, assign, _ = planned
    try:
        ch = make_channel(args.k, assign.n, res.alpha, res.beta)
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    rng = np.random.default_rng(args.seed)
    views = [receiver_view(assign, ch, r) for r in range(1, ch.k + 1)]
    failures = 0
    rules: dict[str, int] = {}
    for _ in range(args.trials):
        messages = [rng.integers(0, 2, size=assign.m, dtype=np.uint8) for _ in range(ch.k)]
        outputs = transmit(ch, [assign.encode(d) for d in messages])
        for view, y, want in zip(views, outputs, messages):
            got, trace = peel_bits(view, y)
            if got is None or not np.array_equal(got, want):
                failures += 1
            for rule, cnt in trace.rule_counts().items():
                rules[rule] = rules.get(rule, 0) + cnt
    payload = {
        **_classify_payload(res),
        "channel": ch.to_json_dict(),
        "m": assign.m,
        "trials": args.trials,
        "seed": args.seed,
        "decodedReceivers": ch.k,
        "failures": failures,
        "success": failures == 0,
        "achievedRate": format_rat(Fraction(assign.m, assign.n)),
        "traceSummary": dict(sorted(rules.items())),
    }
    _emit(payload)
    return EXIT_OK if failures == 0 else EXIT_CHECK


def _verify_table(table) -> tuple[bool, dict]:
    frozen = load_frozen_layouts(table)
    detail = []
    ok = True
    for spec in table:
        report = check_validity(layout_for(spec, frozen), spec)
        ok &= report.all_passed
        detail.append(
            {
                "region": spec.id,
                "passed": report.all_passed,
                "checks": [
                    {"name": name, "passed": passed, "witness": witness}
                    for name, passed, witness in report.checks
                ],
            }
        )
    return ok, {"regions": len(detail), "detail": detail}


def _verify_boundaries(table) -> tuple[bool, dict]:
    report = reg.boundary_consistency(grid_denominator=60, table=table)
    return report.ok, {
        "pointsChecked": report.points_checked,
        "multiRegionPoints": report.multi_region_points,
        "violations": [
            {
                "alpha": format_rat(a),
                "beta": format_rat(b),
                "values": [{"region": rid, "dsym": format_rat(v)} for rid, v in vals],
            }
            for a, b, vals in report.violations
        ],
    }


def _verify_oracle(table) -> tuple[bool, dict]:
    frozen = load_frozen_layouts(table)
    detail = []
    ok = True
    for spec in table:
        layout = layout_for(spec, frozen)
        points = validation_points(spec)
        region_ok = True
        for eps, delta in points:
            alpha = spec.anchor_alpha + eps
            beta = spec.anchor_beta + delta
            n = minimal_n(spec, eps, delta)
            assign = build_assignment(layout, spec, alpha, beta, n)
            ch = make_channel(3, n, alpha, beta)
            region_ok &= rank_decodable(LinearScheme(ch, assign))
        ok &= region_ok
        detail.append({"region": spec.id, "points": len(points), "rankDecodable": region_ok})
    return ok, {"detail": detail}


_SEARCH_CASES = [
    # (K, N, alpha, beta, expected best m)
    (3, 1, Fraction(2), Fraction(0), 1),
    (3, 2, Fraction(3, 2), Fraction(1, 2), 1),
    (3, 3, Fraction(4, 3), Fraction(2, 3), 2),
]


def _verify_search(table) -> tuple[bool, dict]:
    detail = []
    ok = True
    for k, n, alpha, beta, want in _SEARCH_CASES:
        ch = make_channel(k, n, alpha, beta)
        best_m, witness = exhaustive_search(ch)
        expected = reg.dsym_at(alpha, beta, table) * n
        case_ok = best_m == want == expected
        ok &= case_ok
        detail.append(
            {
                "channel": ch.to_json_dict(),
                "bestM": best_m,
                "expected": int(expected),
                "witnessPipes": [b if b is None else int(b) for b in witness.pipe_to_bit],
                "witnessBlocks": witness_blocks(witness),
                "passed": case_ok,
            }
        )
    return ok, {"detail": detail}


def cmd_verify(args) -> int:
    table = _load_table(args)
    suites = {
        "table": _verify_table,
        "boundaries": _verify_boundaries,
        "oracle": _verify_oracle,
        "search": _verify_search,
    }
    ok, detail = suites[args.suite](table)
    _emit({"suite": args.suite, "passed": ok, **detail})
    return EXIT_OK if ok else EXIT_CHECK


def cmd_atlas(args) -> int:
    table = _load_table(args)
    if args.grid < 2:
        return _fail(EXIT_USAGE, "grid must be >= 2")
    rows = reg.atlas_rows(args.grid, table)
    if args.format == "csv":
        sys.stdout.write(atlas_csv(rows))
    else:
        print(atlas_svg(rows, args.grid))
    return EXIT_OK


def cmd_render(args) -> int:
    table = _load_table(args)
    planned, err = _plan(args, table)
    if err is not None:
        return err
    res, layout, assign, _ = planned
    try:
        ch = make_channel(args.k, assign.n, res.alpha, res.beta)
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    view = receiver_view(assign, ch, args.receiver)
    _, trace = peel_structure(view)
    title = (
        f"region {res.region.id} at ({format_rat(res.alpha)}, {format_rat(res.beta)}), "
        f"N = {assign.n}, receiver {args.receiver}"
    )
    print(render_scheme(view, trace, title))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="detic",
        description="Deterministic interference channel toolkit: region catalog, "
        "coding schemes, peeling decoder, verification oracles.",
    )
    parser.add_argument("--table", help="override the region catalog JSON (env: DETIC_TABLE)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="region, rate, and converse bound at a point")
    _point_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("plan", help="layout and pipe counts at a point")
    _point_args(p)
    p.add_argument("--n", type=int, help="pipe count N (default: minimal integral N)")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate", help="encode, transmit, and peel-decode random messages")
    _point_args(p)
    p.add_argument("--n", type=int, help="pipe count N (default: minimal integral N)")
    p.add_argument("--k", type=int, default=3, help="number of pairs (default 3)")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=["table", "boundaries", "oracle", "search"], required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("atlas", help="classify a rational grid over the square")
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--format", choices=["csv", "svg"], default="csv")
    p.set_defaults(func=cmd_atlas)

    p = sub.add_parser("render", help="SVG of the transmit vector and a receiver view")
    _point_args(p)
    p.add_argument("--n", type=int, help="pipe count N (default: minimal integral N)")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--receiver", type=int, default=1)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        return _fail(EXIT_USAGE, str(exc))


if __name__ == "__main__":
    sys.exit(main())
