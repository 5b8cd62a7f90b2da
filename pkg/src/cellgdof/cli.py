"""Command line front end.

Subcommands: classify (regime verdicts), region (constraint CSV), query
(membership / weighted maximum), sweep (symmetric-family parameter map as
CSV), verify (oracle cross-checks), example (emit a symmetric network
file).  Exit codes: 0 success or all checks passed, 1 a selected check
failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .network import (
    CellNetwork,
    GdofPoint,
    NetworkFormatError,
    as_rational,
    canonicalize,
    decimal_str,
    parse_network,
    rational_str,
    serialize_network,
    symmetric_two_cell,
)
from .cycles import enumerate_cycles, rank_tuples
from .oracle import (
    DEFAULT_GRID_STEP,
    GridTooLargeError,
    IBC,
    IMAC,
    check_duality,
    check_inclusion,
    check_support_match,
    default_directions,
    default_floor,
    default_tolerance,
    sample_region,
)
from .polytope import EmptyRegionError, build_constraints, is_member, max_weighted, to_csv
from .regimes import Violation, is_ctin, is_tin, verify_converse_steps

# Sum GDoF attainable at symmetric cross strength 1/2 by schemes that align
# interference using perfect channel knowledge; sweep rows at that strength
# report the shortfall of power-controlled TIN against it.
IA_SUM_GDOF = Fraction(4, 3)
IA_CROSS_STRENGTH = Fraction(1, 2)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


class InputError(Exception):
    """User-facing input problem; maps to exit code 2."""


def _load_network(path: str) -> CellNetwork:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        net = parse_network(text)
    except NetworkFormatError as exc:
        raise InputError(f"{path}: {exc}") from exc
    canon, perms = canonicalize(net)
    if any(perm != tuple(range(1, len(perm) + 1)) for perm in perms):
        print(
            "note: users reordered within cells by direct strength "
            f"(per-cell original ranks: {list(perms)})",
            file=sys.stderr,
        )
    return canon


def _parse_rational(text: str, what: str) -> Fraction:
    try:
        return as_rational(text)
    except NetworkFormatError as exc:
        raise InputError(f"{what}: {exc}") from exc


def _write_output(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc


def _violation_line(v: Violation) -> str:
    parts = [f"i={v.i}", f"j={v.j}"]
    if v.k is not None:
        parts.append(f"k={v.k}")
    if v.l_i is not None:
        parts.append(f"l_i={v.l_i}")
    if v.l_i_prime is not None:
        parts.append(f"l_i'={v.l_i_prime}")
    if v.l_k is not None:
        parts.append(f"l_k={v.l_k}")
    return f"  {v.tag}[{' '.join(parts)}]: {v.lhs} < {v.rhs}"


def cmd_classify(args: argparse.Namespace) -> int:
    net = _load_network(args.network)
    ctin = is_ctin(net)
    tin = is_tin(net)
    print(f"CTIN: {'yes' if ctin.regime_holds else 'no'}")
    for v in ctin.violations:
        print(_violation_line(v))
    print(f"TIN: {'yes' if tin.regime_holds else 'no'}")
    for v in tin.violations:
        print(_violation_line(v))
    return EXIT_OK


def cmd_region(args: argparse.Namespace) -> int:
    net = _load_network(args.network)
    _write_output(to_csv(build_constraints(net)), args.output)
    return EXIT_OK


def cmd_query(args: argparse.Namespace) -> int:
    net = _load_network(args.network)
    cs = build_constraints(net)
    users = net.users()
    values = [_parse_rational(v, f"value {i + 1}") for i, v in enumerate(args.values)]
    if args.mode == "member":
        if len(values) != len(users):
            raise InputError(f"{len(values)} values for {len(users)} users")
        try:
            point = GdofPoint.from_sequence(net, values)
        except NetworkFormatError as exc:
            raise InputError(str(exc)) from exc
        report = is_member(cs, point)
        print("member" if report.member else "not member")
        for c in report.violated:
            print(f"  violated {c.label}: {c.evaluate(point)} > {c.bound}")
        return EXIT_OK
    # maxsum
    if values and len(values) != len(users):
        raise InputError(f"{len(values)} weights for {len(users)} users")
    weights = dict(zip(users, values)) if values else {u: Fraction(1) for u in users}
    if any(w < 0 for w in weights.values()):
        raise InputError("weights must be nonnegative")
    if all(w == 0 for w in weights.values()):
        raise InputError("weights must not all be zero")
    try:
        optimum, argmax = max_weighted(cs, weights)
    except EmptyRegionError:
        print("empty")
        return EXIT_OK
    print(rational_str(optimum))
    print("argmax: " + ",".join(rational_str(argmax[u]) for u in users))
    return EXIT_OK


def _rational_range(lo: Fraction, hi: Fraction, step: Fraction) -> list[Fraction]:
    values = []
    v = lo
    while v <= hi:
        values.append(v)
        v += step
    return values


def cmd_sweep(args: argparse.Namespace) -> int:
    a_min = _parse_rational(args.alpha_min, "--alpha-min")
    a_max = _parse_rational(args.alpha_max, "--alpha-max")
    a_step = _parse_rational(args.alpha_step, "--alpha-step")
    b_min = _parse_rational(args.beta_min, "--beta-min")
    b_max = _parse_rational(args.beta_max, "--beta-max")
    b_step = _parse_rational(args.beta_step, "--beta-step")
    for name, lo, hi, step in (
        ("alpha", a_min, a_max, a_step),
        ("beta", b_min, b_max, b_step),
    ):
        if step <= 0:
            raise InputError(f"{name} step must be positive")
        if not (0 <= lo <= hi <= 1):
            raise InputError(f"{name} range must satisfy 0 <= min <= max <= 1")
    requested = set(args.outputs.split(","))
    allowed = {"regime", "sum_gdof", "ia_gap"}
    if not requested <= allowed:
        raise InputError(f"--outputs must be a subset of {sorted(allowed)}")

    lines = ["alpha,beta,ctin,tin,sum_gdof,ia_gap"]
    for alpha in _rational_range(a_min, a_max, a_step):
        for beta in _rational_range(b_min, b_max, b_step):
            if beta > alpha:
                row = [decimal_str(alpha), decimal_str(beta), "n/a", "n/a", "n/a", "n/a"]
                lines.append(",".join(row))
                continue
            net = symmetric_two_cell(alpha, beta)
            ctin = tin = "n/a"
            if "regime" in requested:
                ctin = "yes" if is_ctin(net).regime_holds else "no"
                tin = "yes" if is_tin(net).regime_holds else "no"
            total_cell = gap_cell = "n/a"
            if "sum_gdof" in requested or "ia_gap" in requested:
                cs = build_constraints(net)
                total, _ = max_weighted(cs, {u: Fraction(1) for u in net.users()})
                if "sum_gdof" in requested:
                    total_cell = decimal_str(total)
                if "ia_gap" in requested and alpha == IA_CROSS_STRENGTH:
                    gap_cell = decimal_str(IA_SUM_GDOF - total)
            lines.append(
                ",".join(
                    [decimal_str(alpha), decimal_str(beta), ctin, tin, total_cell, gap_cell]
                )
            )
    _write_output("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    net = _load_network(args.network)
    selected = {
        "inclusion": args.inclusion,
        "support": args.support,
        "duality": args.duality,
        "converse-steps": args.converse_steps,
    }
    if args.all or not any(selected.values()):
        selected = {name: True for name in selected}

    step = _parse_rational(args.step, "--step") if args.step else DEFAULT_GRID_STEP
    floor = _parse_rational(args.floor, "--floor") if args.floor else default_floor(net)
    tolerance = (
        _parse_rational(args.tolerance, "--tolerance")
        if args.tolerance
        else default_tolerance(step)
    )
    if step <= 0:
        raise InputError("--step must be positive")
    if floor >= 0:
        raise InputError("--floor must be negative")
    if tolerance <= 0:
        raise InputError("--tolerance must be positive")
    mode = IMAC if args.mode == "IMAC" else IBC
    directions = default_directions(net, extra=args.directions)

    failed: Optional[str] = None
    cs = build_constraints(net)
    cloud = None
    if selected["inclusion"] or selected["support"]:
        try:
            cloud = sample_region(net, mode, step, floor)
        except GridTooLargeError as exc:
            raise InputError(str(exc)) from exc
    if selected["inclusion"]:
        assert cloud is not None
        target = cloud
        if args.corrupt_cloud:
            bad = GdofPoint({u: net.direct(u) + 1 for u in net.users()})
            target = cloud.with_point(bad)
        report = check_inclusion(target, cs)
        if report.ok:
            print(f"inclusion: pass ({report.points_checked} points)")
        else:
            print(
                f"inclusion: FAIL {report.constraint.label} "
                f"exceeded by {rational_str(report.worst_excess)}"
            )
            failed = failed or "inclusion"
    if selected["support"]:
        assert cloud is not None
        report = check_support_match(cloud, cs, directions, tolerance)
        worst = max((r.gap for r in report.records), default=Fraction(0))
        if report.ok:
            print(
                f"support: pass ({len(report.records)} directions, "
                f"max gap {rational_str(worst)})"
            )
        else:
            print(
                f"support: FAIL ({len(report.failures())} directions exceed "
                f"tolerance {rational_str(tolerance)}, worst gap {rational_str(worst)})"
            )
            failed = failed or "support"
    if selected["duality"]:
        try:
            report = check_duality(net, step, floor, directions, 2 * tolerance)
        except GridTooLargeError as exc:
            raise InputError(str(exc)) from exc
        worst = max((r.gap for r in report.records), default=Fraction(0))
        if report.ok:
            print(
                f"duality: pass ({len(report.records)} directions, "
                f"max gap {rational_str(worst)})"
            )
        else:
            print(
                f"duality: FAIL ({len(report.failures())} directions exceed "
                f"tolerance {rational_str(2 * tolerance)})"
            )
            failed = failed or "duality"
    if selected["converse-steps"]:
        bad_family = None
        checked = 0
        for cycle in enumerate_cycles(net.cell_count):
            for ranks in rank_tuples(net, cycle):
                report = verify_converse_steps(net, cycle, tuple(ranks))
                checked += len(report.checks)
                if not report.all_pass and bad_family is None:
                    worst_check = report.failures()[0]
                    bad_family = (
                        f"{worst_check.family} on cycle {cycle} ranks {ranks}: "
                        f"{worst_check.lhs} < {worst_check.rhs}"
                    )
        if bad_family is None:
            print(f"converse-steps: pass ({checked} inequalities)")
        else:
            print(f"converse-steps: FAIL {bad_family}")
            failed = failed or "converse-steps"

    if failed:
        print(f"first failing check: {failed}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_example(args: argparse.Namespace) -> int:
    alpha = _parse_rational(args.alpha, "alpha")
    beta = _parse_rational(args.beta, "beta")
    try:
        net = symmetric_two_cell(alpha, beta)
    except NetworkFormatError as exc:
        raise InputError(str(exc)) from exc
    _write_output(serialize_network(net), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cellgdof",
        description="Exact GDoF region and TIN regime computations for "
        "multi-cell interference networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="report CTIN/TIN regime verdicts")
    p.add_argument("network", help="network JSON file")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("region", help="export region constraints as CSV")
    p.add_argument("network", help="network JSON file")
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.set_defaults(fn=cmd_region)

    p = sub.add_parser("query", help="membership or weighted-maximum query")
    p.add_argument("network", help="network JSON file")
    p.add_argument("mode", choices=["member", "maxsum"])
    p.add_argument(
        "values",
        nargs="*",
        help="member: one GDoF value per user; maxsum: optional weights "
        "(default all ones); rationals as p/q or decimals",
    )
    p.set_defaults(fn=cmd_query)

    p = sub.add_parser(
        "sweep", help="symmetric-family (alpha, beta) parameter sweep CSV"
    )
    p.add_argument("--alpha-min", default="0")
    p.add_argument("--alpha-max", default="1")
    p.add_argument("--alpha-step", default="1/50")
    p.add_argument("--beta-min", default="0")
    p.add_argument("--beta-max", default="1")
    p.add_argument("--beta-step", default="1/50")
    p.add_argument(
        "--outputs",
        default="regime,sum_gdof,ia_gap",
        help="comma-separated subset of regime,sum_gdof,ia_gap",
    )
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("verify", help="run oracle cross-checks against the region")
    p.add_argument("network", help="network JSON file")
    p.add_argument("--inclusion", action="store_true", help="cloud within region")
    p.add_argument("--support", action="store_true", help="support-function match")
    p.add_argument("--duality", action="store_true", help="uplink/downlink agreement")
    p.add_argument(
        "--converse-steps",
        action="store_true",
        help="instantiate the outer-bound inequality chains",
    )
    p.add_argument("--all", action="store_true", help="run every check (default)")
    p.add_argument("--mode", choices=["IMAC", "IBC"], default="IMAC")
    p.add_argument("--step", help="exponent grid step (default 1/20)")
    p.add_argument("--floor", help="deepest exponent (default -(1 + max strength))")
    p.add_argument("--tolerance", help="support gap tolerance (default 4 x step)")
    p.add_argument(
        "--directions",
        type=int,
        default=8,
        help="extra seeded random directions beyond unit vectors and all-ones",
    )
    p.add_argument(
        "--corrupt-cloud",
        action="store_true",
        help="negative control: inject an out-of-region point before the "
        "inclusion check (must make it fail)",
    )
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("example", help="emit a symmetric two-cell network file")
    p.add_argument("alpha", help="rank-1 cross strength (rational)")
    p.add_argument("beta", help="rank-2 cross strength (rational)")
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.set_defaults(fn=cmd_example)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse prints its own message; negative rationals such as
        # "--floor -8/5" must be spelled "--floor=-8/5"
        code = exc.code if isinstance(exc.code, int) else EXIT_INPUT_ERROR
        return code
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except NetworkFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
