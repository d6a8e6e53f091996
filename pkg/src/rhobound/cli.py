"""Command line surface: rho, bounds, contract, expand, compare, paper-examples.

Exit codes: 0 success, 1 mathematical inconclusiveness (an inconclusive
comparison, a failed verification), 2 input or usage errors.  Environment
variables RHOBOUND_TOL and RHOBOUND_PARTITION_CAP override the defaults;
explicit flags override both.
"""
from __future__ import annotations

import argparse
import datetime
import json
import os
import sys

from . import reference
from .contraction import ContractionSpec, adjust, contract
from .errors import InvalidSize, MatrixParseError, ToolkitError
from .expansion import (
    ExpansionPlan,
    FillPolicy,
    equitable_expand,
    induced_partition,
    mixed_expand,
)
from .fileio import FORMATS, format_matrix, read_matrix
from .matrix import IndexPartition, Matrix, componentwise_le, is_equitable, quotient, transpose
from .search import (
    DEFAULT_PARTITION_CAP,
    SearchOptions,
    bounds_search,
    compare,
    two_by_two_bounds,
)
from .spectral import DEFAULT_TOL, RhoEstimate, rho

ENV_TOL = "RHOBOUND_TOL"
ENV_PARTITION_CAP = "RHOBOUND_PARTITION_CAP"

#: Relative tolerance for the expand subcommand's before/after radius check.
EXPAND_CHECK_TOL = 1e-8


def fmt(x: float) -> str:
    """Scalar display with 12 significant digits."""
    return format(float(x), ".12g")


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        raise InvalidSize(f"environment variable {name}={raw!r} is not a number") from None


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise InvalidSize(f"environment variable {name}={raw!r} is not an integer") from None


def _parse_orientations(raw: str) -> tuple:
    names = {"row": "row", "col": "column", "column": "column"}
    out = []
    for tok in raw.split(","):
        tok = tok.strip().lower()
        if tok not in names:
            raise InvalidSize(f"unknown orientation {tok!r}, expected row or column")
        if names[tok] not in out:
            out.append(names[tok])
    if not out:
        raise InvalidSize("at least one orientation is required")
    return tuple(out)


def _display_partition(partition: IndexPartition, one_based: bool) -> str:
    offset = 1 if one_based else 0
    return "".join(
        "{" + ",".join(str(i + offset) for i in block) + "}" for block in partition.blocks()
    )


def _matrix_json(m: Matrix) -> list:
    return [[float(v) for v in row] for row in m.entries]


def _estimate_json(est: RhoEstimate) -> dict:
    return {
        "value": float(est.value),
        "lower": float(est.lower),
        "upper": float(est.upper),
        "iterations": int(est.iterations),
        "converged": bool(est.converged),
        "vector": [float(v) for v in est.vector],
    }


def _trail_json(trail) -> dict:
    return {
        "direction": trail.direction,
        "steps": [
            {"orientation": s.orientation, "partition": list(s.partition.labels)}
            for s in trail.steps
        ],
        "terminal": _matrix_json(trail.terminal),
        "rho": _estimate_json(trail.estimate),
    }


def _options_json(options: SearchOptions) -> dict:
    return {
        "orientations": list(options.orientations),
        "max_blocks": options.max_blocks,
        "depth": options.depth,
        "partition_cap": options.partition_cap,
        "tol": options.tol,
    }


def _trail_text(trail, one_based: bool) -> str:
    steps = " -> ".join(
        f"{s.orientation} blocks {_display_partition(s.partition, one_based)}"
        for s in trail.steps
    )
    return f"{trail.direction} via {steps}: rho = {fmt(trail.estimate.value)}"


def _emit(args, payload: dict, text_lines: list) -> None:
    if args.output == "json":
        if not args.deterministic:
            payload = dict(payload)
            payload["generated_at"] = (
                datetime.datetime.now(datetime.timezone.utc).isoformat()
            )
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _search_options(args) -> SearchOptions:
    return SearchOptions(
        orientations=_parse_orientations(args.orientations),
        max_blocks=args.max_blocks,
        depth=args.depth,
        partition_cap=_env_int(ENV_PARTITION_CAP, DEFAULT_PARTITION_CAP),
        tol=args.tol if args.tol is not None else _env_float(ENV_TOL, 1e-8),
        allow_deep=args.allow_deep,
    )


def _cmd_rho(args) -> int:
    m = read_matrix(args.file, args.format)
    tol = args.tol if args.tol is not None else _env_float(ENV_TOL, DEFAULT_TOL)
    if tol <= 0.0:
        raise InvalidSize(f"tol must be positive, got {tol}")
    est = rho(m, tol)
    payload = {"command": "rho", "input": args.file, "tol": tol, "rho": _estimate_json(est)}
    lines = [
        f"value      = {fmt(est.value)}",
        f"enclosure  = [{fmt(est.lower)}, {fmt(est.upper)}]  (width {fmt(est.width)})",
        f"iterations = {est.iterations}",
        f"converged  = {'yes' if est.converged else 'no'}",
    ]
    _emit(args, payload, lines)
    return 0


def _cmd_bounds(args) -> int:
    m = read_matrix(args.file, args.format)
    options = _search_options(args)
    if args.two_by_two:
        report = two_by_two_bounds(m, options.orientations)
    else:
        report = bounds_search(m, options)
    one_based = not args.zero_based
    payload = {
        "command": "bounds",
        "input": args.file,
        "two_by_two": bool(args.two_by_two),
        "options": _options_json(report.options_echo),
        "lower": float(report.lower),
        "upper": float(report.upper),
        "lower_certificate": _trail_json(report.lower_certificate),
        "upper_certificate": _trail_json(report.upper_certificate),
    }
    lines = [
        f"lower = {fmt(report.lower)}  ({_trail_text(report.lower_certificate, one_based)})",
        f"upper = {fmt(report.upper)}  ({_trail_text(report.upper_certificate, one_based)})",
    ]
    _emit(args, payload, lines)
    return 0


def _cmd_contract(args) -> int:
    m = read_matrix(args.file, args.format)
    partition = IndexPartition.from_string(args.partition)
    orientation = _parse_orientations(args.orientation)
    if len(orientation) != 1:
        raise InvalidSize("contract takes exactly one orientation")
    spec = ContractionSpec(partition, args.direction, orientation[0])
    contracted = contract(m, spec)
    adjusted = adjust(m, spec) if args.adjust or args.exact_check else None
    if args.exact_check:
        working = adjusted if spec.orientation == "row" else transpose(adjusted)
        source = m if spec.orientation == "row" else transpose(m)
        ordered = (
            componentwise_le(working, source)
            if spec.direction == "down"
            else componentwise_le(source, working)
        )
        reference_contract = contracted if spec.orientation == "row" else transpose(contracted)
        ok = (
            ordered
            and is_equitable(working, partition, 0.0)
            and quotient(working, partition) == reference_contract
        )
        if not ok:
            print("exact-check failed: adjusted matrix violates its contracts", file=sys.stderr)
            return 1
    payload = {
        "command": "contract",
        "input": args.file,
        "partition": list(partition.labels),
        "direction": args.direction,
        "orientation": orientation[0],
        "contraction": _matrix_json(contracted),
    }
    lines = []
    if args.adjust:
        lines.append(f"# contraction ({contracted.n}x{contracted.n})")
    lines.append(format_matrix(contracted))
    if args.adjust:
        payload["adjusted"] = _matrix_json(adjusted)
        lines.append("")
        lines.append(f"# adjusted ({adjusted.n}x{adjusted.n})")
        lines.append(format_matrix(adjusted))
    _emit(args, payload, lines)
    return 0


def _load_plan(path, seed_override) -> dict:
    try:
        with open(path) as handle:
            raw = json.load(handle)
    except (OSError, json.JSONDecodeError) as err:
        raise MatrixParseError(f"cannot read plan {path}: {err}") from None
    if not isinstance(raw, dict):
        raise MatrixParseError("expansion plan must be a JSON object")
    if seed_override is not None:
        fill = dict(raw.get("fill") or {})
        fill["seed"] = seed_override
        if "kind" not in fill:
            fill["kind"] = "seeded-random"
        raw = dict(raw)
        raw["fill"] = fill
    return raw


def _fill_from_json(obj) -> FillPolicy:
    obj = obj or {}
    kind = obj.get("kind", "uniform")
    weights = obj.get("weights")
    return FillPolicy(
        kind=kind,
        seed=int(obj.get("seed", 0)),
        weights=tuple(tuple(row) for row in weights) if weights is not None else None,
    )


def _cmd_expand(args) -> int:
    m = read_matrix(args.file, args.format)
    plan = _load_plan(args.plan, args.seed)
    sizes = plan.get("sizes")
    if not isinstance(sizes, list):
        raise MatrixParseError("expansion plan needs a 'sizes' list")
    orientation = plan.get("orientation", "row")
    fill = _fill_from_json(plan.get("fill"))
    if orientation == "mixed":
        if m.n != 2 or len(sizes) != 2:
            raise InvalidSize("mixed plans need a 2x2 matrix and exactly two sizes")
        expanded = mixed_expand(m, int(sizes[0]), int(sizes[1]), fill)
        exact_quotient = None
    else:
        expansion_plan = ExpansionPlan(tuple(int(s) for s in sizes), orientation, fill)
        expanded = equitable_expand(m, expansion_plan)
        partition = induced_partition(expansion_plan)
        working = expanded if orientation == "row" else transpose(expanded)
        source = m if orientation == "row" else transpose(m)
        exact_quotient = quotient(working, partition) == source
    before = rho(m)
    after = rho(expanded)
    drift = abs(after.value - before.value)
    ok = drift <= EXPAND_CHECK_TOL * max(1.0, before.value)
    if args.exact_check and exact_quotient is False:
        print("exact-check failed: quotient does not recover the input", file=sys.stderr)
        return 1
    payload = {
        "command": "expand",
        "input": args.file,
        "plan": args.plan,
        "expanded": _matrix_json(expanded),
        "rho_before": _estimate_json(before),
        "rho_after": _estimate_json(after),
        "rho_drift": float(drift),
        "rho_preserved": bool(ok),
    }
    lines = [
        f"# rho(input)    = {fmt(before.value)}",
        f"# rho(expanded) = {fmt(after.value)}  (|difference| = {fmt(drift)})",
        format_matrix(expanded),
    ]
    _emit(args, payload, lines)
    return 0 if ok else 1


def _cmd_compare(args) -> int:
    a = read_matrix(args.file_a, args.format)
    b = read_matrix(args.file_b, args.format)
    options = _search_options(args)
    certificate = compare(a, b, options)
    one_based = not args.zero_based
    payload = {
        "command": "compare",
        "inputs": [args.file_a, args.file_b],
        "options": _options_json(options),
        "conclusion": certificate.conclusion,
        "a_trail": _trail_json(certificate.a_trail),
        "b_trail": _trail_json(certificate.b_trail),
    }
    lines = [
        f"conclusion = {certificate.conclusion}",
        f"A: {_trail_text(certificate.a_trail, one_based)}"
        f"  (upper {fmt(certificate.a_trail.estimate.upper)})",
        f"B: {_trail_text(certificate.b_trail, one_based)}"
        f"  (lower {fmt(certificate.b_trail.estimate.lower)})",
    ]
    _emit(args, payload, lines)
    return 0 if certificate.conclusion == "A_le_B" else 1


def _cmd_paper_examples(args) -> int:
    results = reference.run_all()
    payload = {
        "command": "paper-examples",
        "results": [
            {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
        ],
        "passed": all(r.passed for r in results),
    }
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status}  {r.name}" + (f"  ({r.detail})" if r.detail else ""))
    good = sum(r.passed for r in results)
    lines.append(f"{good}/{len(results)} examples passed")
    _emit(args, payload, lines)
    return 0 if payload["passed"] else 1


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=None, help="numerical tolerance")
    parser.add_argument("--format", choices=FORMATS, default=None, help="input format (default: by extension)")
    parser.add_argument("--output", choices=("text", "json"), default="text")
    parser.add_argument("--deterministic", action="store_true", help="omit the timestamp from JSON output")
    parser.add_argument("--zero-based", action="store_true", help="display indices 0-based instead of 1-based")


def _add_search(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--depth", type=int, default=1, help="number of chained contractions")
    parser.add_argument("--orientations", default="row,column")
    parser.add_argument("--max-blocks", type=int, default=None)
    parser.add_argument("--allow-deep", action="store_true", help="confirm depth >= 3")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rhobound",
        description="Certified spectral radius bounds via matrix expansions and contractions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rho", help="certified spectral radius of a matrix file")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(handler=_cmd_rho)

    p = sub.add_parser("bounds", help="best contraction bounds with certificates")
    p.add_argument("file")
    p.add_argument("--two-by-two", action="store_true", help="closed-form 2x2 contraction bounds only")
    _add_search(p)
    _add_common(p)
    p.set_defaults(handler=_cmd_bounds)

    p = sub.add_parser("contract", help="contract a matrix by a partition")
    p.add_argument("file")
    p.add_argument("--partition", required=True, help="comma-separated 0-based group labels, e.g. 0,1,1,1,2,2")
    p.add_argument("--direction", choices=("down", "up"), required=True)
    p.add_argument("--orientation", default="row", help="row or col")
    p.add_argument("--adjust", action="store_true", help="also print the same-size adjusted matrix")
    p.add_argument("--exact-check", action="store_true", help="verify the adjusted matrix contracts exactly")
    _add_common(p)
    p.set_defaults(handler=_cmd_contract)

    p = sub.add_parser("expand", help="expand a matrix according to a JSON plan")
    p.add_argument("file")
    p.add_argument("--plan", required=True, help="JSON expansion plan")
    p.add_argument("--seed", type=int, default=None, help="override the plan's fill seed")
    p.add_argument("--exact-check", action="store_true", help="require the quotient round trip to be exact")
    _add_common(p)
    p.set_defaults(handler=_cmd_expand)

    p = sub.add_parser("compare", help="certify rho(A) <= rho(B)")
    p.add_argument("file_a")
    p.add_argument("file_b")
    _add_search(p)
    _add_common(p)
    p.set_defaults(handler=_cmd_compare)

    p = sub.add_parser("paper-examples", help="run the embedded worked-example suite")
    _add_common(p)
    p.set_defaults(handler=_cmd_paper_examples)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ToolkitError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
