"""Command-line front end: solve, evaluate, simulate, bounds, verify, sweep.

Exit codes are a stable contract: 0 success, 1 assertion or game failure,
2 usage error, 3 resource cap.  Every command is deterministic; repeated
runs produce byte-identical output apart from the wall_ms column.
"""

from __future__ import annotations

import argparse
import itertools
import sys
import time
from typing import Sequence

from . import report
from .adversaries import (
    CubeAdversary,
    DiagonalAdversary,
    GreedyAdversary,
    Plane3DAdversary,
    cube_response_floor,
    diagonal_response_floor,
    make_adversary,
)
from .bounds import (
    bounds_report,
    ceil_lower,
    lower_2d,
    lower_3d,
    lower_cube,
    budget_d,
    per_segment_lower,
    within_upper,
)
from .core import FOUND, GameStateError, GridShape, Point, Reply, grid_shape
from .evaluator import (
    ProtocolViolationError,
    Transcript,
    run_match,
    transcript_to_jsonl,
    worst_case,
)
from .solver import (
    DEFAULT_MAX_CELLS,
    DEFAULT_MAX_STATES,
    ResourceCapError,
    best_response,
    exact_qc,
    extract_optimal_adversary,
)
from .strategies import STRATEGY_NAMES, default_strategy_name, make_strategy

__all__ = ["build_parser", "main", "parse_shape"]

VERIFY_COLUMNS = (
    "shape",
    "lower_2d",
    "per_segment_lower",
    "upper_2d",
    "lemma_upper_2d",
    "lower_3d",
    "lower_cube",
    "budget_d",
    "exact_qc",
    "worst_case",
    "best_greedy",
    "best_optimal",
    "best_diagonal",
    "best_plane3d",
    "best_cube",
    "wall_ms",
    "status",
)

SWEEP_ADVERSARIES = ("greedy", "diagonal", "plane3d", "cube")


def parse_shape(text: str) -> GridShape:
    """Parse extents joined by "x", e.g. "6x5x4" or "8"."""
    try:
        dims = tuple(int(part, 10) for part in text.split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed shape {text!r}") from None
    if not dims or any(n < 1 for n in dims):
        raise argparse.ArgumentTypeError(f"axis sizes must be positive in {text!r}")
    return grid_shape(*dims)


def _parse_target(text: str) -> Point:
    try:
        return tuple(int(part, 10) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed target {text!r}") from None


def _parse_range(text: str) -> tuple[int, int]:
    """One per-axis sweep range "LO:HI" (inclusive) or a single size."""
    lo, _, hi = text.partition(":")
    try:
        bounds = (int(lo, 10), int(hi, 10) if hi else int(lo, 10))
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed range {text!r}") from None
    if bounds[0] < 1:
        raise argparse.ArgumentTypeError(f"range start must be positive in {text!r}")
    return bounds


def _positive_int(text: str) -> int:
    try:
        value = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _resolve_shape(args: argparse.Namespace) -> GridShape:
    shape: GridShape = args.shape
    if getattr(args, "sort", False):
        shape = grid_shape(*sorted(shape.dims, reverse=True))
    return shape


def _write_trace(path: str, transcript: Transcript) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(transcript_to_jsonl(transcript))


def _principal_transcript(shape: GridShape, line) -> Transcript:
    """Repackage a solver principal line as a replayable transcript."""
    events = []
    target: Point | None = None
    for query, corner in line:
        if corner is None:
            events.append((query, FOUND))
            target = query
        else:
            events.append((query, Reply(corner)))
    return Transcript(
        shape=shape,
        strategy="principal",
        adversary="optimal",
        target=target,
        events=tuple(events),
        outcome="found" if target is not None else "depth_capped",
    )


def _emit_rows(args: argparse.Namespace, rows, columns) -> None:
    """Write rows as CSV to --out or stdout; render figures beside a file."""
    out = getattr(args, "out", None)
    if not out:
        report.write_csv(sys.stdout, rows, columns)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        report.write_csv(fh, rows, columns)
    written = [out]
    if getattr(args, "plots", True):
        curves_path, sandwich_path = report.figure_paths(out)
        for rendered in (
            report.render_curves(rows, curves_path),
            report.render_sandwich(rows, sandwich_path),
        ):
            if rendered:
                written.append(rendered)
    for path in written:
        print(path)


# ---------------------------------------------------------------- commands


def cmd_solve(args: argparse.Namespace) -> int:
    shape = _resolve_shape(args)
    solved = exact_qc(
        shape,
        symmetry=args.symmetry,
        max_cells=args.max_cells,
        max_states=args.max_states,
    )
    print(f"shape {report.shape_label(shape.dims)}")
    print(f"exact {solved.value}")
    print(f"states_explored {solved.states_explored}")
    print(f"peak_memo {solved.peak_memo}")
    if args.trace:
        _write_trace(args.trace, _principal_transcript(shape, solved.principal_line))
        print(f"trace {args.trace}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    shape = _resolve_shape(args)
    name = args.strategy or default_strategy_name(shape)
    evaluated = worst_case(make_strategy(name, shape), shape, max_states=args.max_states)
    print(f"shape {report.shape_label(shape.dims)}")
    print(f"strategy {name}")
    print(f"worst_case {evaluated.worst_case}")
    print(f"correct {evaluated.correct}")
    print(f"nodes {evaluated.nodes}")
    if args.trace:
        _write_trace(args.trace, evaluated.witness)
        print(f"trace {args.trace}")
    return 0 if evaluated.correct else 1


def cmd_simulate(args: argparse.Namespace) -> int:
    shape = _resolve_shape(args)
    strategy_name = args.strategy or default_strategy_name(shape)
    strategy = make_strategy(strategy_name, shape)
    if args.target is not None:
        shape.index(args.target)  # bounds check doubles as usage validation
    if args.adversary == "optimal":
        exact_qc(shape, max_cells=args.max_cells, max_states=args.max_states)
        adversary = extract_optimal_adversary(shape)
    else:
        adversary = make_adversary(args.adversary, shape, target=args.target)
    transcript = run_match(strategy, adversary, shape, target=args.target)
    print(f"shape {report.shape_label(shape.dims)}")
    print(f"strategy {strategy_name}")
    print(f"adversary {args.adversary}")
    print(f"outcome {transcript.outcome}")
    print(f"queries {transcript.total_queries}")
    if args.trace:
        _write_trace(args.trace, transcript)
        print(f"trace {args.trace}")
    return 0 if transcript.outcome == "found" else 1


def cmd_bounds(args: argparse.Namespace) -> int:
    shape = _resolve_shape(args)
    bounds = bounds_report(shape)
    print(f"shape {report.shape_label(shape.dims)}")
    named = [
        ("lower_2d", bounds.lower_2d),
        ("per_segment_lower",
         per_segment_lower(*shape.dims)
         if shape.ndim == 2 and shape.dims[0] >= shape.dims[1] else None),
        ("lower_3d", bounds.lower_3d),
        ("lower_cube", bounds.lower_cube),
        ("upper_2d", bounds.upper_2d),
        ("lemma_upper_2d", bounds.lemma_upper_2d),
        ("budget_d", bounds.budget_d),
    ]
    for name, value in named:
        if value is not None:
            print(f"{name} {report.format_cell(value)}")
    return 0


def _verify_shapes(max_cells: int) -> list[GridShape]:
    """Every canonical shape within the cell cap: 1D sizes, then sorted
    two- and three-axis extents all at least 2."""
    dims_list: list[tuple[int, ...]] = [(n,) for n in range(1, max_cells + 1)]

    def grow(prefix: tuple[int, ...], cells: int) -> None:
        if len(prefix) >= 2:
            dims_list.append(prefix)
        if len(prefix) == 3:
            return
        for n in range(2, prefix[-1] + 1):
            if cells * n <= max_cells:
                grow(prefix + (n,), cells * n)

    for first in range(2, max_cells + 1):
        grow((first,), first)
    return [grid_shape(*dims) for dims in sorted(set(dims_list))]


def _verify_row(shape: GridShape, max_states: int) -> dict:
    started = time.perf_counter()
    dims = shape.dims
    problems: list[str] = []
    bounds = bounds_report(shape)
    row: dict = {
        "shape": dims,
        "lower_2d": bounds.lower_2d,
        "upper_2d": bounds.upper_2d,
        "lemma_upper_2d": bounds.lemma_upper_2d,
        "lower_3d": bounds.lower_3d,
        "lower_cube": bounds.lower_cube,
        "budget_d": bounds.budget_d,
    }
    if shape.ndim == 2 and dims[0] >= dims[1]:
        row["per_segment_lower"] = per_segment_lower(*dims)

    exact = exact_qc(shape, max_cells=shape.ncells, max_states=max_states).value
    row["exact_qc"] = exact
    if ceil_lower(bounds.lower()) > exact:
        problems.append(f"lower bound {bounds.lower():.6g} exceeds exact {exact}")

    strategy_name = default_strategy_name(shape)
    evaluated = worst_case(make_strategy(strategy_name, shape), shape, max_states=max_states)
    row["worst_case"] = evaluated.worst_case
    if not evaluated.correct:
        problems.append(f"{strategy_name} fails to determine the target")
    if exact > evaluated.worst_case:
        problems.append(f"exact {exact} exceeds worst_case {evaluated.worst_case}")
    if bounds.budget_d is not None and not within_upper(evaluated.worst_case, bounds.budget_d):
        problems.append(
            f"worst_case {evaluated.worst_case} exceeds budget {bounds.budget_d:.6g}"
        )

    # greedy states multiply too fast on larger 3D grids; optimal replies
    # re-solve subgames per probe, so that cross-check stays tiny
    if shape.ndim <= 2 or shape.ncells <= 16:
        row["best_greedy"] = greedy = best_response(
            shape, GreedyAdversary(shape), max_states=max_states
        )
        if greedy > exact:
            problems.append(f"greedy best response {greedy} exceeds exact {exact}")
        if shape.ndim == 1 and greedy != exact:
            problems.append(f"1D greedy best response {greedy} differs from exact {exact}")

    if shape.ncells <= 12:
        row["best_optimal"] = optimal = best_response(
            shape, extract_optimal_adversary(shape), max_states=max_states
        )
        if optimal != exact:
            problems.append(f"optimal best response {optimal} differs from exact {exact}")

    if shape.ndim == 2 and dims[0] >= 2:
        row["best_diagonal"] = diag = best_response(
            shape, DiagonalAdversary(shape), max_states=max_states
        )
        floor = diagonal_response_floor(*dims)
        if diag < floor:
            problems.append(f"diagonal best response {diag} below run floor {floor}")
        if diag > exact:
            problems.append(f"diagonal best response {diag} exceeds exact {exact}")
    if shape.ndim == 3 and dims[0] >= dims[1] >= dims[2] >= 2:
        row["best_plane3d"] = plane = best_response(
            shape, Plane3DAdversary(shape), max_states=max_states
        )
        if plane > exact:
            problems.append(f"plane best response {plane} exceeds exact {exact}")
    if shape.ndim >= 3 and len(set(dims)) == 1:
        row["best_cube"] = cube = best_response(
            shape, CubeAdversary(shape), max_states=max_states
        )
        floor = cube_response_floor(dims[0], shape.ndim)
        if cube < floor:
            problems.append(f"cube best response {cube} below removal floor {floor}")
        if cube > exact:
            problems.append(f"cube best response {cube} exceeds exact {exact}")

    row["wall_ms"] = int((time.perf_counter() - started) * 1000)
    row["status"] = "ok" if not problems else "; ".join(problems)
    return row


def cmd_verify(args: argparse.Namespace) -> int:
    rows = [_verify_row(shape, args.max_states) for shape in _verify_shapes(args.max_cells)]
    _emit_rows(args, rows, VERIFY_COLUMNS)
    failures = [row for row in rows if row["status"] != "ok"]
    for row in failures:
        print(
            f"FAIL {report.shape_label(row['shape'])}: {row['status']}",
            file=sys.stderr,
        )
    return 1 if failures else 0


def _strategy_applies(name: str, shape: GridShape) -> bool:
    return {"binary1d": shape.ndim == 1,
            "grid2d": shape.ndim == 2,
            "slicing": shape.ndim >= 3}[name]


def _adversary_applies(name: str, shape: GridShape) -> bool:
    dims = shape.dims
    if name == "greedy":
        return True
    if name == "diagonal":
        return shape.ndim == 2 and dims[0] >= 2
    if name == "plane3d":
        return shape.ndim == 3 and dims[0] >= dims[1] >= dims[2] >= 2
    return shape.ndim >= 3 and len(set(dims)) == 1  # cube


def _sweep_row(shape: GridShape, args: argparse.Namespace) -> dict:
    started = time.perf_counter()
    dims = shape.dims
    row: dict = {"shape": dims}
    if shape.ndim == 2 and dims[0] >= dims[1]:
        row["lower_2d"] = lower_2d(*dims)
        row["per_segment_lower"] = per_segment_lower(*dims)
    if shape.ndim == 3 and dims[0] >= dims[1] >= dims[2] >= 2:
        row["lower_3d"] = lower_3d(*dims)
    if shape.ndim >= 3 and len(set(dims)) == 1 and dims[0] >= 2:
        row["lower_cube"] = lower_cube(dims[0], shape.ndim)
    if all(a >= b for a, b in zip(dims, dims[1:])):
        row["budget_d"] = budget_d(dims)

    if shape.ncells <= args.max_cells:
        try:
            row["exact_qc"] = exact_qc(
                shape, max_cells=args.max_cells, max_states=args.max_states
            ).value
        except ResourceCapError:
            pass
    for name in args.strategy or STRATEGY_NAMES:
        if _strategy_applies(name, shape):
            try:
                row[f"worst_{name}"] = worst_case(
                    make_strategy(name, shape), shape, max_states=args.max_states
                ).worst_case
            except ResourceCapError:
                pass
    if shape.ncells <= args.max_best_cells:
        for name in args.adversary or SWEEP_ADVERSARIES:
            if _adversary_applies(name, shape):
                try:
                    row[f"best_{name}"] = best_response(
                        shape, make_adversary(name, shape), max_states=args.max_states
                    )
                except ResourceCapError:
                    pass
    row["wall_ms"] = int((time.perf_counter() - started) * 1000)
    return row


def cmd_sweep(args: argparse.Namespace) -> int:
    axes = [range(lo, hi + 1) for lo, hi in args.range]
    cells = sorted(itertools.product(*axes))
    shapes = [grid_shape(*dims) for dims in cells]
    if args.sort:
        shapes = [grid_shape(*sorted(s.dims, reverse=True)) for s in shapes]
        shapes.sort(key=lambda s: s.dims)
    rows = [_sweep_row(shape, args) for shape in shapes]
    _emit_rows(args, rows, report.SWEEP_COLUMNS)
    return 0


# ------------------------------------------------------------------ parser


def _add_shape_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--shape", type=parse_shape, required=True,
                        metavar="N1xN2x...", help="grid extents, e.g. 6x5x4")
    parser.add_argument("--sort", action="store_true",
                        help="reorder extents non-increasing")


def _add_cap_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-cells", type=_positive_int, default=DEFAULT_MAX_CELLS,
                        help="largest grid the exact solver will attempt")
    parser.add_argument("--max-states", type=_positive_int, default=DEFAULT_MAX_STATES,
                        help="state cap for solver, evaluator, and best response")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridseek",
        description="Adaptive search on grids with one-sided, possibly lying replies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="exact minimax query count of a shape")
    _add_shape_args(solve)
    _add_cap_args(solve)
    solve.add_argument("--symmetry", action=argparse.BooleanOptionalAction, default=True,
                       help="fold symmetric candidate sets in the memo")
    solve.add_argument("--trace", metavar="PATH",
                       help="write the principal line as a JSON-lines transcript")
    solve.set_defaults(func=cmd_solve)

    evaluate = sub.add_parser("evaluate", help="worst case of a strategy over all replies")
    _add_shape_args(evaluate)
    _add_cap_args(evaluate)
    evaluate.add_argument("--strategy", choices=STRATEGY_NAMES,
                          help="strategy to evaluate (default: fits the dimension)")
    evaluate.add_argument("--trace", metavar="PATH",
                          help="write the worst-case witness as a JSON-lines transcript")
    evaluate.set_defaults(func=cmd_evaluate)

    simulate = sub.add_parser("simulate", help="play one strategy/adversary match")
    _add_shape_args(simulate)
    _add_cap_args(simulate)
    simulate.add_argument("--strategy", choices=STRATEGY_NAMES,
                          help="strategy to play (default: fits the dimension)")
    simulate.add_argument("--adversary", default="greedy",
                          choices=("greedy", "diagonal", "plane3d", "cube",
                                   "optimal", "honest"),
                          help="answer policy (default: greedy)")
    simulate.add_argument("--target", type=_parse_target, metavar="A,B,...",
                          help="hidden target, honest adversary only")
    simulate.add_argument("--trace", metavar="PATH",
                          help="write the match as a JSON-lines transcript")
    simulate.set_defaults(func=cmd_simulate)

    bounds = sub.add_parser("bounds", help="every closed-form bound that applies")
    _add_shape_args(bounds)
    bounds.set_defaults(func=cmd_bounds)

    verify = sub.add_parser(
        "verify",
        help="check the bound sandwich and construction floors on every small shape",
    )
    verify.add_argument("--max-cells", type=_positive_int, default=20,
                        help="verify every shape with at most this many cells")
    verify.add_argument("--max-states", type=_positive_int, default=DEFAULT_MAX_STATES,
                        help="state cap for solver, evaluator, and best response")
    verify.add_argument("--out", metavar="PATH", help="write the CSV here instead of stdout")
    verify.add_argument("--plots", action=argparse.BooleanOptionalAction, default=True,
                        help="render figures beside --out")
    verify.set_defaults(func=cmd_verify)

    sweep = sub.add_parser("sweep", help="tabulate bounds and costs over shape ranges")
    sweep.add_argument("--range", type=_parse_range, action="append", required=True,
                       metavar="LO:HI", help="inclusive size range, one per axis")
    sweep.add_argument("--sort", action="store_true",
                       help="reorder each shape's extents non-increasing")
    sweep.add_argument("--strategy", choices=STRATEGY_NAMES, action="append",
                       help="restrict worst-case columns (repeatable; default all)")
    sweep.add_argument("--adversary", choices=SWEEP_ADVERSARIES, action="append",
                       help="restrict best-response columns (repeatable; default all)")
    _add_cap_args(sweep)
    sweep.add_argument("--max-best-cells", type=_positive_int, default=DEFAULT_MAX_CELLS,
                       help="largest grid best response is attempted on")
    sweep.add_argument("--out", metavar="PATH", help="write the CSV here instead of stdout")
    sweep.add_argument("--plots", action=argparse.BooleanOptionalAction, default=True,
                       help="render figures beside --out")
    sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceCapError as exc:
        print(f"gridseek: {exc}", file=sys.stderr)
        return 3
    except ProtocolViolationError as exc:
        print(f"gridseek: {exc}", file=sys.stderr)
        return 1
    except GameStateError as exc:
        print(f"gridseek: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"gridseek: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"gridseek: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
