"""``drsphere`` command line: trace, classify, basin, certify, verify.

Exit codes: 0 success, 1 contract or certificate failure, 2 orbit undecided
or diverged, 3 singular orbit, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from typing import Optional, Sequence

from .core import ALPHA, State2D
from .regions import classify, contraction_factor, membership

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_UNDECIDED = 2
EXIT_SINGULAR = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let "-0.5,0.4" through as a value, not an option
        self._negative_number_matcher = re.compile(
            r"^-(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?(,[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?)?$")

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}")
    try:
        a, b = float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a pair of numbers: {text!r}") from None
    if not (math.isfinite(a) and math.isfinite(b)):
        raise argparse.ArgumentTypeError(f"non-finite value in {text!r}")
    return a, b


def _range(text: str) -> tuple[float, float]:
    a, b = _pair(text)
    if a > b:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return a, b


def _alpha(text: str) -> float:
    if text.replace(" ", "").lower() in ("1/sqrt2", "1/sqrt(2)", "sqrt2/2", "sqrt(2)/2"):
        return ALPHA
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad alpha {text!r}") from None
    if not (math.isfinite(v) and v >= 0):
        raise argparse.ArgumentTypeError("alpha must be finite and >= 0")
    return v


def _positive(kind):
    def parse(text: str):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad value {text!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
        return v
    return parse


def _common(p: argparse.ArgumentParser, tol: float, max_iter: int) -> None:
    p.add_argument("--alpha", type=_alpha, default=ALPHA,
                   help="height of the line y = alpha (default 1/sqrt2)")
    p.add_argument("--tol", type=_positive(float), default=tol)
    p.add_argument("--max-iter", type=_positive(int), default=max_iter)


def _output(p: argparse.ArgumentParser, formats: Sequence[str], default: str) -> None:
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("-o", "--output", metavar="PATH", help="write to PATH instead of stdout")


def build_parser() -> Parser:
    parser = Parser(prog="drsphere", description="Douglas-Rachford iteration on a circle and a line.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("trace", help="follow one orbit")
    p.add_argument("--start", type=_pair, required=True, metavar="X,Y")
    _common(p, 1e-12, 10_000)
    _output(p, ["table", "csv", "json", "svg"], "table")
    p.add_argument("--figure", metavar="PATH", help="also render a matplotlib figure")
    p.add_argument("--no-guides", action="store_true", help="omit circle/diagonal/line guides in SVG")

    p = sub.add_parser("classify", help="region label of points")
    p.add_argument("points", type=_pair, nargs="+", metavar="X,Y")

    p = sub.add_parser("basin", help="sample the basin of attraction on a grid")
    p.add_argument("--x-range", type=_range, default=(-2.0, 2.0), metavar="LO,HI")
    p.add_argument("--y-range", type=_range, default=(-2.0, 2.0), metavar="LO,HI")
    p.add_argument("--nx", type=_positive(int), default=100)
    p.add_argument("--ny", type=_positive(int), default=100)
    p.add_argument("--workers", type=_positive(int), default=1)
    _common(p, 1e-12, 10_000)
    _output(p, ["summary", "csv", "json", "svg"], "summary")
    p.add_argument("--figure", metavar="PATH", help="also render a matplotlib figure")
    p.add_argument("--guides", action="store_true", help="draw region guide curves in SVG")

    p = sub.add_parser("certify", help="run exact / interval certificates")
    p.add_argument("claim", nargs="?", default="all", help="claim id or 'all'")
    p.add_argument("--alpha", type=_alpha, default=ALPHA)
    p.add_argument("--no-timings", action="store_true",
                   help="omit wall times so reports are byte-reproducible")
    p.add_argument("-o", "--output", metavar="PATH")

    p = sub.add_parser("verify", help="sampled region contracts or the theorem grid")
    p.add_argument("suite", choices=["lemmas", "theorem-main"])
    p.add_argument("--samples", type=_positive(int), default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step", type=_positive(float), default=0.01)
    _common(p, 1e-9, 1000)
    p.add_argument("-o", "--output", metavar="PATH")
    return parser


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    from .export import ExportError

    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as e:
        raise ExportError(f"cannot write {path}: {e.strerror or e}") from e


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _require_certified(alpha: float, command: str) -> None:
    if alpha != ALPHA:
        raise UsageError(f"{command} is only defined for alpha = 1/sqrt2 (got {alpha!r})")


# -- subcommands ------------------------------------------------------------

def cmd_trace(args) -> int:
    from .basin import Outcome, TrajectoryConfig, run_trajectory
    from .export import Format, render

    cfg = TrajectoryConfig(State2D(*args.start), args.alpha, args.tol, args.max_iter,
                           record_orbit=True)
    res = run_trajectory(cfg)
    if args.format == "table":
        xs = math.sqrt(max(0.0, 1 - args.alpha ** 2)) if args.alpha != ALPHA else ALPHA
        lines = [f"{'n':>6}  {'x':>24}  {'y':>24}  {'rho':>24}  {'region':<12}  {'dist2':>24}"]
        for n, (x, y) in enumerate(res.orbit):
            tx = xs if x >= 0 else -xs
            d2 = (x - tx) ** 2 + (y - args.alpha) ** 2
            lines.append(f"{n:>6}  {x:>24.17g}  {y:>24.17g}  {math.hypot(x, y):>24.17g}  "
                         f"{classify(x, y).label:<12}  {d2:>24.17g}")
        lines.append(f"# outcome={res.outcome.value} iterations={res.iterations} "
                     f"p0_visits={res.p0_visits} first_p1_hit={res.first_p1_hit} "
                     f"ratio_violations={res.violations}")
        text = "\n".join(lines) + "\n"
    else:
        text = render(res, Format(args.format), guides=not args.no_guides)
    _emit(text, args.output)
    if args.figure:
        from .plotting import plot_orbit

        plot_orbit(res, args.figure)
    if res.outcome in (Outcome.CONVERGED_RIGHT, Outcome.CONVERGED_LEFT):
        return EXIT_OK
    if res.outcome is Outcome.SINGULAR:
        return EXIT_SINGULAR
    return EXIT_UNDECIDED


def cmd_classify(args) -> int:
    rows = []
    for x, y in args.points:
        r = classify(x, y)
        rows.append({"x": x, "y": y, "region": r.label,
                     "predicates": [m.label for m in membership(x, y)],
                     "contraction_factor": contraction_factor(r)})
    sys.stdout.write(_dumps(rows))
    return EXIT_OK


def cmd_basin(args) -> int:
    import numpy as np

    from .basin import BasinGrid, Outcome, sample_basin
    from .export import Format, render

    grid = sample_basin(BasinGrid(args.x_range, args.y_range, args.nx, args.ny,
                                  args.alpha, args.tol, args.max_iter), workers=args.workers)
    c = grid.cells
    if args.format == "summary":
        right = c.outcome == Outcome.CONVERGED_RIGHT.code
        left = c.outcome == Outcome.CONVERGED_LEFT.code
        undecided = c.outcome == Outcome.UNDECIDED.code
        summary = {
            "grid": {"x_range": list(grid.x_range), "y_range": list(grid.y_range),
                     "nx": grid.nx, "ny": grid.ny, "alpha": grid.alpha,
                     "tol": grid.tol, "max_iter": grid.max_iter},
            "counts": grid.outcome_counts(),
            "right_with_x0_le_0": int((right & (c.x0 <= 0)).sum()),
            "left_with_x0_ge_0": int((left & (c.x0 >= 0)).sum()),
            "undecided_with_p0_visits": int((undecided & (c.p0_visits > 0)).sum()),
            "max_iterations": int(c.iterations.max()),
            "ratio_violations": int(c.violations.sum()),
            "max_p0_visits": int(c.p0_visits.max()),
            "converged_fraction": float(np.mean(right | left)),
        }
        text = _dumps(summary)
    else:
        text = render(grid, Format(args.format), guides=args.guides)
    _emit(text, args.output)
    if args.figure:
        from .plotting import plot_basin

        plot_basin(grid, args.figure)
    return EXIT_OK


def cmd_certify(args) -> int:
    from .certify.claims import CLAIMS, run_claims

    _require_certified(args.alpha, "certify")
    if args.claim != "all" and args.claim not in CLAIMS:
        raise UsageError(f"unknown claim {args.claim!r}; known: all, {', '.join(CLAIMS)}")
    ids = None if args.claim == "all" else [args.claim]
    certs = run_claims(ids)
    report = {"claims": [c.to_dict(timings=not args.no_timings) for c in certs],
              "all_proved": all(c.proved for c in certs)}
    _emit(_dumps(report), args.output)
    return EXIT_OK if report["all_proved"] else EXIT_FAIL


def cmd_verify(args) -> int:
    _require_certified(args.alpha, "verify")
    if args.suite == "theorem-main":
        from .basin import verify_theorem_main

        rep = verify_theorem_main(args.step, args.tol, args.max_iter)
        ok = rep.all_converged and rep.violations == 0
        body = {"suite": "theorem-main", "passed": ok, **rep.to_dict()}
        _emit(_dumps(body), args.output)
        if not ok and rep.failures:
            x, y, outcome = rep.failures[0]
            print(f"witness: start ({x!r}, {y!r}) ended {outcome}", file=sys.stderr)
        return EXIT_OK if ok else EXIT_FAIL

    from .verify import run_contract_suites

    results = run_contract_suites(args.samples, args.seed, args.alpha)
    ok = all(r.passed for r in results)
    body = {"suite": "lemmas", "seed": args.seed, "samples": args.samples, "passed": ok,
            "results": [r.to_dict() for r in results]}
    _emit(_dumps(body), args.output)
    for r in results:
        if not r.passed:
            print(f"witness [{r.name}]: {json.dumps(r.witness)}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "trace": cmd_trace,
    "classify": cmd_classify,
    "basin": cmd_basin,
    "certify": cmd_certify,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    from .export import ExportError

    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"drsphere {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ExportError as e:
        print(f"drsphere {args.command}: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
