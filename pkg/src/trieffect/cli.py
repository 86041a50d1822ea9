"""Command-line front end: simulate, estimate, true-effects.

Exit codes: 0 success, 1 usage error, 2 data/numeric error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .basis import BasisSpec
from .designs import SimulationDesign
from .errors import TrieffectError
from .io import ColumnMapping, load_csv, render, write_outputs
from .oracle import true_effects
from .simulate import run_study, standard_estimator
from .types import EFFECT_NAMES


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="trieffect", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a repetition study on a built-in design")
    sim.add_argument("--design", type=int, required=True, choices=(1, 2, 3, 4))
    sim.add_argument("--n", type=int, required=True, help="sample size per repetition")
    sim.add_argument("--reps", type=int, required=True)
    sim.add_argument("--estimators", default="c,v1",
                     help="comma list of c, v1, v2, v3, v:<specfile>")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", help="output file (default stdout)")
    sim.add_argument("--format", choices=("json", "text"), default="json")
    sim.add_argument("--threads", type=int, default=1, help="parallel repetitions")
    sim.add_argument("--true-draws", type=int, default=1_000_000,
                     help="MC draws for the true-effect oracle when no closed form exists")

    est = sub.add_parser("estimate", help="estimate the decomposition from a CSV file")
    est.add_argument("--data", required=True)
    est.add_argument("--y", required=True, help="outcome column, or ln(col)")
    est.add_argument("--d", required=True, help="binary treatment column")
    est.add_argument("--m", required=True, help="binary mediator column, or threshold(col,c)")
    est.add_argument("--x", default="", help="comma list of covariate columns")
    est.add_argument("--estimator", default="c", help="c, v, v1, v2, v3 or v:<specfile>")
    est.add_argument("--basis", help="basis term list for --estimator v")
    est.add_argument("--drop-collinear", action="store_true")
    est.add_argument("--out", help="output file (default stdout)")
    est.add_argument("--format", choices=("json", "text"), default="json")

    tru = sub.add_parser("true-effects", help="true effects of a built-in design")
    tru.add_argument("--design", type=int, required=True, choices=(1, 2, 3, 4))
    tru.add_argument("--method", choices=("auto", "analytic", "mc"), default="auto")
    tru.add_argument("--draws", type=int, default=1_000_000)
    tru.add_argument("--seed", type=int, default=0)
    tru.add_argument("--out", help="output file (default stdout)")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _resolve_estimator(label: str, basis_text: str | None, drop_collinear: bool = False):
    if label.startswith("v:"):
        spec = BasisSpec.from_text(Path(label[2:]).read_text(encoding="utf-8"))
        return standard_estimator("v", spec, drop_collinear)
    if label == "v":
        if basis_text is None:
            raise UsageError("--estimator v requires --basis")
        return standard_estimator("v", basis_text, drop_collinear)
    try:
        return standard_estimator(label, basis_text, drop_collinear)
    except ValueError as err:
        raise UsageError(str(err)) from None


def _cmd_simulate(args) -> int:
    labels = [s.strip() for s in args.estimators.split(",") if s.strip()]
    if not labels:
        raise UsageError("--estimators must name at least one estimator")
    basis = None
    for label in labels:
        if label.startswith("v:"):
            basis = BasisSpec.from_text(Path(label[2:]).read_text(encoding="utf-8"))
        elif label not in ("c", "v1", "v2", "v3"):
            raise UsageError(f"unknown estimator label {label!r}")
    design = SimulationDesign(args.design)
    report = run_study(
        design,
        n=args.n,
        reps=args.reps,
        estimators=labels,
        seed=args.seed,
        basis=basis,
        threads=args.threads,
        true_draws=args.true_draws,
    )
    _emit(render(report, args.format), args.out)
    return 0


def _cmd_estimate(args) -> int:
    x = tuple(s.strip() for s in args.x.split(",") if s.strip())
    mapping = ColumnMapping(y=args.y, d=args.d, m=args.m, x=x)
    result = load_csv(args.data, mapping)
    if result.dropped_rows:
        print(
            f"dropped {result.dropped_rows} of {result.total_rows} rows with missing values",
            file=sys.stderr,
        )
    estimator = _resolve_estimator(args.estimator, args.basis, args.drop_collinear)
    estimates = estimator(result.dataset)
    _emit(render(estimates, args.format), args.out)
    return 0


def _cmd_true_effects(args) -> int:
    design = SimulationDesign(args.design)
    effects, mc_se = true_effects(design, args.method, draws=args.draws, seed=args.seed)
    payload = {
        "design": args.design,
        "method": "analytic" if mc_se is None else "mc",
        "effects": {name: getattr(effects, name) for name in EFFECT_NAMES},
    }
    if mc_se is not None:
        payload["mc_se"] = {name: getattr(mc_se, name) for name in EFFECT_NAMES}
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "estimate": _cmd_estimate,
    "true-effects": _cmd_true_effects,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except SystemExit as err:  # --help
        return int(err.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (TrieffectError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
