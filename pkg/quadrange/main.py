# main.py
#
# Copyright 2021 Mark Kennedy
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

import argparse
import dataclasses
import json
import logging
import math
import sys
from enum import Enum
from fractions import Fraction
from typing import Optional

import numpy as np

from . import __version__
from . import corpus
from .config import ConfigError, load_settings, parse_seed, settings, use_settings
from .core import Mode, PlaneDirection, PreconditionViolated, ZeroDirection
from .cones import classify_hom_range, nd_check, boundary_line, property_battery
from .convexity import (
    joint_range_convexity, at_most_two_directions, augmented_convexity,
    nonconvex_canonical_form, alternative_check,
)
from .optimize import (
    ConstraintCone, Infeasible, MuStatus, as_cone, solve_dual, slemma_certify, kkt_check,
    existence_report, finiteness_preconditions, solve_no_slater, slater_check,
    epigraph_convexity,
)
from .oracle import validate_certificate
from .pencil import simdiag
from .plot import write_plot
from .problem import AsymmetricMatrix, InputError, Problem, load_problem


EXIT_OK = 0
EXIT_CORPUS = 1
EXIT_INPUT = 2
EXIT_ASYMMETRIC = 3
EXIT_INFEASIBLE = 4
EXIT_UNBOUNDED = 5


def to_json(value):
    """ JSON-ready copy: exact numbers as ints or "p/q", infinities as
    "inf"/"-inf", enums by value, dataclasses as dicts
    """
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else str(value)
    if isinstance(value, int):
        return value
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(value, PlaneDirection):
        return [to_json(v) for v in value.as_point()]
    if isinstance(value, np.ndarray):
        return to_json(value.tolist())
    if dataclasses.is_dataclass(value):
        return {f.name: to_json(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): to_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [to_json(v) for v in value]
        return sorted(items, key=json.dumps) if isinstance(value, (set, frozenset)) else items
    raise TypeError("cannot serialize {!r}".format(value))


def dump(report: dict) -> str:
    return json.dumps(to_json(report), sort_keys=True, indent=2)


def _cone(args, problem: Problem) -> ConstraintCone:
    if args.cone is not None:
        return as_cone(args.cone)
    if problem.cone is not None:
        return problem.cone
    raise InputError("No cone: pass --cone zero|nonneg or set \"cone\" in the file")


def _direction(values) -> Optional[PlaneDirection]:
    if values is None:
        return None
    try:
        return PlaneDirection(*(Fraction(v) for v in values))
    except (ValueError, ZeroDivisionError) as e:
        raise InputError("Bad direction {}: {}".format(values, e)) from e


def _witness(verdict) -> Optional[dict]:
    w = verdict.witness
    if w is None:
        return None
    return {"p": w.p, "q": w.q, "m": w.m, "x_p": w.x_p, "x_q": w.x_q}


def _canonical(pair, d) -> dict:
    form = nonconvex_canonical_form(pair, d)
    return {"d": form.d, "m": form.m, "l": form.l, "t1": form.t1, "t2": form.t2,
            "k": form.k, "shape": form.shape, "C": form.C, "xbar": form.xbar}


def analyze(problem: Problem, direction: Optional[PlaneDirection] = None) -> dict:
    pair = problem.pair
    cone = classify_hom_range(pair)
    nd = nd_check(pair)
    sd = simdiag(pair.A, pair.B)
    verdict = joint_range_convexity(pair)
    try:
        boundary = boundary_line(pair)
    except PreconditionViolated:
        boundary = None
    report = {
        "name": problem.name,
        "n": pair.n,
        "mode": pair.mode,
        "nd": {"holds": nd.holds, "witness": nd.witness, "exact": nd.exact},
        "sd": {"verdict": sd.verdict, "columns": sd.columns, "exact": sd.exact},
        "hom_range": {"kind": cone.kind, "closed": cone.closed, "generators": cone.generators,
                      "normal": cone.normal, "exact": cone.exact},
        "boundary": boundary,
        "convex": verdict.convex,
        "reason": verdict.reason,
        "witness": _witness(verdict),
        "nonconvex_directions": [d.as_point() for d in at_most_two_directions(pair)],
        "battery": property_battery(pair).items(),
    }
    if not verdict.convex:
        report["canonical_form"] = _canonical(pair, verdict.direction)
    if direction is not None:
        augmented = augmented_convexity(pair, direction)
        report["direction"] = {
            "d": direction,
            "convex": augmented.convex,
            "conditions": augmented.conditions,
            "reason": augmented.reason,
            "witness": _witness(augmented),
            "alternative": alternative_check(pair, direction),
        }
        if not augmented.convex:
            report["direction"]["canonical_form"] = _canonical(pair, direction)
    return report


def solve(problem: Problem, P: ConstraintCone) -> dict:
    pair = problem.pair
    report = solve_dual(pair, P)
    out = to_json(report)
    out["mu"] = to_json(report.mu)
    if report.lambda_star is not None:
        out["certificate_valid"] = validate_certificate(pair, report.lambda_star, P, report.nu)
    return out


def certify(problem: Problem, P: ConstraintCone) -> dict:
    pair = problem.pair
    epigraph = epigraph_convexity(pair)
    out = {
        "slater": slater_check(pair, P).ok,
        "slemma": slemma_certify(pair, P),
        "finiteness": finiteness_preconditions(pair, P),
        "epigraph": {"convex": epigraph.verdict.convex,
                     "conditions": epigraph.verdict.conditions,
                     "dual_unbounded": epigraph.dual_unbounded},
    }
    existence = existence_report(pair, P)
    out["existence"] = existence
    if existence.solution is not None:
        out["kkt"] = kkt_check(pair, existence.solution, P)
    try:
        out["no_slater"] = solve_no_slater(pair)
    except PreconditionViolated as e:
        logging.debug("no-Slater route skipped: %s", e)
    return out


def cmd_analyze(args) -> int:
    problem = load_problem(args.file, args.mode)
    print(dump(analyze(problem, _direction(args.dir))))
    return EXIT_OK


def cmd_solve(args) -> int:
    problem = load_problem(args.file, args.mode)
    report = solve(problem, _cone(args, problem))
    print(dump(report))
    return EXIT_UNBOUNDED if report["mu_status"] == MuStatus.MINUS_INFINITY.value else EXIT_OK


def cmd_certify(args) -> int:
    problem = load_problem(args.file, args.mode)
    print(dump(certify(problem, _cone(args, problem))))
    return EXIT_OK


def cmd_plot(args) -> int:
    problem = load_problem(args.file, args.mode)
    out = args.out or problem.name
    files = write_plot(problem.pair, out, args.samples, args.radius, args.seed,
                       _direction(args.dir), problem.name)
    print(dump({"svg": files.svg, "csv": files.csv, "samples": files.samples,
                "viewport": {"box": files.viewport.box, "matrix": files.viewport.matrix}}))
    return EXIT_OK


def cmd_examples(args) -> int:
    if args.action == "list":
        for name in corpus.names():
            print("{:16s} {}".format(name, corpus.get_example(name).description))
        return EXIT_OK
    if args.all:
        results = corpus.run_all()
    elif args.name:
        try:
            results = [corpus.run_example(args.name)]
        except KeyError as e:
            raise InputError(str(e.args[0])) from e
    else:
        raise InputError("examples run needs a NAME or --all")
    for result in results:
        if result.passed:
            print("PASS {}".format(result.name))
        else:
            print("FAIL {}: {}".format(result.name, "; ".join(result.failures)))
    return EXIT_OK if all(r.passed for r in results) else EXIT_CORPUS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadrange", description="Joint ranges of quadratic pairs, duality and S-lemma")
    parser.add_argument("-d", "--debug", action="store_true", help="Verbose output")
    parser.add_argument("--config", help="YAML settings override file")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def problem_command(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="problem file (JSON or YAML)")
        modes = p.add_mutually_exclusive_group()
        modes.add_argument("--exact", dest="mode", action="store_const", const=Mode.EXACT,
                           help="load every entry exactly")
        modes.add_argument("--float", dest="mode", action="store_const", const=Mode.FLOAT,
                           help="load every entry as a float")
        p.add_argument("--seed", type=parse_seed, help="oracle seed (decimal or 0x hex)")
        p.set_defaults(func=fn)
        return p

    p = problem_command("analyze", cmd_analyze, "range geometry, convexity and pencil properties")
    p.add_argument("--dir", nargs=2, metavar=("D1", "D2"), help="also check F + R+ d")
    for name, fn, help_text in (("solve", cmd_solve, "dual bound and primal recovery"),
                                ("certify", cmd_certify, "S-lemma, KKT and existence reports")):
        p = problem_command(name, fn, help_text)
        p.add_argument("--cone", choices=[c.value for c in ConstraintCone])
    p = problem_command("plot", cmd_plot, "CSV and SVG of the sampled joint range")
    p.add_argument("--out", help="output path stem")
    p.add_argument("--samples", type=int)
    p.add_argument("--radius", type=float)
    p.add_argument("--dir", nargs=2, metavar=("D1", "D2"), help="shade F + R+ d")

    p = sub.add_parser("examples", help="built-in example corpus")
    p.add_argument("action", choices=["list", "run"])
    p.add_argument("name", nargs="?")
    p.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.debug else logging.WARNING)

    try:
        loaded = load_settings(args.config)
        if getattr(args, "seed", None) is not None:
            loaded["oracle"]["seed"] = args.seed
        use_settings(loaded)
        logging.debug("settings %s", settings)
        return args.func(args)
    except AsymmetricMatrix as e:
        logging.error("%s", e)
        return EXIT_ASYMMETRIC
    except (InputError, ConfigError, ZeroDirection) as e:
        logging.error("%s", e)
        return EXIT_INPUT
    except Infeasible as e:
        logging.error("infeasible: %s", e)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
