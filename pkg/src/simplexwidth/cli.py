"""Command-line interface.

Exit codes: 0 ok, 2 input error, 3 invariant/precondition violation,
4 non-convergence, 5 property-suite violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path


from . import __version__
from .ascent import ascend, check_necessary_conditions
from .errors import InputError, NonPositiveWeight, PreconditionError
from .inequalities import EightTuple, simpson_antidote
from .io import dump_simplex, load_simplex, load_spherical_simplex, simplex_to_dict
from .meanwidth import mean_width_cells
from .simplex import EuclideanSimplex, perturbed_regular, regular_simplex, regularity_distance
from .sphere import covers_sphere, project, rng_for
from .strips import (
    COMMON_VERTEX_SIMPLEX,
    DOCUMENTED_TRIANGLE,
    centroid_uniqueness_experiment,
    strip_ratio_experiment,
)
from .suites import SUITES, run_suite

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_NONCONVERGENCE = 4
EXIT_VIOLATION = 5


@dataclass
class RunConfig:
    dim: int = 3
    n_samples: int = 10**6
    seed: int = 0
    tol: float = 1e-3
    max_iters: int = 500
    output_format: str = "json"
    input_path: str | None = None
    normalize: bool = False
    test_mode: bool = False

    def validate(self):
        if self.n_samples <= 0 or self.tol <= 0 or self.max_iters <= 0 or self.dim <= 0:
            raise InputError("numeric options must be positive")
        if self.dim < 3 and not self.test_mode:
            raise InputError("--dim must be at least 3 (or pass --test-mode)")

    def meta(self, dim: int | None = None) -> dict:
        return {
            "seed": self.seed,
            "n_samples": self.n_samples,
            "dim": self.dim if dim is None else dim,
            "version": __version__,
        }


class Output:
    """Collects primary output and writes it once, to a file or stdout."""

    def __init__(self, fmt: str, path: str | None):
        self.fmt = fmt
        self.path = path
        self.buf = io.StringIO()

    def json_line(self, obj: dict):
        self.buf.write(json.dumps(obj, sort_keys=True) + "\n")

    def csv_rows(self, header: list[str], rows: list[list]):
        w = csv.writer(self.buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)

    def flush(self):
        text = self.buf.getvalue()
        if self.path:
            try:
                Path(self.path).write_text(text)
            except OSError as exc:
                raise InputError(f"cannot write {self.path}: {exc.strerror or exc}") from None
        else:
            sys.stdout.write(text)


def _err(msg: str):
    print(f"simplexwidth: {msg}", file=sys.stderr)


def _config(args) -> RunConfig:
    cfg = RunConfig(
        dim=args.dim,
        n_samples=args.samples,
        seed=args.seed,
        tol=args.tol,
        max_iters=args.max_iters,
        output_format=args.output,
        input_path=args.input,
        normalize=args.normalize,
        test_mode=args.test_mode,
    )
    cfg.validate()
    return cfg


def _load(cfg: RunConfig) -> EuclideanSimplex:
    if not cfg.input_path:
        raise InputError("--input PATH is required")
    return load_simplex(cfg.input_path, normalize=cfg.normalize, test_mode=cfg.test_mode)


# --- commands -------------------------------------------------------------------


def cmd_meanwidth(cfg: RunConfig, out: Output) -> int:
    simplex = _load(cfg)
    report = mean_width_cells(simplex, cfg.n_samples, cfg.seed)
    if out.fmt == "csv":
        rows = [
            [i, c.value, c.std_error, m] for i, (c, m) in enumerate(zip(report.per_cell, report.cell_measures))
        ]
        rows.append(["total", report.total.value, report.total.std_error, 1.0])
        out.csv_rows(["cell", "value", "std_error", "measure"], rows)
    else:
        out.json_line(cfg.meta(simplex.dim) | {"report": report.to_dict(), "vertices": simplex.vertices.tolist()})
    return EXIT_OK


def cmd_ascend(cfg: RunConfig, out: Output) -> int:
    simplex = _load(cfg)
    if not covers_sphere(simplex.vertices):
        nc = check_necessary_conditions(simplex)
        raise PreconditionError(
            "start simplex violates the covering condition: the closed hemispheres centred at the "
            f"vertices do not cover the sphere (smallest enclosing radius {nc.ball_radius:.6g} < 1)"
        )
    traj = ascend(simplex, cfg.tol, cfg.max_iters, cfg.n_samples, cfg.seed)
    meta = cfg.meta(simplex.dim)
    if out.fmt == "csv":
        rows = [
            [k, s.report.total.value, s.report.total.std_error, s.regularity, s.movement]
            for k, s in enumerate(traj.steps)
        ]
        out.csv_rows(["iteration", "mean_width", "std_error", "regularity_distance", "max_vertex_movement"], rows)
    else:
        for k, s in enumerate(traj.steps):
            out.json_line(meta | {"iteration": k} | s.to_dict())
        out.json_line(
            meta
            | {
                "summary": True,
                "converged": traj.converged,
                "non_convergence": not traj.converged,
                "iterations": traj.iterations,
                "monotone_3sigma": traj.is_monotone(),
                "final_regularity_distance": traj.final.regularity,
            }
        )
    return EXIT_OK if traj.converged else EXIT_NONCONVERGENCE


def cmd_verify(cfg: RunConfig, out: Output, suite: str, tuple_values=None) -> int:
    if suite not in SUITES:
        raise InputError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
    kwargs = {}
    if suite == "lemma" and tuple_values is not None:
        t = EightTuple(tuple_values[0:2], tuple_values[2:4], tuple_values[4:6], tuple_values[6:8])
        single = simpson_antidote(t)
        if single.hypothesis_holds and not single.conclusion_holds:
            out.json_line(cfg.meta() | {"suite": suite, "counterexample": list(tuple_values)})
            return EXIT_VIOLATION
        kwargs["tuple_values"] = tuple_values
    if suite in ("shear", "switch"):
        kwargs["d"] = cfg.dim
    report = run_suite(suite, cfg.seed, **kwargs)
    if out.fmt == "csv":
        out.csv_rows(
            ["check", "trials", "violations", "worst", "tolerance"],
            [[c.name, c.trials, c.violations, c.worst, c.tolerance] for c in report.checks],
        )
    else:
        out.json_line(cfg.meta() | report.to_dict())
    _summary_table(report)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _summary_table(report):
    lines = [f"{'check':<32}{'trials':>10}{'violations':>12}{'worst':>14}"]
    for c in report.checks:
        lines.append(f"{c.name:<32}{c.trials:>10}{c.violations:>12}{c.worst:>14.3e}")
    print("\n".join(lines), file=sys.stderr)


def cmd_experiment(cfg: RunConfig, out: Output, which: str, s: float, t1: float, t2: float, s_values) -> int:
    if which == "strip-ratio":
        ss = load_spherical_simplex(cfg.input_path) if cfg.input_path else DOCUMENTED_TRIANGLE
        rec = strip_ratio_experiment(ss, s, t1, t2, cfg.n_samples, cfg.seed, test_mode=cfg.test_mode)
        d = rec.to_dict()
        if out.fmt == "csv":
            out.csv_rows(
                ["s", "t1", "t2", "ratio_lower", "ratio_upper", "difference", "difference_se", "verdict"],
                [[rec.s, rec.t1, rec.t2, rec.ratios["lower"], rec.ratios["upper"], rec.difference, rec.difference_se, rec.verdict]],
            )
        else:
            out.json_line(cfg.meta(rec.dim) | {"experiment": which} | d)
    elif which == "centroid-uniqueness":
        ss = load_spherical_simplex(cfg.input_path) if cfg.input_path else COMMON_VERTEX_SIMPLEX
        rec = centroid_uniqueness_experiment(ss, s_values, cfg.n_samples, cfg.seed)
        if out.fmt == "csv":
            out.csv_rows(
                ["s", "slope", "slope_std_error"],
                [[a, b, c] for a, b, c in zip(rec.s_values, rec.slopes, rec.slope_std_errors)],
            )
        else:
            for k, sv in enumerate(rec.s_values):
                out.json_line(
                    cfg.meta(rec.dim)
                    | {"experiment": which, "s": sv, "slope": rec.slopes[k], "slope_std_error": rec.slope_std_errors[k]}
                )
            out.json_line(cfg.meta(rec.dim) | {"experiment": which, "summary": True} | rec.to_dict())
    else:
        raise InputError(f"unknown experiment {which!r}")
    return EXIT_OK


def cmd_generate(cfg: RunConfig, out: Output, kind: str, angle: float) -> int:
    d = cfg.dim
    if kind == "regular":
        simplex = regular_simplex(d)
    elif kind == "random-covering":
        rng = rng_for(cfg.seed, 0x6E)
        while True:
            v = project(rng.standard_normal((d + 1, d)))
            if covers_sphere(v):
                break
        simplex = EuclideanSimplex(v)
    elif kind == "perturbed-regular":
        simplex = perturbed_regular(d, angle, cfg.seed)
    else:
        raise InputError(f"unknown kind {kind!r}")
    if out.path:
        try:
            dump_simplex(simplex, out.path)
        except OSError as exc:
            raise InputError(f"cannot write {out.path}: {exc.strerror or exc}") from None
        out.path = None
        print(f"wrote {kind} simplex (regularity distance {regularity_distance(simplex):.3g})", file=sys.stderr)
    else:
        out.buf.write(json.dumps(simplex_to_dict(simplex), indent=2) + "\n")
    return EXIT_OK


# --- argument parsing -------------------------------------------------------------


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list of numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, default=3)
    common.add_argument("--samples", type=int, default=10**6)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=1e-3)
    common.add_argument("--max-iters", type=int, default=500)
    common.add_argument("--output", choices=("json", "csv"), default="json")
    common.add_argument("--input", metavar="PATH")
    common.add_argument("--out", metavar="PATH", help="write primary output here instead of stdout")
    common.add_argument("--normalize", action="store_true")
    common.add_argument("--test-mode", action="store_true")

    p = argparse.ArgumentParser(prog="simplexwidth", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("meanwidth", parents=[common], help="mean width of a simplex file")
    sub.add_parser("ascend", parents=[common], help="centroid ascent from a simplex file")
    v = sub.add_parser("verify", parents=[common], help="run a property suite")
    v.add_argument("--suite", required=True)
    v.add_argument("--tuple", type=_floats, help="eight numbers injected into the lemma suite")
    e = sub.add_parser("experiment", parents=[common], help="strip-ratio or centroid-uniqueness run")
    e.add_argument("which", choices=("strip-ratio", "centroid-uniqueness"))
    e.add_argument("--s", type=float, default=0.1)
    e.add_argument("--t1", type=float, default=0.2)
    e.add_argument("--t2", type=float, default=0.25)
    e.add_argument("--s-values", type=_floats, default=[0.0, 0.05, 0.1, 0.2])
    g = sub.add_parser("generate", parents=[common], help="write a simplex JSON file")
    g.add_argument("kind", choices=("regular", "random-covering", "perturbed-regular"))
    g.add_argument("--angle", type=float, default=0.3)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else 0
    out = Output(args.output, args.out)
    try:
        cfg = _config(args)
        if args.command == "meanwidth":
            code = cmd_meanwidth(cfg, out)
        elif args.command == "ascend":
            code = cmd_ascend(cfg, out)
        elif args.command == "verify":
            if args.tuple is not None and len(args.tuple) != 8:
                raise InputError("--tuple needs exactly eight numbers")
            code = cmd_verify(cfg, out, args.suite, args.tuple)
        elif args.command == "experiment":
            code = cmd_experiment(cfg, out, args.which, args.s, args.t1, args.t2, args.s_values)
        else:
            code = cmd_generate(cfg, out, args.kind, args.angle)
        out.flush()
        return code
    except InputError as exc:
        _err(f"input error: {exc}")
        return EXIT_INPUT
    except NonPositiveWeight as exc:
        _err(f"precondition violated: {exc}")
        return EXIT_PRECONDITION
    except PreconditionError as exc:
        _err(f"precondition violated: {exc}")
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
