"""Command-line entry point.

    meandist gen sphere --dim N --points K --seed S --out FILE
    meandist gen graph --in EDGES [--weights FILE] --out FILE
    meandist gen suspension --in FILE --latitudes L --out FILE
    meandist compute --in FILE [--invariants md,radius,mf:pow2] [--out REPORT]
    meandist check bg --in FILE --dim N [--grid 64] [--tol T | --statistical]
    meandist report sphere-proximity --in FILE --dim N --eps1 X [--f TAG]

Exit status: 0 success, 1 invalid input space, 2 usage error. Worker
threads come from MEANDIST_THREADS (default: all cores) and never change
the output.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .comparison import bishop_gromov_check, default_radius_grid, sphere_proximity_report
from .errors import KernelError, ValidationError
from .fileio import read_graph, read_space, write_space
from .invariants import compute_invariants
from .mmspace import ModelSphere, make_suspension, sample_sphere

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2
BASIC_INVARIANTS = ("md", "radius", "diameter", "eccentricity", "pointwise")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunConfig:
    command: str
    target: str | None = None
    input: str | None = None
    weights: str | None = None
    dim: int | None = None
    points: int | None = None
    seed: int | None = None
    latitudes: int | None = None
    invariants: list[str] | None = None
    grid: int | None = None
    tol: float | None = None
    statistical: bool | None = None
    epsilon1: float | None = None
    f: str | None = None
    out: str | None = None
    per_point_csv: str | None = None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="meandist", description="Mean-distance invariants and sphere comparison checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate a space and write it as a distance matrix")
    gen_sub = gen.add_subparsers(dest="target", required=True, parser_class=_Parser)
    sphere = gen_sub.add_parser("sphere", help="uniform sample of S^n")
    sphere.add_argument("--dim", type=int, required=True)
    sphere.add_argument("--points", type=int, required=True)
    sphere.add_argument("--seed", type=int, required=True)
    sphere.add_argument("--out", required=True)
    graph = gen_sub.add_parser("graph", help="shortest-path metric of an edge list")
    graph.add_argument("--in", dest="input", required=True)
    graph.add_argument("--weights")
    graph.add_argument("--out", required=True)
    susp = gen_sub.add_parser("suspension", help="spherical suspension of a space")
    susp.add_argument("--in", dest="input", required=True)
    susp.add_argument("--weights")
    susp.add_argument("--latitudes", type=int, required=True)
    susp.add_argument("--out", required=True)

    compute = sub.add_parser("compute", help="compute invariants of a space")
    compute.add_argument("--in", dest="input", required=True)
    compute.add_argument("--weights")
    compute.add_argument("--invariants", default="md,radius,diameter")
    compute.add_argument("--out")
    compute.add_argument("--per-point-csv", dest="per_point_csv")

    check = sub.add_parser("check", help="comparison checks")
    check_sub = check.add_subparsers(dest="target", required=True, parser_class=_Parser)
    bg = check_sub.add_parser("bg", help="Bishop-Gromov inequality against S^n")
    bg.add_argument("--in", dest="input", required=True)
    bg.add_argument("--weights")
    bg.add_argument("--dim", type=int, required=True)
    bg.add_argument("--grid", type=int, default=64)
    mode = bg.add_mutually_exclusive_group()
    mode.add_argument("--tol", type=float)
    mode.add_argument("--statistical", action="store_true", default=None)
    bg.add_argument("--out")

    report = sub.add_parser("report", help="threshold reports")
    report_sub = report.add_subparsers(dest="target", required=True, parser_class=_Parser)
    prox = report_sub.add_parser("sphere-proximity", help="conditional sphere-proximity verdict")
    prox.add_argument("--in", dest="input", required=True)
    prox.add_argument("--weights")
    prox.add_argument("--dim", type=int, required=True)
    prox.add_argument("--eps1", dest="epsilon1", type=float, required=True)
    prox.add_argument("--f")
    prox.add_argument("--out")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    if isinstance(fields.get("invariants"), str):
        fields["invariants"] = [t.strip() for t in fields["invariants"].split(",") if t.strip()]
    return RunConfig(**fields)


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _document(kind: str, config: RunConfig, body: dict) -> dict:
    doc = {"kind": kind, "version": __version__, "config": asdict(config)}
    if config.input:
        doc["input_sha256"] = _sha256(config.input)
    doc.update(body)
    return doc


def _emit(doc: dict, out) -> None:
    text = json.dumps(doc, indent=2, allow_nan=False) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _run_gen(config: RunConfig) -> dict:
    if config.target == "sphere":
        if config.points is None or config.points < 1:
            raise UsageError("--points must be >= 1")
        space = sample_sphere(ModelSphere(config.dim), config.points, config.seed)
    elif config.target == "graph":
        space = read_graph(config.input, config.weights)
    else:
        if config.latitudes is None or config.latitudes < 2:
            raise UsageError("--latitudes must be >= 2")
        space = make_suspension(read_space(config.input, config.weights), config.latitudes)
    write_space(space, config.out)
    return _document("space", config, {"n_points": space.n_points})


def _run_compute(config: RunConfig) -> dict:
    space = read_space(config.input, config.weights)
    wanted = config.invariants or ["md"]
    functions = []
    for tag in wanted:
        if tag.startswith("mf:"):
            functions.append(tag[3:])
        elif tag not in BASIC_INVARIANTS:
            raise UsageError(f"unknown invariant {tag!r}")
    try:
        report = compute_invariants(space, functions)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    full = report.to_dict(per_point=True)
    results = {}
    for tag in wanted:
        if tag == "eccentricity":
            results["per_point_eccentricity"] = full["per_point_eccentricity"]
        elif tag == "pointwise":
            results["per_point_mean"] = full["per_point_mean"]
        elif tag in ("md", "radius", "diameter"):
            results[tag] = full[tag]
    if functions:
        results["generalized_means"] = full["generalized_means"]
    if config.per_point_csv:
        with open(config.per_point_csv, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["index", "label", "mean_distance", "eccentricity"])
            for i, (m, e) in enumerate(zip(report.per_point_mean, report.per_point_eccentricity)):
                writer.writerow([i, space.labels[i], repr(float(m)), repr(float(e))])
    return _document("invariants", config, {"n_points": space.n_points, "results": results})


def _run_check(config: RunConfig) -> dict:
    space = read_space(config.input, config.weights)
    try:
        grid = default_radius_grid(config.grid)
        report = bishop_gromov_check(space, config.dim, grid, tol=config.tol, statistical=config.statistical)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return _document("bishop_gromov", config, {"n_points": space.n_points, "report": report.to_dict()})


def _run_report(config: RunConfig) -> dict:
    space = read_space(config.input, config.weights)
    try:
        report = sphere_proximity_report(space, config.dim, config.epsilon1, config.f)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return _document("sphere_proximity", config, {"n_points": space.n_points, "report": report.to_dict()})


_HANDLERS = {"gen": _run_gen, "compute": _run_compute, "check": _run_check, "report": _run_report}


def run(config: RunConfig) -> int:
    doc = _HANDLERS[config.command](config)
    if config.command == "gen":
        _emit(doc, None)
    else:
        _emit(doc, config.out)
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return run(_config(args))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, KernelError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
