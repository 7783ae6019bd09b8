"""Command-line front end: ``irdpi {info,frontier,prop1,prop2,search}``.

Exit codes: 0 success, 1 configuration or parse error, 2 numerical
invariant failure, 3 capacity error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .errors import CapacityError, IRDPIError, NumericalError, ParseError, UsageError
from .lab import (
    Encoder,
    OptimizerOptions,
    SearchConfig,
    check_prop1,
    check_prop2,
    counterexample_search,
    default_lambda_grid,
    enumerate_deterministic_optimum,
    evaluate_encoder,
    lagrangian_optimize,
    sweep_frontier,
)
from .reports import csv_text, dumps, write_text
from .scenario_io import read_scenario
from .scenarios import build_joint, exclusive_labels, per_site_information

COMMANDS = ("info", "frontier", "prop1", "prop2", "search")
FRONTIER_COLUMNS = ("lambda", "i_y_z_bits", "i_z_s_bits", "risk", "converged", "restarts_used")
SUMMARY_COLUMNS = ("instance", "lhs_bits", "rhs_bits", "slack_bits", "identity_deviation_bits",
                   "minimum_site", "verdict")


@dataclass(frozen=True)
class RunConfig:
    command: str
    scenario_path: str = None
    encoder_spec: str = None
    z_size: int = None
    lam: float = 1.0
    mode: str = "info"
    lambda_min: float = 1e-3
    lambda_max: float = 1e3
    lambda_points: int = 33
    restarts: int = 16
    max_iters: int = 10000
    tolerance: float = 1e-10
    invariance_tolerance: float = 1e-9
    slack_margin: float = 1e-6
    instances: int = 100
    scanner_family: str = "free-random"
    sizes: tuple = (2, 2, 3)
    label: str = None
    site: str = None
    output_dir: str = "."
    seed: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.command != "search" and not self.scenario_path:
            raise UsageError(f"{self.command} needs --scenario")


@dataclass
class _Ctx:
    config: RunConfig
    files: list = field(default_factory=list)

    def meta(self):
        echo = asdict(self.config)
        echo.pop("output_dir")
        return {"tool": "irdpi", "version": __version__, "seed": self.config.seed, "config": echo}

    def write(self, name, text):
        path = os.path.join(self.config.output_dir, name)
        write_text(path, text)
        self.files.append(path)


def _options(cfg: RunConfig) -> OptimizerOptions:
    return OptimizerOptions(z_size=cfg.z_size, restarts=cfg.restarts, max_iters=cfg.max_iters,
                            tolerance=cfg.tolerance, seed=cfg.seed)


def _load_encoder_file(path, x_alphabet):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        rows = np.asarray(data["rows"], dtype=float)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"encoder file {path}: {exc}") from None
    if rows.ndim != 2:
        raise ParseError(f"encoder file {path}: rows must be a 2-D table")
    return Encoder.from_table(x_alphabet, rows)


def resolve_encoder(cfg: RunConfig, joint, default="identity"):
    spec = cfg.encoder_spec or default
    x = joint.alphabet("x")
    z_size = cfg.z_size or x.size
    if spec == "identity":
        if cfg.z_size not in (None, x.size):
            raise UsageError("the identity encoder needs --z-size equal to |X|")
        return Encoder.identity(x)
    if spec == "constant":
        return Encoder.constant(x, z_size)
    if spec == "enumerate":
        return enumerate_deterministic_optimum(joint, z_size, cfg.invariance_tolerance)[0]
    if spec == "optimize":
        return Encoder.from_table(x, lagrangian_optimize(joint, cfg.lam, cfg.mode, _options(cfg)).encoder_table)
    if os.path.exists(spec):
        return _load_encoder_file(spec, x)
    raise UsageError(f"--encoder must be identity, constant, enumerate, optimize or an existing file; got {spec!r}")


def _frontier_rows(points):
    return [(p.lam, p.report.i_y_z, p.report.i_z_s, p.report.risk, p.converged, p.restarts_used)
            for p in points]


def run_info(ctx):
    cfg = ctx.config
    joint = build_joint(read_scenario(cfg.scenario_path))
    enc = resolve_encoder(cfg, joint)
    payload = {"report": evaluate_encoder(joint, enc), "profile": per_site_information(joint),
               "encoder": enc.table}
    ctx.write("report.json", dumps({"meta": ctx.meta(), "payload": payload}))


def run_frontier(ctx):
    cfg = ctx.config
    joint = build_joint(read_scenario(cfg.scenario_path))
    grid = default_lambda_grid(cfg.lambda_min, cfg.lambda_max, cfg.lambda_points)
    fr = sweep_frontier(joint, grid, cfg.mode, _options(cfg))
    ctx.write("frontier.csv", csv_text(FRONTIER_COLUMNS, _frontier_rows(fr.points)))
    ctx.write("pareto.csv", csv_text(FRONTIER_COLUMNS, _frontier_rows(fr.pareto)))
    ctx.write("report.json", dumps({"meta": ctx.meta(), "payload": fr}))


def run_prop1(ctx):
    cfg = ctx.config
    joint = build_joint(read_scenario(cfg.scenario_path))
    enc = resolve_encoder(cfg, joint, default="enumerate")
    rep = check_prop1(joint, enc)
    ctx.write("prop1.json", dumps({"meta": ctx.meta(), "payload": rep, "encoder": enc.table}))


def run_prop2(ctx):
    cfg = ctx.config
    joint = build_joint(read_scenario(cfg.scenario_path))
    label, site = cfg.label, cfg.site
    if label is None:
        found = exclusive_labels(joint)
        if not found:
            raise UsageError("scenario has no site-exclusive label; pass --label/--site")
        label = next(iter(found))
        site = site or found[label]
    elif site is None:
        site = exclusive_labels(joint).get(label)
        if site is None:
            raise UsageError(f"label {label!r} is not site-exclusive")
    enc = resolve_encoder(cfg, joint)
    rep = check_prop2(joint, enc, label, site)
    ctx.write("prop2.json", dumps({"meta": ctx.meta(), "payload": rep, "encoder": enc.table}))


def run_search(ctx):
    cfg = ctx.config
    sc = SearchConfig(instances=cfg.instances, seed=cfg.seed, sizes=tuple(cfg.sizes), z_size=cfg.z_size,
                      invariance_tolerance=cfg.invariance_tolerance, slack_margin=cfg.slack_margin,
                      scanner_family=cfg.scanner_family)
    res = counterexample_search(sc)
    ctx.write("catalog.json", dumps({"meta": ctx.meta(), "payload": res}))
    rows = [(e.instance, e.report.lhs, e.report.rhs, e.report.slack, e.report.identity_deviation,
             e.report.minimum_site, e.report.verdict) for e in res.catalog]
    ctx.write("summary.csv", csv_text(SUMMARY_COLUMNS, rows))


_RUNNERS = {"info": run_info, "frontier": run_frontier, "prop1": run_prop1, "prop2": run_prop2,
            "search": run_search}


def dispatch(config: RunConfig):
    """Run one command; returns ``(exit_code, files_written)``."""
    ctx = _Ctx(config)
    try:
        os.makedirs(config.output_dir, exist_ok=True)
        _RUNNERS[config.command](ctx)
    except NumericalError as exc:
        print(f"irdpi: numerical error: {exc}", file=sys.stderr)
        return 2, ctx.files
    except CapacityError as exc:
        print(f"irdpi: capacity error: {exc}", file=sys.stderr)
        return 3, ctx.files
    except (IRDPIError, OSError) as exc:
        print(f"irdpi: {exc}", file=sys.stderr)
        return 1, ctx.files
    return 0, ctx.files


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _sizes(text):
    try:
        sizes = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three integers like 2,2,3; got {text!r}") from None
    if len(sizes) != 3 or min(sizes) < 1:
        raise argparse.ArgumentTypeError("sizes are |Y|,|S|,|X|, each >= 1")
    return sizes


def build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--scenario", dest="scenario_path", help="scenario file")
    shared.add_argument("--encoder", dest="encoder_spec",
                        help="identity | constant | enumerate | optimize | path to a JSON {'rows': ...} table")
    shared.add_argument("--z-size", type=int)
    shared.add_argument("--lambda", dest="lam", type=float, default=1.0, help="penalty for --encoder optimize")
    shared.add_argument("--mode", choices=("info", "risk"), default="info")
    shared.add_argument("--lambda-min", type=float, default=1e-3)
    shared.add_argument("--lambda-max", type=float, default=1e3)
    shared.add_argument("--lambda-points", type=int, default=33)
    shared.add_argument("--restarts", type=int, default=16)
    shared.add_argument("--max-iters", type=int, default=10000)
    shared.add_argument("--tolerance", type=float, default=1e-10)
    shared.add_argument("--invariance-tolerance", type=float, default=1e-9)
    shared.add_argument("--slack-margin", type=float, default=1e-6)
    shared.add_argument("--instances", type=int, default=100)
    shared.add_argument("--scanner-family", choices=("identical", "independent-random", "free-random"),
                        default="free-random")
    shared.add_argument("--sizes", type=_sizes, default=(2, 2, 3), help="|Y|,|S|,|X| for search")
    shared.add_argument("--label", help="site-exclusive label for prop2")
    shared.add_argument("--site", help="home site of --label for prop2")
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--out", dest="output_dir", default=".")

    parser = _Parser(prog="irdpi", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"irdpi {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "info": "information report for one encoder",
        "frontier": "lambda sweep of the penalized objective",
        "prop1": "worst-site bound audit",
        "prop2": "site-exclusive label audit",
        "search": "randomized search for worst-site bound violations",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[shared], help=helps[name])
    return parser


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    try:
        config = RunConfig(**args)
    except UsageError as exc:
        print(f"irdpi: {exc}", file=sys.stderr)
        return 1
    code, _ = dispatch(config)
    return code


if __name__ == "__main__":
    sys.exit(main())
