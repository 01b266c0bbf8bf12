"""Command-line front end.

Subcommands cover the coefficient table, spectral traces, expansion
evaluation, the small-t discrepancy, explicit-formula verification,
counting asymptotics, and figure-data emission.  Grids use the syntax
``start:stop:log|lin:count`` or a comma-separated list.  Exit statuses:
0 ok, 2 validation/usage, 3 accuracy, 4 coverage/transport.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field

from . import counting_asymptotics, expansion, explicit_formula, heat_trace
from .errors import (AccuracyError, CoverageError, DomainError,
                     IntegrityError, TransportError, ValidationError)
from .quadrature import QuadratureSpec
from .zeros import fetch_remote, load_bundled, load_zeros

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_ACCURACY = 3
EXIT_COVERAGE = 4

_COMPUTATIONAL = ("trace", "expansion", "discrepancy", "verify", "counting",
                  "figure")


@dataclass
class RunConfig:
    subcommand: str
    t_grid: tuple[float, ...] | None = None
    a_grid: tuple[float, ...] | None = None
    order: int = 10
    zeros_path: str | None = None
    provider: str | None = None
    provider_count: int = 10000
    precision: str = "standard"
    output: str | None = None
    fmt: str = "csv"
    jobs: int | None = None
    tail: bool = True
    abs_tol: float = 1e-13
    rel_tol: float = 1e-12
    kind: str = "trace_vs_a"
    extras: dict = field(default_factory=dict)

    @property
    def t_values(self) -> tuple[float, ...]:
        if self.t_grid is not None:
            return self.t_grid
        return tuple(1.0 / a for a in self.a_grid)

    @property
    def a_values(self) -> tuple[float, ...]:
        if self.a_grid is not None:
            return self.a_grid
        return tuple(1.0 / t for t in self.t_grid)

    def quad_spec(self) -> QuadratureSpec:
        return QuadratureSpec(abs_tol=self.abs_tol, rel_tol=self.rel_tol)


def parse_grid(text: str) -> tuple[float, ...]:
    """'start:stop:log|lin:count', a comma list, or a single number."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(
                f"grid {text!r} must be start:stop:log|lin:count")
        start, stop = float(parts[0]), float(parts[1])
        mode, count = parts[2], int(parts[3])
        if count < 1:
            raise ValueError("grid count must be >= 1")
        if mode not in ("log", "lin"):
            raise ValueError(f"grid mode must be log or lin, not {mode!r}")
        if count == 1:
            return (start,)
        if mode == "log":
            if start <= 0 or stop <= 0:
                raise ValueError("log grid endpoints must be positive")
            la, lb = math.log(start), math.log(stop)
            inner = (math.exp(la + (lb - la) * i / (count - 1))
                     for i in range(1, count - 1))
            return (start, *inner, stop)
        inner = (start + (stop - start) * i / (count - 1)
                 for i in range(1, count - 1))
        return (start, *inner, stop)
    return tuple(float(v) for v in text.split(","))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zetaheat",
        description="Heat-trace sums over zeta zeros and their expansion.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--t", help="t grid (start:stop:log|lin:count or list)")
    common.add_argument("--a", help="a = 1/t grid, same syntax")
    common.add_argument("--order", type=int, default=10)
    common.add_argument("--zeros-file", dest="zeros_path")
    common.add_argument("--provider",
                        help="named remote zero provider (cached)")
    common.add_argument("--provider-count", type=int, default=10000)
    common.add_argument("--precision", choices=("standard", "extended"),
                        default="standard")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"),
                        default="csv")
    common.add_argument("--output", help="output path (default stdout)")
    common.add_argument("--jobs", type=int, default=None)
    common.add_argument("--no-tail", dest="tail", action="store_false")
    common.add_argument("--abs-tol", type=float, default=1e-13)
    common.add_argument("--rel-tol", type=float, default=1e-12)

    sub.add_parser("coeffs", parents=[common],
                   help="export the exact coefficient table")
    sub.add_parser("trace", parents=[common],
                   help="spectral trace over a t or a grid")
    sub.add_parser("expansion", parents=[common],
                   help="evaluate the truncated expansion")
    sub.add_parser("discrepancy", parents=[common],
                   help="trace minus six-term approximation")
    sub.add_parser("verify", parents=[common],
                   help="explicit-formula identity residuals")
    sub.add_parser("counting", parents=[common],
                   help="counting-asymptotics integrals and residuals")
    fig = sub.add_parser("figure", parents=[common],
                         help="figure datasets over an a grid")
    fig.add_argument("--kind", choices=heat_trace.FIGURE_KINDS,
                     default="trace_vs_a")
    return parser


def parse_args(argv) -> RunConfig:
    """Validated RunConfig, or SystemExit(2) on usage errors."""
    parser = _build_parser()
    ns = parser.parse_args(argv)

    if ns.t and ns.a:
        parser.error("--t and --a are mutually exclusive")
    t_grid = a_grid = None
    try:
        if ns.t:
            t_grid = parse_grid(ns.t)
        if ns.a:
            a_grid = parse_grid(ns.a)
    except ValueError as exc:
        parser.error(str(exc))
    for grid, name in ((t_grid, "--t"), (a_grid, "--a")):
        if grid is not None and any(v <= 0.0 for v in grid):
            parser.error(f"{name} values must be positive")
    if ns.subcommand in _COMPUTATIONAL and ns.subcommand != "coeffs" \
            and t_grid is None and a_grid is None:
        parser.error(f"{ns.subcommand} requires --t or --a")
    if ns.order < 0:
        parser.error("--order must be >= 0")
    if ns.jobs is not None and ns.jobs < 1:
        parser.error("--jobs must be >= 1")

    config = RunConfig(
        subcommand=ns.subcommand, t_grid=t_grid, a_grid=a_grid,
        order=ns.order, zeros_path=ns.zeros_path, provider=ns.provider,
        provider_count=ns.provider_count, precision=ns.precision,
        output=ns.output, fmt=ns.fmt, jobs=ns.jobs, tail=ns.tail,
        abs_tol=ns.abs_tol, rel_tol=ns.rel_tol,
        kind=getattr(ns, "kind", "trace_vs_a"))

    # the discrepancy target sits ~10 decades under the operands: small t
    # forces the extended engine regardless of the flag
    if config.subcommand == "discrepancy" and min(config.t_values) < 1e-2:
        config.precision = "extended"
    return config


def _load_zero_table(config: RunConfig):
    if config.zeros_path:
        return load_zeros(config.zeros_path)
    if config.provider:
        return fetch_remote(config.provider, config.provider_count)
    return load_bundled()


def _emit(config: RunConfig, text: str) -> None:
    if config.output:
        with open(config.output, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header: str, rows) -> str:
    out = io.StringIO()
    out.write(header + "\n")
    for row in rows:
        out.write(",".join(f"{v:.17g}" if isinstance(v, float) else str(v)
                           for v in row) + "\n")
    return out.getvalue()


def _run_coeffs(config: RunConfig) -> str:
    table = expansion.CoefficientTable.build(config.order)
    if config.fmt == "json":
        payload = [{"n": n,
                    "a_exact": table.a[n].exact_str(),
                    "a_float": float(table.a[n]),
                    "b_exact": table.b[n].exact_str(),
                    "b_float": float(table.b[n])}
                   for n in range(config.order + 1)]
        return json.dumps(payload, indent=2) + "\n"
    out = io.StringIO()
    table.export_csv(out)
    return out.getvalue()


def _run_trace(config: RunConfig) -> str:
    zeros = _load_zero_table(config)
    rows = []
    for a in config.a_values:
        rep = heat_trace.spectral_trace(
            1.0 / a, zeros, tail=config.tail, mode=config.precision,
            jobs=config.jobs)
        rows.append((a, rep.total))
    if config.fmt == "json":
        return json.dumps([{"a": a, "value": v} for a, v in rows]) + "\n"
    return _csv("a,value", rows)


def _run_expansion(config: RunConfig) -> str:
    rows = []
    for t in config.t_values:
        ev = expansion.evaluate_expansion(t, config.order)
        rows.append((t, ev.divergent_part, ev.exponential_part,
                     ev.series_part, ev.total))
    if config.fmt == "json":
        return json.dumps([{"t": r[0], "divergent": r[1], "exponential": r[2],
                            "series": r[3], "total": r[4]} for r in rows]) + "\n"
    return _csv("t,divergent,exponential,series,total", rows)


def _run_discrepancy(config: RunConfig) -> str:
    zeros = _load_zero_table(config)
    rows = [(1.0 / t, heat_trace.discrepancy(t, zeros))
            for t in config.t_values]
    if config.fmt == "json":
        return json.dumps([{"a": a, "value": v} for a, v in rows]) + "\n"
    return _csv("a,value", rows)


def _run_verify(config: RunConfig) -> str:
    zeros = _load_zero_table(config)
    reports = explicit_formula.verify_grid(
        config.t_values, zeros, config.quad_spec(), jobs=config.jobs)
    for rep in reports:
        print(f"t={rep.t:g} residual={rep.residual:.3e}", file=sys.stderr)
    if config.fmt == "json":
        return "[" + ",\n ".join(r.to_json() for r in reports) + "]\n"
    return _csv(
        "t,spectral,arch_quadrature,arch_digamma,prime,rhs,residual",
        [(r.t, r.spectral, r.arch_quadrature, r.arch_digamma, r.prime,
          r.rhs, r.residual) for r in reports])


def _run_counting(config: RunConfig) -> str:
    zeros = _load_zero_table(config)
    report = counting_asymptotics.verify_theorem51(
        config.t_values, zeros, config.quad_spec(), jobs=config.jobs)
    if config.fmt == "json":
        return json.dumps([{"t": r.t, "J": r.J, "I": r.I, "R": r.R,
                            "leading": r.leading, "residual": r.residual}
                           for r in report.rows]) + "\n"
    out = io.StringIO()
    report.write_csv(out)
    return out.getvalue()


def _run_figure(config: RunConfig) -> str:
    zeros = _load_zero_table(config)
    rows = heat_trace.figure_data(config.kind, config.a_values, zeros,
                                  jobs=config.jobs)
    if config.fmt == "json":
        return json.dumps([{"a": a, "value": v} for a, v in rows]) + "\n"
    out = io.StringIO()
    heat_trace.write_figure_csv(rows, out)
    return out.getvalue()


_RUNNERS = {
    "coeffs": _run_coeffs,
    "trace": _run_trace,
    "expansion": _run_expansion,
    "discrepancy": _run_discrepancy,
    "verify": _run_verify,
    "counting": _run_counting,
    "figure": _run_figure,
}


def run(config: RunConfig) -> int:
    """Dispatch a validated config; map library errors to exit statuses."""
    try:
        _emit(config, _RUNNERS[config.subcommand](config))
        return EXIT_OK
    except (ValidationError, DomainError) as exc:
        print(f"error: validation: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except AccuracyError as exc:
        print(f"error: accuracy: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except (CoverageError, TransportError, IntegrityError) as exc:
        kind = {CoverageError: "coverage", TransportError: "transport",
                IntegrityError: "integrity"}[type(exc)]
        print(f"error: {kind}: {exc}", file=sys.stderr)
        return EXIT_COVERAGE


def main(argv=None) -> int:
    return run(parse_args(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    sys.exit(main())
