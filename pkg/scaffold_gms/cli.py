"""Command-line interface for scaffold-gms."""

import functools
import logging
import sys
from contextlib import nullcontext
from typing import Any, Dict, List, Optional, Tuple

import click
from rich.logging import RichHandler

from .config_manager import OUTPUT_FORMATS, ConfigManager
from .errors import DomainError, ResourceLimitError, ScaffoldError, VerificationError
from .insep import (
    VerificationReport,
    build_realization,
    default_t_range,
    dp_act,
    psi_prod_check,
    realize_associated_order_check,
    realize_freeness_check,
    verify_scaffold,
)
from .localfield import set_term_limit
from .scaffold_core import ScaffoldParams, StructureReport, analyze
from .special import biquad_report, weak_report
from .sweep import b_classes, check_order, sweep
from .ui_manager import UIManager

EXIT_FAILURE = 1
EXIT_USAGE = 2

REPORT_COLUMNS = [
    "p", "n", "b", "h", "b_exponent", "d", "w", "free", "dd", "ee",
    "min_generators", "embedding_dimension", "tolerance_required",
]
BIQUADRATIC_COLUMNS = ["b", "h", "d", "w", "dd", "ee"]
WEAK_COLUMNS = ["h", "h_prime", "m", "k", "free", "min_generators", "embedding_dimension"]

# Row order of the standard biquadratic table: b = 1 then 3, h descending
BIQUADRATIC_ROWS = [(1, 1), (1, 0), (1, -1), (1, -2), (3, 3), (3, 2), (3, 1), (3, 0)]

FORMATS = click.Choice(list(OUTPUT_FORMATS))

ui = UIManager()
logger = logging.getLogger(__name__)


def _fail(error: Dict[str, Any], code: int):
    ui.emit_error(error)
    if ui.err_console.is_terminal:
        ui.display_error(error["message"])
    sys.exit(code)


def handle_errors(func):
    """Map package errors onto the exit-code contract."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except DomainError as e:
            _fail(e.to_dict(), EXIT_USAGE)
        except ResourceLimitError as e:
            _fail(e.to_dict(), EXIT_USAGE)
        except ScaffoldError as e:
            _fail(e.to_dict(), EXIT_FAILURE)
        except AssertionError as e:
            _fail({"kind": "AssertionError", "message": str(e) or "internal assertion failed"}, EXIT_FAILURE)

    return wrapper


class ScaffoldGroup(click.Group):
    """Command group whose usage errors follow the same JSON contract."""

    def main(self, *args, **kwargs):
        if not kwargs.pop("standalone_mode", True):
            return super().main(*args, standalone_mode=False, **kwargs)
        try:
            rv = super().main(*args, standalone_mode=False, **kwargs)
        except click.ClickException as e:
            _fail({"kind": "UsageError", "message": e.format_message()}, EXIT_USAGE)
        except click.exceptions.Abort:
            _fail({"kind": "Aborted", "message": "aborted"}, EXIT_FAILURE)
        sys.exit(rv if isinstance(rv, int) else 0)


def configure_logging(config: ConfigManager):
    handlers: List[logging.Handler] = [RichHandler(console=ui.err_console, show_path=False)]
    log_file = config.get("log_file")
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(level=config.log_level, format="%(message)s", handlers=handlers, force=True)


def parse_ints(value: str) -> Tuple[int, ...]:
    try:
        return tuple(int(part) for part in value.split(","))
    except ValueError:
        raise DomainError(f"expected comma-separated integers, got {value!r}") from None


def parse_t_range(value: Optional[str], order: int, h: int) -> range:
    """'lo:hi' inclusive at both ends; default [h - p^n, h + 2p^n]."""
    if not value:
        return default_t_range(order, h)
    try:
        lo, hi = (int(part) for part in value.split(":"))
    except ValueError:
        raise DomainError(f"t-range must look like lo:hi, got {value!r}") from None
    if lo > hi:
        raise DomainError(f"empty t-range {value!r}")
    return range(lo, hi + 1)


def output_format(ctx: click.Context, fmt: Optional[str]) -> str:
    fmt = fmt or ctx.obj.get("output_format")
    if fmt not in FORMATS.choices:
        raise DomainError(f"unknown output format {fmt!r}")
    return fmt


@click.group(cls=ScaffoldGroup)
@click.pass_context
@handle_errors
def cli(ctx: click.Context):
    """Galois module structure from scaffold data."""
    config = ConfigManager()
    ctx.obj = config
    configure_logging(config)
    set_term_limit(config.term_limit)


@cli.command("analyze")
@click.option("--p", "p", type=int, required=True, help="Prime p")
@click.option("--n", "n", type=int, required=True, help="Rank n")
@click.option("--b", "b", required=True, help="Shift parameters b1,...,bn")
@click.option("--h", "h", type=int, required=True, help="Ideal exponent (use --h=-2 for negatives)")
@click.option("--format", "fmt", type=FORMATS, default=None, help="Output format")
@click.pass_context
@handle_errors
def analyze_command(ctx: click.Context, p: int, n: int, b: str, h: int, fmt: Optional[str]):
    """Structure report for one ideal."""
    fmt = output_format(ctx, fmt)
    report = analyze(h, ScaffoldParams(p, n, parse_ints(b)))
    ui.emit([report.to_dict()], REPORT_COLUMNS, fmt, title=f"p={p} n={n} b={b} h={h}", single=True)


def biquadratic_rows() -> List[Dict[str, Any]]:
    rows = []
    for b1, h in BIQUADRATIC_ROWS:
        report = analyze(h, ScaffoldParams.uniform(2, 2, b1))
        closed = biquad_report(b1, h)
        found = (report.free, report.min_generators, report.embedding_dimension)
        if found != (closed.free, closed.min_generators, closed.embedding_dimension):
            raise VerificationError("biquadratic formula disagrees with the engine", {"b": b1, "h": h})
        rows.append({"b": b1, "h": h, "d": list(report.d), "w": list(report.w), "dd": list(report.dd), "ee": list(report.ee)})
    return rows


def weak_rows(p: int, n: int, limit: int) -> List[Dict[str, Any]]:
    order = check_order(p, n, limit)
    params = ScaffoldParams.uniform(p, n, 1)
    rows = []
    for h in range(order):
        closed = weak_report(p, n, h)
        report = analyze(h, params)
        found = (report.free, report.min_generators, report.embedding_dimension)
        if found != (closed.free, closed.min_generators, closed.embedding_dimension):
            raise VerificationError("weakly ramified formula disagrees with the engine", {"p": p, "n": n, "h": h})
        rows.append({key: getattr(closed, key) for key in WEAK_COLUMNS})
    return rows


@cli.command("table")
@click.option("--preset", type=click.Choice(["biquadratic", "weak"]), required=True, help="Table to print")
@click.option("--p", "p", type=int, default=None, help="Prime p (weak preset)")
@click.option("--n", "n", type=int, default=None, help="Rank n (weak preset)")
@click.option("--format", "fmt", type=FORMATS, default=None, help="Output format")
@click.pass_context
@handle_errors
def table_command(ctx: click.Context, preset: str, p: Optional[int], n: Optional[int], fmt: Optional[str]):
    """Preset tables, cross-checked against the engine."""
    fmt = output_format(ctx, fmt)
    if preset == "biquadratic":
        ui.emit(biquadratic_rows(), BIQUADRATIC_COLUMNS, fmt, title="p=2, n=2, b1 ≡ b2")
        return
    if p is None or n is None:
        raise DomainError("the weak preset needs --p and --n")
    ui.emit(weak_rows(p, n, ctx.obj.max_order), WEAK_COLUMNS, fmt, title=f"b=(1,...,1), p={p}, n={n}")


def run_verification(p: int, n: int, b: int, h: int, t_range: range) -> Tuple[StructureReport, Dict[str, VerificationReport]]:
    real = build_realization(p, n, b)
    report = analyze(h, real.scaffold_params)
    results = {
        "scaffold": verify_scaffold(real, t_range),
        "associated_order": realize_associated_order_check(real, h, report),
        "freeness": realize_freeness_check(real, h, report),
        "psi_products": psi_prod_check(real, h, report),
    }
    return report, results


def trace_lines(p: int, n: int, b: int, t_range: range) -> List[str]:
    real = build_realization(p, n, b)
    lines = []
    for t in t_range:
        lam = real.lam(t)
        lines.append(f"λ_{t} = {lam.trace()}")
        for i, psi in enumerate(real.psi, start=1):
            lines.append(f"  Ψ_{i}·λ_{t} = {dp_act(psi, lam).trace()}")
    return lines


@cli.command("verify")
@click.option("--p", "p", type=int, required=True, help="Prime p")
@click.option("--n", "n", type=int, required=True, help="Rank n")
@click.option("--b", "b", type=int, required=True, help="Shift parameter, 0 < b < p^n")
@click.option("--h", "h", type=int, default=0, show_default=True, help="Ideal exponent")
@click.option("--t-range", "t_range", default=None, help="lo:hi, inclusive")
@click.option("--trace", is_flag=True, help="Print λ_t and Ψ_i·λ_t over the t-range")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default=None, help="Output format")
@click.pass_context
@handle_errors
def verify_command(ctx: click.Context, p: int, n: int, b: int, h: int, t_range: Optional[str], trace: bool, fmt: Optional[str]):
    """Check the inseparable scaffold and compare it with the engine."""
    fmt = fmt or ("json" if ctx.obj.get("output_format") == "json" else "table")
    order = check_order(p, n, ctx.obj.max_order)
    window = parse_t_range(t_range, order, h)
    spinner = ui.display_loading("Verifying realization...") if ui.err_console.is_terminal else nullcontext()
    with spinner:
        report, results = run_verification(p, n, b, h, window)
    passed = all(result.passed for result in results.values())
    lines = trace_lines(p, n, b, window) if trace else []

    if fmt == "json":
        payload: Dict[str, Any] = {
            "p": p, "n": n, "b": b, "h": h,
            "free": report.free,
            "passed": passed,
            "checks": {name: result.to_dict() for name, result in results.items()},
        }
        if trace:
            payload["trace"] = lines
        ui.emit_json(payload)
    else:
        ui.display_header(f"p={p} n={n} b={b} h={h}", subtitle=f"t in [{window.start}, {window.stop - 1}]")
        for line in lines:
            click.echo(line)
        counts = {}
        for name, result in results.items():
            counts[name] = {"run": result.checks_run, "failed": len(result.failures)}
        verdict = "free" if report.free else "not free"
        title = f"all checks pass, {verdict} confirmed" if passed else f"FAILURES, engine says {verdict}"
        ui.display_summary(counts, title, passed)
        for name, result in results.items():
            for failure in result.failures[:20]:
                ui.display_error(f"{name}: {failure.to_dict()}")
    if not passed:
        sys.exit(EXIT_FAILURE)


@cli.command("sweep")
@click.option("--p", "p", type=int, required=True, help="Prime p")
@click.option("--n", "n", type=int, required=True, help="Rank n")
@click.option("--b-mod", "b_mod", type=int, default=None, help="One class of b, all b_i equal to it")
@click.option("--all-b", is_flag=True, help="Every class of b prime to p")
@click.option("--h", "h", type=int, default=None, help="One ideal exponent")
@click.option("--h-all", is_flag=True, help="Every residue of h mod p^n")
@click.option("--jobs", type=int, default=None, help="Worker processes")
@click.option("--format", "fmt", type=FORMATS, default=None, help="Output format")
@click.pass_context
@handle_errors
def sweep_command(
    ctx: click.Context,
    p: int,
    n: int,
    b_mod: Optional[int],
    all_b: bool,
    h: Optional[int],
    h_all: bool,
    jobs: Optional[int],
    fmt: Optional[str],
):
    """One report row per (b, h) cell, ordered by b then h."""
    fmt = output_format(ctx, fmt)
    if (b_mod is None) == (not all_b):
        raise DomainError("give exactly one of --b-mod and --all-b")
    if (h is None) == (not h_all):
        raise DomainError("give exactly one of --h and --h-all")
    check_order(p, n, ctx.obj.max_order)
    bs = b_classes(p, n) if all_b else [b_mod]
    hs = None if h_all else [h]
    spinner = ui.display_loading("Sweeping...") if ui.err_console.is_terminal else nullcontext()
    with spinner:
        rows = sweep(p, n, bs, hs, jobs=jobs or ctx.obj.jobs, limit=ctx.obj.max_order)
    ui.emit(rows, REPORT_COLUMNS, fmt, title=f"p={p} n={n}")


@cli.group("config")
def config_group():
    """Show or change stored settings."""


@config_group.command("show")
@click.pass_context
def config_show(ctx: click.Context):
    """Show the effective configuration."""
    ui.display_mapping(ctx.obj.config, title=str(ctx.obj.config_file))


@config_group.command("set")
@click.argument("key")
@click.argument("value")
@click.pass_context
@handle_errors
def config_set(ctx: click.Context, key: str, value: str):
    """Store a setting in the configuration file."""
    if key not in ConfigManager.DEFAULTS:
        raise DomainError(f"unknown setting {key!r}")
    if not ctx.obj.set(key, value):
        raise DomainError(f"could not store {key}")
    ui.display_success(f"{key} = {ctx.obj.get(key)}")


def main():
    """Entry point for the scaffold-gms command."""
    cli()


if __name__ == "__main__":
    main()
