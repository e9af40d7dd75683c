"""Command-line interface for symlab."""

from __future__ import annotations

import json
import sys
import time
import traceback
from pathlib import Path
from typing import TYPE_CHECKING, Any, NoReturn

import click
from rich.console import Console
from rich.table import Table

from symlab import __version__
from symlab._breaking import BreakingConfig, break_search_sync, morse_experiment
from symlab._config import (
    ExperimentConfig,
    build_config_from_dict,
    find_config_file,
    load_config_from_file,
    merge_configs,
)
from symlab._logging import configure_logging
from symlab._lyapunov_schmidt import preservation_check_sync
from symlab._mawhin import (
    GapCertificate,
    canonical_nonlinearity,
    certify_gap,
    contraction_solve,
    derivative_range,
    newton_solve,
)
from symlab._operator import spectrum_table
from symlab._records import RunManifest, emit_record, record_payload
from symlab._registry import NonlinearityRegistry
from symlab._utils._errors import create_error_context
from symlab._utils._serialization import encode_json
from symlab.exceptions import NumericalError, SymlabError

if TYPE_CHECKING:
    from collections.abc import Callable

    from symlab._trig import Nonlinearity

EXIT_OK = 0
EXIT_VERDICT_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

DEFAULT_OUT_DIR = Path("results")

console = Console(stderr=True)


def handle_error(error: Exception, verbose: bool, operation: str, config_path: Path | None = None) -> NoReturn:
    """Report an error and exit with its exit code.

    Configuration and usage errors exit with 2, numerical failures (and unexpected errors raised by the
    numerical stack) with 3.
    """
    if isinstance(error, NumericalError):
        console.print(f"[red]Numerical failure:[/red] {error}", style="bold")
        code = EXIT_NUMERICAL
    elif isinstance(error, SymlabError):
        console.print(f"[red]Error:[/red] {error}", style="bold")
        code = EXIT_USAGE
    else:
        console.print(f"[red]Unexpected error:[/red] {type(error).__name__}: {error}", style="bold")
        code = EXIT_NUMERICAL
    if verbose:
        context = create_error_context(operation=operation, config_path=config_path, error=error)
        console.print("\n[dim]Context:[/dim]")
        console.print(json.dumps(context, indent=2, default=str))
        if not isinstance(error, SymlabError):
            traceback.print_exc()
    sys.exit(code)


def _load_config(config: Path | None, seed: int | None, verbose: bool) -> tuple[ExperimentConfig, Path | None]:
    config_path = config or find_config_file()
    file_config: dict[str, Any] = {}
    if config_path:
        file_config = load_config_from_file(config_path)
        if verbose:
            console.print(f"[dim]Using configuration from: {config_path}[/dim]")
    if seed is not None:
        file_config = merge_configs(file_config, {"seed": seed})
    return build_config_from_dict(file_config), config_path


def _gap_certificate(nl: Nonlinearity, q: float | None, p: float | None, radius: float) -> GapCertificate:
    if q is None or p is None:
        sampled_q, sampled_p = derivative_range(nl, -radius, radius)
        q = sampled_q if q is None else q
        p = sampled_p if p is None else p
    return certify_gap(q, p)


def _run(
    command: str,
    config: Path | None,
    out: Path,
    seed: int | None,
    as_json: bool,
    verbose: bool,
    experiment: Callable[[ExperimentConfig], tuple[Any, bool | None]],
) -> None:
    configure_logging(verbose)
    config_path: Path | None = config
    try:
        experiment_config, config_path = _load_config(config, seed, verbose)
        started = time.perf_counter()
        report, verdict = experiment(experiment_config)
        wall_time_ms = int((time.perf_counter() - started) * 1000)
        manifest = RunManifest.from_config(command, experiment_config, wall_time_ms)
        paths = emit_record(report, out, manifest)
        if as_json:
            click.echo(encode_json(record_payload(report, manifest)).decode())
        for path in paths:
            console.print(f"[green]✓[/green] Wrote {path}")
    except Exception as e:  # noqa: BLE001
        handle_error(e, verbose, command, config_path)

    if verdict is False:
        console.print(f"[yellow]{command}: verdict failed[/yellow]")
        sys.exit(EXIT_VERDICT_FAIL)


def _common_options(fn: Callable[..., Any]) -> Callable[..., Any]:
    options = [
        click.option("--config", type=click.Path(exists=True, path_type=Path), help="Experiment configuration file"),
        click.option(
            "--out",
            type=click.Path(file_okay=False, path_type=Path),
            default=DEFAULT_OUT_DIR,
            show_default=True,
            help="Directory for JSON records and CSV grids",
        ),
        click.option("--seed", type=click.IntRange(min=0), help="Override the configured seed"),
        click.option("--json", "as_json", is_flag=True, help="Also write the record to stdout"),
        click.option("-v", "--verbose", is_flag=True, help="Verbose output for debugging"),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


@click.group(invoke_without_command=True)
@click.version_option(version=__version__, prog_name="symlab")
@click.pass_context
def cli(ctx: click.Context) -> None:
    """Symlab - symmetry of periodic solutions of -u'' - g(u) = f.

    Solve the periodic problem, check symmetry preservation, compute Morse indices, and search for
    symmetry-breaking solutions.
    """
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


@cli.command()
@_common_options
def solve(config: Path | None, out: Path, seed: int | None, as_json: bool, verbose: bool) -> None:
    """Solve the periodic problem for the configured g and f."""

    def experiment(cfg: ExperimentConfig) -> tuple[Any, bool | None]:
        nl = cfg.nonlinearity_entry().nonlinearity
        section = cfg.solve
        f = section.forcing.to_trig(cfg.J)
        if section.method == "newton":
            report = newton_solve(
                nl, f, None, cfg.tol, section.max_iter, orientation=cfg.orientation, grid_size=cfg.N
            )
        else:
            cert = _gap_certificate(
                canonical_nonlinearity(nl, cfg.orientation), section.q, section.p, section.range_radius
            )
            report = contraction_solve(
                nl, f, cert, None, cfg.tol, section.max_iter, orientation=cfg.orientation, grid_size=cfg.N
            )
        return report, None

    _run("solve", config, out, seed, as_json, verbose, experiment)


@cli.command("preserve-check")
@_common_options
def preserve_check(config: Path | None, out: Path, seed: int | None, as_json: bool, verbose: bool) -> None:
    """Check that the solution for a 2π/s-periodic f keeps the symmetry and is unique.

    Exits with 1 when the symmetry is not preserved or the multi-start probe finds distinct solutions.
    """

    def experiment(cfg: ExperimentConfig) -> tuple[Any, bool | None]:
        nl = cfg.nonlinearity_entry().nonlinearity
        section = cfg.preserve
        canonical = canonical_nonlinearity(nl, cfg.orientation)
        cert = _gap_certificate(canonical, section.q, section.p, section.range_radius)
        report = preservation_check_sync(
            nl,
            section.forcing.to_trig(cfg.J),
            section.s,
            cert,
            section.n_starts,
            cfg.seed,
            cfg.tol,
            orientation=cfg.orientation,
            grid_size=cfg.N,
        )
        return report, report.verdict

    _run("preserve-check", config, out, seed, as_json, verbose, experiment)


def _breaking_config(cfg: ExperimentConfig) -> BreakingConfig:
    section = cfg.breaking
    return BreakingConfig(
        nl=cfg.nonlinearity_entry().nonlinearity,
        r=section.r,
        s=section.s,
        J=cfg.J,
        n_starts=section.n_starts,
        seed=cfg.seed,
        tol=cfg.tol,
        defect_threshold=section.defect_threshold,
        orientation=cfg.orientation,
        search_lo=section.search_lo,
        search_hi=section.search_hi,
        n_samples=section.n_samples,
        delta_max=section.delta_max,
        eps=section.eps,
        probe_radius=section.probe_radius,
        grid_size=cfg.N,
    )


@cli.command("break-search")
@_common_options
def break_search(config: Path | None, out: Path, seed: int | None, as_json: bool, verbose: bool) -> None:
    """Plant a symmetric solution past an eigenvalue crossing and search for asymmetric ones.

    Finding (or not finding) an asymmetric solution is a reported outcome, not a verdict.
    """

    def experiment(cfg: ExperimentConfig) -> tuple[Any, bool | None]:
        record = break_search_sync(_breaking_config(cfg))
        console.print(
            f"m0 = {record.m0}, m1 = {record.m1}, orbit classes = {len(record.solutions)}, "
            f"broke_symmetry = {record.broke_symmetry}"
        )
        return record, None

    _run("break-search", config, out, seed, as_json, verbose, experiment)


@cli.command()
@_common_options
def morse(config: Path | None, out: Path, seed: int | None, as_json: bool, verbose: bool) -> None:
    """Morse indices of the window profiles around the crossing, across truncation orders.

    Exits with 1 when an index changes with the truncation order or a form is degenerate.
    """

    def experiment(cfg: ExperimentConfig) -> tuple[Any, bool | None]:
        result = morse_experiment(_breaking_config(cfg), cfg.morse.orders, cfg.morse.degeneracy_tol)
        return result, result.stable and result.nondegenerate

    _run("morse", config, out, seed, as_json, verbose, experiment)


@cli.command()
@click.option("--max-j", type=click.IntRange(min=0), default=10, show_default=True, help="Largest mode index")
@click.option("--json", "as_json", is_flag=True, help="Write the table as JSON to stdout")
def spectrum(max_j: int, as_json: bool) -> None:
    """Eigenvalues j² of -d²/dt² with periodic conditions and their multiplicities."""
    rows = spectrum_table(max_j)
    if as_json:
        click.echo(encode_json(rows).decode())
        return
    table = Table(title="σ(L)")
    for column in ("j", "λ_j", "multiplicity"):
        table.add_column(column, justify="right")
    for row in rows:
        table.add_row(str(row["j"]), f"{row['lambda']:g}", str(row["multiplicity"]))
    Console().print(table)


@cli.command("audit-g")
@click.argument("name", required=False)
@click.option("--param", "params", multiple=True, help="Family parameter as key=value")
@click.option("--config", type=click.Path(exists=True, path_type=Path), help="Audit the configured nonlinearity")
@click.option("--json", "as_json", is_flag=True, help="Write the audit reports as JSON to stdout")
@click.option("-v", "--verbose", is_flag=True, help="Verbose output for debugging")
def audit_g(name: str | None, params: tuple[str, ...], config: Path | None, as_json: bool, verbose: bool) -> None:
    """Check g' against centered finite differences of g.

    Audits NAME (with --param overrides), the nonlinearity of --config, or every registered family.
    Exits with 1 when an audit fails.
    """
    configure_logging(verbose)
    try:
        overrides: dict[str, float] = {}
        for param in params:
            key, sep, value = param.partition("=")
            if not sep:
                raise click.BadParameter(f"expected key=value, got {param!r}", param_hint="--param")
            try:
                overrides[key.strip()] = float(value)
            except ValueError as e:
                raise click.BadParameter(f"{value!r} is not a number", param_hint="--param") from e
        if config is not None and name is None:
            cfg = build_config_from_dict(load_config_from_file(config))
            targets = [(cfg.nonlinearity.name, dict(cfg.nonlinearity.params))]
        elif name is not None:
            targets = [(name, overrides)]
        else:
            targets = [(family, {}) for family in NonlinearityRegistry.names()]
        reports = [NonlinearityRegistry.audit(family, family_params) for family, family_params in targets]
    except click.BadParameter:
        raise
    except Exception as e:  # noqa: BLE001
        handle_error(e, verbose, "audit_g", config)

    if as_json:
        click.echo(encode_json([report.to_dict() for report in reports]).decode())
    for report in reports:
        status = "[green]pass[/green]" if report.passed else "[red]fail[/red]"
        console.print(f"{report.name}: max relative error {report.max_relative_error:.3e} {status}")
    if not all(report.passed for report in reports):
        sys.exit(EXIT_VERDICT_FAIL)


if __name__ == "__main__":
    cli()
