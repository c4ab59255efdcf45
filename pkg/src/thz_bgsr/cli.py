"""
thz-bgsr CLI - Monte Carlo harness for multi-user THz channel estimation.

Commands:
    run         Run a seeded sweep and write CSV results
    validate    Pre-flight validation of scenario configs
    bcrb        BGSR NMSE against the plug-in Bayesian CRB
    init        Write a preset config file
    presets     List scenario presets
    quantizer   Compare midrise quantizer distortion with the Bussgang table
"""

from pathlib import Path
from typing import Any, NoReturn, Optional

import numpy as np
import typer
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from thz_bgsr.errors import ConfigError, NumericalError

app = typer.Typer(
    name="thz-bgsr",
    help="Monte Carlo harness for multi-user THz channel estimation",
    no_args_is_help=True,
    invoke_without_command=True,
)

console = Console()

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _fail(error: Exception) -> NoReturn:
    if isinstance(error, NumericalError):
        console.print(f"[red]Numerical failure:[/red] {escape(str(error))}")
        raise typer.Exit(EXIT_NUMERICAL)
    console.print(f"[red]Config error:[/red] {escape(str(error))}")
    raise typer.Exit(EXIT_CONFIG)


def _parse_floats(text: str, key: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"Expected a comma-separated list of numbers for {key}, got {text!r}", keys=(key,))


def _parse_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _load(
    config_path: Optional[Path],
    preset: Optional[str],
    overrides: dict[str, Any],
) -> Any:
    from thz_bgsr.config import load_config
    from thz_bgsr.validator import blocking_error, check_scenario

    loaded = load_config(config_path, preset=preset, overrides=overrides)
    error = blocking_error(check_scenario(loaded.scenario, loaded.sweep))
    if error is not None:
        raise error
    return loaded


def _run_with_progress(runner: Any, loaded: Any, total: int) -> Any:
    from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn

    with Progress(
        TextColumn("[bold]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
        console=console,
        transient=True,
    ) as progress:
        task = progress.add_task("Trials", total=total)
        return runner(
            loaded.scenario,
            loaded.sweep,
            config_hash=loaded.config_hash,
            on_trial=lambda _value, _trial: progress.advance(task),
        )


def _summary_table(result: Any, axis: str) -> Table:
    from thz_bgsr.metrics import to_db

    table = Table(title="Sweep Summary")
    table.add_column(axis, justify="right")
    table.add_column("Algorithm")
    table.add_column("NMSE (dB)", justify="right")
    table.add_column("BER", justify="right")
    table.add_column("Iterations", justify="right")

    for value in result.points():
        for algorithm in result.algorithms():
            if algorithm == "bcrb":
                bound = result.value(value, algorithm, "bcrb_nmse")
                table.add_row(f"{value:g}", "bcrb", f"{to_db(bound):.2f}", "-", "-")
                continue
            nmse = result.value(value, algorithm, "nmse")
            ber = result.value(value, algorithm, "ber")
            iterations = result.value(value, algorithm, "iterations")
            table.add_row(
                f"{value:g}",
                algorithm,
                f"{to_db(nmse):.2f}" if nmse is not None else "-",
                f"{ber:.4f}" if ber is not None else "-",
                f"{iterations:.1f}" if iterations is not None else "-",
            )
    return table


@app.command()
def run(
    out: Path = typer.Option(..., "--out", "-o", help="Results CSV path"),
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="Scenario config (JSON or TOML)"),
    preset: Optional[str] = typer.Option(None, "--preset", "-p", help="Base preset: desk or paper"),
    snr: Optional[str] = typer.Option(None, "--snr", help="Comma-separated SNR points in dB"),
    trials: Optional[int] = typer.Option(None, "--trials", "-n", help="Trials per sweep point"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed"),
    algorithms: Optional[str] = typer.Option(None, "--algorithms", "-a", help="e.g. bgsr,gsmp,omp,sbl,genie"),
    adc_bits: Optional[str] = typer.Option(None, "--adc-bits", help="ADC resolution, integer or inf"),
    psf: Optional[str] = typer.Option(None, "--psf", help="Pulse shape: rrc or rect"),
    dictionary: Optional[str] = typer.Option(None, "--dict", help="Dictionary: on_grid or tbod"),
    workers: Optional[int] = typer.Option(None, "--workers", "-w", help="Parallel trial workers"),
    timing: bool = typer.Option(False, "--timing", help="Also record runtime_s per algorithm"),
    verbose: bool = typer.Option(False, "--verbose", help="Debug logging"),
) -> None:
    """
    Run a seeded Monte Carlo sweep.

    Every sweep point is validated before the first trial. Exit code 2 means a config
    error, 3 a numerical failure.

    Example:
        thz-bgsr run --preset desk --snr 0,5,10 --trials 20 --out results.csv
    """
    from thz_bgsr.harness import run_sweep, write_results
    from thz_bgsr.log import configure_logging

    configure_logging(verbose)
    try:
        overrides: dict[str, Any] = {
            "trials": trials,
            "rng_seed": seed,
            "adc_bits": adc_bits,
            "psf_kind": psf,
            "dictionary_mode": dictionary,
            "workers": workers,
            "output_path": str(out),
        }
        if snr is not None:
            overrides["snr_db_list"] = _parse_floats(snr, "snr_db_list")
        if algorithms is not None:
            overrides["algorithms"] = _parse_list(algorithms)
        if timing:
            overrides["record_runtime"] = True

        loaded = _load(config_path, preset, overrides)
        total = len(loaded.sweep.points()) * loaded.sweep.trials
        console.print(
            f"[bold]Running[/bold] {loaded.sweep.sweep_axis.value} sweep "
            f"({total} trials, preset {loaded.preset}, hash {loaded.config_hash})"
        )
        result = _run_with_progress(run_sweep, loaded, total)
    except (ConfigError, NumericalError) as e:
        _fail(e)
    except np.linalg.LinAlgError as e:
        _fail(NumericalError(f"Linear algebra failure: {e}"))

    write_results(out, result.rows)
    console.print(_summary_table(result, loaded.sweep.sweep_axis.value))
    console.print(f"[green]Results written to[/green] {out}")


@app.command()
def validate(
    config_path: Path = typer.Option(..., "--config", "-c", help="Scenario config (JSON or TOML)"),
    preset: Optional[str] = typer.Option(None, "--preset", "-p", help="Base preset"),
    strict: bool = typer.Option(False, "--strict", "-s", help="Fail on warnings"),
) -> None:
    """
    Pre-flight validation of scenario configs.

    Checks:
    - Config parses and has no unknown keys
    - Scenario invariants (hybrid RF limits, K = N_p + L - 1, grid sizes)
    - Sensing tensor memory footprint
    - Known pitfalls (infeasible angle separation, degenerate TBoD, ...)

    Example:
        thz-bgsr validate --config scenario.json
    """
    from thz_bgsr.validator import format_results, validate_scenario

    console.print(f"[bold]Validating[/bold] {config_path}")

    results = validate_scenario(config_path, preset=preset)
    format_results(results, console)

    if results.has_errors or (strict and results.has_warnings):
        raise typer.Exit(EXIT_CONFIG)


@app.command()
def bcrb(
    out: Path = typer.Option(..., "--out", "-o", help="Results CSV path"),
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="Scenario config (JSON or TOML)"),
    preset: Optional[str] = typer.Option(None, "--preset", "-p", help="Base preset"),
    snr: Optional[str] = typer.Option(None, "--snr", help="Comma-separated SNR points in dB"),
    trials: Optional[int] = typer.Option(None, "--trials", "-n", help="Trials per sweep point"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed"),
    workers: Optional[int] = typer.Option(None, "--workers", "-w", help="Parallel trial workers"),
    verbose: bool = typer.Option(False, "--verbose", help="Debug logging"),
) -> None:
    """
    BGSR NMSE and the plug-in Bayesian CRB per sweep point.

    The bound uses the converged BGSR hyperparameters of each trial.

    Example:
        thz-bgsr bcrb --config scenario.json --out bcrb.csv
    """
    from thz_bgsr.harness import run_bcrb_sweep, write_results
    from thz_bgsr.log import configure_logging

    configure_logging(verbose)
    try:
        overrides: dict[str, Any] = {"trials": trials, "rng_seed": seed, "workers": workers}
        if snr is not None:
            overrides["snr_db_list"] = _parse_floats(snr, "snr_db_list")
        loaded = _load(config_path, preset, overrides)
        total = len(loaded.sweep.points()) * loaded.sweep.trials
        console.print(f"[bold]Computing BCRB[/bold] over {total} trials (hash {loaded.config_hash})")
        result = _run_with_progress(run_bcrb_sweep, loaded, total)
    except (ConfigError, NumericalError) as e:
        _fail(e)
    except np.linalg.LinAlgError as e:
        _fail(NumericalError(f"Linear algebra failure: {e}"))

    write_results(out, result.rows)
    console.print(_summary_table(result, loaded.sweep.sweep_axis.value))
    console.print(f"[green]Results written to[/green] {out}")


@app.command()
def init(
    preset: str = typer.Option("desk", "--preset", "-p", help="Preset to write"),
    output: Path = typer.Option(Path("scenario.json"), "--output", "-o", help="Output path (.json or .toml)"),
) -> None:
    """
    Write a flat config file with every key of a preset.

    Example:
        thz-bgsr init --preset paper --output paper.toml
    """
    from thz_bgsr.config import SweepSpec, get_preset, list_presets, save_config

    chosen = get_preset(preset)
    if chosen is None:
        _fail(ConfigError(f"Unknown preset '{preset}'. Available: {', '.join(list_presets())}"))

    save_config(output, chosen.build(), SweepSpec())
    console.print(f"[green]Config saved to[/green] {output}")


@app.command()
def presets() -> None:
    """List scenario presets."""
    from thz_bgsr.config import SCENARIO_PRESETS

    table = Table(title="Scenario Presets")
    table.add_column("Name")
    table.add_column("Description")
    table.add_column("Overrides", justify="right")
    table.add_column("Notes")

    for p in SCENARIO_PRESETS.values():
        table.add_row(p.name, p.description, str(len(p.overrides)), p.notes)

    console.print(table)


@app.command()
def quantizer(
    samples: int = typer.Option(100_000, "--samples", "-n", help="Gaussian samples per resolution"),
    seed: int = typer.Option(0, "--seed", help="Random seed"),
    max_bits: int = typer.Option(8, "--max-bits", help="Highest resolution to compare"),
) -> None:
    """
    Compare the midrise quantizer's distortion with the Bussgang model.

    Example:
        thz-bgsr quantizer --samples 100000
    """
    import numpy as np

    from thz_bgsr.frontend import bussgang_epsilon, distortion_ratio

    rng = np.random.default_rng(seed)
    table = Table(title="Quantizer Distortion-to-Signal Ratio")
    table.add_column("Bits", justify="right")
    table.add_column("Model υ", justify="right")
    table.add_column("Empirical", justify="right")
    table.add_column("Ratio", justify="right")
    table.add_column("ε", justify="right")

    for bits in range(1, max_bits + 1):
        upsilon, eps = bussgang_epsilon(bits)
        empirical = distortion_ratio(bits, samples, rng)
        table.add_row(str(bits), f"{upsilon:.4e}", f"{empirical:.4e}", f"{empirical / upsilon:.3f}", f"{eps:.5f}")

    console.print(table)


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    version: bool = typer.Option(False, "--version", "-v", help="Show version"),
) -> None:
    """thz-bgsr: Monte Carlo harness for multi-user THz channel estimation."""
    if version:
        from thz_bgsr import __version__
        console.print(f"thz-bgsr {__version__}")
        raise typer.Exit()
    elif ctx.invoked_subcommand is None:
        console.print(ctx.get_help())
        raise typer.Exit()


if __name__ == "__main__":
    app()
