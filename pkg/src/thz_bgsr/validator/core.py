"""
Core validation logic for scenario configs.
"""

from dataclasses import dataclass, field
from pathlib import Path

from rich.console import Console

from thz_bgsr.config.loader import LoadedConfig, build_config, read_config_file
from thz_bgsr.errors import ConfigError
from thz_bgsr.validator.checks import check_scenario
from thz_bgsr.validator.memory import estimate_memory_requirements
from thz_bgsr.validator.types import Severity, ValidationResult


@dataclass
class ValidationResults:
    """Collection of validation results."""
    results: list[ValidationResult] = field(default_factory=list)
    config_path: Path | None = None
    loaded: LoadedConfig | None = None

    @property
    def has_errors(self) -> bool:
        return any(r.blocks_sweep for r in self.results)

    @property
    def has_warnings(self) -> bool:
        return any(r.severity == Severity.WARNING for r in self.results)

    def add(self, result: ValidationResult) -> None:
        self.results.append(result)

    def add_success(self, check: str, message: str) -> None:
        self.add(ValidationResult(check=check, severity=Severity.SUCCESS, message=message))

    def add_error(
        self,
        check: str,
        message: str,
        details: str | None = None,
        fix: str | None = None,
        keys: tuple[str, ...] = (),
    ) -> None:
        self.add(ValidationResult(
            check=check, severity=Severity.ERROR, message=message, details=details, fix=fix, keys=keys
        ))


def validate_scenario(config_path: Path, preset: str | None = None) -> ValidationResults:
    """
    Validate a scenario config file.

    Runs, in order:
    1. Config file exists and parses (JSON or TOML)
    2. Keys and invariants (unknown keys, hybrid RF limits, frame length, grid sizes)
    3. Sensing tensor memory estimate
    4. Known scenario pitfalls

    Args:
        config_path: Path to the config file
        preset: Base preset overriding any ``preset`` key in the file

    Returns:
        ValidationResults with all check results
    """
    results = ValidationResults(config_path=config_path)

    if not config_path.exists():
        results.add_error(check="file_exists", message=f"Config file not found: {config_path}")
        return results

    try:
        data = read_config_file(config_path)
        results.add_success("parse", f"Config parses ({len(data)} keys)")
    except ConfigError as e:
        results.add_error(check="parse", message="Config could not be parsed", details=str(e))
        return results

    try:
        loaded = build_config(data, preset=preset)
    except ConfigError as e:
        results.add_error(
            check="schema",
            message="Config violates the scenario schema",
            details=str(e),
            fix=f"Check key(s): {', '.join(e.keys)}" if e.keys else None,
            keys=e.keys,
        )
        return results

    results.loaded = loaded
    cfg, sweep = loaded.scenario, loaded.sweep
    results.add_success(
        "schema",
        f"Scenario valid (preset {loaded.preset}, hash {loaded.config_hash}): "
        f"U={cfg.num_users}, N_R={cfg.rx_antennas}, K={cfg.subcarriers}, M={cfg.pilot_blocks}",
    )

    for r in estimate_memory_requirements(cfg, sweep.dictionary_mode):
        results.add(r)

    for r in check_scenario(cfg, sweep):
        results.add(r)

    return results


def format_results(results: ValidationResults, console: Console) -> None:
    """Format validation results for display."""
    for r in results.results:
        if r.severity == Severity.SUCCESS:
            icon = "[green]✓[/green]"
        elif r.severity == Severity.WARNING:
            icon = "[yellow]⚠[/yellow]"
        elif r.severity == Severity.ERROR:
            icon = "[red]✗[/red]"
        else:
            icon = "[blue]ℹ[/blue]"

        console.print(f"{icon} {r.message}")

        if r.details:
            console.print(f"  [dim]{r.details}[/dim]")

        if r.keys:
            console.print(f"  [dim]keys: {', '.join(r.keys)}[/dim]")

        if r.fix:
            console.print(f"  [cyan]→ {r.fix}[/cyan]")

    errors = sum(1 for r in results.results if r.severity == Severity.ERROR)
    warnings = sum(1 for r in results.results if r.severity == Severity.WARNING)

    if errors > 0:
        console.print(f"\n[red]{errors} error(s), {warnings} warning(s)[/red]")
    elif warnings > 0:
        console.print(f"\n[yellow]{warnings} warning(s)[/yellow]")
    else:
        console.print("\n[green]All checks passed[/green]")
