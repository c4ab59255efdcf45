"""
Result rows and CSV output.
"""

import csv
import logging
import subprocess
from dataclasses import asdict, dataclass
from pathlib import Path

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "sweep_value",
    "algorithm",
    "metric",
    "mean",
    "stderr",
    "trials",
    "config_hash",
    "seed",
    "revision",
)


@dataclass(frozen=True)
class SweepRow:
    """Aggregate of one metric of one algorithm at one sweep point."""
    sweep_value: float
    algorithm: str
    metric: str
    mean: float
    stderr: float
    trials: int
    config_hash: str
    seed: int
    revision: str


def revision_tag(cwd: Path | None = None) -> str:
    """Short git revision of the working tree, or ``v<version>`` outside a checkout."""
    from thz_bgsr import __version__

    try:
        result = subprocess.run(
            ["git", "rev-parse", "--short", "HEAD"],
            capture_output=True,
            text=True,
            timeout=5,
            cwd=cwd,
        )
    except (OSError, subprocess.SubprocessError):
        return f"v{__version__}"
    tag = result.stdout.strip()
    if result.returncode != 0 or not tag:
        return f"v{__version__}"
    return tag


def write_results(path: Path, rows: list[SweepRow]) -> None:
    """Write rows with the fixed CSV header, creating parent directories."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: repr(value) if isinstance(value, float) else value
                             for key, value in asdict(row).items()})
    logger.info("Wrote %d result rows to %s", len(rows), path)


def read_results(path: Path) -> list[dict[str, str]]:
    """Rows of a results CSV as string mappings."""
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))
