"""
Reflecting materials of an indoor office.

The embedded table lists roughness (mm), medium absorption (1/cm) and refractive index
for six common scatterers. A CSV with header ``name,sigma_r_mm,kappa_per_cm,eta`` can
replace it.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

from thz_bgsr.errors import InputError

MATERIALS_CSV_FIELDS = ("name", "sigma_r_mm", "kappa_per_cm", "eta")


@dataclass(frozen=True)
class MaterialProps:
    """Electromagnetic properties of a reflecting surface."""
    name: str
    sigma_r_mm: float
    kappa_per_cm: float
    eta: float

    def __post_init__(self) -> None:
        if self.sigma_r_mm < 0:
            raise InputError(f"{self.name}: sigma_r_mm must be >= 0, got {self.sigma_r_mm}")
        if self.kappa_per_cm < 0:
            raise InputError(f"{self.name}: kappa_per_cm must be >= 0, got {self.kappa_per_cm}")
        if self.eta < 1:
            raise InputError(f"{self.name}: eta must be >= 1, got {self.eta}")

    @property
    def sigma_r_m(self) -> float:
        """Roughness standard deviation in metres."""
        return self.sigma_r_mm * 1e-3

    @property
    def kappa_per_m(self) -> float:
        """Absorption coefficient in 1/m."""
        return self.kappa_per_cm * 1e2


OFFICE_MATERIALS: dict[str, MaterialProps] = {
    "polycarbonate": MaterialProps("polycarbonate", sigma_r_mm=0.0, kappa_per_cm=23.0, eta=1.52),
    "polystyrene": MaterialProps("polystyrene", sigma_r_mm=0.002, kappa_per_cm=2.0, eta=1.6),
    "pvc": MaterialProps("pvc", sigma_r_mm=0.028, kappa_per_cm=19.0, eta=1.68),
    "plaster_s1": MaterialProps("plaster_s1", sigma_r_mm=0.05, kappa_per_cm=10.0, eta=2.0),
    "gypsum": MaterialProps("gypsum", sigma_r_mm=0.13, kappa_per_cm=38.0, eta=1.4),
    "plaster_s2": MaterialProps("plaster_s2", sigma_r_mm=0.15, kappa_per_cm=10.0, eta=2.0),
}


def load_materials(path: Path | None = None) -> list[MaterialProps]:
    """
    Load the material catalogue.

    Args:
        path: CSV override, or None for the embedded office table

    Returns:
        Materials in file (or table) order
    """
    if path is None:
        return list(OFFICE_MATERIALS.values())

    if not path.exists():
        raise InputError(f"Materials table not found: {path}")

    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        missing = set(MATERIALS_CSV_FIELDS) - set(reader.fieldnames or [])
        if missing:
            raise InputError(f"Materials table {path} missing column(s): {', '.join(sorted(missing))}")
        materials = [
            MaterialProps(
                name=row["name"].strip(),
                sigma_r_mm=float(row["sigma_r_mm"]),
                kappa_per_cm=float(row["kappa_per_cm"]),
                eta=float(row["eta"]),
            )
            for row in reader
        ]

    if not materials:
        raise InputError(f"Materials table {path} has no rows")
    return materials
