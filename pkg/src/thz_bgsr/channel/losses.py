"""
Propagation losses at THz: spreading, molecular absorption and rough-surface reflection.
"""

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import NDArray
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.constants import epsilon_0, mu_0

from thz_bgsr.channel.materials import MaterialProps
from thz_bgsr.config.scenario import ScenarioConfig
from thz_bgsr.errors import InputError

logger = logging.getLogger(__name__)

FREE_SPACE_IMPEDANCE = math.sqrt(mu_0 / epsilon_0)


@dataclass(frozen=True)
class AbsorptionTable:
    """
    Molecular absorption coefficient k_abs(f) in 1/m.

    Either a constant or a tabulated curve interpolated linearly. Frequencies outside a
    table's support are rejected rather than extrapolated.
    """
    freq_hz: NDArray[np.float64] | None = None
    kabs_per_m: NDArray[np.float64] | None = None
    constant: float = 0.0

    @classmethod
    def from_constant(cls, kabs_per_m: float) -> "AbsorptionTable":
        if kabs_per_m < 0:
            raise InputError(f"Absorption coefficient must be >= 0, got {kabs_per_m}")
        return cls(constant=kabs_per_m)

    @classmethod
    def from_csv(cls, path: Path) -> "AbsorptionTable":
        """Read a two-column ``freq_hz,kabs_per_m`` table with header."""
        if not path.exists():
            raise InputError(f"Absorption table not found: {path}")
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            if not {"freq_hz", "kabs_per_m"} <= set(reader.fieldnames or []):
                raise InputError(f"Absorption table {path} needs header 'freq_hz,kabs_per_m'")
            rows = [(float(r["freq_hz"]), float(r["kabs_per_m"])) for r in reader]
        if len(rows) < 2:
            raise InputError(f"Absorption table {path} needs at least two rows")
        freq, kabs = np.array(sorted(rows)).T
        if np.any(kabs < 0):
            raise InputError(f"Absorption table {path} has negative coefficients")
        return cls(freq_hz=freq, kabs_per_m=kabs)

    @property
    def is_tabulated(self) -> bool:
        return self.freq_hz is not None

    def __call__(self, f_hz: float) -> float:
        if self.freq_hz is None or self.kabs_per_m is None:
            return self.constant
        lo, hi = float(self.freq_hz[0]), float(self.freq_hz[-1])
        if not lo <= f_hz <= hi:
            raise InputError(
                f"Frequency {f_hz / 1e9:.4f} GHz outside absorption table support "
                f"[{lo / 1e9:.4f}, {hi / 1e9:.4f}] GHz"
            )
        return float(np.interp(f_hz, self.freq_hz, self.kabs_per_m))


def free_space_loss(f_k: float, d: float) -> float:
    """Spreading loss (c / (4 pi f d))^2 as a linear power gain."""
    if f_k <= 0 or d <= 0:
        raise InputError(f"free_space_loss needs positive frequency and distance, got f={f_k}, d={d}")
    return float((SPEED_OF_LIGHT / (4.0 * math.pi * f_k * d)) ** 2)


def molecular_absorption_loss(f_k: float, d: float, kabs: AbsorptionTable | float) -> float:
    """
    Molecular absorption exp(-k_abs(f) d) as a linear power gain.

    Args:
        f_k: Frequency in Hz
        d: Path length in metres
        kabs: Absorption lookup or constant coefficient in 1/m
    """
    if d <= 0:
        raise InputError(f"Distance must be positive, got {d}")
    coefficient = kabs(f_k) if isinstance(kabs, AbsorptionTable) else float(kabs)
    if coefficient < 0:
        raise InputError(f"Absorption coefficient must be >= 0, got {coefficient}")
    return float(math.exp(-coefficient * d))


def characteristic_impedance(f_k: float, mat: MaterialProps) -> complex:
    """
    Wave impedance Z(f) of a lossy dielectric.

    Uses the complex permittivity (eta - j kappa')^2 with extinction
    kappa' = kappa c / (4 pi f).
    """
    extinction = mat.kappa_per_m * SPEED_OF_LIGHT / (4.0 * math.pi * f_k)
    permittivity = mat.eta**2 - extinction**2 - 2j * mat.eta * extinction
    return complex(np.sqrt(mu_0 / (epsilon_0 * permittivity)))


def rayleigh_roughness_factor(f_k: float, sigma_r_m: float, nu_i: float) -> float:
    """Rayleigh roughness attenuation exp(-1/2 (4 pi f sigma cos nu_i / c)^2)."""
    g = 4.0 * math.pi * f_k * sigma_r_m * math.cos(nu_i) / SPEED_OF_LIGHT
    return float(math.exp(-0.5 * g * g))


def reflection_coefficient(f_k: float, mat: MaterialProps, nu_i: float) -> complex:
    """
    First-order reflection coefficient of a rough surface.

    Fresnel (TE) quotient with the refraction angle on the principal complex arcsin
    branch, times the Rayleigh roughness factor.

    Args:
        f_k: Frequency in Hz
        mat: Reflecting material
        nu_i: Incidence angle in radians, 0 <= nu_i < pi/2

    Returns:
        Complex coefficient
    """
    if not 0.0 <= nu_i < math.pi / 2:
        raise InputError(f"Incidence angle must lie in [0, pi/2), got {nu_i}")

    z = characteristic_impedance(f_k, mat)
    nu_r = np.arcsin(complex(math.sin(nu_i) * z / FREE_SPACE_IMPEDANCE))
    cos_i = math.cos(nu_i)
    cos_r = np.cos(nu_r)
    fresnel = (z * cos_i - FREE_SPACE_IMPEDANCE * cos_r) / (z * cos_i + FREE_SPACE_IMPEDANCE * cos_r)
    upsilon = complex(fresnel * rayleigh_roughness_factor(f_k, mat.sigma_r_m, nu_i))

    if abs(upsilon) > 1.0:
        logger.warning(
            "Reflection coefficient |%.4f| > 1 for %s at %.2f GHz, nu_i=%.1f deg",
            abs(upsilon), mat.name, f_k / 1e9, math.degrees(nu_i),
        )
    return upsilon


def absorption_from_config(cfg: ScenarioConfig) -> AbsorptionTable:
    """Absorption lookup named by the scenario: CSV table if given, else the constant."""
    if cfg.absorption_table is not None:
        return AbsorptionTable.from_csv(cfg.absorption_table)
    return AbsorptionTable.from_constant(cfg.absorption_per_m)
