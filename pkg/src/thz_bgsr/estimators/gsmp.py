"""
Group-sparse matching pursuit (GSMP) across subcarriers.

Atoms are selected by correlation summed over all subcarriers, so every subcarrier
shares one support; coefficients are then fitted per subcarrier by least squares. The
residual is divided by K after every update and the loop stops once the residual energy
changes by less than eps0 between iterations.
"""

import logging
import time

import numpy as np
from numpy.typing import NDArray

from thz_bgsr.dictionary.sparsifying import SparsifyingDictionary
from thz_bgsr.errors import InputError
from thz_bgsr.estimators.reconstruct import reconstruct_channel
from thz_bgsr.estimators.types import EstimatorOutput

logger = logging.getLogger(__name__)

# Relative to the first correlation peak; below it the residual is numerically zero
NEGLIGIBLE_CORRELATION = 1e-20


def gsmp_estimate(
    xi_mu: NDArray[np.complex128],
    y_mu: NDArray[np.complex128],
    eps0: float,
    dictionary: SparsifyingDictionary | None = None,
    max_atoms: int | None = None,
) -> EstimatorOutput:
    """
    Greedy shared-support recovery.

    Args:
        xi_mu: (rows, columns, K) sensing tensor
        y_mu: (rows, K) measurements
        eps0: Residual-energy change threshold
        dictionary: Enables CFR reconstruction
        max_atoms: Support size cap, defaults to rows

    Returns:
        Estimate; ``trace`` holds the residual energy after every update and
        ``degenerate`` flags a repeated or rank-deficient selection
    """
    if eps0 <= 0:
        raise InputError(f"eps0 must be positive, got {eps0}")
    if xi_mu.ndim != 3 or y_mu.shape != (xi_mu.shape[0], xi_mu.shape[2]):
        raise InputError(f"Incompatible shapes {xi_mu.shape} and {y_mu.shape}")

    start = time.perf_counter()
    rows, columns, k = xi_mu.shape
    max_atoms = rows if max_atoms is None else min(max_atoms, rows)

    support: list[int] = []
    coeffs = np.zeros((0, k), dtype=complex)
    previous = np.zeros_like(y_mu)
    residual = y_mu.copy()
    trace: list[float] = []
    degenerate = False
    first_peak: float | None = None

    def energy(t: NDArray[np.complex128]) -> float:
        return float(np.sum(np.abs(t) ** 2))

    while abs(energy(previous) - energy(residual)) >= eps0:
        corr = np.sum(np.abs(np.einsum("rck,rk->ck", xi_mu.conj(), residual)) ** 2, axis=1)
        best = int(np.argmax(corr))
        first_peak = float(corr[best]) if first_peak is None else first_peak
        if corr[best] <= NEGLIGIBLE_CORRELATION * first_peak:
            break
        if best in support:
            degenerate = True
            break
        if len(support) >= max_atoms:
            break

        candidate = [*support, best]
        fitted = np.empty((len(candidate), k), dtype=complex)
        fit_residual = np.empty_like(y_mu)
        rank_ok = True
        for i in range(k):
            phi = xi_mu[:, candidate, i]
            sol, _, rank, _ = np.linalg.lstsq(phi, y_mu[:, i], rcond=None)
            if rank < len(candidate):
                rank_ok = False
                break
            fitted[:, i] = sol
            fit_residual[:, i] = y_mu[:, i] - phi @ sol
        if not rank_ok:
            degenerate = True
            break

        support, coeffs = candidate, fitted
        previous, residual = residual, fit_residual / k
        trace.append(energy(fit_residual))

    h_b_hat = np.zeros((columns, k), dtype=complex)
    if support:
        h_b_hat[support] = coeffs
    if degenerate:
        logger.debug("GSMP stopped on a degenerate selection after %d atoms", len(support))
    logger.debug("GSMP selected %d atoms", len(support))

    h_hat = reconstruct_channel(h_b_hat, dictionary) if dictionary is not None else None
    return EstimatorOutput(
        algorithm="gsmp",
        h_b_hat=h_b_hat,
        h_hat=h_hat,
        iterations=len(support),
        support=np.asarray(support, dtype=np.intp),
        wall_time=time.perf_counter() - start,
        trace=trace,
        degenerate=degenerate,
    )
