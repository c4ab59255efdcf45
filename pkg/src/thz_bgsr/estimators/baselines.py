"""
Per-subcarrier baselines: OMP and single-measurement-vector SBL.

Neither shares support across subcarriers.
"""

import time
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from thz_bgsr.dictionary.sparsifying import SparsifyingDictionary
from thz_bgsr.errors import InputError
from thz_bgsr.estimators.bgsr import DEFAULT_EPS_TOL, DEFAULT_MAX_ITER, bgsr_estimate
from thz_bgsr.estimators.reconstruct import reconstruct_channel
from thz_bgsr.estimators.types import EstimatorOutput


@dataclass
class OMPPath:
    """Selections and residual norms of one OMP run."""
    coefficients: NDArray[np.complex128]
    support: list[int] = field(default_factory=list)
    residual_norms: list[float] = field(default_factory=list)


def omp_path(
    xi_k: NDArray[np.complex128],
    y_k: NDArray[np.complex128],
    max_atoms: int,
    tol: float,
) -> OMPPath:
    """
    Orthogonal matching pursuit on one subcarrier.

    Atoms are picked by normalized correlation with the residual; stops once
    ||r||^2 <= tol, after ``max_atoms`` selections, or when the correlation vanishes.
    """
    rows, columns = xi_k.shape
    if max_atoms > rows:
        raise InputError(f"max_atoms {max_atoms} exceeds the {rows} available rows")
    norms = np.linalg.norm(xi_k, axis=0)
    norms[norms == 0] = np.inf

    path = OMPPath(coefficients=np.zeros(columns, dtype=complex))
    residual = np.asarray(y_k, dtype=complex).copy()
    path.residual_norms.append(float(np.linalg.norm(residual)))
    sol = np.zeros(0, dtype=complex)
    while len(path.support) < max_atoms and path.residual_norms[-1] ** 2 > tol:
        corr = np.abs(xi_k.conj().T @ residual) / norms
        best = int(np.argmax(corr))
        if corr[best] <= np.finfo(float).eps * max(path.residual_norms[0], 1.0) or best in path.support:
            break
        candidate = [*path.support, best]
        phi = xi_k[:, candidate]
        fitted, _, rank, _ = np.linalg.lstsq(phi, y_k, rcond=None)
        if rank < len(candidate):
            break
        path.support, sol = candidate, fitted
        residual = y_k - phi @ sol
        path.residual_norms.append(float(np.linalg.norm(residual)))

    path.coefficients[path.support] = sol
    return path


def omp_per_subcarrier(
    xi_k: NDArray[np.complex128],
    y_k: NDArray[np.complex128],
    max_atoms: int,
    tol: float,
) -> NDArray[np.complex128]:
    """Sparse OMP coefficient vector of one subcarrier."""
    return omp_path(xi_k, y_k, max_atoms, tol).coefficients


def omp_estimate(
    xi_mu: NDArray[np.complex128],
    y_mu: NDArray[np.complex128],
    c_w: NDArray[np.complex128],
    max_atoms: int | None = None,
    tol: float | None = None,
    dictionary: SparsifyingDictionary | None = None,
) -> EstimatorOutput:
    """
    Independent OMP on every subcarrier.

    The stopping level defaults to trace(C_w), the expected noise energy per subcarrier.
    """
    start = time.perf_counter()
    rows, columns, k = xi_mu.shape
    max_atoms = rows if max_atoms is None else max_atoms
    tol = float(np.real(np.trace(c_w))) if tol is None else tol

    h_b_hat = np.zeros((columns, k), dtype=complex)
    support: set[int] = set()
    atoms = []
    for i in range(k):
        path = omp_path(xi_mu[:, :, i], y_mu[:, i], max_atoms, tol)
        h_b_hat[:, i] = path.coefficients
        support.update(path.support)
        atoms.append(len(path.support))

    h_hat = reconstruct_channel(h_b_hat, dictionary) if dictionary is not None else None
    return EstimatorOutput(
        algorithm="omp",
        h_b_hat=h_b_hat,
        h_hat=h_hat,
        iterations=max(atoms, default=0),
        support=np.asarray(sorted(support), dtype=np.intp),
        wall_time=time.perf_counter() - start,
    )


def smv_sbl(
    xi_k: NDArray[np.complex128],
    y_k: NDArray[np.complex128],
    noise_cov: NDArray[np.complex128],
    tol: float = DEFAULT_EPS_TOL,
    iters: int = DEFAULT_MAX_ITER,
) -> NDArray[np.complex128]:
    """SBL on a single subcarrier; BGSR with K = 1."""
    output = bgsr_estimate(xi_k[:, :, None], np.asarray(y_k)[:, None], noise_cov, tol, iters, algorithm="sbl")
    return output.h_b_hat[:, 0]


def smv_sbl_estimate(
    xi_mu: NDArray[np.complex128],
    y_mu: NDArray[np.complex128],
    c_w: NDArray[np.complex128],
    tol: float = DEFAULT_EPS_TOL,
    iters: int = DEFAULT_MAX_ITER,
    dictionary: SparsifyingDictionary | None = None,
) -> EstimatorOutput:
    """Independent SBL on every subcarrier, each with its own hyperparameters."""
    start = time.perf_counter()
    groups = dictionary.column_groups() if dictionary is not None else None
    _, columns, k = xi_mu.shape
    h_b_hat = np.zeros((columns, k), dtype=complex)
    support: set[int] = set()
    iterations = []
    for i in range(k):
        output = bgsr_estimate(
            xi_mu[:, :, i : i + 1], y_mu[:, i : i + 1], c_w, tol, iters, algorithm="sbl", groups=groups
        )
        h_b_hat[:, i] = output.h_b_hat[:, 0]
        support.update(output.support.tolist())
        iterations.append(output.iterations)

    h_hat = reconstruct_channel(h_b_hat, dictionary) if dictionary is not None else None
    return EstimatorOutput(
        algorithm="sbl",
        h_b_hat=h_b_hat,
        h_hat=h_hat,
        iterations=max(iterations, default=0),
        support=np.asarray(sorted(support), dtype=np.intp),
        wall_time=time.perf_counter() - start,
    )
