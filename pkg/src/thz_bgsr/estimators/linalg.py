"""
Hermitian positive-definite solves with escalating diagonal jitter.
"""

import logging

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from thz_bgsr.errors import NumericalError

logger = logging.getLogger(__name__)

JITTER_SCALE = 1e-12
JITTER_GROWTH = 100.0
JITTER_ATTEMPTS = 3

CholeskyFactor = tuple[NDArray[np.complex128], bool]


def cholesky_factor(a: NDArray[np.complex128], what: str = "system") -> CholeskyFactor:
    """
    Lower Cholesky factor of a Hermitian PD matrix.

    On failure, adds jitter 1e-12 * trace / n to the diagonal, growing 100x per retry.

    Raises:
        NumericalError: Still not PD after the last retry; carries the condition number
    """
    a = 0.5 * (a + a.conj().T)
    try:
        return cho_factor(a, lower=True, check_finite=False)
    except LinAlgError:
        pass

    n = a.shape[0]
    base = JITTER_SCALE * max(float(np.real(np.trace(a))) / n, np.finfo(float).tiny)
    for attempt in range(JITTER_ATTEMPTS):
        jitter = base * JITTER_GROWTH**attempt
        logger.warning("Cholesky of %s failed, retrying with jitter %.3e", what, jitter)
        try:
            return cho_factor(a + jitter * np.eye(n), lower=True, check_finite=False)
        except LinAlgError:
            continue
    raise NumericalError(
        f"{what} ({n}x{n}) is not positive definite", condition=float(np.linalg.cond(a))
    )


def cholesky_solve(
    a: NDArray[np.complex128],
    b: NDArray[np.complex128],
    what: str = "system",
) -> NDArray[np.complex128]:
    """Solve a x = b for Hermitian PD a."""
    return cho_solve(cholesky_factor(a, what), b, check_finite=False)


def cholesky_logdet(factor: CholeskyFactor) -> float:
    """log det of the factored matrix."""
    return float(2.0 * np.sum(np.log(np.abs(np.diag(factor[0])))))
