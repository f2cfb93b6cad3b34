"""Generalized Laguerre polynomials, log-gamma and the radial normalization."""

import math
from typing import Union

import numpy as np
from scipy import special

from src.utils.error_handler import ComputeError, DomainError


ArrayLike = Union[float, np.ndarray]


def laguerre(n: int, alpha: float, x: ArrayLike) -> ArrayLike:
    """L_n^alpha(x) by the three-term recurrence.

    L_k = ((2k - 1 + alpha - x) L_{k-1} - (k - 1 + alpha) L_{k-2}) / k

    Args:
        n: Degree, n >= 0
        alpha: Order, alpha > -1
        x: Scalar or array of finite abscissae

    Returns:
        Values with the shape of ``x``
    """
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise DomainError(f"Laguerre degree must be a nonnegative integer, got {n}")
    if not math.isfinite(alpha) or alpha <= -1.0:
        raise DomainError(f"Laguerre order must exceed -1, got {alpha}")
    points = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(points)):
        raise DomainError("Laguerre argument must be finite")

    previous = np.ones_like(points)
    if n == 0:
        return previous if points.ndim else float(previous)
    current = 1.0 + alpha - points
    for k in range(2, int(n) + 1):
        previous, current = current, (
            (2 * k - 1 + alpha - points) * current - (k - 1 + alpha) * previous
        ) / k
    return current if points.ndim else float(current)


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not math.isfinite(x) or x <= 0:
        raise DomainError(f"log_gamma needs a positive finite argument, got {x}")
    return float(special.gammaln(x))


def log_normalization_constant(n: int, Lambda: float, kappa: float) -> float:
    """ln C_n for R = C_n r^Lambda e^{-kappa r} L_n^{2 Lambda + 1}(2 kappa r)."""
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise DomainError(f"Radial quantum number must be nonnegative, got {n}")
    if not math.isfinite(Lambda) or Lambda < 0:
        raise DomainError(f"Lambda must be nonnegative, got {Lambda}")
    if not math.isfinite(kappa) or kappa <= 0:
        raise DomainError(f"kappa must be positive, got {kappa}")
    log_c_sq = (
        (2.0 * Lambda + 3.0) * math.log(2.0 * kappa)
        + log_gamma(n + 1.0)
        - math.log(2.0 * (n + Lambda + 1.0))
        - log_gamma(n + 2.0 * Lambda + 2.0)
    )
    return 0.5 * log_c_sq


def normalization_constant(n: int, Lambda: float, kappa: float) -> float:
    """C_n = sqrt((2k)^{2L+3} n! / (2 (n+L+1) Gamma(n+2L+2))).

    Follows from the orthogonality integral
    int x^{a+1} e^{-x} [L_n^a(x)]^2 dx = (2n+a+1) Gamma(n+a+1) / n!, a = 2L+1.
    Computed in log space. When C_n itself is not representable use
    ``log_normalization_constant``, as the wavefunction module does.
    """
    log_c = log_normalization_constant(n, Lambda, kappa)
    try:
        return math.exp(log_c)
    except OverflowError:
        raise ComputeError(
            "Normalization constant overflows",
            f"ln C_n = {log_c!r} exceeds the double range",
        ) from None
