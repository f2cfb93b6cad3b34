"""Mie potential family, the (2, 1) member and the effective radial potential."""

import logging
import math
from typing import Tuple, Union

import numpy as np

from src.physics.models import (
    Dimension,
    PhysQty,
    PotentialParams,
    RadialProblem,
    SpecialPotentialParams,
)
from src.physics.units import common_system, hbar2_over_2m, require_positive
from src.utils.error_handler import DomainError, PotentialSaturationError


logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# Largest exponent whose exp() is still a finite double
_LOG_FLOAT_MAX = math.log(np.finfo(float).max)


def _check_radii(r: ArrayLike) -> np.ndarray:
    radii = np.asarray(r, dtype=float)
    if radii.size == 0:
        return radii
    if not np.all(np.isfinite(radii)) or np.any(radii <= 0):
        raise DomainError("Radius must be positive and finite")
    return radii


def _check_saturation(scale: float, a: float, exponent: int, r: np.ndarray) -> None:
    """Raise if scale * (a/r)**exponent would overflow a double."""
    if r.size == 0:
        return
    log_peak = math.log(scale) + exponent * (math.log(a) - math.log(float(r.min())))
    if log_peak > _LOG_FLOAT_MAX:
        raise PotentialSaturationError(
            "Potential saturates near the origin",
            f"(a/r)^{exponent} overflows at r={float(r.min())!r} "
            f"(log magnitude {log_peak:.1f})",
        )


def mie_profile(
    epsilon: float, a: float, ell_exp: int, k_exp: int, r: ArrayLike
) -> np.ndarray:
    """Vectorised eps [k/(l-k) (a/r)^l - l/(l-k) (a/r)^k]."""
    radii = _check_radii(r)
    span = ell_exp - k_exp
    repulsive = k_exp / span
    attractive = ell_exp / span
    _check_saturation(epsilon * repulsive, a, ell_exp, radii)
    x = a / radii
    return epsilon * (repulsive * x**ell_exp - attractive * x**k_exp)


def special_profile(V0: float, a: float, r: ArrayLike) -> np.ndarray:
    """Vectorised V0 [(1/2)(a/r)^2 - a/r]."""
    radii = _check_radii(r)
    _check_saturation(0.5 * V0, a, 2, radii)
    x = a / radii
    return V0 * (0.5 * x * x - x)


def coulomb_barrier_profile(
    a_strength: float, b_strength: float, r: ArrayLike
) -> np.ndarray:
    """Vectorised -A_s/r + B_s/r^2."""
    radii = _check_radii(r)
    if b_strength > 0:
        _check_saturation(b_strength, 1.0, 2, radii)
    return -a_strength / radii + b_strength / (radii * radii)


def problem_profile(problem: RadialProblem, r: ArrayLike) -> np.ndarray:
    """V(r) for a radial problem."""
    return coulomb_barrier_profile(problem.a_strength, problem.b_strength, r)


def centrifugal_profile(hbar2_2m: float, ell: int, r: ArrayLike) -> np.ndarray:
    """Vectorised l(l+1) hbar^2 / (2 mu r^2)."""
    if ell < 0:
        raise DomainError(f"Angular momentum must be nonnegative, got {ell}")
    radii = _check_radii(r)
    return ell * (ell + 1) * hbar2_2m / (radii * radii)


def effective_profile(problem: RadialProblem, ell: int, r: ArrayLike) -> np.ndarray:
    """V(r) plus the centrifugal term for one l."""
    return problem_profile(problem, r) + centrifugal_profile(problem.hbar2_2m, ell, r)


def _radius(r: PhysQty) -> float:
    return require_positive(r, "r", Dimension.LENGTH)


def mie_general(p: PotentialParams, r: PhysQty) -> PhysQty:
    """General Mie potential at one radius."""
    system = common_system(p.epsilon, p.a, r)
    value = mie_profile(p.epsilon.value, p.a.value, p.ell_exp, p.k_exp, _radius(r))
    return PhysQty(value=float(value), dimension=Dimension.ENERGY, system=system)


def special_potential(p: SpecialPotentialParams, r: PhysQty) -> PhysQty:
    """V0 [(1/2)(a/r)^2 - a/r] at one radius."""
    system = common_system(p.V0, p.a, r)
    value = special_profile(p.V0.value, p.a.value, _radius(r))
    return PhysQty(value=float(value), dimension=Dimension.ENERGY, system=system)


def effective_potential(
    p: SpecialPotentialParams, ell: int, mu: PhysQty, r: PhysQty
) -> PhysQty:
    """special_potential plus the centrifugal term l(l+1) hbar^2 / (2 mu r^2)."""
    system = common_system(p.V0, p.a, mu, r)
    radius = _radius(r)
    base = special_potential(p, r).value
    centrifugal = float(centrifugal_profile(hbar2_over_2m(mu).value, ell, radius))
    return PhysQty(value=base + centrifugal, dimension=Dimension.ENERGY, system=system)


def mie_problem(mu: PhysQty, V0: PhysQty, a: PhysQty, label: str = "") -> RadialProblem:
    """Radial problem for the (2, 1) Mie potential: A_s = V0 a, B_s = V0 a^2 / 2."""
    system = common_system(mu, V0, a)
    depth = require_positive(V0, "V0", Dimension.ENERGY)
    width = require_positive(a, "a", Dimension.LENGTH)
    k = hbar2_over_2m(mu).value
    return RadialProblem(
        hbar2_2m=k,
        a_strength=depth * width,
        b_strength=depth * width * width / 2.0,
        system=system,
        length_scale=width,
        energy_scale=depth,
        V0=depth,
        a=width,
        label=label,
    )


def coulomb_barrier_problem(
    mu: PhysQty, a_strength: PhysQty, b_strength: PhysQty, label: str = ""
) -> RadialProblem:
    """Radial problem for -A/r + B/r^2; B = 0 is the hydrogen-like case."""
    system = common_system(mu, a_strength, b_strength)
    if a_strength.dimension != Dimension.ENERGY_LENGTH:
        raise DomainError("A_strength must have dimension energy*length")
    if b_strength.dimension != Dimension.ENERGY_LENGTH2:
        raise DomainError("B_strength must have dimension energy*length^2")
    if not a_strength.value > 0:
        raise DomainError(
            "No bound states without attraction",
            f"A_strength must be positive for bound states, got {a_strength.value}",
        )
    if b_strength.value < 0:
        raise DomainError(f"B_strength must be nonnegative, got {b_strength.value}")
    k = hbar2_over_2m(mu).value
    bohr_like = k / a_strength.value
    return RadialProblem(
        hbar2_2m=k,
        a_strength=a_strength.value,
        b_strength=b_strength.value,
        system=system,
        length_scale=bohr_like,
        energy_scale=a_strength.value / bohr_like,
        label=label,
    )


def effective_minimum(problem: RadialProblem, ell: int) -> Tuple[float, float]:
    """Location and depth of the effective-potential minimum.

    The minimum of -A_s/r + C/r^2 with C = B_s + l(l+1) hbar^2/(2 mu) sits at
    r* = 2C/A_s with value -A_s^2/(4C).
    """
    barrier = problem.b_strength + ell * (ell + 1) * problem.hbar2_2m
    if barrier <= 0:
        raise DomainError("Effective potential has no finite minimum for l=0, B=0")
    r_star = 2.0 * barrier / problem.a_strength
    return r_star, -problem.a_strength**2 / (4.0 * barrier)
