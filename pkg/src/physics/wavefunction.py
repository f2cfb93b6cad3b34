"""Normalized radial wavefunctions, node counting and expectation values.

R(r) = C_n r^Lambda e^{-kappa r} L_n^{2 Lambda + 1}(2 kappa r), with the
prefactor evaluated in log space so molecular Lambda (hundreds) stays finite.
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import brentq

from src.physics.models import (
    Dimension,
    GridSpacing,
    Observable,
    PhysQty,
    QuantumState,
    RadialFunction,
    RadialGrid,
    RadialProblem,
)
from src.physics.potential import mie_problem
from src.physics.specialfn import laguerre, log_normalization_constant
from src.physics.spectrum import problem_bound_energy, problem_reduced_params
from src.physics.units import common_system, require_positive
from src.utils.config import get_settings
from src.utils.error_handler import DomainError, QuadratureError
from src.utils.performance import performance_monitor


logger = logging.getLogger(__name__)

NORM_WARNING_THRESHOLD = 1e-3


def tail_factor(s: float, decades: float, cap: float) -> float:
    """t > 1 with (t e^{1-t})^s = 10^-decades, capped at ``cap``.

    The envelope r^s e^{-kappa r} peaks at r = s/kappa; at t s/kappa it has
    dropped by that ratio.
    """
    target = decades * math.log(10.0) / s
    t = brentq(lambda x: x - 1.0 - math.log(x) - target, 1.0, 2.0 * target + 10.0)
    return min(t, cap)


def default_grid(
    problem: RadialProblem,
    state: QuantumState,
    points: Optional[int] = None,
    r_min_factor: Optional[float] = None,
) -> RadialGrid:
    """Log-uniform grid from r_min_factor * a out to the exponential tail."""
    settings = get_settings()
    reduced = problem_reduced_params(problem, state)
    s = state.n + reduced.Lambda + 1.0
    t = tail_factor(s, settings.grid_tail_decades, settings.grid_r_max_cap)
    r_min = (r_min_factor or settings.grid_r_min_factor) * problem.length_scale
    r_max = max(t * s / reduced.kappa, 10.0 * r_min)
    return RadialGrid(
        r_min=r_min,
        r_max=r_max,
        points=points or settings.grid_points,
        spacing=GridSpacing.LOG_UNIFORM,
    )


def radial_integral(grid: RadialGrid, r: np.ndarray, integrand: np.ndarray) -> float:
    """Composite Simpson estimate of the integral of ``integrand`` dr."""
    performance_monitor.increment("quadratures")
    if grid.spacing == GridSpacing.LOG_UNIFORM:
        return float(simpson(integrand * r, dx=grid.step))
    return float(simpson(integrand, dx=grid.step))


def log_abs_radial(
    problem: RadialProblem, state: QuantumState, r: np.ndarray
) -> np.ndarray:
    """ln |R(r)|; -inf exactly at nodes."""
    reduced = problem_reduced_params(problem, state)
    radii = np.asarray(r, dtype=float)
    log_c = log_normalization_constant(state.n, reduced.Lambda, reduced.kappa)
    poly = laguerre(state.n, 2.0 * reduced.Lambda + 1.0, 2.0 * reduced.kappa * radii)
    with np.errstate(divide="ignore"):
        return (
            log_c
            + reduced.Lambda * np.log(radii)
            - reduced.kappa * radii
            + np.log(np.abs(poly))
        )


def radial_values(
    problem: RadialProblem, state: QuantumState, r: np.ndarray
) -> np.ndarray:
    """Normalized R(r) on an array of radii."""
    radii = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(radii)) or np.any(radii <= 0):
        raise DomainError("Radius must be positive and finite")
    reduced = problem_reduced_params(problem, state)
    log_c = log_normalization_constant(state.n, reduced.Lambda, reduced.kappa)
    envelope = np.exp(log_c + reduced.Lambda * np.log(radii) - reduced.kappa * radii)
    poly = laguerre(state.n, 2.0 * reduced.Lambda + 1.0, 2.0 * reduced.kappa * radii)
    return envelope * poly


def radial_wavefunction(
    mu: PhysQty, V0: PhysQty, a: PhysQty, state: QuantumState, r: PhysQty
) -> float:
    """Normalized R at one radius, in (length)^(-3/2) of the input system."""
    common_system(mu, V0, a, r)
    radius = require_positive(r, "r", Dimension.LENGTH)
    return float(radial_values(mie_problem(mu, V0, a), state, np.array([radius]))[0])


def origin_exponent(
    problem: RadialProblem, state: QuantumState, r_lo: float, r_hi: float
) -> float:
    """Slope of ln R against ln r between two small radii; tends to Lambda."""
    logs = log_abs_radial(problem, state, np.array([r_lo, r_hi]))
    return float((logs[1] - logs[0]) / (math.log(r_hi) - math.log(r_lo)))


def problem_sample(
    problem: RadialProblem, state: QuantumState, grid: Optional[RadialGrid] = None
) -> RadialFunction:
    """Sample R and u on a grid and check the norm by quadrature."""
    grid = grid or default_grid(problem, state)
    r = grid.abscissae()
    values_R = radial_values(problem, state, r)
    values_u = r * values_R
    norm = radial_integral(grid, r, values_u * values_u)

    coarse = abs(norm - 1.0) > NORM_WARNING_THRESHOLD
    if coarse:
        logger.warning(
            f"Grid too coarse for state {state}: norm_check={norm:.6g} "
            f"({grid.points} points on [{grid.r_min:.3g}, {grid.r_max:.3g}])"
        )

    reduced = problem_reduced_params(problem, state)
    return RadialFunction(
        grid=grid,
        values_R=values_R,
        values_u=values_u,
        state=state,
        norm_check=norm,
        coarse=coarse,
        energy=problem_bound_energy(problem, state).energy.value,
        Lambda=reduced.Lambda,
        kappa=reduced.kappa,
    )


def sample(
    mu: PhysQty,
    V0: PhysQty,
    a: PhysQty,
    state: QuantumState,
    grid: Optional[RadialGrid] = None,
) -> RadialFunction:
    """Sampled Mie wavefunction; default grid when ``grid`` is None."""
    return problem_sample(mie_problem(mu, V0, a), state, grid)


def count_sign_changes(values: np.ndarray, rel_floor: float = 1e-10) -> int:
    """Strict sign changes among interior samples.

    Endpoints are excluded. Samples with |v| at or below rel_floor * max|v| are
    skipped, so underflowed tails and solver noise do not count as nodes.
    """
    interior = np.asarray(values, dtype=float)[1:-1]
    if interior.size == 0:
        return 0
    peak = float(np.max(np.abs(interior)))
    if peak == 0.0:
        return 0
    significant = interior[np.abs(interior) > rel_floor * peak]
    signs = np.sign(significant)
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def count_nodes(f: RadialFunction) -> int:
    """Number of interior sign changes of u."""
    return count_sign_changes(f.values_u)


def overlap(f: RadialFunction, g: RadialFunction) -> float:
    """Integral of R_f R_g r^2 dr for two functions on the same grid."""
    if f.grid != g.grid:
        raise DomainError("Overlap needs both functions on the same grid")
    r = f.grid.abscissae()
    return radial_integral(f.grid, r, f.values_u * g.values_u)


def _observable_integrals(
    problem: RadialProblem, state: QuantumState, grid: RadialGrid
) -> tuple:
    r = grid.abscissae()
    u = r * radial_values(problem, state, r)
    density = u * u
    norm = radial_integral(grid, r, density)
    inv_r = radial_integral(grid, r, density / r) / norm
    inv_r2 = radial_integral(grid, r, density / (r * r)) / norm
    return inv_r, inv_r2


def _combine(
    problem: RadialProblem, energy: float, observable: Observable, integrals: tuple
) -> float:
    inv_r, inv_r2 = integrals
    potential = -problem.a_strength * inv_r + problem.b_strength * inv_r2
    if observable == Observable.INV_R:
        return inv_r
    if observable == Observable.INV_R2:
        return inv_r2
    if observable == Observable.V:
        return potential
    if observable == Observable.T:
        return energy - potential
    if observable == Observable.R_VPRIME:
        return problem.a_strength * inv_r - 2.0 * problem.b_strength * inv_r2
    raise DomainError(f"Unknown observable: {observable}")


def problem_expectation(
    problem: RadialProblem,
    state: QuantumState,
    observable: Observable,
    grid: Optional[RadialGrid] = None,
) -> float:
    """<O> against |R|^2 r^2; <T> is E - <V>.

    The estimate is repeated on a grid with half the points. Disagreement above
    the configured tolerance raises a QuadratureError carrying the estimate.
    """
    settings = get_settings()
    grid = grid or default_grid(
        problem,
        state,
        points=settings.expectation_points,
        r_min_factor=settings.oracle_r_min_factor,
    )
    energy = problem_bound_energy(problem, state).energy.value

    fine = _combine(
        problem, energy, observable, _observable_integrals(problem, state, grid)
    )
    rough = _combine(
        problem,
        energy,
        observable,
        _observable_integrals(problem, state, grid.coarsened()),
    )
    error = abs(fine - rough)
    if error > settings.expectation_tolerance * max(abs(fine), 1e-300):
        raise QuadratureError(
            f"Quadrature for <{observable.value}> in state {state} did not converge",
            estimate=fine,
            error_estimate=error,
        )
    return fine


def expectation(
    mu: PhysQty,
    V0: PhysQty,
    a: PhysQty,
    state: QuantumState,
    observable: Observable,
) -> float:
    """Expectation value in the unit system of the inputs."""
    return problem_expectation(mie_problem(mu, V0, a), state, observable)
