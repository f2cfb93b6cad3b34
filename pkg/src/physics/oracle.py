"""Numerical radial eigensolver used to check the closed forms.

Solves -(hbar^2/2mu) u'' + [V(r) + l(l+1) hbar^2 / (2 mu r^2)] u = E u with
u(r_min) = u(r_max) = 0.

On a uniform grid the 3-point stencil acts on u directly. On a log-uniform
grid r = e^x and u = e^{x/2} w, which turns the problem into

    -(hbar^2/2mu) w'' + [(hbar^2/2mu)(l + 1/2)^2 + r^2 V] w = E r^2 w,

so the r^{Lambda+1} behaviour at the origin becomes a smooth exponential in x.
Either way the discrete operator is symmetrised into a tridiagonal matrix and
its lowest eigenpairs come from LAPACK bisection plus inverse iteration.

Problems are solved in scaled units (lengths in ``length_scale``, energies in
``energy_scale``) so matrix entries stay O(1) for molecular parameters.
"""

import logging
import math
from typing import Callable, List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from src.physics.models import (
    GridSpacing,
    OracleConfig,
    OracleMethod,
    OracleResult,
    PhysQty,
    PotentialParams,
    QuantumState,
    RadialGrid,
    RadialProblem,
    VerificationOutcome,
    VerificationReport,
)
from src.physics.potential import (
    centrifugal_profile,
    coulomb_barrier_profile,
    mie_problem,
    mie_profile,
)
from src.physics.spectrum import problem_bound_energy, problem_reduced_params
from src.physics.units import common_system, hbar2_over_2m
from src.physics.wavefunction import count_sign_changes, tail_factor
from src.utils.config import get_settings
from src.utils.error_handler import (
    BoundaryContaminationError,
    ComputeError,
    DomainError,
)
from src.utils.performance import measure_time, performance_monitor


logger = logging.getLogger(__name__)

RadialPotential = Callable[[np.ndarray], np.ndarray]

MIN_POINTS_PER_STATE = 16
RECOMMENDED_POINTS_PER_STATE = 200
MAX_R_MIN_FRACTION = 1e-3


class _Discretisation(NamedTuple):
    """Coefficients of -K w'' + q w = E m w on a uniform grid in t."""

    r: np.ndarray
    q: np.ndarray
    m: np.ndarray
    sqrt_m: np.ndarray
    h: float
    hbar2_2m: float
    log_grid: bool


class _Levels(NamedTuple):
    energies: np.ndarray
    estimates: np.ndarray
    vectors: np.ndarray
    grid: RadialGrid


def default_config(states_requested: int = 1) -> OracleConfig:
    """Oracle configuration from settings with an automatic domain."""
    settings = get_settings()
    return OracleConfig(
        grid=None,
        states_requested=states_requested,
        method=OracleMethod(settings.oracle_method),
        richardson=settings.oracle_richardson,
    )


def _discretise(
    grid: RadialGrid, potential: RadialPotential, hbar2_2m: float, ell: int
) -> _Discretisation:
    r = grid.abscissae()
    v = np.asarray(potential(r), dtype=float)
    if v.shape != r.shape or not np.all(np.isfinite(v)):
        raise ComputeError(
            "Potential could not be evaluated on the grid",
            f"Potential returned shape {v.shape} or non-finite values",
        )
    if grid.spacing == GridSpacing.LOG_UNIFORM:
        q = hbar2_2m * (ell + 0.5) ** 2 + r * r * v
        return _Discretisation(r, q, r * r, r, grid.step, hbar2_2m, True)
    q = v + centrifugal_profile(hbar2_2m, ell, r)
    ones = np.ones_like(r)
    return _Discretisation(r, q, ones, ones, grid.step, hbar2_2m, False)


def _to_u(disc: _Discretisation, w: np.ndarray) -> np.ndarray:
    """u(r) from w on the full grid, normalized so that int u^2 dr = 1."""
    weight = disc.h * float(np.sum(disc.m * w * w))
    u = np.sqrt(disc.r) * w if disc.log_grid else w.copy()
    u /= math.sqrt(weight)
    # Closed-form R is positive near the origin; match that sign.
    significant = np.flatnonzero(np.abs(u) > 1e-3 * np.max(np.abs(u)))
    if significant.size and u[significant[0]] < 0:
        u = -u
    return u


def _fd_levels(
    disc: _Discretisation, k: int, want_vectors: bool
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """Lowest k eigenpairs of the symmetrised 3-point stencil."""
    interior = slice(1, -1)
    h2 = disc.h * disc.h
    diag = (2.0 * disc.hbar2_2m / h2 + disc.q[interior]) / disc.m[interior]
    s = disc.sqrt_m[interior]
    off = -disc.hbar2_2m / (h2 * s[:-1] * s[1:])
    if k > diag.size:
        raise DomainError(f"Grid has {diag.size} unknowns, cannot return {k} states")

    performance_monitor.increment("eigen_calls")
    tol = get_settings().oracle_eigen_tol
    if not want_vectors:
        values = eigh_tridiagonal(
            diag, off, eigvals_only=True, select="i", select_range=(0, k - 1), tol=tol
        )
        return np.asarray(values), None

    values, y = eigh_tridiagonal(
        diag, off, select="i", select_range=(0, k - 1), tol=tol
    )
    vectors = np.zeros((k, disc.r.size))
    for j in range(k):
        w = np.zeros(disc.r.size)
        w[interior] = y[:, j] / s
        vectors[j] = _to_u(disc, w)
    return np.asarray(values), vectors


def _shoot(disc: _Discretisation, energy: float) -> np.ndarray:
    """Outward Numerov integration with w = 0 before the first stable point.

    A centrifugal barrier can make 1 - h^2 g / 12 nonpositive next to the
    origin on a uniform grid; those points carry w = 0 and the integration
    starts at the first point where the stencil is positive.
    """
    performance_monitor.increment("numerov_shots")
    g = (disc.q - energy * disc.m) / disc.hbar2_2m
    f = 1.0 - disc.h * disc.h * g / 12.0
    unstable = np.flatnonzero(f <= 0.0)
    start = 1
    if unstable.size:
        start = max(int(unstable[-1]) + 1, 1)
        if unstable.size != unstable[-1] + 1 or start > len(f) - 2:
            raise ComputeError(
                "Numerov stencil is unstable on this grid",
                f"1 - h^2 g / 12 <= 0 away from the origin (last at index "
                f"{int(unstable[-1])} of {len(f)}); refine the grid or use log "
                "spacing",
            )
    coef = (12.0 - 10.0 * f).tolist()
    fl = f.tolist()
    w = [0.0] * len(fl)
    w[start] = 1.0
    for i in range(start, len(fl) - 1):
        w[i + 1] = (coef[i] * w[i] - fl[i - 1] * w[i - 1]) / fl[i + 1]
        if abs(w[i + 1]) > 1e200:
            w = [value * 1e-200 for value in w]
    return np.asarray(w)


def _end_value(disc: _Discretisation, energy: float) -> float:
    w = _shoot(disc, energy)
    return float(w[-1] / np.max(np.abs(w)))


def _numerov_levels(
    disc: _Discretisation, k: int, want_vectors: bool
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """Numerov shooting, bracketed by finite-difference levels on the same grid.

    Outward shots grow without bound in the forbidden tail, so eigenvectors
    come from the finite-difference solve.
    """
    guide, guide_vectors = _fd_levels(disc, k + 1, want_vectors)
    tol = get_settings().oracle_eigen_tol
    energies = np.empty(k)

    for j in range(k):
        upper_gap = guide[j + 1] - guide[j]
        hi = guide[j] + 0.5 * upper_gap
        lo = guide[j] - 0.5 * (guide[j] - guide[j - 1]) if j else guide[j] - upper_gap
        f_lo, f_hi = _end_value(disc, lo), _end_value(disc, hi)
        if j == 0:
            for _ in range(8):
                if f_lo * f_hi < 0:
                    break
                lo -= upper_gap
                f_lo = _end_value(disc, lo)
        if f_lo * f_hi >= 0:
            raise ComputeError(
                "Numerov shooting could not bracket a level",
                f"No sign change for state {j} in [{lo!r}, {hi!r}]",
            )
        energies[j] = brentq(
            lambda e: _end_value(disc, e), lo, hi, xtol=tol, rtol=1e-15, maxiter=200
        )
    vectors = None if guide_vectors is None else guide_vectors[:k]
    return energies, vectors


def _levels_on_grid(
    grid: RadialGrid,
    potential: RadialPotential,
    hbar2_2m: float,
    ell: int,
    k: int,
    method: OracleMethod,
    want_vectors: bool,
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    disc = _discretise(grid, potential, hbar2_2m, ell)
    if method == OracleMethod.NUMEROV:
        return _numerov_levels(disc, k, want_vectors)
    return _fd_levels(disc, k, want_vectors)


def _raised_wall(grid: RadialGrid) -> Optional[RadialGrid]:
    """Same log step with r_min ten times larger."""
    if grid.spacing != GridSpacing.LOG_UNIFORM:
        return None
    dropped = int(round(math.log(10.0) / grid.step))
    if grid.points - dropped < MIN_POINTS_PER_STATE:
        return None
    return grid.model_copy(
        update={
            "r_min": grid.r_min * math.exp(dropped * grid.step),
            "points": grid.points - dropped,
        }
    )


def _extrapolated_levels(
    grid: RadialGrid,
    potential: RadialPotential,
    hbar2_2m: float,
    ell: int,
    k: int,
    method: OracleMethod,
    richardson: bool,
) -> _Levels:
    """Energies, per-level error estimates, eigenvectors and the finest grid."""
    order = 4 if method == OracleMethod.NUMEROV else 2
    gain = 2.0**order

    def solve(g: RadialGrid, vectors: bool = False) -> tuple:
        return _levels_on_grid(g, potential, hbar2_2m, ell, k, method, vectors)

    if richardson:
        g1 = grid
        g2 = g1.refined()
        g3 = g2.refined()
        e1, _ = solve(g1)
        e2, _ = solve(g2)
        e3, vectors = solve(g3, vectors=True)
        r1 = (gain * e2 - e1) / (gain - 1.0)
        r2 = (gain * e3 - e2) / (gain - 1.0)
        energies, estimates, finest, raw = r2, np.abs(r2 - r1), g3, e3
    else:
        energies, vectors = solve(grid, vectors=True)
        coarse = grid.coarsened()
        if coarse.points >= MIN_POINTS_PER_STATE * k:
            e_coarse, _ = solve(coarse)
            estimates = np.abs(energies - e_coarse) / (gain - 1.0)
        else:
            estimates = np.full(k, np.inf)
        finest, raw = grid, energies

    walled = _raised_wall(finest)
    if walled is not None:
        e_wall, _ = solve(walled)
        # The wall shift scales at least linearly in r_min.
        estimates = estimates + np.abs(e_wall - raw) / 9.0

    return _Levels(np.asarray(energies), np.asarray(estimates), vectors, finest)


def _contaminated(
    levels: _Levels, continuum: Optional[float], tail_window: float, amplitude: float
) -> Optional[Tuple[int, str]]:
    """First state that is unbound or touches r_max, with a reason."""
    r = levels.grid.abscissae()
    outer = r >= (1.0 - tail_window) * levels.grid.r_max
    for j, energy in enumerate(levels.energies):
        if continuum is not None and energy >= continuum:
            return j, f"eigenvalue {energy!r} is not below the continuum"
        u = np.abs(levels.vectors[j])
        ratio = float(np.max(u[outer]) / np.max(u))
        if ratio > amplitude:
            return j, f"tail amplitude {ratio:.3e} of peak near r_max"
    return None


def _doubled(grid: RadialGrid) -> RadialGrid:
    if grid.spacing == GridSpacing.LOG_UNIFORM:
        extra = int(math.ceil(math.log(2.0) / grid.step))
        return grid.model_copy(
            update={
                "r_max": grid.r_max * math.exp(extra * grid.step),
                "points": grid.points + extra,
            }
        )
    return grid.model_copy(
        update={
            "r_max": 2.0 * grid.r_max - grid.r_min,
            "points": 2 * (grid.points - 1) + 1,
        }
    )


def _check_points(grid: RadialGrid, k: int) -> None:
    if grid.points < MIN_POINTS_PER_STATE * k:
        raise DomainError(
            f"Grid with {grid.points} points is too small for {k} states"
        )
    if grid.points < RECOMMENDED_POINTS_PER_STATE * k:
        logger.warning(
            f"Grid with {grid.points} points is below the recommended "
            f"{RECOMMENDED_POINTS_PER_STATE} per state; results may be unconverged"
        )


def _solve_scaled(
    potential: RadialPotential,
    hbar2_2m: float,
    ell: int,
    grid: RadialGrid,
    cfg: OracleConfig,
    auto_domain: bool,
    continuum: Optional[float],
) -> _Levels:
    settings = get_settings()
    k = cfg.states_requested
    _check_points(grid, k)
    performance_monitor.increment("oracle_solves")

    for attempt in range(settings.oracle_max_doublings + 1):
        logger.debug(
            f"Oracle l={ell} k={k} method={cfg.method.value} points={grid.points} "
            f"r=[{grid.r_min:.3g}, {grid.r_max:.3g}]"
        )
        levels = _extrapolated_levels(
            grid, potential, hbar2_2m, ell, k, cfg.method, cfg.richardson
        )
        bad = _contaminated(
            levels,
            continuum,
            settings.oracle_tail_window,
            settings.oracle_tail_amplitude,
        )
        if bad is None:
            return levels
        state, detail = bad
        if not auto_domain or attempt == settings.oracle_max_doublings:
            raise BoundaryContaminationError(state, ell, detail)
        performance_monitor.increment("domain_doublings")
        logger.warning(f"Doubling oracle domain for l={ell}: {detail}")
        grid = _doubled(grid)

    raise BoundaryContaminationError(k - 1, ell, "domain doubling exhausted")


def _scaled_grid(grid: RadialGrid, length_scale: float) -> RadialGrid:
    return grid.model_copy(
        update={"r_min": grid.r_min / length_scale, "r_max": grid.r_max / length_scale}
    )


def _result(
    levels: _Levels,
    cfg: OracleConfig,
    length_scale: float,
    energy_scale: float,
) -> OracleResult:
    grid = levels.grid.model_copy(
        update={
            "r_min": levels.grid.r_min * length_scale,
            "r_max": levels.grid.r_max * length_scale,
        }
    )
    vectors = levels.vectors / math.sqrt(length_scale)
    return OracleResult(
        energies=[float(e) * energy_scale for e in levels.energies],
        eigenvectors=vectors,
        grid_used=grid,
        convergence_estimate=[float(e) * energy_scale for e in levels.estimates],
        method=cfg.method,
        richardson=cfg.richardson,
    )


def auto_grid(problem: RadialProblem, ell: int, states: int) -> RadialGrid:
    """Scaled log grid sized for the highest requested state at this l."""
    settings = get_settings()
    reduced = problem_reduced_params(problem, QuantumState(n=states - 1, ell=ell))
    s = states + reduced.Lambda
    kappa = reduced.kappa * problem.length_scale
    t = tail_factor(s, settings.oracle_tail_decades, math.inf)
    r_min = settings.oracle_r_min_factor
    r_max = max(40.0, t * s / kappa)
    points = int(math.ceil(math.log(r_max / r_min) / settings.oracle_log_step)) + 1
    points = max(points, RECOMMENDED_POINTS_PER_STATE * states)
    return RadialGrid(
        r_min=r_min, r_max=r_max, points=points, spacing=GridSpacing.LOG_UNIFORM
    )


@measure_time
def solve_problem(
    problem: RadialProblem, ell: int, cfg: Optional[OracleConfig] = None
) -> OracleResult:
    """Lowest cfg.states_requested levels of a radial problem at angular momentum l."""
    if ell < 0:
        raise DomainError(f"Angular momentum must be nonnegative, got {ell}")
    cfg = cfg or default_config()
    length_scale, energy_scale = problem.length_scale, problem.energy_scale
    a_s = problem.a_strength / (energy_scale * length_scale)
    b_s = problem.b_strength / (energy_scale * length_scale**2)
    k_scaled = problem.hbar2_2m / (energy_scale * length_scale**2)

    if cfg.grid is None:
        grid, auto_domain = auto_grid(problem, ell, cfg.states_requested), True
    else:
        grid, auto_domain = _scaled_grid(cfg.grid, length_scale), False
        if grid.r_min > MAX_R_MIN_FRACTION:
            raise DomainError(
                f"Oracle grid r_min={cfg.grid.r_min} must not exceed "
                f"{MAX_R_MIN_FRACTION} x {length_scale}"
            )

    levels = _solve_scaled(
        lambda r: coulomb_barrier_profile(a_s, b_s, r),
        k_scaled,
        ell,
        grid,
        cfg,
        auto_domain,
        continuum=0.0,
    )
    logger.info(
        f"Oracle solved l={ell}: {cfg.states_requested} states on "
        f"{levels.grid.points} points ({cfg.method.value})"
    )
    return _result(levels, cfg, length_scale, energy_scale)


def solve_radial(
    mu: PhysQty, V0: PhysQty, a: PhysQty, ell: int, cfg: Optional[OracleConfig] = None
) -> OracleResult:
    """Oracle levels of the (2, 1) Mie problem."""
    return solve_problem(mie_problem(mu, V0, a), ell, cfg)


@measure_time
def solve_potential(
    potential: RadialPotential,
    hbar2_2m: float,
    ell: int,
    cfg: OracleConfig,
    continuum: Optional[float] = None,
) -> OracleResult:
    """Oracle levels for any radial potential on an explicit grid.

    Args:
        potential: V(r) evaluated on an array of radii
        hbar2_2m: hbar^2/(2 mu) in the units of ``potential`` and the grid
        ell: Angular momentum
        cfg: Configuration; ``cfg.grid`` is required
        continuum: Energies at or above this are reported as unbound
    """
    if cfg.grid is None:
        raise DomainError("An injected potential needs an explicit grid")
    if not hbar2_2m > 0:
        raise DomainError(f"hbar^2/2mu must be positive, got {hbar2_2m}")
    levels = _solve_scaled(
        potential, hbar2_2m, ell, cfg.grid, cfg, auto_domain=False, continuum=continuum
    )
    return _result(levels, cfg, 1.0, 1.0)


def solve_mie_general(
    mu: PhysQty, params: PotentialParams, ell: int, cfg: Optional[OracleConfig] = None
) -> OracleResult:
    """Numerical levels for any Mie exponent pair (no closed form beyond (2, 1))."""
    system = common_system(mu, params.epsilon, params.a)
    settings = get_settings()
    depth, width = params.epsilon.value, params.a.value
    k_scaled = hbar2_over_2m(mu).value / (depth * width * width)
    cfg = cfg or default_config()

    if cfg.grid is None:
        # Keep (a/r)^l_exp representable at the inner wall.
        r_min = max(settings.oracle_r_min_factor, 10.0 ** (-250.0 / params.ell_exp))
        r_max = 40.0
        points = int(math.ceil(math.log(r_max / r_min) / settings.oracle_log_step)) + 1
        points = max(points, RECOMMENDED_POINTS_PER_STATE * cfg.states_requested)
        grid = RadialGrid(r_min=r_min, r_max=r_max, points=points)
        auto_domain = True
    else:
        grid, auto_domain = _scaled_grid(cfg.grid, width), False

    levels = _solve_scaled(
        lambda r: mie_profile(1.0, 1.0, params.ell_exp, params.k_exp, r),
        k_scaled,
        ell,
        grid,
        cfg,
        auto_domain,
        continuum=0.0,
    )
    logger.info(
        f"Mie ({params.ell_exp},{params.k_exp}) l={ell} in {system.value} units: "
        f"{cfg.states_requested} states"
    )
    return _result(levels, cfg, width, depth)


def report_from_result(
    problem: RadialProblem,
    state: QuantumState,
    result: OracleResult,
    tolerance: Optional[float] = None,
) -> VerificationReport:
    """Compare the closed-form level with an existing oracle result."""
    settings = get_settings()
    tolerance = settings.verify_tolerance if tolerance is None else tolerance
    if state.n >= len(result.energies):
        raise DomainError(
            f"Oracle result holds {len(result.energies)} levels, need n={state.n}"
        )
    e_closed = problem_bound_energy(problem, state).energy.value
    e_oracle = result.energies[state.n]
    estimate = result.convergence_estimate[state.n]
    abs_delta = abs(e_closed - e_oracle)
    nodes = None
    if result.eigenvectors is not None:
        nodes = count_sign_changes(result.eigenvectors[state.n])

    report = VerificationReport(
        state=state,
        e_closed=e_closed,
        e_oracle=e_oracle,
        abs_delta=abs_delta,
        rel_delta=abs_delta / abs(e_closed),
        convergence_estimate=estimate,
        converged=estimate <= settings.convergence_threshold * abs(e_oracle),
        tolerance=tolerance,
        oracle_nodes=nodes,
        grid_used=result.grid_used,
    )
    if report.outcome != VerificationOutcome.PASS:
        logger.warning(
            f"State {state}: {report.outcome.value} (rel_delta={report.rel_delta:.3e}, "
            f"estimate={estimate:.3e})"
        )
    return report


def verify_problem_state(
    problem: RadialProblem,
    state: QuantumState,
    cfg: Optional[OracleConfig] = None,
    tolerance: Optional[float] = None,
) -> VerificationReport:
    """Closed form vs oracle for one state of a radial problem."""
    cfg = cfg or default_config()
    if cfg.states_requested < state.n + 1:
        cfg = cfg.model_copy(update={"states_requested": state.n + 1})
    result = solve_problem(problem, state.ell, cfg)
    return report_from_result(problem, state, result, tolerance)


def verify_state(
    mu: PhysQty,
    V0: PhysQty,
    a: PhysQty,
    state: QuantumState,
    cfg: Optional[OracleConfig] = None,
    tolerance: Optional[float] = None,
) -> VerificationReport:
    """Closed form vs oracle for one Mie state.

    A mismatch is reported in the outcome, never raised.
    """
    return verify_problem_state(mie_problem(mu, V0, a), state, cfg, tolerance)


def tally_outcomes(reports: List[VerificationReport]) -> Tuple[int, int, int]:
    """Counts of (passed, failed, inconclusive) reports."""
    passed = sum(1 for r in reports if r.outcome == VerificationOutcome.PASS)
    failed = sum(1 for r in reports if r.outcome == VerificationOutcome.FAIL)
    return passed, failed, len(reports) - passed - failed
