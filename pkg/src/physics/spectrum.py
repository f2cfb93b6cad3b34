"""Closed-form bound-state spectrum of the -A/r + B/r^2 family.

The (2, 1) Mie potential V0[(a/r)^2/2 - a/r] is the member with A = V0 a and
B = V0 a^2 / 2. Its levels are

    E = -(2 mu V0^2 a^2 / hbar^2) [2n + 1 + sqrt((2l+1)^2 + 4 mu V0 a^2 / hbar^2)]^-2
      = -hbar^2 A^2 / (8 mu (n + Lambda + 1)^2)

with A = 2 mu V0 a / hbar^2 and Lambda(Lambda + 1) = gamma.
"""

import logging
import math
from typing import Dict, List, Optional, Tuple

from src.physics.models import (
    Dimension,
    EllRule,
    EnergyLevel,
    EnergyReference,
    PhysQty,
    QuantumState,
    RadialProblem,
    ReducedParams,
)
from src.physics.potential import (
    coulomb_barrier_problem,
    effective_minimum,
    mie_problem,
)
from src.utils.error_handler import DomainError


logger = logging.getLogger(__name__)


def _closed_form_energy(
    a_strength: float, b_strength: float, hbar2_2m: float, n: int, ell: int
) -> float:
    """-(A_s^2 / K) [2n + 1 + sqrt((2l+1)^2 + 4 B_s / K)]^-2 with K = hbar^2/2mu."""
    root = math.sqrt((2 * ell + 1) ** 2 + 4.0 * b_strength / hbar2_2m)
    return -(a_strength * a_strength / hbar2_2m) / (2 * n + 1 + root) ** 2


def problem_reduced_params(
    problem: RadialProblem, state: QuantumState
) -> ReducedParams:
    """beta, gamma, eps^2, A, Lambda and kappa for one state."""
    coulomb = problem.coulomb_strength
    gamma = problem.gamma(state.ell)
    # Same value as (-1 + sqrt(1 + 4 gamma)) / 2, without cancellation at small gamma
    lam = 2.0 * gamma / (1.0 + math.sqrt(1.0 + 4.0 * gamma))
    kappa = coulomb / (2.0 * (state.n + lam + 1.0))
    return ReducedParams(
        beta=-coulomb,
        gamma=gamma,
        eps_sq=-kappa * kappa,
        A=coulomb,
        Lambda=lam,
        kappa=kappa,
    )


def problem_bound_energy(problem: RadialProblem, state: QuantumState) -> EnergyLevel:
    """Closed-form level for a radial problem."""
    value = _closed_form_energy(
        problem.a_strength, problem.b_strength, problem.hbar2_2m, state.n, state.ell
    )
    return EnergyLevel(
        state=state,
        energy=PhysQty(value=value, dimension=Dimension.ENERGY, system=problem.system),
        reduced=problem_reduced_params(problem, state),
    )


def lambda_form_energy(problem: RadialProblem, state: QuantumState) -> float:
    """The same level written as -hbar^2 A^2 / (8 mu (n + Lambda + 1)^2)."""
    reduced = problem_reduced_params(problem, state)
    s = state.n + reduced.Lambda + 1.0
    return -problem.hbar2_2m * reduced.A**2 / (4.0 * s * s)


def reduced_params(
    mu: PhysQty, V0: PhysQty, a: PhysQty, state: QuantumState
) -> ReducedParams:
    """Derived parameters of the (2, 1) Mie problem."""
    return problem_reduced_params(mie_problem(mu, V0, a), state)


def bound_energy(
    mu: PhysQty, V0: PhysQty, a: PhysQty, state: QuantumState
) -> EnergyLevel:
    """Closed-form Mie level in the unit system of the inputs."""
    return problem_bound_energy(mie_problem(mu, V0, a), state)


def bound_energy_atomic(V0: float, a: float, state: QuantumState) -> float:
    """-V0^2 a^2 [2n + 1 + sqrt((2l+1)^2 + 2 V0 a^2)]^-2 with hbar = 1, 2 mu = 1."""
    for name, value in (("V0", V0), ("a", a)):
        if not math.isfinite(value) or value <= 0:
            raise DomainError(f"{name} must be positive and finite, got {value}")
    return _closed_form_energy(V0 * a, V0 * a * a / 2.0, 1.0, state.n, state.ell)


def bound_energy_coulomb_barrier(
    mu: PhysQty, A_strength: PhysQty, B_strength: PhysQty, state: QuantumState
) -> EnergyLevel:
    """Level of -A/r + B/r^2; B = 0 gives -mu A^2 / (2 hbar^2 (n + l + 1)^2)."""
    return problem_bound_energy(
        coulomb_barrier_problem(mu, A_strength, B_strength), state
    )


def problem_spectrum_table(
    problem: RadialProblem, n_max: int, ell_rule: Optional[EllRule] = None
) -> List[EnergyLevel]:
    """Levels for n = 0..n_max, sorted by (n, l)."""
    if n_max < 0:
        raise DomainError(f"n_max must be nonnegative, got {n_max}")
    rule = ell_rule or EllRule()
    levels = [
        problem_bound_energy(problem, QuantumState(n=n, ell=ell))
        for n in range(n_max + 1)
        for ell in rule.ells(n)
    ]
    logger.debug(f"Generated {len(levels)} levels up to n={n_max}")
    return levels


def spectrum_table(
    mu: PhysQty,
    V0: PhysQty,
    a: PhysQty,
    n_max: int,
    ell_rule: Optional[EllRule] = None,
) -> List[EnergyLevel]:
    """Triangular (n, l <= n) grid of Mie levels by default."""
    return problem_spectrum_table(mie_problem(mu, V0, a), n_max, ell_rule)


def reference_offset(problem: RadialProblem, reference: EnergyReference) -> float:
    """Amount added to raw energies for the chosen zero.

    FROM_WELL_BOTTOM measures from the potential minimum, -V0/2 for Mie.
    """
    if reference == EnergyReference.RAW:
        return 0.0
    if reference == EnergyReference.FROM_GROUND:
        ground = problem_bound_energy(problem, QuantumState(n=0, ell=0))
        return -ground.energy.value
    if problem.b_strength <= 0:
        raise DomainError("A pure Coulomb well has no finite bottom")
    _, bottom = effective_minimum(problem, 0)
    return -bottom


def apply_energy_reference(
    levels: List[EnergyLevel], problem: RadialProblem, reference: EnergyReference
) -> List[float]:
    """Energies of ``levels`` relative to the chosen zero."""
    offset = reference_offset(problem, reference)
    return [level.energy.value + offset for level in levels]


def vibrational_spacings(levels: List[EnergyLevel]) -> Dict[Tuple[int, int], float]:
    """E(n+1, l) - E(n, l) for every consecutive pair present, keyed by (n, l)."""
    by_state = {(lv.state.n, lv.state.ell): lv.energy.value for lv in levels}
    return {
        (n, ell): by_state[(n + 1, ell)] - energy
        for (n, ell), energy in sorted(by_state.items())
        if (n + 1, ell) in by_state
    }
