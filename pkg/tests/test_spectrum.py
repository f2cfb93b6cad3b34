"""Tests for the closed-form spectrum."""

import math

import numpy as np
import pytest

from src.physics.models import (
    Dimension,
    EllRule,
    EnergyReference,
    PhysQty,
    QuantumState,
    UnitSystem,
    energy,
    length,
    mass,
)
from src.physics.spectrum import (
    apply_energy_reference,
    bound_energy,
    bound_energy_atomic,
    bound_energy_coulomb_barrier,
    lambda_form_energy,
    problem_bound_energy,
    problem_reduced_params,
    problem_spectrum_table,
    reduced_params,
    spectrum_table,
    vibrational_spacings,
)
from src.physics.units import to_internal
from src.utils.error_handler import DomainError


class TestBoundEnergy:
    """Test single levels."""

    def test_atomic_ground_state(self, atomic_params: dict):
        """Test E(0, 0) = -1/(1 + sqrt(3))^2 for mu = 1/2, V0 = a = 1."""
        level = bound_energy(state=QuantumState(n=0, ell=0), **atomic_params)

        assert level.energy.value == pytest.approx(-0.13397459621556135, rel=1e-14)
        assert level.energy.system == UnitSystem.ATOMIC_2MU
        assert level.energy.dimension == Dimension.ENERGY

    def test_convention_bridge(self):
        """Test the hbar = 1, 2mu = 1 form equals the general formula."""
        rng = np.random.default_rng(20240611)
        system = UnitSystem.ATOMIC_2MU
        for _ in range(1000):
            depth, width = rng.uniform(0.05, 20.0, size=2)
            n, ell = (int(k) for k in rng.integers(0, 12, size=2))
            state = QuantumState(n=n, ell=ell)
            general = bound_energy(
                mass(0.5, system), energy(depth, system), length(width, system), state
            ).energy.value
            atomic = bound_energy_atomic(depth, width, state)
            assert atomic == pytest.approx(general, rel=1e-14)

    def test_hydrogen_limit(self):
        """Test B = 0 reproduces -mu A^2 / (2 hbar^2 (n + l + 1)^2)."""
        system = UnitSystem.ATOMIC
        mu, coulomb = 1.0, 1.0
        for n in range(11):
            for ell in range(n + 1):
                level = bound_energy_coulomb_barrier(
                    mass(mu, system),
                    PhysQty(
                        value=coulomb, dimension=Dimension.ENERGY_LENGTH, system=system
                    ),
                    PhysQty(
                        value=0.0, dimension=Dimension.ENERGY_LENGTH2, system=system
                    ),
                    QuantumState(n=n, ell=ell),
                )
                expected = -mu * coulomb**2 / (2.0 * (n + ell + 1) ** 2)
                assert level.energy.value == pytest.approx(expected, rel=1e-14)

    def test_lambda_form_agrees(self, co_problem):
        """Test the Lambda form of the level equals the square-root form."""
        for n in range(6):
            for ell in range(n + 1):
                state = QuantumState(n=n, ell=ell)
                closed = problem_bound_energy(co_problem, state).energy.value
                assert lambda_form_energy(co_problem, state) == pytest.approx(
                    closed, rel=1e-12
                )

    def test_unit_systems_agree(self):
        """Test eV levels converted to atomic units match atomic-unit levels."""
        spectroscopic = {
            "mu": mass(6.8562087),
            "V0": energy(11.2256),
            "a": length(1.12832),
        }
        for system in (UnitSystem.ATOMIC, UnitSystem.ATOMIC_2MU):
            converted = {
                name: to_internal(q, system) for name, q in spectroscopic.items()
            }
            for n in range(6):
                for ell in range(n + 1):
                    state = QuantumState(n=n, ell=ell)
                    direct = bound_energy(state=state, **converted).energy
                    via_ev = to_internal(
                        bound_energy(state=state, **spectroscopic).energy, system
                    )
                    assert via_ev.system == direct.system == system
                    assert via_ev.value == pytest.approx(direct.value, rel=1e-12)

    def test_invalid_atomic_inputs(self):
        """Test nonpositive V0 or a is rejected."""
        with pytest.raises(DomainError, match="V0"):
            bound_energy_atomic(0.0, 1.0, QuantumState(n=0, ell=0))
        with pytest.raises(DomainError, match="a must be"):
            bound_energy_atomic(1.0, -2.0, QuantumState(n=0, ell=0))

    def test_negative_quantum_numbers(self):
        """Test states need nonnegative n and l."""
        with pytest.raises(ValueError):
            QuantumState(n=-1, ell=0)


class TestReducedParams:
    """Test derived quantities."""

    def test_lambda_solves_quadratic(self, co_problem):
        """Test Lambda (Lambda + 1) = gamma, with gamma in the tens of thousands."""
        reduced = problem_reduced_params(co_problem, QuantumState(n=2, ell=3))

        assert reduced.gamma > 1e3
        assert reduced.Lambda * (reduced.Lambda + 1.0) == pytest.approx(
            reduced.gamma, rel=1e-13
        )

    def test_consistency(self, atomic_params: dict):
        """Test eps^2 = -kappa^2, beta = -A and E = -kappa^2 hbar^2 / 2mu."""
        state = QuantumState(n=1, ell=1)
        reduced = reduced_params(state=state, **atomic_params)
        level = bound_energy(state=state, **atomic_params)

        assert reduced.eps_sq == pytest.approx(-reduced.kappa**2)
        assert reduced.beta == -reduced.A
        assert level.energy.value == pytest.approx(reduced.eps_sq, rel=1e-13)

    def test_small_gamma(self, hydrogen_problem):
        """Test Lambda = l exactly when B = 0."""
        for ell in range(5):
            state = QuantumState(n=0, ell=ell)
            reduced = problem_reduced_params(hydrogen_problem, state)
            assert reduced.Lambda == pytest.approx(ell, abs=1e-14)


class TestSpectrumTable:
    """Test tables of levels."""

    def test_triangular_layout(self, atomic_params: dict):
        """Test n <= 5, l <= n gives 21 levels in (n, l) order."""
        levels = spectrum_table(n_max=5, **atomic_params)
        keys = [(lv.state.n, lv.state.ell) for lv in levels]

        assert len(levels) == 21
        assert keys == sorted(keys)
        assert keys[-1] == (5, 5)

    def test_rectangular_rule(self, atomic_problem):
        """Test l <= ell_max for every n."""
        rule = EllRule(triangular=False, ell_max=2)
        levels = problem_spectrum_table(atomic_problem, 3, rule)

        assert len(levels) == 12

    def test_rectangular_needs_bound(self):
        """Test a rectangular rule without ell_max is invalid."""
        with pytest.raises(ValueError, match="Invalid ell rule"):
            EllRule(triangular=False)

    def test_negative_n_max(self, atomic_problem):
        """Test n_max < 0 is a domain error."""
        with pytest.raises(DomainError, match="n_max"):
            problem_spectrum_table(atomic_problem, -1)

    def test_monotonic(self, builtin_registry):
        """Test levels rise with n at fixed l and with l at fixed n."""
        for spec in builtin_registry:
            levels = spectrum_table(spec.reduced_mass, spec.V0, spec.a, 5)
            by_state = {(lv.state.n, lv.state.ell): lv.energy.value for lv in levels}
            for (n, ell), value in by_state.items():
                assert value < 0
                if (n + 1, ell) in by_state:
                    assert by_state[(n + 1, ell)] > value
                if (n, ell + 1) in by_state:
                    assert by_state[(n, ell + 1)] > value

    def test_every_builtin_has_six_levels(self, builtin_registry):
        """Test at least six bound s-levels per builtin molecule."""
        for spec in builtin_registry:
            levels = spectrum_table(
                spec.reduced_mass, spec.V0, spec.a, 5, EllRule(ell_max=0)
            )
            assert len(levels) == 6
            assert all(-spec.V0.value / 2 < lv.energy.value < 0 for lv in levels)

    def test_vibrational_spacings(self, co_problem):
        """Test anharmonic spacings: positive and shrinking with n."""
        levels = problem_spectrum_table(co_problem, 5, EllRule(ell_max=0))
        spacings = vibrational_spacings(levels)
        values = [spacings[(n, 0)] for n in range(5)]

        assert len(spacings) == 5
        assert all(v > 0 for v in values)
        assert all(b < a for a, b in zip(values, values[1:]))


class TestEnergyReference:
    """Test the choice of energy zero."""

    def test_raw(self, atomic_problem):
        """Test raw energies are unchanged."""
        levels = problem_spectrum_table(atomic_problem, 2)
        shifted = apply_energy_reference(levels, atomic_problem, EnergyReference.RAW)

        assert shifted == [lv.energy.value for lv in levels]

    def test_from_ground(self, atomic_problem):
        """Test the ground level becomes zero."""
        levels = problem_spectrum_table(atomic_problem, 2)
        shifted = apply_energy_reference(
            levels, atomic_problem, EnergyReference.FROM_GROUND
        )

        assert shifted[0] == 0.0
        assert all(v > 0 for v in shifted[1:])

    def test_from_well_bottom(self, atomic_problem):
        """Test the offset is V0/2 for the Mie well."""
        levels = problem_spectrum_table(atomic_problem, 1)
        shifted = apply_energy_reference(
            levels, atomic_problem, EnergyReference.FROM_WELL_BOTTOM
        )

        assert shifted[0] == pytest.approx(levels[0].energy.value + 0.5, rel=1e-15)
        assert all(v > 0 for v in shifted)

    def test_coulomb_has_no_bottom(self, hydrogen_problem):
        """Test the pure Coulomb well has no finite bottom."""
        levels = problem_spectrum_table(hydrogen_problem, 1)
        with pytest.raises(DomainError, match="no finite bottom"):
            apply_energy_reference(
                levels, hydrogen_problem, EnergyReference.FROM_WELL_BOTTOM
            )

    def test_harmonic_limit(self, co_problem):
        """Test the zero-point energy of a deep well is close to hbar omega / 2."""
        ground = problem_bound_energy(co_problem, QuantumState(n=0, ell=0))
        zero_point = ground.energy.value + co_problem.V0 / 2
        spacing = (
            problem_bound_energy(co_problem, QuantumState(n=1, ell=0)).energy.value
            - ground.energy.value
        )

        assert zero_point > 0
        assert zero_point == pytest.approx(spacing / 2, rel=0.05)
        assert not math.isnan(zero_point)
