"""Pytest configuration and fixtures."""

import sys
from pathlib import Path

import pytest

# Add project root to Python path
sys.path.insert(0, str(Path(__file__).parents[1]))

from src.physics.models import (
    Dimension,
    PhysQty,
    RadialProblem,
    UnitSystem,
    energy,
    length,
    mass,
)
from src.physics.potential import coulomb_barrier_problem, mie_problem
from src.services.molecule_registry import MoleculeRegistry
from src.utils.config import reset_settings
from src.utils.performance import performance_monitor


PROJECT_ROOT = Path(__file__).parents[1]


@pytest.fixture(autouse=True)
def reset_singletons():
    """Reset singleton instances before each test."""
    reset_settings()
    performance_monitor.reset()


@pytest.fixture(scope="session")
def project_root() -> Path:
    """Repository root, the working directory for CLI runs."""
    return PROJECT_ROOT


@pytest.fixture
def atomic_params() -> dict:
    """mu = 0.5 in the hbar = 1, 2mu = 1 convention with V0 = a = 1."""
    system = UnitSystem.ATOMIC_2MU
    return {
        "mu": mass(0.5, system),
        "V0": energy(1.0, system),
        "a": length(1.0, system),
    }


@pytest.fixture
def atomic_problem(atomic_params: dict) -> RadialProblem:
    """Radial problem for the atomic parameters."""
    return mie_problem(**atomic_params)


@pytest.fixture
def hydrogen_problem() -> RadialProblem:
    """Hartree units, mu = 1, A = 1, B = 0: R_10 = 2 e^{-r}, E_0 = -1/2."""
    system = UnitSystem.ATOMIC
    return coulomb_barrier_problem(
        mass(1.0, system),
        PhysQty(value=1.0, dimension=Dimension.ENERGY_LENGTH, system=system),
        PhysQty(value=0.0, dimension=Dimension.ENERGY_LENGTH2, system=system),
    )


@pytest.fixture(scope="session")
def builtin_registry() -> MoleculeRegistry:
    """Registry shipped with the package."""
    return MoleculeRegistry.builtin()


@pytest.fixture
def co_problem(builtin_registry: MoleculeRegistry) -> RadialProblem:
    """Carbon monoxide from the builtin registry."""
    spec = builtin_registry.get("CO")
    return mie_problem(spec.reduced_mass, spec.V0, spec.a, label=spec.name)


@pytest.fixture
def sample_registry_data() -> dict:
    """Registry document with one molecule."""
    return {
        "molecules": [
            {
                "name": "HCl",
                "reduced_mass": {"value": 0.9801045, "unit": "amu"},
                "V0": {"value": 4.619, "unit": "eV"},
                "a": {"value": 1.2746, "unit": "angstrom"},
                "source": "test data",
            }
        ]
    }
