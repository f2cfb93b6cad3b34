"""Physical constants and unit conversions.

Three conventions are supported:

* ``SPECTROSCOPIC``: eV, angstrom, amu.
* ``ATOMIC``: hbar = m_e = 1 (hartree, bohr, electron mass).
* ``ATOMIC_2MU``: hbar = 1, 2 m_e = 1 (rydberg, bohr, two electron masses).

In both atomic conventions hbar^2/(2 mu) is simply 1/(2 mu).
"""

import logging
import math
from typing import Dict

from src.physics.models import Dimension, PhysQty, UnitSystem
from src.utils.error_handler import ConversionError, DomainError


logger = logging.getLogger(__name__)

# CODATA 2018
HBAR_C_EV_ANGSTROM = 1973.269804
AMU_C2_EV = 931.49410242e6
BOHR_ANGSTROM = 0.529177210903
HARTREE_EV = 27.211386245988
RYDBERG_EV = HARTREE_EV / 2.0

# Fixed by the four constants above so that hbar = m_e = 1 holds exactly in the
# atomic systems; agrees with the tabulated 5.48579909065e-4 to ~1e-10.
ELECTRON_MASS_AMU = HBAR_C_EV_ANGSTROM**2 / (
    AMU_C2_EV * HARTREE_EV * BOHR_ANGSTROM**2
)

# Size of one unit of each system, expressed in spectroscopic units
_ENERGY_EV: Dict[UnitSystem, float] = {
    UnitSystem.SPECTROSCOPIC: 1.0,
    UnitSystem.ATOMIC: HARTREE_EV,
    UnitSystem.ATOMIC_2MU: RYDBERG_EV,
}
_LENGTH_ANGSTROM: Dict[UnitSystem, float] = {
    UnitSystem.SPECTROSCOPIC: 1.0,
    UnitSystem.ATOMIC: BOHR_ANGSTROM,
    UnitSystem.ATOMIC_2MU: BOHR_ANGSTROM,
}
_MASS_AMU: Dict[UnitSystem, float] = {
    UnitSystem.SPECTROSCOPIC: 1.0,
    UnitSystem.ATOMIC: ELECTRON_MASS_AMU,
    UnitSystem.ATOMIC_2MU: 2.0 * ELECTRON_MASS_AMU,
}

ENERGY_UNIT_LABELS: Dict[UnitSystem, str] = {
    UnitSystem.SPECTROSCOPIC: "eV",
    UnitSystem.ATOMIC: "hartree",
    UnitSystem.ATOMIC_2MU: "rydberg",
}
LENGTH_UNIT_LABELS: Dict[UnitSystem, str] = {
    UnitSystem.SPECTROSCOPIC: "angstrom",
    UnitSystem.ATOMIC: "bohr",
    UnitSystem.ATOMIC_2MU: "bohr",
}
MASS_UNIT_LABELS: Dict[UnitSystem, str] = {
    UnitSystem.SPECTROSCOPIC: "amu",
    UnitSystem.ATOMIC: "m_e",
    UnitSystem.ATOMIC_2MU: "2m_e",
}


def _unit_size(dimension: Dimension, system: UnitSystem) -> float:
    """Size of the system's unit for this dimension, in spectroscopic units."""
    energy = _ENERGY_EV[system]
    length = _LENGTH_ANGSTROM[system]
    sizes = {
        Dimension.ENERGY: energy,
        Dimension.LENGTH: length,
        Dimension.MASS: _MASS_AMU[system],
        Dimension.DIMENSIONLESS: 1.0,
        Dimension.ENERGY_LENGTH: energy * length,
        Dimension.ENERGY_LENGTH2: energy * length * length,
    }
    try:
        return sizes[dimension]
    except KeyError:
        raise ConversionError(
            f"No conversion defined for {dimension} in {system.value}"
        ) from None


def to_internal(q: PhysQty, target: UnitSystem) -> PhysQty:
    """Express a quantity in another unit system.

    Args:
        q: Quantity to convert
        target: Destination system

    Returns:
        The same physical quantity tagged with ``target``
    """
    if not isinstance(target, UnitSystem):
        raise ConversionError(f"Unknown unit system: {target!r}")
    if q.system == target:
        return q

    factor = _unit_size(q.dimension, q.system) / _unit_size(q.dimension, target)
    return PhysQty(value=q.value * factor, dimension=q.dimension, system=target)


def require_positive(q: PhysQty, name: str, dimension: Dimension) -> float:
    """Return q.value after checking dimension and strict positivity."""
    if q.dimension != dimension:
        raise DomainError(
            f"{name} must be a {dimension.value}, got {q.dimension.value}"
        )
    if not math.isfinite(q.value) or q.value <= 0:
        raise DomainError(f"{name} must be positive and finite, got {q.value}")
    return q.value


def common_system(*quantities: PhysQty) -> UnitSystem:
    """The single system shared by all quantities, else a ConversionError."""
    systems = {q.system for q in quantities}
    if len(systems) != 1:
        names = sorted(s.value for s in systems)
        raise ConversionError(
            "Quantities mix unit systems",
            f"Mixed unit systems in one computation: {names}",
        )
    return systems.pop()


def hbar2_over_2m(mass: PhysQty) -> PhysQty:
    """hbar^2/(2 mu) in energy * length^2 of the mass's system.

    In the spectroscopic system this is (hbar c)^2 / (2 mu c^2) in eV A^2.
    """
    mu = require_positive(mass, "mass", Dimension.MASS)
    if mass.system == UnitSystem.SPECTROSCOPIC:
        value = HBAR_C_EV_ANGSTROM**2 / (2.0 * mu * AMU_C2_EV)
    else:
        value = 1.0 / (2.0 * mu)
    return PhysQty(value=value, dimension=Dimension.ENERGY_LENGTH2, system=mass.system)


def parse_unit(unit: str, dimension: Dimension) -> UnitSystem:
    """Map a unit label such as "eV" or "bohr" onto its system."""
    tables = {
        Dimension.ENERGY: ENERGY_UNIT_LABELS,
        Dimension.LENGTH: LENGTH_UNIT_LABELS,
        Dimension.MASS: MASS_UNIT_LABELS,
    }
    if dimension not in tables:
        raise ConversionError(f"No unit labels for {dimension.value}")
    wanted = unit.strip().lower()
    aliases = {"a": "angstrom", "å": "angstrom", "u": "amu", "da": "amu"}
    wanted = aliases.get(wanted, wanted)
    # First match wins: "bohr" resolves to the hartree convention.
    for system, label in tables[dimension].items():
        if label.lower() == wanted:
            return system
    known = sorted(set(tables[dimension].values()))
    raise ConversionError(
        f"Unknown {dimension.value} unit '{unit}' (expected one of {known})"
    )
