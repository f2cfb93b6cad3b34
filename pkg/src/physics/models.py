"""Pydantic models shared by the physics modules."""

import math
from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


# Unit models
class UnitSystem(str, Enum):
    """Unit convention tagging every physical quantity."""

    SPECTROSCOPIC = "spectroscopic"  # eV, angstrom, amu
    ATOMIC = "atomic"  # hbar = m_e = 1: hartree, bohr
    ATOMIC_2MU = "atomic2mu"  # hbar = 1, 2 m_e = 1: rydberg, bohr


class Dimension(str, Enum):
    """Physical dimension of a quantity."""

    ENERGY = "energy"
    LENGTH = "length"
    MASS = "mass"
    DIMENSIONLESS = "dimensionless"
    ENERGY_LENGTH = "energy*length"
    ENERGY_LENGTH2 = "energy*length^2"


class PhysQty(BaseModel):
    """A finite value tagged with dimension and unit system."""

    model_config = ConfigDict(frozen=True)

    value: float
    dimension: Dimension
    system: UnitSystem = UnitSystem.SPECTROSCOPIC

    @field_validator("value")
    @classmethod
    def validate_finite(cls, v: float) -> float:
        """Reject NaN and infinities."""
        if not math.isfinite(v):
            raise ValueError(f"Invalid quantity value (not finite): {v}")
        return v

    def __float__(self) -> float:
        return self.value


def energy(value: float, system: UnitSystem = UnitSystem.SPECTROSCOPIC) -> PhysQty:
    """Build an energy quantity."""
    return PhysQty(value=value, dimension=Dimension.ENERGY, system=system)


def length(value: float, system: UnitSystem = UnitSystem.SPECTROSCOPIC) -> PhysQty:
    """Build a length quantity."""
    return PhysQty(value=value, dimension=Dimension.LENGTH, system=system)


def mass(value: float, system: UnitSystem = UnitSystem.SPECTROSCOPIC) -> PhysQty:
    """Build a mass quantity."""
    return PhysQty(value=value, dimension=Dimension.MASS, system=system)


# Potential models
class PotentialParams(BaseModel):
    """General Mie potential: well depth, length scale and exponent pair."""

    model_config = ConfigDict(frozen=True)

    epsilon: PhysQty
    a: PhysQty
    ell_exp: int = Field(..., ge=1)
    k_exp: int = Field(..., ge=1)

    @model_validator(mode="after")
    def validate_params(self) -> "PotentialParams":
        """Check dimensions, signs, exponent ordering and unit system."""
        if self.epsilon.dimension != Dimension.ENERGY:
            raise ValueError("Invalid epsilon: must be an energy")
        if self.a.dimension != Dimension.LENGTH:
            raise ValueError("Invalid a: must be a length")
        if self.epsilon.value <= 0 or self.a.value <= 0:
            raise ValueError("Invalid potential: epsilon and a must be positive")
        if self.ell_exp <= self.k_exp:
            raise ValueError(
                f"Invalid exponents: ell_exp={self.ell_exp} must exceed "
                f"k_exp={self.k_exp}"
            )
        if self.epsilon.system != self.a.system:
            raise ValueError("Invalid potential: epsilon and a use different systems")
        return self


class SpecialPotentialParams(BaseModel):
    """The (2, 1) Mie member written with the dissociation energy V0."""

    model_config = ConfigDict(frozen=True)

    V0: PhysQty
    a: PhysQty

    @model_validator(mode="after")
    def validate_params(self) -> "SpecialPotentialParams":
        """Check dimensions, signs and unit system."""
        if self.V0.dimension != Dimension.ENERGY:
            raise ValueError("Invalid V0: must be an energy")
        if self.a.dimension != Dimension.LENGTH:
            raise ValueError("Invalid a: must be a length")
        if self.V0.value <= 0 or self.a.value <= 0:
            raise ValueError("Invalid potential: V0 and a must be positive")
        if self.V0.system != self.a.system:
            raise ValueError("Invalid potential: V0 and a use different systems")
        return self

    def as_mie(self) -> PotentialParams:
        """Equivalent general form with (ell_exp, k_exp) = (2, 1)."""
        half = PhysQty(
            value=self.V0.value / 2.0,
            dimension=Dimension.ENERGY,
            system=self.V0.system,
        )
        return PotentialParams(epsilon=half, a=self.a, ell_exp=2, k_exp=1)


class RadialProblem(BaseModel):
    """Radial problem with V(r) = -A_s/r + B_s/r^2 in one unit system.

    ``hbar2_2m`` is hbar^2/(2 mu). ``length_scale`` and ``energy_scale`` are
    the units the oracle works in (a and V0 for a Mie problem).
    """

    model_config = ConfigDict(frozen=True)

    hbar2_2m: float = Field(..., gt=0.0)
    a_strength: float = Field(..., gt=0.0)
    b_strength: float = Field(..., ge=0.0)
    system: UnitSystem
    length_scale: float = Field(..., gt=0.0)
    energy_scale: float = Field(..., gt=0.0)
    V0: Optional[float] = None
    a: Optional[float] = None
    label: str = ""

    @property
    def coulomb_strength(self) -> float:
        """A = 2 mu A_s / hbar^2 (inverse length)."""
        return self.a_strength / self.hbar2_2m

    def gamma(self, ell: int) -> float:
        """2 mu B_s / hbar^2 + l(l+1)."""
        return self.b_strength / self.hbar2_2m + ell * (ell + 1)

    def cache_key(self) -> tuple:
        """Hashable identity for result caching."""
        return (
            self.hbar2_2m,
            self.a_strength,
            self.b_strength,
            self.system.value,
            self.length_scale,
            self.energy_scale,
        )


# Spectrum models
class QuantumState(BaseModel):
    """Radial quantum number n and angular momentum l."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=0)
    ell: int = Field(..., ge=0)

    def __str__(self) -> str:
        return f"(n={self.n}, l={self.ell})"


class ReducedParams(BaseModel):
    """Dimensionless and inverse-length quantities behind the closed forms."""

    model_config = ConfigDict(frozen=True)

    beta: float
    gamma: float = Field(..., ge=0.0)
    eps_sq: float
    A: float
    Lambda: float = Field(..., ge=0.0)
    kappa: float = Field(..., gt=0.0)


class EnergyLevel(BaseModel):
    """Closed-form bound level."""

    model_config = ConfigDict(frozen=True)

    state: QuantumState
    energy: PhysQty
    reduced: ReducedParams


class EnergyReference(str, Enum):
    """Zero of the reported energy column."""

    RAW = "raw"
    FROM_GROUND = "from-ground"
    FROM_WELL_BOTTOM = "from-well-bottom"


class EllRule(BaseModel):
    """Which angular momenta accompany each n in a table."""

    model_config = ConfigDict(frozen=True)

    triangular: bool = True
    ell_max: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def validate_rule(self) -> "EllRule":
        """A rectangular table needs an explicit bound."""
        if not self.triangular and self.ell_max is None:
            raise ValueError("Invalid ell rule: rectangular tables need ell_max")
        return self

    def ells(self, n: int) -> List[int]:
        """Angular momenta listed for radial number n."""
        top = n if self.triangular else int(self.ell_max or 0)
        if self.ell_max is not None:
            top = min(top, self.ell_max)
        return list(range(top + 1))


# Wavefunction models
class GridSpacing(str, Enum):
    """Abscissa distribution."""

    UNIFORM = "uniform"
    LOG_UNIFORM = "log"


class RadialGrid(BaseModel):
    """Radial abscissae in the unit system of the problem they sample."""

    model_config = ConfigDict(frozen=True)

    r_min: float = Field(..., gt=0.0)
    r_max: float
    points: int = Field(..., ge=16)
    spacing: GridSpacing = GridSpacing.LOG_UNIFORM

    @model_validator(mode="after")
    def validate_bounds(self) -> "RadialGrid":
        """Require a nonempty interval."""
        if not math.isfinite(self.r_max) or self.r_max <= self.r_min:
            raise ValueError(
                f"Invalid grid: r_max={self.r_max} must exceed r_min={self.r_min}"
            )
        return self

    @property
    def step(self) -> float:
        """Spacing in r (uniform) or in ln r (log-uniform)."""
        if self.spacing == GridSpacing.UNIFORM:
            return (self.r_max - self.r_min) / (self.points - 1)
        return math.log(self.r_max / self.r_min) / (self.points - 1)

    def abscissae(self) -> np.ndarray:
        """Strictly increasing sample points."""
        if self.spacing == GridSpacing.UNIFORM:
            return np.linspace(self.r_min, self.r_max, self.points)
        return np.exp(
            np.linspace(math.log(self.r_min), math.log(self.r_max), self.points)
        )

    def refined(self) -> "RadialGrid":
        """Same interval with the step halved."""
        return self.model_copy(update={"points": 2 * (self.points - 1) + 1})

    def coarsened(self) -> "RadialGrid":
        """Same interval with the step doubled."""
        return self.model_copy(update={"points": (self.points - 1) // 2 + 1})


class Observable(str, Enum):
    """Expectation values available by quadrature."""

    INV_R = "inv_r"
    INV_R2 = "inv_r2"
    V = "v"
    T = "t"
    R_VPRIME = "r_vprime"


class RadialFunction(BaseModel):
    """Sampled R(r) and u(r) = r R(r) for one state."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: RadialGrid
    values_R: np.ndarray
    values_u: np.ndarray
    state: QuantumState
    norm_check: float
    coarse: bool = False
    energy: Optional[float] = None
    Lambda: Optional[float] = None
    kappa: Optional[float] = None

    @model_validator(mode="after")
    def validate_shapes(self) -> "RadialFunction":
        """Freeze arrays and check they match the grid."""
        for values in (self.values_R, self.values_u):
            if values.shape != (self.grid.points,):
                raise ValueError(
                    f"Invalid samples: expected {self.grid.points} values, "
                    f"got {values.shape}"
                )
            values.setflags(write=False)
        return self


# Oracle models
class OracleMethod(str, Enum):
    """Discretisation used by the numerical eigensolver."""

    FINITE_DIFFERENCE = "fd"
    NUMEROV = "numerov"


class OracleConfig(BaseModel):
    """Oracle settings. ``grid=None`` sizes the domain automatically."""

    model_config = ConfigDict(frozen=True)

    grid: Optional[RadialGrid] = None
    states_requested: int = Field(default=1, ge=1)
    method: OracleMethod = OracleMethod.FINITE_DIFFERENCE
    richardson: bool = True

    def cache_key(self) -> tuple:
        """Hashable identity for result caching."""
        grid_key = None if self.grid is None else tuple(self.grid.model_dump().values())
        return (grid_key, self.states_requested, self.method.value, self.richardson)


class OracleResult(BaseModel):
    """Lowest eigenvalues of the discretised radial problem."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    energies: List[float]
    eigenvectors: Optional[np.ndarray] = None
    grid_used: RadialGrid
    convergence_estimate: List[float]
    method: OracleMethod = OracleMethod.FINITE_DIFFERENCE
    richardson: bool = True

    @model_validator(mode="after")
    def validate_order(self) -> "OracleResult":
        """Energies must be strictly ascending."""
        if any(b <= a for a, b in zip(self.energies, self.energies[1:])):
            raise ValueError("Invalid oracle result: energies not ascending")
        if self.eigenvectors is not None:
            self.eigenvectors.setflags(write=False)
        return self


class VerificationOutcome(str, Enum):
    """Result of comparing one state."""

    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


class VerificationReport(BaseModel):
    """Closed form vs oracle for one state."""

    model_config = ConfigDict(frozen=True)

    state: QuantumState
    e_closed: float
    e_oracle: float
    abs_delta: float
    rel_delta: float
    convergence_estimate: float
    converged: bool
    tolerance: float
    oracle_nodes: Optional[int] = None
    grid_used: RadialGrid

    @property
    def outcome(self) -> VerificationOutcome:
        """Inconclusive when unconverged, else pass/fail on tolerance."""
        if not self.converged:
            return VerificationOutcome.INCONCLUSIVE
        if self.rel_delta <= self.tolerance:
            return VerificationOutcome.PASS
        return VerificationOutcome.FAIL

    @property
    def passed(self) -> bool:
        """True only for a converged state within tolerance."""
        return self.outcome == VerificationOutcome.PASS


# Molecule models
class MoleculeSpec(BaseModel):
    """Named diatomic parameter set in spectroscopic units."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(..., min_length=1)
    reduced_mass: PhysQty
    V0: PhysQty
    a: PhysQty
    source: str = ""

    @model_validator(mode="after")
    def validate_spec(self) -> "MoleculeSpec":
        """All physical fields positive, correctly dimensioned, spectroscopic."""
        expected = {
            "reduced_mass": (self.reduced_mass, Dimension.MASS),
            "V0": (self.V0, Dimension.ENERGY),
            "a": (self.a, Dimension.LENGTH),
        }
        for field, (qty, dimension) in expected.items():
            if qty.dimension != dimension:
                raise ValueError(
                    f"Invalid {field} for {self.name}: expected {dimension.value}"
                )
            if qty.system != UnitSystem.SPECTROSCOPIC:
                raise ValueError(
                    f"Invalid {field} for {self.name}: must be spectroscopic"
                )
            if qty.value <= 0:
                raise ValueError(
                    f"Invalid {field} for {self.name}: must be positive, "
                    f"got {qty.value}"
                )
        return self
