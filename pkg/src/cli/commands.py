"""Command-line surface: spectrum, wavefunction, potential, verify and table."""

import argparse
import logging
import math
from typing import Dict, List, NoReturn, Optional, TextIO, Tuple

from pydantic import ValidationError

from src.cli.formatters import OutputFormat, ResultTable, render
from src.physics.models import (
    Dimension,
    EllRule,
    EnergyReference,
    GridSpacing,
    OracleMethod,
    PhysQty,
    QuantumState,
    RadialGrid,
    RadialProblem,
    UnitSystem,
    VerificationOutcome,
    mass,
)
from src.physics.oracle import default_config, tally_outcomes
from src.physics.potential import (
    coulomb_barrier_problem,
    effective_profile,
    mie_problem,
    problem_profile,
)
from src.physics.spectrum import (
    apply_energy_reference,
    problem_spectrum_table,
)
from src.physics.units import ENERGY_UNIT_LABELS, LENGTH_UNIT_LABELS, to_internal
from src.physics.wavefunction import count_nodes, default_grid, problem_sample
from src.services.molecule_registry import MoleculeRegistry, load_registry
from src.services.verification_service import VerificationService
from src.utils.config import get_settings
from src.utils.error_handler import UsageError, VerificationFailure


logger = logging.getLogger(__name__)

TABLE_MOLECULES = ("N2", "CO", "NO", "CH")
TABLE_FOOTER = (
    "note: molecular parameters are best-effort stand-ins; the original "
    "reference parameter set is unavailable, so values are not expected to "
    "match published tables"
)


class ArgumentParser(argparse.ArgumentParser):
    """Parser whose errors become UsageError instead of exiting."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"Invalid command line: {message}", message)


def _common_options() -> argparse.ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.TABLE.value,
        help="output format (default: table)",
    )
    common.add_argument("--registry", help="molecule registry JSON file")
    common.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="stderr log level (default: WARNING)",
    )
    return common


def _parameter_options() -> argparse.ArgumentParser:
    source = ArgumentParser(add_help=False)
    source.add_argument("--molecule", help="registry molecule name")
    source.add_argument("--mu", type=float, help="reduced mass")
    source.add_argument("--V0", type=float, help="dissociation energy")
    source.add_argument("--a", type=float, help="equilibrium distance")
    source.add_argument(
        "--coulomb", type=float, help="A in -A/r + B/r^2 (instead of --V0/--a)"
    )
    source.add_argument(
        "--barrier", type=float, default=None, help="B in -A/r + B/r^2 (default 0)"
    )
    source.add_argument(
        "--units",
        choices=[s.value for s in UnitSystem],
        default=UnitSystem.SPECTROSCOPIC.value,
        help="unit system of raw parameters (default: spectroscopic)",
    )
    return source


def _grid_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--points", type=int, help="number of grid points")
    parser.add_argument("--r-min", type=float, help="first radius")
    parser.add_argument("--r-max", type=float, help="last radius")
    parser.add_argument(
        "--spacing",
        choices=[s.value for s in GridSpacing],
        default=GridSpacing.LOG_UNIFORM.value,
        help="grid spacing (default: log)",
    )


def build_parser() -> ArgumentParser:
    """Top-level parser with one subcommand per operation."""
    settings = get_settings()
    parser = ArgumentParser(
        prog="miebound",
        description="Bound states of diatomic molecules in the Mie potential",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {settings.app_version}"
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True
    common, source = _common_options(), _parameter_options()

    spectrum = commands.add_parser(
        "spectrum", parents=[common, source], help="closed-form energy levels"
    )
    spectrum.add_argument("--n-max", type=int, default=5)
    spectrum.add_argument("--ell-max", type=int, help="cap on l")
    spectrum.add_argument(
        "--rectangular", action="store_true", help="l <= ell-max for every n"
    )
    spectrum.add_argument(
        "--reference",
        choices=[r.value for r in EnergyReference],
        default=EnergyReference.RAW.value,
        help="energy zero (default: raw)",
    )
    spectrum.add_argument(
        "--unit-out",
        choices=[s.value for s in UnitSystem],
        help="report energies in this system",
    )
    spectrum.set_defaults(handler=cmd_spectrum)

    wavefunction = commands.add_parser(
        "wavefunction", parents=[common, source], help="sampled R(r) and u(r)"
    )
    wavefunction.add_argument("--n", type=int, default=0)
    wavefunction.add_argument("--l", dest="ell", type=int, default=0)
    _grid_options(wavefunction)
    wavefunction.set_defaults(handler=cmd_wavefunction)

    potential = commands.add_parser(
        "potential", parents=[common, source], help="V(r) and V_eff(r) samples"
    )
    potential.add_argument("--l", dest="ell", type=int, default=0)
    _grid_options(potential)
    potential.set_defaults(handler=cmd_potential)

    verify = commands.add_parser(
        "verify", parents=[common, source], help="closed form vs numerical solver"
    )
    verify.add_argument("--n-max", type=int, default=3)
    verify.add_argument("--tolerance", type=float, help="relative tolerance")
    verify.add_argument(
        "--method",
        choices=[m.value for m in OracleMethod],
        default=settings.oracle_method,
    )
    verify.add_argument(
        "--no-richardson", action="store_true", help="single-grid oracle energies"
    )
    verify.add_argument("--workers", type=int, default=1, help="threads over l")
    verify.set_defaults(handler=cmd_verify)

    table = commands.add_parser(
        "table",
        aliases=["table1"],
        parents=[common],
        help="four-molecule level table",
    )
    table.add_argument("--n-max", type=int, default=5)
    table.add_argument(
        "--reference",
        choices=[r.value for r in EnergyReference],
        default=EnergyReference.RAW.value,
    )
    table.set_defaults(handler=cmd_table)
    return parser


def _registry(args: argparse.Namespace) -> MoleculeRegistry:
    return load_registry(args.registry)


def resolve_problem(args: argparse.Namespace) -> Tuple[RadialProblem, List[tuple]]:
    """Radial problem from --molecule or raw parameters, plus metadata lines."""
    raw = {"mu": args.mu, "V0": args.V0, "a": args.a, "coulomb": args.coulomb}
    given = [name for name, value in raw.items() if value is not None]
    if args.barrier is not None:
        given.append("barrier")

    if args.molecule:
        if given:
            raise UsageError(
                "Give either --molecule or raw parameters, not both",
                f"--molecule combined with {', '.join('--' + g for g in given)}",
            )
        spec = _registry(args).get(args.molecule)
        problem = mie_problem(spec.reduced_mass, spec.V0, spec.a, label=spec.name)
        metadata = [
            ("molecule", spec.name),
            ("mu_amu", spec.reduced_mass.value),
            ("V0_eV", spec.V0.value),
            ("a_angstrom", spec.a.value),
            ("source", spec.source),
        ]
        return problem, metadata

    system = UnitSystem(args.units)
    if args.mu is None:
        raise UsageError("--mu is required with raw parameters")
    mu = mass(args.mu, system)

    if args.coulomb is not None:
        if args.V0 is not None or args.a is not None:
            raise UsageError("--coulomb cannot be combined with --V0/--a")
        barrier = 0.0 if args.barrier is None else args.barrier
        problem = coulomb_barrier_problem(
            mu,
            PhysQty(
                value=args.coulomb, dimension=Dimension.ENERGY_LENGTH, system=system
            ),
            PhysQty(
                value=barrier, dimension=Dimension.ENERGY_LENGTH2, system=system
            ),
        )
        metadata = [
            ("units", system.value),
            ("mu", args.mu),
            ("A", args.coulomb),
            ("B", barrier),
        ]
        return problem, metadata

    if args.V0 is None or args.a is None:
        raise UsageError("--mu, --V0 and --a are all required without --molecule")
    if args.barrier is not None:
        raise UsageError("--barrier needs --coulomb")
    problem = mie_problem(
        mu,
        PhysQty(value=args.V0, dimension=Dimension.ENERGY, system=system),
        PhysQty(value=args.a, dimension=Dimension.LENGTH, system=system),
    )
    metadata = [
        ("units", system.value),
        ("mu", args.mu),
        ("V0", args.V0),
        ("a", args.a),
    ]
    return problem, metadata


def _check_n_max(n_max: int) -> None:
    if n_max < 0:
        raise UsageError(f"--n-max must be nonnegative, got {n_max}")


def _emit(args: argparse.Namespace, table: ResultTable, out: TextIO) -> None:
    out.write(render(table, OutputFormat(args.format)))


def _converter(problem: RadialProblem, unit_out: Optional[str]) -> Tuple[float, str]:
    target = UnitSystem(unit_out) if unit_out else problem.system
    one = PhysQty(value=1.0, dimension=Dimension.ENERGY, system=problem.system)
    return to_internal(one, target).value, ENERGY_UNIT_LABELS[target]


def _reference_column(reference: EnergyReference) -> str:
    return "E_" + reference.value.replace("-", "_")


def cmd_spectrum(args: argparse.Namespace, out: TextIO) -> None:
    """Closed-form levels on the (n, l) grid."""
    _check_n_max(args.n_max)
    problem, metadata = resolve_problem(args)
    rule = EllRule(triangular=not args.rectangular, ell_max=args.ell_max)
    reference = EnergyReference(args.reference)
    levels = problem_spectrum_table(problem, args.n_max, rule)
    energies = apply_energy_reference(levels, problem, reference)
    factor, unit = _converter(problem, args.unit_out)

    table = ResultTable(
        columns=["n", "l", _reference_column(reference), "Lambda"],
        group_by="n",
        metadata=metadata
        + [("energy_unit", unit), ("energy_reference", reference.value)],
    )
    for level, value in zip(levels, energies):
        table.rows.append(
            [level.state.n, level.state.ell, value * factor, level.reduced.Lambda]
        )
    _emit(args, table, out)


def _grid(args: argparse.Namespace, default: RadialGrid) -> RadialGrid:
    """Default grid with any command-line overrides applied."""
    updates: Dict[str, object] = {"spacing": GridSpacing(args.spacing)}
    if args.points is not None:
        updates["points"] = args.points
    if args.r_min is not None:
        updates["r_min"] = args.r_min
    if args.r_max is not None:
        updates["r_max"] = args.r_max
    try:
        return RadialGrid(**{**default.model_dump(), **updates})
    except ValidationError as e:
        raise UsageError(
            "Invalid grid options", str(e.errors()[0]["msg"])
        ) from None


def cmd_wavefunction(args: argparse.Namespace, out: TextIO) -> None:
    """Columns r, R, u for one state."""
    problem, metadata = resolve_problem(args)
    try:
        state = QuantumState(n=args.n, ell=args.ell)
    except ValidationError as e:
        raise UsageError("Invalid state", str(e.errors()[0]["msg"])) from None
    grid = _grid(args, default_grid(problem, state))
    sampled = problem_sample(problem, state, grid)

    table = ResultTable(
        columns=["r", "R", "u"],
        metadata=metadata
        + [
            ("n", state.n),
            ("l", state.ell),
            ("length_unit", LENGTH_UNIT_LABELS[problem.system]),
            ("energy_unit", ENERGY_UNIT_LABELS[problem.system]),
            ("E", sampled.energy),
            ("Lambda", sampled.Lambda),
            ("kappa", sampled.kappa),
            ("norm_check", sampled.norm_check),
            ("nodes", count_nodes(sampled)),
        ],
    )
    r = grid.abscissae()
    for radius, big_r, u in zip(r, sampled.values_R, sampled.values_u):
        table.rows.append([float(radius), float(big_r), float(u)])
    _emit(args, table, out)


def cmd_potential(args: argparse.Namespace, out: TextIO) -> None:
    """Plot-ready V(r) and V_eff(r) for one l."""
    if args.ell < 0:
        raise UsageError(f"--l must be nonnegative, got {args.ell}")
    problem, metadata = resolve_problem(args)
    scale = problem.length_scale
    default = RadialGrid(r_min=0.25 * scale, r_max=20.0 * scale, points=401)
    grid = _grid(args, default)
    r = grid.abscissae()
    v = problem_profile(problem, r)
    v_eff = effective_profile(problem, args.ell, r)

    table = ResultTable(
        columns=["r", "V", "V_eff"],
        metadata=metadata
        + [
            ("l", args.ell),
            ("length_unit", LENGTH_UNIT_LABELS[problem.system]),
            ("energy_unit", ENERGY_UNIT_LABELS[problem.system]),
        ],
    )
    for row in zip(r, v, v_eff):
        table.rows.append([float(x) for x in row])
    _emit(args, table, out)


def cmd_verify(args: argparse.Namespace, out: TextIO) -> None:
    """One report per state; VerificationFailure when any converged state fails."""
    _check_n_max(args.n_max)
    if args.tolerance is not None and not (
        math.isfinite(args.tolerance) and args.tolerance > 0
    ):
        raise UsageError(f"--tolerance must be positive, got {args.tolerance}")
    if args.workers < 1:
        raise UsageError(f"--workers must be at least 1, got {args.workers}")
    problem, metadata = resolve_problem(args)
    settings = get_settings()
    tolerance = args.tolerance or settings.verify_tolerance
    cfg = default_config().model_copy(
        update={
            "method": OracleMethod(args.method),
            "richardson": not args.no_richardson,
        }
    )
    reports = VerificationService(cfg, max_workers=args.workers).verify_spectrum(
        problem, args.n_max, tolerance
    )

    table = ResultTable(
        columns=[
            "n",
            "l",
            "E_closed",
            "E_oracle",
            "abs_delta",
            "rel_delta",
            "convergence_estimate",
            "outcome",
            "nodes",
        ],
        metadata=metadata
        + [
            ("energy_unit", ENERGY_UNIT_LABELS[problem.system]),
            ("tolerance", tolerance),
            ("method", cfg.method.value),
            ("richardson", cfg.richardson),
        ],
    )
    for report in reports:
        table.rows.append(
            [
                report.state.n,
                report.state.ell,
                report.e_closed,
                report.e_oracle,
                report.abs_delta,
                report.rel_delta,
                report.convergence_estimate,
                report.outcome.value,
                report.oracle_nodes,
            ]
        )
    _emit(args, table, out)

    passed, failed, inconclusive = tally_outcomes(reports)
    if inconclusive:
        unsettled = [
            str(r.state)
            for r in reports
            if r.outcome == VerificationOutcome.INCONCLUSIVE
        ]
        logger.warning(f"Oracle not converged for {', '.join(unsettled)}")
    logger.info(
        f"Verification: {passed} passed, {failed} failed, {inconclusive} inconclusive"
    )
    if failed:
        raise VerificationFailure(failed, len(reports))


def cmd_table(args: argparse.Namespace, out: TextIO) -> None:
    """Levels of N2, CO, NO and CH side by side, in eV."""
    _check_n_max(args.n_max)
    registry = _registry(args)
    reference = EnergyReference(args.reference)
    specs = [registry.get(name) for name in TABLE_MOLECULES]

    columns: List[List[float]] = []
    states: List[QuantumState] = []
    for spec in specs:
        problem = mie_problem(spec.reduced_mass, spec.V0, spec.a, label=spec.name)
        levels = problem_spectrum_table(problem, args.n_max)
        columns.append(apply_energy_reference(levels, problem, reference))
        states = [level.state for level in levels]

    table = ResultTable(
        columns=["n", "l", *TABLE_MOLECULES],
        group_by="n",
        metadata=[
            ("registry", registry.origin),
            ("energy_unit", "eV"),
            ("energy_reference", reference.value),
        ],
        footer=[TABLE_FOOTER],
    )
    for i, state in enumerate(states):
        table.rows.append([state.n, state.ell] + [column[i] for column in columns])
    _emit(args, table, out)
