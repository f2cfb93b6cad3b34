"""Registry of named diatomic parameter sets.

Registry files are JSON documents of the form::

    {"molecules": [
        {"name": "CO",
         "reduced_mass": {"value": 6.8562087, "unit": "amu"},
         "V0": {"value": 11.2256, "unit": "eV"},
         "a": {"value": 1.12832, "unit": "angstrom"},
         "source": "..."}
    ]}

Every physical field carries its unit explicitly.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional, Union

from pydantic import ValidationError

from src.physics.models import Dimension, MoleculeSpec, PhysQty, UnitSystem
from src.physics.units import parse_unit
from src.utils.error_handler import ConversionError, DataError, MoleculeNotFoundError


logger = logging.getLogger(__name__)

BUILTIN_PATH = Path(__file__).parents[1] / "data" / "molecules.json"
BUILTIN_ORIGIN = "builtin"
MAX_SUGGESTION_DISTANCE = 2

_FIELDS = {
    "reduced_mass": Dimension.MASS,
    "V0": Dimension.ENERGY,
    "a": Dimension.LENGTH,
}


def edit_distance(first: str, second: str) -> int:
    """Levenshtein distance between two strings."""
    previous = list(range(len(second) + 1))
    for i, left in enumerate(first, start=1):
        current = [i]
        for j, right in enumerate(second, start=1):
            current.append(
                min(
                    previous[j] + 1,
                    current[j - 1] + 1,
                    previous[j - 1] + (left != right),
                )
            )
        previous = current
    return previous[-1]


def _quantity(name: str, field: str, raw: Any) -> PhysQty:
    if not isinstance(raw, dict) or "value" not in raw or "unit" not in raw:
        raise DataError(
            f"Invalid registry entry '{name}'",
            f"{name}.{field}: expected an object with 'value' and 'unit'",
        )
    dimension = _FIELDS[field]
    try:
        system = parse_unit(str(raw["unit"]), dimension)
    except ConversionError as e:
        raise DataError(
            f"Invalid registry entry '{name}'", f"{name}.{field}: {e.technical_message}"
        ) from None
    if system != UnitSystem.SPECTROSCOPIC:
        raise DataError(
            f"Invalid registry entry '{name}'",
            f"{name}.{field}: registry values must use spectroscopic units, "
            f"got '{raw['unit']}'",
        )
    try:
        return PhysQty(value=raw["value"], dimension=dimension, system=system)
    except ValidationError as e:
        raise DataError(
            f"Invalid registry entry '{name}'",
            f"{name}.{field}.value: {e.errors()[0]['msg']}",
        ) from None


def _spec_from_entry(index: int, entry: Any) -> MoleculeSpec:
    if not isinstance(entry, dict):
        raise DataError(
            "Invalid registry file", f"molecules[{index}]: expected an object"
        )
    name = entry.get("name")
    if not isinstance(name, str) or not name.strip():
        raise DataError(
            "Invalid registry file", f"molecules[{index}].name: must be nonempty"
        )
    missing = [field for field in _FIELDS if field not in entry]
    if missing:
        raise DataError(
            f"Invalid registry entry '{name}'",
            f"{name}: missing field(s) {', '.join(missing)}",
        )
    quantities = {field: _quantity(name, field, entry[field]) for field in _FIELDS}
    try:
        source = str(entry.get("source", ""))
        return MoleculeSpec(name=name, source=source, **quantities)
    except ValidationError as e:
        detail = e.errors()[0]
        message = str(detail["msg"]).removeprefix("Value error, ")
        raise DataError(f"Invalid registry entry '{name}'", message) from None


class MoleculeRegistry:
    """Immutable, case-insensitive collection of molecule specs."""

    def __init__(
        self, molecules: Iterable[MoleculeSpec] = (), origin: str = BUILTIN_ORIGIN
    ):
        """Index molecules by lower-cased name.

        Args:
            molecules: Specs in display order
            origin: File path the registry came from, or "builtin"
        """
        self.origin = origin
        self._entries: Dict[str, MoleculeSpec] = {}
        for spec in molecules:
            key = spec.name.lower()
            if key in self._entries:
                raise DataError(
                    "Invalid registry file",
                    f"Duplicate molecule name '{spec.name}' in {origin}",
                )
            self._entries[key] = spec

    @classmethod
    def load(cls, path: Union[str, Path]) -> "MoleculeRegistry":
        """Parse and validate a registry file. An empty file is an empty registry."""
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise DataError(
                f"Cannot read registry file {path}", f"{type(e).__name__}: {e}"
            ) from None

        origin = BUILTIN_ORIGIN if path == BUILTIN_PATH else str(path)
        if not text.strip():
            logger.info(f"Registry {origin} is empty")
            return cls((), origin)

        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise DataError(
                f"Registry file {path} is not valid JSON",
                f"{path}:{e.lineno}:{e.colno}: {e.msg}",
            ) from None

        if not isinstance(document, dict) or not isinstance(
            document.get("molecules", []), list
        ):
            raise DataError(
                f"Invalid registry file {path}",
                "Expected an object with a 'molecules' list",
            )
        specs = [
            _spec_from_entry(i, entry)
            for i, entry in enumerate(document.get("molecules", []))
        ]
        registry = cls(specs, origin)
        logger.info(f"Loaded {len(registry)} molecules from {origin}")
        return registry

    @classmethod
    def builtin(cls) -> "MoleculeRegistry":
        """Registry shipped with the package."""
        return cls.load(BUILTIN_PATH)

    def to_document(self) -> Dict[str, List[Dict[str, Any]]]:
        """Registry contents in the file format."""
        return {
            "molecules": [
                {
                    "name": spec.name,
                    "reduced_mass": {"value": spec.reduced_mass.value, "unit": "amu"},
                    "V0": {"value": spec.V0.value, "unit": "eV"},
                    "a": {"value": spec.a.value, "unit": "angstrom"},
                    "source": spec.source,
                }
                for spec in self
            ]
        }

    def save(self, path: Union[str, Path]) -> None:
        """Write the registry in the format ``load`` reads."""
        path = Path(path)
        path.write_text(
            json.dumps(self.to_document(), indent=2) + "\n", encoding="utf-8"
        )
        logger.info(f"Saved {len(self)} molecules to {path}")

    def names(self) -> List[str]:
        """Display names in file order."""
        return [spec.name for spec in self]

    def suggestions(self, name: str) -> List[str]:
        """Names within a small edit distance of ``name``."""
        wanted = name.lower()
        scored = sorted(
            (edit_distance(wanted, key), spec.name)
            for key, spec in self._entries.items()
        )
        return [n for distance, n in scored if distance <= MAX_SUGGESTION_DISTANCE]

    def get(self, name: str) -> MoleculeSpec:
        """Case-insensitive lookup."""
        spec = self._entries.get(name.strip().lower())
        if spec is None:
            raise MoleculeNotFoundError(name, self.names(), self.suggestions(name))
        return spec

    def __contains__(self, name: object) -> bool:
        return isinstance(name, str) and name.strip().lower() in self._entries

    def __iter__(self) -> Iterator[MoleculeSpec]:
        return iter(self._entries.values())

    def __len__(self) -> int:
        return len(self._entries)


def load_registry(path: Optional[Union[str, Path]] = None) -> MoleculeRegistry:
    """Registry from ``path``, or the builtin one when no path is given."""
    if path is None:
        return MoleculeRegistry.builtin()
    return MoleculeRegistry.load(path)


def get(registry: MoleculeRegistry, name: str) -> MoleculeSpec:
    """Molecule by name; unknown names raise with suggestions."""
    return registry.get(name)
