"""Tests for the molecule registry."""

import json

import pytest

from src.physics.models import UnitSystem
from src.services.molecule_registry import (
    MoleculeRegistry,
    edit_distance,
    get,
    load_registry,
)
from src.utils.error_handler import DataError, MoleculeNotFoundError


def _write(tmp_path, document) -> str:
    path = tmp_path / "molecules.json"
    text = document if isinstance(document, str) else json.dumps(document)
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestBuiltinRegistry:
    """Test the registry shipped with the package."""

    def test_contains_table_molecules(self, builtin_registry: MoleculeRegistry):
        """Test the four tabulated molecules are present in order."""
        assert builtin_registry.names() == ["N2", "CO", "NO", "CH"]
        assert builtin_registry.origin == "builtin"
        assert len(builtin_registry) == 4

    def test_sources_flag_provenance(self, builtin_registry: MoleculeRegistry):
        """Test every builtin entry says its parameters are best-effort."""
        for spec in builtin_registry:
            assert spec.source.startswith("best-effort")

    def test_spectroscopic_units(self, builtin_registry: MoleculeRegistry):
        """Test stored quantities are amu, eV and angstrom."""
        spec = builtin_registry.get("CO")

        assert spec.reduced_mass.system == UnitSystem.SPECTROSCOPIC
        assert spec.V0.value == pytest.approx(11.2256)
        assert spec.a.value == pytest.approx(1.12832)

    def test_load_registry_default(self):
        """Test no path means the builtin registry."""
        assert load_registry().names() == ["N2", "CO", "NO", "CH"]


class TestLookup:
    """Test name lookup and suggestions."""

    def test_case_insensitive(self, builtin_registry: MoleculeRegistry):
        """Test co, Co and CO resolve to the same entry."""
        assert get(builtin_registry, "co") is builtin_registry.get("CO")
        assert "n2" in builtin_registry
        assert "XY" not in builtin_registry

    def test_unknown_molecule(self, builtin_registry: MoleculeRegistry):
        """Test an unknown name lists the available molecules."""
        with pytest.raises(MoleculeNotFoundError) as excinfo:
            builtin_registry.get("XY")

        assert excinfo.value.name == "XY"
        assert excinfo.value.available == ["N2", "CO", "NO", "CH"]
        assert "Available: N2, CO, NO, CH" in str(excinfo.value)
        assert excinfo.value.exit_code == 2

    def test_suggestions(self, builtin_registry: MoleculeRegistry):
        """Test near misses are suggested."""
        with pytest.raises(MoleculeNotFoundError) as excinfo:
            builtin_registry.get("C0")

        assert "CO" in excinfo.value.suggestions
        assert "did you mean" in str(excinfo.value)

    def test_edit_distance(self):
        """Test Levenshtein distances."""
        assert edit_distance("co", "co") == 0
        assert edit_distance("co", "c0") == 1
        assert edit_distance("n2", "no") == 1
        assert edit_distance("", "ch") == 2
        assert edit_distance("kitten", "sitting") == 3


class TestRegistryFiles:
    """Test loading, validation and saving of registry files."""

    def test_load(self, tmp_path, sample_registry_data: dict):
        """Test a valid file loads with its path as origin."""
        path = _write(tmp_path, sample_registry_data)
        registry = MoleculeRegistry.load(path)

        assert registry.names() == ["HCl"]
        assert registry.origin == path
        assert registry.get("hcl").source == "test data"

    def test_empty_file(self, tmp_path):
        """Test an empty file is an empty registry, not an error."""
        registry = MoleculeRegistry.load(_write(tmp_path, ""))

        assert len(registry) == 0
        with pytest.raises(MoleculeNotFoundError, match=r"\(none\)"):
            registry.get("CO")

    def test_missing_file(self, tmp_path):
        """Test an unreadable file is a data error."""
        with pytest.raises(DataError, match="Cannot read"):
            MoleculeRegistry.load(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path):
        """Test a syntax error reports line and column."""
        path = _write(tmp_path, '{\n  "molecules": [,]\n}')
        with pytest.raises(DataError) as excinfo:
            MoleculeRegistry.load(path)

        assert f"{path}:2:" in excinfo.value.technical_message

    def test_negative_depth(self, tmp_path, sample_registry_data: dict):
        """Test a nonpositive V0 names the offending field."""
        sample_registry_data["molecules"][0]["V0"]["value"] = -1.0
        with pytest.raises(DataError, match="V0"):
            MoleculeRegistry.load(_write(tmp_path, sample_registry_data))

    def test_wrong_unit(self, tmp_path, sample_registry_data: dict):
        """Test atomic units are rejected in registry files."""
        sample_registry_data["molecules"][0]["a"]["unit"] = "bohr"
        with pytest.raises(DataError, match=r"HCl\.a"):
            MoleculeRegistry.load(_write(tmp_path, sample_registry_data))

    def test_unknown_unit(self, tmp_path, sample_registry_data: dict):
        """Test an unrecognised unit label."""
        sample_registry_data["molecules"][0]["reduced_mass"]["unit"] = "kg"
        with pytest.raises(DataError, match="reduced_mass"):
            MoleculeRegistry.load(_write(tmp_path, sample_registry_data))

    def test_missing_field(self, tmp_path, sample_registry_data: dict):
        """Test an entry without a field."""
        del sample_registry_data["molecules"][0]["a"]
        with pytest.raises(DataError, match="missing field"):
            MoleculeRegistry.load(_write(tmp_path, sample_registry_data))

    def test_duplicate_names(self, tmp_path, sample_registry_data: dict):
        """Test names differing only in case collide."""
        entry = dict(sample_registry_data["molecules"][0], name="hcl")
        sample_registry_data["molecules"].append(entry)
        with pytest.raises(DataError, match="Duplicate"):
            MoleculeRegistry.load(_write(tmp_path, sample_registry_data))

    def test_wrong_shape(self, tmp_path):
        """Test a top-level list is rejected."""
        with pytest.raises(DataError, match="molecules"):
            MoleculeRegistry.load(_write(tmp_path, "[]"))

    def test_save_and_reload(self, tmp_path, builtin_registry: MoleculeRegistry):
        """Test a saved registry loads back with the same contents."""
        path = tmp_path / "copy.json"
        builtin_registry.save(path)
        reloaded = MoleculeRegistry.load(path)

        assert reloaded.names() == builtin_registry.names()
        for spec in builtin_registry:
            assert reloaded.get(spec.name) == spec
