"""Test graph and CNF file importers."""
import json
import os
import sys
import tempfile
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

from eldb_core.exceptions import InvalidInputError
from eldb_core.graph_core import generate, product
from eldb_core.importers import CnfImporter, GraphImporter, load_cnf, load_graph, save_graph
from eldb_core.importers.graph_importer import labels_path, parse_labels
from harness import run_tests


def create_test_file(content: str, suffix: str) -> str:
    """Create a temporary input file."""
    with tempfile.NamedTemporaryFile(mode="w", suffix=suffix, delete=False, encoding="utf-8") as f:
        f.write(content)
        return f.name


def test_save_and_load_labeled_product():
    g = product("strong", generate("path", 2), generate("cycle", 3))
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "p2_c3.g"
        written = save_graph(g, path)
        assert written == [path, labels_path(path)]
        assert labels_path(path).name == "p2_c3.g.labels.json"
        loaded = load_graph(path)
    assert loaded == g
    assert loaded.label(5) == "(1,2)"


def test_save_unlabeled_graph_has_no_sidecar():
    g = generate("cycle", 5)
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "c5.g"
        assert save_graph(g, path) == [path]
        assert not labels_path(path).exists()
        assert load_graph(path).labels is None


def test_parse_labels():
    assert parse_labels('{"0": "a", "1": "b"}', 2) == ["a", "b"]
    for bad in ('["a", "b"]', '{"0": "a"}', '{"0": "a", "1": "b", "2": "c"}', "not json"):
        with pytest.raises(InvalidInputError):
            parse_labels(bad, 2)


def test_graph_importer_success():
    graph_file = create_test_file("# P3\n3 2\n0 1\n1 2\n", ".g")
    try:
        result = GraphImporter().import_file(graph_file)
        assert result.success
        assert result.graph.vertex_count == 3
        assert result.errors == [] and result.warnings == []
    finally:
        os.unlink(graph_file)


def test_graph_importer_reports_errors():
    graph_file = create_test_file("3 2\n0 1\n1 1\n", ".g")
    try:
        importer = GraphImporter()
        result = importer.import_file(graph_file)
        assert not result.success
        assert "SelfLoopError" in result.errors[0]
        assert "line 3" in result.errors[0]
        assert importer.get_errors() == result.errors
    finally:
        os.unlink(graph_file)

    missing = GraphImporter().import_file("/nonexistent/graph.g")
    assert not missing.success
    assert missing.errors


def test_graph_importer_bad_sidecar_and_disconnected():
    graph_file = create_test_file("4 2\n0 1\n2 3\n", ".g")
    sidecar = labels_path(graph_file)
    try:
        assert not GraphImporter().import_file(graph_file).success

        result = GraphImporter(allow_disconnected=True).import_file(graph_file)
        assert result.success
        assert any("disconnected" in w for w in result.warnings)

        sidecar.write_text(json.dumps({"0": "a"}), encoding="utf-8")
        result = GraphImporter(allow_disconnected=True).import_file(graph_file)
        assert not result.success
        assert result.errors[0].startswith("Labels sidecar rejected")
    finally:
        os.unlink(graph_file)
        if sidecar.exists():
            sidecar.unlink()


def test_undecodable_files_are_format_errors():
    with tempfile.TemporaryDirectory() as tmp:
        graph_file = Path(tmp) / "latin1.g"
        graph_file.write_bytes(b"2 1\n0 1 \xe9\n")
        result = GraphImporter().import_file(graph_file)
        assert not result.success
        assert "GraphFormatError" in result.errors[0]
        with pytest.raises(InvalidInputError):
            load_graph(graph_file)

        cnf_file = Path(tmp) / "latin1.cnf"
        cnf_file.write_bytes(b"p cnf 3 1\n1 2 3 0 \xe9\n")
        result = CnfImporter().import_file(cnf_file)
        assert not result.success
        assert "CnfFormatError" in result.errors[0]
        with pytest.raises(InvalidInputError):
            load_cnf(cnf_file)


def test_cnf_importer():
    cnf_file = create_test_file("p cnf 5 2\n1 2 3 0\n1 -2 -5 0\n", ".cnf")
    try:
        result = CnfImporter().import_file(cnf_file)
        assert result.success
        assert result.formula.clause_count == 2
        assert result.warnings and "[4]" in result.warnings[0]
    finally:
        os.unlink(cnf_file)

    bad_file = create_test_file("p cnf 3 1\n1 -1 2 0\n", ".cnf")
    try:
        result = CnfImporter().import_file(bad_file)
        assert not result.success
        assert "TautologyError" in result.errors[0]
    finally:
        os.unlink(bad_file)


if __name__ == "__main__":
    sys.exit(run_tests("File Importers", globals()))
