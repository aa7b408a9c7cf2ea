"""Edge-list graph files with an optional JSON labels sidecar."""
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from eldb_core.error_logger import get_logger
from eldb_core.exceptions import GraphFormatError, InvalidInputError
from eldb_core.graph_core import parse_graph, serialize_graph, serialize_labels, with_labels
from eldb_core.importers.base_importer import BaseImporter, ImportResult
from eldb_core.models import Graph


logger = get_logger("importers")

LABELS_SUFFIX = ".labels.json"


def labels_path(path: Union[str, Path]) -> Path:
    """Sidecar path for a graph file, e.g. c7.g -> c7.g.labels.json."""
    return Path(str(path) + LABELS_SUFFIX)


def parse_labels(text: str, n: int) -> List[str]:
    """Labels from a JSON object {vertex_id_string: label} covering 0..n-1."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"labels are not valid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise InvalidInputError("labels must be a JSON object")
    expected = {str(v) for v in range(n)}
    if set(raw) != expected:
        missing = sorted(expected - set(raw), key=int)
        extra = sorted(set(raw) - expected)
        raise InvalidInputError(f"labels do not match vertices 0..{n - 1} (missing {missing[:5]}, extra {extra[:5]})")
    return [str(raw[str(v)]) for v in range(n)]


def load_graph(path: Union[str, Path], allow_disconnected: bool = False) -> Graph:
    """
    Import a graph file and its labels sidecar when present.

    Importer warnings are logged; any import error is raised as
    InvalidInputError carrying the importer's messages.
    """
    result = GraphImporter(allow_disconnected=allow_disconnected).import_file(path)
    for warning in result.warnings:
        logger.warning(warning)
    if not result.success:
        raise InvalidInputError("; ".join(result.errors))
    return result.graph


def save_graph(g: Graph, path: Union[str, Path]) -> List[Path]:
    """Write the canonical graph file and, for labeled graphs, its sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_graph(g), encoding="utf-8")
    written = [path]
    labels = serialize_labels(g)
    if labels is not None:
        sidecar = labels_path(path)
        sidecar.write_text(labels, encoding="utf-8")
        written.append(sidecar)
    return written


class GraphImporter(BaseImporter):
    """Import a graph file, reporting problems instead of raising."""

    format_error = GraphFormatError

    def __init__(self, allow_disconnected: bool = False):
        super().__init__()
        self.allow_disconnected = allow_disconnected

    def parse(self, file_path: Path) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "graph": parse_graph(self.read_text(file_path), allow_disconnected=self.allow_disconnected),
            "labels_text": None,
        }
        sidecar = labels_path(file_path)
        if sidecar.exists():
            data["labels_text"] = self.read_text(sidecar)
        return data

    def validate(self, data: Dict[str, Any]) -> bool:
        g: Graph = data["graph"]
        if data["labels_text"] is None:
            return True
        try:
            data["labels"] = parse_labels(data["labels_text"], g.vertex_count)
        except InvalidInputError as e:
            self.errors.append(f"Labels sidecar rejected: {e}")
            return False
        return True

    def build(self, data: Dict[str, Any]) -> ImportResult:
        g: Graph = data["graph"]
        labels: Optional[List[str]] = data.get("labels")
        if labels is not None:
            g = with_labels(g, labels)
        if not g.is_connected:
            self.warnings.append("graph is disconnected; distances between components are unreachable")
        return ImportResult(success=True, graph=g)
