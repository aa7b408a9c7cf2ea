"""File importers for graphs, vertex labels and CNF formulas."""
from eldb_core.importers.base_importer import BaseImporter, ImportResult
from eldb_core.importers.cnf_importer import CnfImporter, load_cnf
from eldb_core.importers.graph_importer import GraphImporter, load_graph, save_graph

__all__ = [
    "BaseImporter",
    "ImportResult",
    "CnfImporter",
    "GraphImporter",
    "load_cnf",
    "load_graph",
    "save_graph",
]
