"""DIMACS CNF importer."""
from pathlib import Path
from typing import Any, Dict, Union

from eldb_core.error_logger import get_logger
from eldb_core.exceptions import CnfFormatError, InvalidInputError
from eldb_core.importers.base_importer import BaseImporter, ImportResult
from eldb_core.models import CnfFormula
from eldb_core.reduction import parse_cnf


logger = get_logger("importers")


class CnfImporter(BaseImporter):
    """Import an exact-one 3-CNF file, reporting problems instead of raising."""

    format_error = CnfFormatError

    def parse(self, file_path: Path) -> Dict[str, Any]:
        return {"formula": parse_cnf(self.read_text(file_path))}

    def validate(self, data: Dict[str, Any]) -> bool:
        formula: CnfFormula = data["formula"]
        used = {abs(lit) for clause in formula.clauses for lit in clause}
        unused = [i for i in range(1, formula.variable_count + 1) if i not in used]
        if unused:
            self.warnings.append(f"variables {unused} occur in no clause; their gadgets are separate components")
        return True

    def build(self, data: Dict[str, Any]) -> ImportResult:
        return ImportResult(success=True, formula=data["formula"])


def load_cnf(path: Union[str, Path]) -> CnfFormula:
    """Import a CNF file, logging warnings and raising InvalidInputError on failure."""
    result = CnfImporter().import_file(path)
    for warning in result.warnings:
        logger.warning(warning)
    if not result.success:
        raise InvalidInputError("; ".join(result.errors))
    return result.formula
