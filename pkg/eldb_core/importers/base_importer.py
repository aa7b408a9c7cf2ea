"""Base importer class for file imports."""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, Union

from eldb_core.exceptions import EldbError, InvalidInputError
from eldb_core.models import CnfFormula, Graph


@dataclass
class ImportResult:
    """Result of an import operation."""
    success: bool
    graph: Optional[Graph] = None
    formula: Optional[CnfFormula] = None
    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)


class BaseImporter(ABC):
    """Base class for file importers."""

    format_error: Type[EldbError] = InvalidInputError

    def __init__(self):
        """Initialize base importer."""
        self.errors: List[str] = []
        self.warnings: List[str] = []

    def read_text(self, file_path: Path) -> str:
        """File contents as UTF-8; undecodable bytes raise `format_error`."""
        try:
            return file_path.read_text(encoding="utf-8")
        except UnicodeDecodeError as e:
            raise self.format_error(f"{file_path} is not UTF-8 text (bad byte at offset {e.start})") from e

    @abstractmethod
    def parse(self, file_path: Path) -> Dict[str, Any]:
        """
        Parse the file and return raw data.

        Args:
            file_path: Path to the file to parse

        Returns:
            Dict: Parsed data
        """
        pass

    @abstractmethod
    def validate(self, data: Dict[str, Any]) -> bool:
        """
        Validate the parsed data.

        Args:
            data: Parsed data dictionary

        Returns:
            bool: True if data is valid
        """
        pass

    @abstractmethod
    def build(self, data: Dict[str, Any]) -> ImportResult:
        """Turn validated data into a successful ImportResult."""
        pass

    def import_file(self, file_path: Union[str, Path]) -> ImportResult:
        """
        Import a file without raising.

        Typed parse errors are reported through ImportResult.errors.
        """
        self.errors = []
        self.warnings = []

        try:
            data = self.parse(Path(file_path))

            if not self.validate(data):
                return ImportResult(success=False, errors=self.errors, warnings=self.warnings)

            result = self.build(data)
            result.errors = self.errors
            result.warnings = self.warnings
            return result

        except (EldbError, OSError) as e:
            self.errors.append(f"Import failed: {type(e).__name__}: {e}")
            return ImportResult(success=False, errors=self.errors, warnings=self.warnings)

    def get_errors(self) -> List[str]:
        """Get list of errors from last import."""
        return self.errors

    def get_warnings(self) -> List[str]:
        """Get list of warnings from last import."""
        return self.warnings
