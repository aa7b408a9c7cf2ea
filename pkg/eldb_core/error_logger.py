"""Error logging for failed lab runs."""
import json
import logging
import traceback
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

from eldb_core.config import load_settings


ROOT_LOGGER_NAME = "eldb_lab"
LOG_FILE_NAME = "run_errors.log"
JSON_LOG_FILE_NAME = "errors.jsonl"  # JSON Lines format for easier parsing


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Child of the lab logger, e.g. get_logger("solver") -> eldb_lab.solver."""
    if not name:
        return logging.getLogger(ROOT_LOGGER_NAME)
    return logging.getLogger(f"{ROOT_LOGGER_NAME}.{name}")


def configure_console(verbose: bool = False) -> None:
    """Attach a single console handler to the lab logger."""
    root = logging.getLogger(ROOT_LOGGER_NAME)
    level = logging.INFO if verbose else logging.WARNING
    root.setLevel(level)
    for handler in root.handlers:
        if getattr(handler, "_eldb_console", False):
            handler.setLevel(level)
            return
    handler = logging.StreamHandler()
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    handler._eldb_console = True
    root.addHandler(handler)


def _text_entry(error_data: Dict[str, Any]) -> str:
    """Block written to run_errors.log for one error record."""
    return (
        f"Error ID: {error_data['error_id']}\n"
        f"Command: {error_data['command']}\n"
        f"Context: {json.dumps(error_data['context'], indent=2, default=str)}\n"
        f"Error: {error_data['error_type']}: {error_data['error_message']}\n"
        f"Traceback:\n{error_data['traceback']}\n"
        + "=" * 80 + "\n"
    )


def matches(error_data: Dict[str, Any], command: Optional[str] = None, error_type: Optional[str] = None) -> bool:
    """
    Filter for logged errors.

    `command` matches exactly or as a prefix before ':', so "test" selects
    every "test:<name>" record.
    """
    if command is not None:
        logged = error_data.get("command", "")
        if logged != command and not logged.startswith(f"{command}:"):
            return False
    if error_type is not None and error_data.get("error_type") != error_type:
        return False
    return True


class ErrorLogger:
    """Centralized error log: a text file plus a JSON Lines file."""

    def __init__(self, log_dir: Optional[Path] = None):
        """
        Initialize the logger.

        Args:
            log_dir: Directory for the log files; settings decide when absent
        """
        if log_dir is None:
            log_dir = load_settings().log_dir
        self.log_dir = Path(log_dir)
        self.log_file = self.log_dir / LOG_FILE_NAME
        self.json_log_file = self.log_dir / JSON_LOG_FILE_NAME
        self.logger = get_logger("errors")
        # File output only.
        self.logger.propagate = False
        self._file_handler: Optional[logging.Handler] = None

    def _ensure_file_handler(self) -> None:
        if self._file_handler is not None:
            return
        self.log_dir.mkdir(parents=True, exist_ok=True)
        handler = logging.FileHandler(self.log_file, encoding="utf-8")
        handler.setLevel(logging.ERROR)
        handler.setFormatter(logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s\n%(pathname)s:%(lineno)d\n"
        ))
        self.logger.addHandler(handler)
        self._file_handler = handler

    def log_error(
        self,
        error: Exception,
        context: Optional[Dict[str, Any]] = None,
        command: Optional[str] = None,
    ) -> str:
        """
        Log an error with context.

        Args:
            error: The exception that occurred
            context: Additional context dictionary
            command: The CLI command or test that was running

        Returns:
            Error ID for tracking
        """
        self._ensure_file_handler()
        error_id = datetime.now().strftime("%Y%m%d_%H%M%S_%f")
        timestamp = datetime.now().isoformat()

        tb_str = "".join(traceback.format_exception(type(error), error, error.__traceback__))

        error_data = {
            "error_id": error_id,
            "timestamp": timestamp,
            "error_type": type(error).__name__,
            "error_message": str(error),
            "command": command or "unknown",
            "context": context or {},
            "traceback": tb_str,
        }

        self.logger.error(_text_entry(error_data))

        try:
            with open(self.json_log_file, "a", encoding="utf-8") as f:
                f.write(json.dumps(error_data, default=str) + "\n")
        except OSError as e:
            self.logger.error(f"Failed to write JSON log: {e}")

        return error_id

    def get_recent_errors(self, limit: int = 100) -> list:
        """Recent errors from the JSON log, most recent first."""
        errors = []
        if not self.json_log_file.exists():
            return errors

        try:
            with open(self.json_log_file, "r", encoding="utf-8") as f:
                lines = f.readlines()
            for line in lines[-limit:]:
                try:
                    errors.append(json.loads(line.strip()))
                except json.JSONDecodeError:
                    continue
        except OSError as e:
            self.logger.error(f"Failed to read JSON log: {e}")

        return list(reversed(errors))

    def find_errors(
        self,
        command: Optional[str] = None,
        error_type: Optional[str] = None,
        limit: int = 10000,
    ) -> list:
        """Logged errors matching a command and/or type, most recent first."""
        found = [e for e in self.get_recent_errors(limit=10000) if matches(e, command, error_type)]
        return found[:limit]

    def remove_errors(self, command: Optional[str] = None, error_type: Optional[str] = None) -> int:
        """
        Drop matching records from both logs and return how many went.

        The text log is rewritten from the records that stay.
        """
        records = list(reversed(self.get_recent_errors(limit=10000)))
        keep = [e for e in records if not matches(e, command, error_type)]
        removed = len(records) - len(keep)
        if removed == 0:
            return 0
        if not keep:
            self.clear_logs()
            return removed

        self._release_file_handler()
        with open(self.json_log_file, "w", encoding="utf-8") as f:
            for record in keep:
                f.write(json.dumps(record, default=str) + "\n")
        with open(self.log_file, "w", encoding="utf-8") as f:
            for record in keep:
                f.write(f"{record.get('timestamp', '')} - {self.logger.name} - ERROR - {_text_entry(record)}\n")
        return removed

    def _release_file_handler(self) -> None:
        if self._file_handler is not None:
            self.logger.removeHandler(self._file_handler)
            self._file_handler.close()
            self._file_handler = None

    def clear_logs(self) -> bool:
        """Delete both log files."""
        try:
            self._release_file_handler()
            if self.log_file.exists():
                self.log_file.unlink()
            if self.json_log_file.exists():
                self.json_log_file.unlink()
            return True
        except OSError as e:
            self.logger.error(f"Failed to clear logs: {e}")
            return False

    def get_log_stats(self) -> Dict[str, Any]:
        """Counts of logged errors by type and by command."""
        stats = {
            "total_errors": 0,
            "errors_by_type": {},
            "errors_by_command": {},
            "failing_tests": [],
            "latest_error": None,
        }

        errors = self.get_recent_errors(limit=10000)
        stats["total_errors"] = len(errors)

        for error in errors:
            error_type = error.get("error_type", "Unknown")
            stats["errors_by_type"][error_type] = stats["errors_by_type"].get(error_type, 0) + 1

            command = error.get("command", "unknown")
            stats["errors_by_command"][command] = stats["errors_by_command"].get(command, 0) + 1
            if command.startswith("test:") and command[5:] not in stats["failing_tests"]:
                stats["failing_tests"].append(command[5:])

        if errors:
            stats["latest_error"] = errors[0]

        return stats


_logger: Optional[ErrorLogger] = None


def get_error_logger() -> ErrorLogger:
    """Shared ErrorLogger, created on first use."""
    global _logger
    if _logger is None:
        _logger = ErrorLogger()
    return _logger


def log_run_error(error: Exception, command: Optional[str] = None, **context) -> str:
    """
    Convenience function to log run errors.

    Args:
        error: The exception
        command: What was running
        **context: Additional context as keyword arguments
    """
    return get_error_logger().log_error(error, context=context, command=command)
