"""
JSON-lines logging for the toolkit.

Every record becomes one JSON object on stderr (and optionally a log file).
Stdout stays reserved for command results.
"""
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional

TOOLKIT_LOGGER_NAME = 'zalcman'

# JSON key -> LogRecord attribute
_RECORD_FIELDS = {
    'level': 'levelname',
    'logger': 'name',
    'module': 'module',
    'function': 'funcName',
    'line': 'lineno',
}


class StructuredFormatter(logging.Formatter):
    """Render a record, plus its ``extra_fields``, as a single JSON line."""

    def format(self, record: logging.LogRecord) -> str:
        stamp = datetime.fromtimestamp(record.created, tz=timezone.utc)
        payload: Dict[str, Any] = {
            'timestamp': stamp.strftime('%Y-%m-%dT%H:%M:%S.%fZ'),
            'message': record.getMessage(),
        }
        payload.update({key: getattr(record, attr) for key, attr in _RECORD_FIELDS.items()})
        payload.update(getattr(record, 'extra_fields', {}))

        if record.exc_info:
            payload['exception'] = self.formatException(record.exc_info)

        return json.dumps(payload, default=str)


class ToolkitLogger:
    """
    Command-level logging facade over the ``zalcman`` logger.

    Module loggers (``zalcman.certify``, ``zalcman.search``, ...) propagate
    into it, so installing handlers here covers the whole package.
    """

    def __init__(self, name: str = TOOLKIT_LOGGER_NAME, level: str = 'WARNING'):
        self.logger = logging.getLogger(name)
        self.logger.setLevel(level)
        self.logger.propagate = False

        # Re-creating the facade (tests, repeated main() calls) must not stack handlers
        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)
            handler.close()

        self._attach(logging.StreamHandler(sys.stderr))

    def _attach(self, handler: logging.Handler) -> None:
        handler.setFormatter(StructuredFormatter())
        self.logger.addHandler(handler)

    def _event(self, level: int, message: str, event: str, **fields: Any) -> None:
        self.logger.log(level, message, extra={'extra_fields': {'event': event, **fields}})

    def log_stage_start(self, stage_name: str, **kwargs: Any) -> None:
        self._event(logging.INFO, f"Starting stage: {stage_name}", 'stage_start', stage=stage_name, **kwargs)

    def log_stage_complete(self, stage_name: str, **kwargs: Any) -> None:
        self._event(logging.INFO, f"Completed stage: {stage_name}", 'stage_complete', stage=stage_name, **kwargs)

    def log_configuration(self, config: Dict[str, Any]) -> None:
        self._event(logging.INFO, "Configuration", 'configuration', **config)

    def log_certificate(self, certificate: Dict[str, Any]) -> None:
        """Log a certification outcome. Refuted and budget-exceeded runs are warnings."""
        status = certificate.get('status')
        level = logging.INFO if status == 'proven' else logging.WARNING
        self._event(level, f"Certificate {certificate.get('kind')}: {status}", 'certificate', **certificate)

    def log_validation_result(self, is_valid: bool, details: Dict[str, Any]) -> None:
        level = logging.INFO if is_valid else logging.ERROR
        outcome = 'passed' if is_valid else 'failed'
        self._event(level, f"Validation {outcome}", 'validation', is_valid=is_valid, **details)

    def log_file_io(self, operation: str, filepath: Path, records: Optional[int] = None) -> None:
        fields: Dict[str, Any] = {'operation': operation, 'filepath': str(filepath)}
        if records is not None:
            fields['records'] = records
        self._event(logging.INFO, f"File {operation}: {filepath}", 'file_io', **fields)

    def add_file_handler(self, log_file: Path) -> None:
        """Mirror every record into ``log_file``."""
        self._attach(logging.FileHandler(log_file))


def create_toolkit_logger(level: str = 'WARNING', log_file: Optional[Path] = None) -> ToolkitLogger:
    """
    Create the toolkit logger used by the command-line interface.

    Args:
        level: DEBUG, INFO, WARNING or ERROR
        log_file: Optional JSONL file receiving a copy of every record
            (parent directories are created)

    Returns:
        Configured ToolkitLogger instance
    """
    toolkit_logger = ToolkitLogger(TOOLKIT_LOGGER_NAME, level)

    if log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        toolkit_logger.add_file_handler(log_file)

    return toolkit_logger
