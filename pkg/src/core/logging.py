import json
import logging
import os
import sys
import time
from contextlib import contextmanager
from datetime import datetime, timezone
from typing import Any, Dict, Iterator, Optional
from uuid import uuid4

# attributes copied from the record into the JSON line when present
_PASSTHROUGH = ("run_id", "subcommand", "shard", "stats")


def _level_from_env() -> int:
    level = logging.getLevelName(os.environ.get("LOG_LEVEL", "INFO").upper())
    return level if isinstance(level, int) else logging.INFO


class StructuredFormatter(logging.Formatter):
    """One JSON object per line; stats and run identifiers sit at top level."""

    def format(self, record: logging.LogRecord) -> str:
        log_data: Dict[str, Any] = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "pid": record.process,
        }

        if hasattr(record, "extra_fields"):
            log_data.update(record.extra_fields)

        for key in _PASSTHROUGH:
            if hasattr(record, key):
                log_data[key] = getattr(record, key)

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_data, default=str)


def get_logger(name: str) -> logging.Logger:
    logger = logging.getLogger(f"galois_sieve.{name}")

    if not logger.handlers:
        # stdout carries the experiment tables
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(StructuredFormatter())
        logger.addHandler(handler)
        logger.setLevel(_level_from_env())
        logger.propagate = False

    return logger


class LogContext:
    """Attach fields to every record created inside the block; nested blocks merge."""

    def __init__(self, logger: logging.Logger, **extra_fields):
        self.logger = logger
        self.extra_fields = extra_fields
        self.old_factory = None

    def __enter__(self):
        self.old_factory = logging.getLogRecordFactory()
        old_factory = self.old_factory

        def record_factory(*args, **kwargs):
            record = old_factory(*args, **kwargs)
            record.extra_fields = {**getattr(record, "extra_fields", {}), **self.extra_fields}
            return record

        logging.setLogRecordFactory(record_factory)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        logging.setLogRecordFactory(self.old_factory)
        return False


class ExperimentLogger:
    """Run-level events for one CLI invocation, all sharing one run_id."""

    def __init__(self, logger_name: str = "cli"):
        self.logger = get_logger(logger_name)
        self.run_id: Optional[str] = None

    def _current_run(self) -> str:
        if self.run_id is None:
            self.run_id = uuid4().hex
        return self.run_id

    def log_info(self, message: str, extra: Optional[Dict[str, Any]] = None):
        payload = dict(extra or {})
        payload.setdefault("run_id", self._current_run())
        self.logger.info(message, extra=payload)

    def log_run(self, subcommand: str, rows: int, duration_ms: float, **stats):
        self.logger.info(
            f"{subcommand} finished with {rows} rows",
            extra={
                "run_id": self._current_run(),
                "subcommand": subcommand,
                "stats": {"rows": rows, "duration_ms": round(duration_ms, 3), **stats},
            },
        )

    def log_error(self, error: Exception, context: Dict[str, Any]):
        self.logger.error(
            str(error),
            extra={
                "run_id": self._current_run(),
                "stats": {"error_type": type(error).__name__, "context": context},
            },
            exc_info=not hasattr(error, "to_dict"),
        )

    @contextmanager
    def run(self, subcommand: str) -> Iterator[Dict[str, Any]]:
        """Time a subcommand; the caller fills the yielded dict with rows and summary stats."""
        self.run_id = uuid4().hex
        outcome: Dict[str, Any] = {"rows": 0}
        started = time.perf_counter()
        with LogContext(self.logger, run_id=self.run_id, subcommand=subcommand):
            self.log_info(f"{subcommand} started")
            yield outcome
        duration_ms = (time.perf_counter() - started) * 1000
        rows = outcome.pop("rows")
        self.log_run(subcommand, rows, duration_ms, **outcome)


cli_logger = ExperimentLogger("cli")
