import json
import logging

from src.core.errors import (
    EXIT_CONFIG,
    EXIT_FAILURE,
    EXIT_INVARIANT,
    CapExceededError,
    ConfigError,
    EqualCharacteristicError,
    ErrorCode,
    HypothesisFailedError,
    InvariantViolationError,
    handle_exception,
)
from src.core.logging import ExperimentLogger, LogContext, StructuredFormatter


def test_config_error_payload():
    payload, code = handle_exception(ConfigError("bad ell", {"ell": 4}))
    assert code == EXIT_CONFIG
    assert payload["code"] == ErrorCode.CONFIG_ERROR.value
    assert payload["category"] == "config"
    assert payload["details"] == {"ell": 4}


def test_exit_codes():
    _, code = handle_exception(InvariantViolationError("Lagrange"))
    assert code == EXIT_INVARIANT
    _, code = handle_exception(CapExceededError(10, 11))
    assert code == EXIT_FAILURE


def test_domain_errors_keep_details():
    e = EqualCharacteristicError(7, 7)
    assert e.to_dict()["code"] == "EQUAL_CHARACTERISTIC"
    h = HypothesisFailedError("M_contains_S")
    assert h.reason == "M_contains_S"


def test_unexpected_errors_are_internal():
    payload, code = handle_exception(ZeroDivisionError("boom"))
    assert code == EXIT_FAILURE
    assert payload["code"] == "INTERNAL_ERROR"
    assert payload["details"] == {"type": "ZeroDivisionError"}


def _record(message, **extra):
    record = logging.LogRecord("test", logging.INFO, __file__, 1, message, None, None)
    for k, v in extra.items():
        setattr(record, k, v)
    return record


def test_structured_formatter_carries_stats():
    line = StructuredFormatter().format(_record("histogram", stats={"p": 101, "ell": 5}))
    data = json.loads(line)
    assert data["message"] == "histogram"
    assert data["level"] == "INFO"
    assert data["stats"] == {"p": 101, "ell": 5}


def test_log_context_adds_fields():
    with LogContext(logging.getLogger("test"), subcommand="duke"):
        record = logging.getLogRecordFactory()("test", logging.INFO, __file__, 1, "x", None, None)
    data = json.loads(StructuredFormatter().format(record))
    assert data["subcommand"] == "duke"


class _Collect(logging.Handler):
    def __init__(self):
        super().__init__()
        self.records = []

    def emit(self, record):
        self.records.append(record)


def test_experiment_run_shares_run_id_and_reports_rows():
    events = ExperimentLogger("test.run")
    sink = _Collect()
    events.logger.addHandler(sink)
    events.logger.setLevel(logging.INFO)
    try:
        with events.run("sieve") as outcome:
            outcome.update(rows=3, demo="zero")
    finally:
        events.logger.removeHandler(sink)

    started, finished = sink.records
    assert started.run_id == finished.run_id == events.run_id
    assert finished.subcommand == "sieve"
    assert finished.stats["rows"] == 3
    assert finished.stats["demo"] == "zero"
    assert json.loads(StructuredFormatter().format(finished))["run_id"] == events.run_id
