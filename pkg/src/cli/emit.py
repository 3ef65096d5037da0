"""CSV and JSON writers for experiment tables."""
from __future__ import annotations

import csv
import io
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

from src.core.errors import ConfigError
from src.core.utils import to_json
from src.models.schemas import ExperimentConfig


def _cell(value: Any) -> Any:
    if isinstance(value, bool):
        return int(value)
    if value is None:
        return ""
    return value


def _normalize(rows: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    return [{k: int(v) if isinstance(v, bool) else v for k, v in row.items()} for row in rows]


def write_csv(rows: List[Dict[str, Any]], stream: TextIO) -> None:
    if not rows:
        return
    fieldnames = list(rows[0].keys())
    writer = csv.DictWriter(stream, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(v) for k, v in row.items()})


def write_json(config: Dict[str, Any], rows: List[Dict[str, Any]], stream: TextIO) -> None:
    stream.write(to_json({"config": config, "rows": _normalize(rows)}, indent=2))
    stream.write("\n")


def render(config: ExperimentConfig, rows: List[Dict[str, Any]]) -> str:
    buffer = io.StringIO()
    if config.format == "json":
        write_json(config.emitted(), rows, buffer)
    else:
        write_csv(rows, buffer)
    return buffer.getvalue()


def emit(
    config: ExperimentConfig,
    rows: List[Dict[str, Any]],
    stream: Optional[TextIO] = None,
) -> None:
    """Write to config.out when set, else to `stream` (stdout by default)."""
    text = render(config, rows)
    if config.out:
        _write_file(config.out, text)
        return
    (stream or sys.stdout).write(text)


def emit_summary(config: ExperimentConfig, summary: Dict[str, Any]) -> None:
    """Run aggregates (candidate counts, shares, T(x) proxy) as JSON, when asked for."""
    if config.summary:
        payload = {"config": config.emitted(), "summary": summary}
        _write_file(config.summary, to_json(payload, indent=2) + "\n")


def _write_file(target: str, text: str) -> None:
    path = Path(target)
    if path.parent and not path.parent.exists():
        raise ConfigError("output directory does not exist", {"out": target})
    path.write_text(text, encoding="utf-8")
