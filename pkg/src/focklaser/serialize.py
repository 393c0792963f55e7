"""Deterministic result files (CSV and JSON) with full config provenance.

CSV layout::

    # focklaser v<version>
    # key=value          (config echo, sorted by key)
    column,names
    data,rows            (floats at 17 significant digits)

The config echo is sufficient to reproduce the file; identical configs
produce byte-identical CSVs (no timestamps or durations in CSV).  The JSON
format carries the same envelope plus a wall-clock ``duration_s`` field,
which is treated as out-of-envelope metadata by the reader.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .errors import ValidationError

__all__ = ["ResultEnvelope", "read_result"]


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


@dataclass
class ResultEnvelope:
    """A table of results plus the configuration that produced it."""

    command: str
    config: dict
    columns: list
    rows: list
    duration_s: float | None = field(default=None, compare=False)

    @property
    def version(self) -> str:
        return __version__

    def config_lines(self) -> list[str]:
        items = {"command": self.command, **self.config}
        return [f"# {k}={_fmt(v)}" for k, v in sorted(items.items())]

    def to_csv(self) -> str:
        lines = [f"# focklaser v{self.version}"]
        lines.extend(self.config_lines())
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(_fmt(v) for v in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "focklaser_version": self.version,
            "command": self.command,
            "config": {k: self.config[k] for k in sorted(self.config)},
            "columns": list(self.columns),
            "rows": [list(r) for r in self.rows],
        }
        if self.duration_s is not None:
            payload["duration_s"] = self.duration_s
        return json.dumps(payload, indent=1, sort_keys=True) + "\n"

    def write(self, path: str | Path | None, fmt: str = "csv") -> str:
        text = self.to_csv() if fmt == "csv" else self.to_json()
        if path is not None:
            Path(path).write_text(text)
        return text


def _parse_scalar(s: str):
    for cast in (int, float):
        try:
            return cast(s)
        except ValueError:
            continue
    return s


def read_result(path: str | Path) -> ResultEnvelope:
    """Parse a CSV or JSON result file back into its envelope."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        payload = json.loads(text)
        return ResultEnvelope(
            command=payload["command"], config=payload["config"],
            columns=payload["columns"],
            rows=[tuple(r) for r in payload["rows"]],
            duration_s=payload.get("duration_s"))
    lines = text.splitlines()
    config: dict = {}
    body: list[str] = []
    for ln in lines:
        if ln.startswith("# focklaser "):
            continue
        if ln.startswith("# "):
            key, _, val = ln[2:].partition("=")
            config[key] = _parse_scalar(val)
        elif ln.strip():
            body.append(ln)
    if not body:
        raise ValidationError(f"{path}: no table found")
    columns = body[0].split(",")
    rows = [tuple(_parse_scalar(v) for v in ln.split(",")) for ln in body[1:]]
    command = config.pop("command", "")
    return ResultEnvelope(command=command, config=config,
                          columns=columns, rows=rows)
