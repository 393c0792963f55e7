"""Reader for focklaser result files (the documented CSV/JSON schema).

This package talks to the simulator only through its command line and its
output files; the schema is parsed here independently:

    # focklaser v<version>
    # key=value            (config echo)
    column,names
    data,rows
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path


class SchemaError(ValueError):
    """An input file does not match what the figure declares."""


def _scalar(s: str):
    for cast in (int, float):
        try:
            return cast(s)
        except ValueError:
            continue
    return s


@dataclass
class ResultFile:
    path: Path
    command: str
    config: dict
    columns: list
    rows: list

    def column(self, name: str) -> list:
        try:
            i = self.columns.index(name)
        except ValueError:
            raise SchemaError(f"{self.path}: no column '{name}' "
                              f"(has {self.columns})") from None
        return [row[i] for row in self.rows]


def read_result(path) -> ResultFile:
    path = Path(path)
    text = path.read_text()
    if text.lstrip().startswith("{"):
        payload = json.loads(text)
        return ResultFile(path=path, command=payload["command"],
                          config=payload["config"], columns=payload["columns"],
                          rows=[tuple(r) for r in payload["rows"]])
    config: dict = {}
    body: list[str] = []
    for ln in text.splitlines():
        if ln.startswith("# focklaser "):
            continue
        if ln.startswith("# "):
            key, _, val = ln[2:].partition("=")
            config[key] = _scalar(val)
        elif ln.strip():
            body.append(ln)
    if not body:
        raise SchemaError(f"{path}: no data table found")
    columns = body[0].split(",")
    rows = [tuple(_scalar(v) for v in ln.split(",")) for ln in body[1:]]
    command = config.pop("command", "")
    return ResultFile(path=path, command=command, config=config,
                      columns=columns, rows=rows)


@dataclass
class FigureSpec:
    """What a figure panel demands of its inputs.

    ``command`` is the producing subcommand; ``consistent_keys`` must agree
    across all inputs; ``required`` pins config entries to exact values.
    Conflicting inputs are refused with a SchemaError.
    """

    name: str
    command: str
    consistent_keys: tuple = ()
    required: dict | None = None

    def load(self, paths) -> list[ResultFile]:
        results = [read_result(p) for p in paths]
        if not results:
            raise SchemaError(f"{self.name}: no inputs given")
        for res in results:
            if res.command != self.command:
                raise SchemaError(
                    f"{self.name}: {res.path} was produced by "
                    f"'{res.command}', needs '{self.command}'")
            for key, val in (self.required or {}).items():
                if res.config.get(key) != val:
                    raise SchemaError(
                        f"{self.name}: {res.path} has {key}="
                        f"{res.config.get(key)!r}, panel requires {val!r}")
        for key in self.consistent_keys:
            vals = {res.config.get(key) for res in results}
            if len(vals) > 1:
                raise SchemaError(
                    f"{self.name}: inputs disagree on {key}: {sorted(map(str, vals))}")
        return results
