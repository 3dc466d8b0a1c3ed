"""CSV and JSON-lines writers with a fixed column order."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable, TextIO


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_rows(rows: Iterable[dict], fields: tuple[str, ...], fmt: str, stream: TextIO) -> None:
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow([_cell(row.get(k)) for k in fields])
    elif fmt == "json-lines":
        for row in rows:
            stream.write(json.dumps({k: row.get(k) for k in fields}) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def render(rows: Iterable[dict], fields: tuple[str, ...], fmt: str) -> str:
    buf = io.StringIO()
    write_rows(rows, fields, fmt, buf)
    return buf.getvalue()


def emit(rows: Iterable[dict], fields: tuple[str, ...], fmt: str, path: str | Path) -> Path:
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            write_rows(rows, fields, fmt, fh)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def read_jsonl(path: str | Path) -> list[dict]:
    return [json.loads(line) for line in Path(path).read_text().splitlines() if line.strip()]


def read_csv(path: str | Path) -> list[dict]:
    """Rows as strings keyed by header (no type recovery)."""
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))


def summary_path(path: str | Path) -> Path:
    """``results.csv`` -> ``results.summary.csv``."""
    p = Path(path)
    return p.with_name(f"{p.stem}.summary{p.suffix}")
