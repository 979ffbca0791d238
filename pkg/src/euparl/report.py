"""Per-state tables rendered as aligned text, CSV, or JSON lines."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Optional

FORMATS = ("text", "csv", "records")


@dataclass
class Column:
    header: str
    cells: list[str]
    total: Optional[str] = None
    numeric: bool = True


@dataclass
class Report:
    codes: list[str]
    names: list[str]
    columns: list[Column] = field(default_factory=list)
    summaries: list[tuple[str, dict[str, str]]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, header: str, cells: list[str], total: Optional[str] = None, numeric: bool = True) -> None:
        self.columns.append(Column(header, cells, total, numeric))

    def summary(self, kind: str, **items: str) -> None:
        self.summaries.append((kind, items))


def fmt_int(value: int) -> str:
    return str(int(value))


def fmt_fixed(value: float, places: int) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if abs(value) >= 1e15:
        return f"{value:.{places}e}"
    return f"{value:.{places}f}"


def fmt_short(value: float) -> str:
    """Shortest round-tripping form, without a trailing ``.0``."""
    if math.isinf(value):
        return "inf"
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def _typed(text: str) -> Any:
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def _header(report: Report) -> list[str]:
    return ["code", "name"] + [c.header for c in report.columns]


def _rows(report: Report) -> list[list[str]]:
    rows = [
        [code, name] + [c.cells[k] for c in report.columns]
        for k, (code, name) in enumerate(zip(report.codes, report.names))
    ]
    if any(c.total is not None for c in report.columns):
        rows.append(["Sum", ""] + [c.total or "" for c in report.columns])
    return rows


def render_text(report: Report) -> str:
    header = _header(report)
    rows = _rows(report)
    widths = [max(len(r[k]) for r in [header] + rows) for k in range(len(header))]
    numeric = [False, False] + [c.numeric for c in report.columns]

    def line(cells: list[str]) -> str:
        return "  ".join(
            cell.rjust(w) if num else cell.ljust(w) for cell, w, num in zip(cells, widths, numeric)
        ).rstrip()

    out = [line(header), "  ".join("-" * w for w in widths)]
    out += [line(r) for r in rows[: len(report.codes)]]
    if len(rows) > len(report.codes):
        out.append("  ".join("-" * w for w in widths))
        out.append(line(rows[-1]))
    for kind, items in report.summaries:
        out.append("")
        out.append(f"[{kind}]")
        key_w = max((len(k) for k in items), default=0)
        out += [f"{k.ljust(key_w)}  {v}" for k, v in items.items()]
    out += [f"note: {n}" for n in report.notes]
    return "\n".join(out) + "\n"


def render_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_header(report))
    writer.writerows(_rows(report))
    for idx, (kind, items) in enumerate(report.summaries):
        for k, v in items.items():
            buf.write(f"# {kind}.{idx}.{k}={v}\n")
    for n in report.notes:
        buf.write(f"# note={n}\n")
    return buf.getvalue()


def render_records(report: Report) -> str:
    header = _header(report)
    lines = []
    for row in _rows(report):
        kind = "total" if row[0] == "Sum" and len(lines) == len(report.codes) else "state"
        rec: dict[str, Any] = {"record": kind}
        for key, cell in zip(header, row):
            if kind == "total" and key in ("code", "name"):
                continue
            if cell == "" and kind == "total":
                continue
            rec[key] = cell if key in ("code", "name") else _typed(cell)
        lines.append(json.dumps(rec))
    for kind, items in report.summaries:
        lines.append(json.dumps({"record": kind, **{k: _typed(v) for k, v in items.items()}}))
    for n in report.notes:
        lines.append(json.dumps({"record": "note", "note": n}))
    return "\n".join(lines) + "\n"


def render(report: Report, fmt: str) -> str:
    return {"text": render_text, "csv": render_csv, "records": render_records}[fmt](report)


def parse_csv(text: str) -> tuple[list[dict[str, str]], dict[str, str]]:
    """Read back :func:`render_csv` output: state rows and summary items."""
    body = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    meta = {}
    for ln in text.splitlines():
        if ln.startswith("# ") and "=" in ln:
            key, _, value = ln[2:].partition("=")
            meta[key] = value
    rows = [r for r in csv.DictReader(body) if r["code"] != "Sum"]
    return rows, meta
