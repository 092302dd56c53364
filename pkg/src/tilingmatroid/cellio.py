"""Reading and writing cell-set documents.

Two input formats are accepted.  The structured one is a JSON object::

    {"n": 4, "cells": [[3, 0, 0], [1, 1, 1]], "label": "optional"}

The plain one has ``n`` on the first line and one whitespace-separated
triple per following line; ``#`` starts a comment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from tilingmatroid.errors import TilingMatroidError
from tilingmatroid.trigrid import CellSet


class CellSetParseError(TilingMatroidError, ValueError):
    """Bad cell-set input; ``code`` names the kind of problem."""

    def __init__(self, code: str, message: str, line: Optional[int] = None, field: Optional[str] = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(field)
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.code = code
        self.line = line
        self.field = field


@dataclass(frozen=True)
class CellSetDocument:
    n: int
    cells: tuple = field(default_factory=tuple)
    label: Optional[str] = None

    def cellset(self) -> CellSet:
        return CellSet.from_cells(self.n, self.cells)


def _check_cells(n: int, cells: list, positions: list) -> tuple:
    seen = {}
    for triple, (line, fld) in zip(cells, positions):
        if any(v < 0 for v in triple):
            raise CellSetParseError("negative-coordinate", f"negative coordinate in {list(triple)}", line, fld)
        total = sum(triple)
        if total != n - 1:
            raise CellSetParseError(
                "wrong-sum", f"coordinate sum {total} ≠ n−1 = {n - 1} for {list(triple)}", line, fld
            )
        if triple in seen:
            raise CellSetParseError("duplicate-cell", f"duplicate cell {list(triple)} (first at {seen[triple]})", line, fld)
        seen[triple] = fld if line is None else f"line {line}"
    return tuple(cells)


def _check_n(n, line=None, fld=None) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise CellSetParseError("bad-n", f"n must be a positive integer, got {n!r}", line, fld)
    return n


def _parse_json(text: str) -> CellSetDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CellSetParseError("malformed-json", exc.msg, exc.lineno, f"column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise CellSetParseError("malformed-json", "document must be a JSON object")
    if "n" not in doc:
        raise CellSetParseError("missing-n", "document has no \"n\" field")
    n = _check_n(doc["n"], fld="n")
    raw = doc.get("cells", [])
    if not isinstance(raw, list):
        raise CellSetParseError("malformed-triple", "\"cells\" must be a list", field="cells")
    cells, positions = [], []
    for i, item in enumerate(raw):
        fld = f"cells[{i}]"
        if (
            not isinstance(item, list)
            or len(item) != 3
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in item)
        ):
            raise CellSetParseError("malformed-triple", f"expected three integers, got {item!r}", field=fld)
        cells.append(tuple(item))
        positions.append((None, fld))
    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise CellSetParseError("bad-label", "label must be a string", field="label")
    return CellSetDocument(n, _check_cells(n, cells, positions), label)


def _parse_plain(text: str) -> CellSetDocument:
    n = None
    cells, positions = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 1:
                raise CellSetParseError("missing-n", f"expected n on the first line, got {line!r}", lineno)
            try:
                n = _check_n(int(parts[0]), lineno)
            except ValueError:
                raise CellSetParseError("missing-n", f"expected n on the first line, got {line!r}", lineno) from None
            continue
        if len(parts) != 3:
            raise CellSetParseError("malformed-triple", f"expected three integers, got {line!r}", lineno)
        try:
            triple = tuple(int(p) for p in parts)
        except ValueError:
            raise CellSetParseError("malformed-triple", f"expected three integers, got {line!r}", lineno) from None
        cells.append(triple)
        positions.append((lineno, None))
    if n is None:
        raise CellSetParseError("missing-n", "input has no n line")
    return CellSetDocument(n, _check_cells(n, cells, positions))


def parse_cellset(text: str) -> CellSetDocument:
    """Parse either input format; the JSON one is recognised by a leading ``{``."""
    if text.lstrip().startswith("{"):
        return _parse_json(text)
    return _parse_plain(text)


def serialize(doc: CellSetDocument, fmt: str = "json") -> str:
    if fmt == "plain":
        lines = [str(doc.n)] + [" ".join(str(v) for v in c) for c in doc.cells]
        return "\n".join(lines) + "\n"
    out = {"n": doc.n, "cells": [list(c) for c in doc.cells]}
    if doc.label is not None:
        out["label"] = doc.label
    return json.dumps(out)


def document_of(s: CellSet, label: Optional[str] = None) -> CellSetDocument:
    return CellSetDocument(s.n, tuple(tuple(u) for u in s), label)
