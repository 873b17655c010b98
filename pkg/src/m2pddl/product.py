"""Product data: comma-separated records with a header row."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .diagnostics import DiagnosticError, error


@dataclass(frozen=True)
class ProductRecordSet:
    schema: tuple[str, ...]
    rows: tuple[dict, ...] = ()
    key: str = "id"

    def __len__(self) -> int:
        return len(self.rows)

    def keys(self) -> list[str]:
        return [row[self.key] for row in self.rows]


def load_product_data(text: str, key_column: str = "id") -> ProductRecordSet:
    """Parse product records and enforce schema shape and key uniqueness.

    Blank lines are skipped; cell values are whitespace-stripped.
    """
    lines = [(n, row) for n, row in enumerate(csv.reader(io.StringIO(text)), start=1) if any(c.strip() for c in row)]
    if not lines:
        raise DiagnosticError([error("missing-key-column", f"no header row, key column {key_column} absent", "line 1")])
    header_line, header = lines[0]
    schema = tuple(c.strip() for c in header)
    if key_column not in schema:
        raise DiagnosticError(
            [error("missing-key-column", f"key column {key_column} not in header {list(schema)}", f"line {header_line}")]
        )
    problems = []
    rows = []
    seen: dict[str, int] = {}
    for lineno, raw in lines[1:]:
        where = f"line {lineno}"
        if len(raw) != len(schema):
            problems.append(error("ragged-row", f"{len(raw)} cells, header has {len(schema)}", where))
            continue
        row = {col: cell.strip() for col, cell in zip(schema, raw)}
        key = row[key_column]
        if not key:
            problems.append(error("missing-key-column", f"empty {key_column}", where))
        elif key in seen:
            problems.append(error("duplicate-key", f"{key_column} {key} already used on line {seen[key]}", where))
        else:
            seen[key] = lineno
        rows.append(row)
    if problems:
        raise DiagnosticError(problems)
    return ProductRecordSet(schema, tuple(rows), key_column)


def dump_product_data(records: ProductRecordSet) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(records.schema)
    for row in records.rows:
        writer.writerow([row[c] for c in records.schema])
    return buf.getvalue()
