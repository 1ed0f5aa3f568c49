"""Report rows and their CSV serialization.

A ReportTable collects rows of one pydantic row type and writes them as
CSV with a stable header (the row type's field order). Floats are written
with 17 significant digits so that the bytes only depend on the values.
"""

import csv
import sys
from enum import StrEnum
from pathlib import Path as FilePath
from typing import IO

from pydantic import BaseModel

from .config import FLOAT_FORMAT


class CellStatus(StrEnum):
    PASS = "PASS"
    FAIL = "FAIL"
    UNGATED = "UNGATED"  # would fail, but too few hits to gate
    FLAGGED = "FLAGGED"  # informational comparison violated
    NA = "NA"  # no bound attached


class ReportRow(BaseModel):
    """One simulated cell; the column contract of `simulate` and `verify`."""

    model_id: str
    event_mode: str
    char_kind: str
    y_or_beta: float | None
    x: float
    budget: float
    n: int
    trials: int
    hits: int
    p_hat: float
    upper: float
    bound_name: str
    bound_value: float | None
    margin: float | None
    status: CellStatus


def format_value(value: object) -> str:
    """CSV text of a cell: floats round-trip exactly, None is empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, FLOAT_FORMAT)
    return str(value)


class ReportTable[RowT: BaseModel]:
    """Ordered collection of report rows.

    Responsibilities:
    - Store rows in the order they were produced
    - Provide column access for tests and summaries
    - Serialize to CSV

    Does NOT handle:
    - Simulation logic
    - Verdict computation
    """

    def __init__(self, row_type: type[RowT] | None = None):
        """Initialize an empty table.

        Args:
            row_type: Row model fixing the header; inferred from the first
                row when omitted
        """
        self._rows: list[RowT] = []
        self._row_type = row_type

    def record(self, row: RowT) -> None:
        """Append a row."""
        if self._row_type is None:
            self._row_type = type(row)
        self._rows.append(row)

    def get_all(self) -> list[RowT]:
        """Rows in production order."""
        return self._rows.copy()

    def get_values(self, column: str) -> list[object]:
        """Values of one column.

        Raises:
            AttributeError: If the column does not exist on the row type
        """
        return [getattr(row, column) for row in self._rows]

    def columns(self) -> list[tuple[str, str]]:
        """(attribute, CSV label) pairs; a field alias overrides the label."""
        row_type = self._row_type if self._row_type is not None else ReportRow
        fields = row_type.model_fields
        return [(name, field.alias or name) for name, field in fields.items()]

    def header(self) -> list[str]:
        return [label for _, label in self.columns()]

    def statuses(self) -> list[CellStatus]:
        return [
            status
            for status in self.get_values("status")
            if isinstance(status, CellStatus)
        ]

    def passed(self) -> bool:
        """True unless some row has status FAIL."""
        return CellStatus.FAIL not in self.statuses()

    def __len__(self) -> int:
        return len(self._rows)

    def is_empty(self) -> bool:
        return len(self._rows) == 0

    def write_csv(self, stream: IO[str]) -> None:
        """Write header and rows with '\\n' line endings."""
        writer = csv.DictWriter(stream, fieldnames=self.header(), lineterminator="\n")
        writer.writeheader()
        columns = self.columns()
        for row in self._rows:
            writer.writerow(
                {label: format_value(getattr(row, name)) for name, label in columns}
            )

    def save(self, output: FilePath | None) -> None:
        """Write to output, or to stdout when output is None."""
        if output is None:
            self.write_csv(sys.stdout)
            return
        with open(output, "w", encoding="utf-8", newline="") as handle:
            self.write_csv(handle)
