from __future__ import annotations

import csv
import io
import os
import tempfile
from contextlib import contextmanager
from typing import IO, Iterable, Iterator, List, Optional, Sequence, Tuple


class CurveTable:
    """A rectangular table of curves sharing the first column as x.

    Attributes:
        name: Table name, used for output file names.
        headers: Column headers; the first names the x column.
        rows: Numeric rows, each as wide as headers.
    """

    def __init__(self, name: str, headers: Sequence[str], rows: Iterable[Sequence[float]] = ()) -> None:
        self.name = name
        self.headers: List[str] = list(headers)
        self.rows: List[List[float]] = []
        if len(self.headers) == 0:
            raise ValueError("Table has no columns")

        for row in rows:
            self.add_row(row)

    def add_row(self, row: Sequence[float]) -> CurveTable:
        if len(row) != len(self.headers):
            raise ValueError(
                f"Row has {len(row)} values but table {self.name} has {len(self.headers)} columns"
            )

        self.rows.append([float(value) for value in row])
        return self

    def column(self, header: str) -> List[float]:
        index = self.headers.index(header)
        return [row[index] for row in self.rows]

    def export(self, comments: Sequence[str] = ()) -> str:
        """CSV text: comment lines prefixed with '#', a header row, then the rows with
        17 significant digits."""
        buffer = io.StringIO()
        write_csv(self, buffer, comments)
        return buffer.getvalue()


@contextmanager
def atomic_output(path: str, mode: str = "w", **kwargs):
    """Opens a temporary file next to path and moves it into place only on success."""
    directory = os.path.dirname(os.path.abspath(path))
    handle, temporary = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.splitext(path)[1])
    os.close(handle)
    try:
        with open(temporary, mode, **kwargs) as out:
            yield out
        os.replace(temporary, path)
    except BaseException:
        if os.path.exists(temporary):
            os.remove(temporary)
        raise


def write_csv(table: CurveTable, out: IO[str], comments: Sequence[str] = ()) -> None:
    for comment in comments:
        out.write(f"# {comment}\n")

    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(table.headers)
    writer.writerows([f"{value:.17g}" for value in row] for row in table.rows)


def emit_csv(table: CurveTable, path: str, comments: Sequence[str] = ()) -> str:
    try:
        with atomic_output(path, "w", encoding="utf-8", newline="") as out:
            write_csv(table, out, comments)
    except OSError as e:
        raise OSError(f"Cannot write {path}: {e.strerror or e}") from e

    return path


def read_csv(path: str, name: Optional[str] = None) -> Tuple[CurveTable, List[str]]:
    """Reads a table written by emit_csv. Returns the table and its comment lines."""
    comments: List[str] = []

    def body(lines: Iterable[str]) -> Iterator[str]:
        for line in lines:
            if line.startswith("#"):
                comments.append(line[1:].strip())
            elif line.strip():
                yield line

    with open(path, "r", encoding="utf-8", newline="") as f:
        records = list(csv.reader(body(f)))

    if len(records) == 0:
        raise ValueError(f"No header row in {path}")

    table = CurveTable(
        name or os.path.splitext(os.path.basename(path))[0],
        records[0],
        ([float(value) for value in record] for record in records[1:]),
    )
    return table, comments
