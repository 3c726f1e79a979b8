"""
Dense matrices of arbitrary-precision integers.

:py:class:`IntMatrix` is the substrate for every group and homomorphism
computation in mvkit. Values are immutable: every operation returns a new
matrix. Entries are plain Python ints so there is no overflow, however large
intermediate values grow during normal-form computations.

Matrices with zero rows and/or zero columns are legal. They behave as zero
maps and as identities for concatenation.

Throughout mvkit the matrix of a homomorphism has one *column* per source
generator.

The plain-text form used on the command line is one row per line with
whitespace separated integers. A blank line terminates the matrix and lines
starting with '#' are comments::

    # A 2x2 example
    2 4
    6 8
"""

from typing import Iterable, Iterator, Sequence

from dataclasses import dataclass


@dataclass
class MatrixError(Exception):
    """Base class for errors involving integer matrices."""


@dataclass
class DimensionMismatchError(MatrixError):
    """Thrown when the shapes of matrices passed to an operation disagree."""

    operation: str
    """The name of the operation attempted."""

    left: tuple[int, int]
    """The (rows, cols) shape of the first operand."""

    right: tuple[int, int]
    """The (rows, cols) shape of the second operand."""

    def __str__(self) -> str:
        return (
            f"Cannot {self.operation} a {self.left[0]}x{self.left[1]} matrix "
            f"and a {self.right[0]}x{self.right[1]} matrix."
        )


@dataclass
class MatrixTextError(MatrixError):
    """Thrown when the plain-text matrix form cannot be parsed."""

    line_number: int
    """The (1-based) line number of the offending line."""

    message: str

    def __str__(self) -> str:
        return f"line {self.line_number}: {self.message}"


@dataclass(frozen=True)
class IntMatrix:
    """
    A rows x cols integer matrix stored as a flat, row-major tuple of entries.
    """

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"negative matrix shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix given {len(self.entries)} entries"
            )

    ############################################################################
    # Construction
    ############################################################################

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        """
        Construct from a list of rows. The column count must be given
        explicitly when there are no rows.
        """
        if cols is None:
            cols = len(rows[0]) if rows else 0
        entries: list[int] = []
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows in matrix literal")
            entries.extend(int(x) for x in row)
        return cls(len(rows), cols, tuple(entries))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        """A (by default square) matrix with the given values on its diagonal."""
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, value in enumerate(values):
            out[i][i] = value
        return cls.from_rows(out, cols)

    @classmethod
    def column_vector(cls, values: Sequence[int]) -> "IntMatrix":
        return cls(len(values), 1, tuple(int(v) for v in values))

    ############################################################################
    # Access
    ############################################################################

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(index)
        return self.entries[i * self.cols + j]

    def rows_list(self) -> list[list[int]]:
        """A fresh, mutable list-of-lists copy of the entries."""
        return [
            list(self.entries[i * self.cols : (i + 1) * self.cols])
            for i in range(self.rows)
        ]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def columns(self) -> Iterator[tuple[int, ...]]:
        for j in range(self.cols):
            yield self.column(j)

    def is_zero(self) -> bool:
        return not any(self.entries)

    ############################################################################
    # Arithmetic
    ############################################################################

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError("multiply", self.shape, other.shape)
        a = self.rows_list()
        b_cols = list(other.columns())
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(
                sum(x * y for x, y in zip(a_row, b_col))
                for a_row in a
                for b_col in b_cols
            ),
        )

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise DimensionMismatchError("add", self.shape, other.shape)
        return IntMatrix(
            self.rows, self.cols, tuple(x + y for x, y in zip(self.entries, other.entries))
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise DimensionMismatchError("subtract", self.shape, other.shape)
        return IntMatrix(
            self.rows, self.cols, tuple(x - y for x, y in zip(self.entries, other.entries))
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-x for x in self.entries))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * x for x in self.entries))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    ############################################################################
    # Slicing and concatenation
    ############################################################################

    def select_rows(self, indices: Iterable[int]) -> "IntMatrix":
        return IntMatrix.from_rows([self.row(i) for i in indices], self.cols)

    def select_columns(self, indices: Iterable[int]) -> "IntMatrix":
        return self.transpose().select_rows(indices).transpose()

    def hstack(self, *others: "IntMatrix") -> "IntMatrix":
        """Concatenate side by side (all operands must have the same row count)."""
        out = self.rows_list()
        cols = self.cols
        for other in others:
            if other.rows != self.rows:
                raise DimensionMismatchError("hstack", self.shape, other.shape)
            for row, extra in zip(out, other.rows_list()):
                row.extend(extra)
            cols += other.cols
        return IntMatrix.from_rows(out, cols)

    def vstack(self, *others: "IntMatrix") -> "IntMatrix":
        """Concatenate top to bottom (all operands must have the same column count)."""
        entries = list(self.entries)
        rows = self.rows
        for other in others:
            if other.cols != self.cols:
                raise DimensionMismatchError("vstack", self.shape, other.shape)
            entries.extend(other.entries)
            rows += other.rows
        return IntMatrix(rows, self.cols, tuple(entries))

    @staticmethod
    def block_diagonal(*blocks: "IntMatrix") -> "IntMatrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = [[0] * cols for _ in range(rows)]
        r0 = c0 = 0
        for block in blocks:
            for i, row in enumerate(block.rows_list()):
                out[r0 + i][c0 : c0 + block.cols] = row
            r0 += block.rows
            c0 += block.cols
        return IntMatrix.from_rows(out, cols)

    def __str__(self) -> str:
        return format_matrix(self)


def format_matrix(m: IntMatrix) -> str:
    """Render in the plain-text matrix form (right-aligned columns)."""
    if m.rows == 0:
        return f"# empty 0x{m.cols} matrix\n"
    width = max((len(str(x)) for x in m.entries), default=1)
    return "".join(
        " ".join(f"{x:>{width}}" for x in m.row(i)) + "\n" for i in range(m.rows)
    )


def parse_matrix_text(text: str) -> IntMatrix:
    """
    Parse the plain-text matrix form: one row per line, integers separated by
    whitespace. A blank line (after at least one row) terminates the matrix
    and lines starting with '#' are ignored.
    """
    rows: list[list[int]] = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("#"):
            continue
        if not stripped:
            if rows:
                break
            continue
        try:
            row = [int(token) for token in stripped.split()]
        except ValueError:
            raise MatrixTextError(line_number, f"not a row of integers: {stripped!r}") from None
        if rows and len(row) != len(rows[0]):
            raise MatrixTextError(
                line_number, f"expected {len(rows[0])} entries, got {len(row)}"
            )
        rows.append(row)
    return IntMatrix.from_rows(rows)
