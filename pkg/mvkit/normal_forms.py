"""
Exact integer linear algebra: Hermite and Smith normal forms with their
unimodular transforms, integer linear solving and integer kernel bases.

All routines work on :py:class:`~mvkit.intmatrix.IntMatrix` values using
Python's arbitrary-precision integers and return fresh matrices.

Conventions:

* :py:func:`hnf` uses row operations: ``U @ M == H`` with ``H`` in row echelon
  form, every pivot positive and the entries above each pivot reduced into
  ``[0, pivot)``.
* :py:func:`snf` returns ``(D, U, V)`` with ``U @ M @ V == D``, ``D`` diagonal,
  non-negative and satisfying ``d_1 | d_2 | ... | d_r`` followed by zeros.
"""

from typing import NamedTuple

from dataclasses import dataclass

from mvkit.intmatrix import IntMatrix, MatrixError, DimensionMismatchError


@dataclass
class NotUnimodularError(MatrixError):
    """Thrown when a matrix expected to be unimodular is not."""

    matrix: IntMatrix

    def __str__(self) -> str:
        return f"Matrix is not unimodular:\n{self.matrix}"


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """
    Extended Euclid: returns (g, x, y) with g = gcd(a, b) >= 0 and
    x*a + y*b = g.
    """
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        return (-old_r, -old_x, -old_y)
    return (old_r, old_x, old_y)


################################################################################
# In-place row/column operations on list-of-lists matrices
################################################################################


def _swap_rows(m: list[list[int]], i: int, j: int) -> None:
    m[i], m[j] = m[j], m[i]


def _swap_cols(m: list[list[int]], i: int, j: int) -> None:
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_row_multiple(m: list[list[int]], dst: int, src: int, k: int) -> None:
    """row[dst] += k * row[src]"""
    if k:
        src_row = m[src]
        m[dst] = [a + k * b for a, b in zip(m[dst], src_row)]


def _add_col_multiple(m: list[list[int]], dst: int, src: int, k: int) -> None:
    """col[dst] += k * col[src]"""
    if k:
        for row in m:
            row[dst] += k * row[src]


def _combine_rows(
    m: list[list[int]], i: int, j: int, a: int, b: int, c: int, d: int
) -> None:
    """(row_i, row_j) <- (a*row_i + b*row_j, c*row_i + d*row_j)"""
    ri, rj = m[i], m[j]
    m[i] = [a * x + b * y for x, y in zip(ri, rj)]
    m[j] = [c * x + d * y for x, y in zip(ri, rj)]


def _negate_row(m: list[list[int]], i: int) -> None:
    m[i] = [-x for x in m[i]]


def _identity_lists(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


################################################################################
# Hermite normal form
################################################################################


class HermiteForm(NamedTuple):
    H: IntMatrix
    U: IntMatrix


def hnf(m: IntMatrix) -> HermiteForm:
    """
    Compute the (row-operation) Hermite normal form of m. Returns (H, U) with
    U square and unimodular and U @ m == H.
    """
    a = m.rows_list()
    u = _identity_lists(m.rows)

    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break

        # Fold every entry below row r in this column into row r
        for i in range(r + 1, m.rows):
            if a[i][c] == 0:
                continue
            x, y = a[r][c], a[i][c]
            g, s, t = xgcd(x, y)
            # [[s, t], [-y/g, x/g]] has determinant (s*x + t*y)/g = 1
            _combine_rows(a, r, i, s, t, -y // g, x // g)
            _combine_rows(u, r, i, s, t, -y // g, x // g)

        pivot = a[r][c]
        if pivot == 0:
            continue
        if pivot < 0:
            _negate_row(a, r)
            _negate_row(u, r)
            pivot = -pivot

        # Reduce entries above the pivot into [0, pivot)
        for i in range(r):
            q = a[i][c] // pivot
            _add_row_multiple(a, i, r, -q)
            _add_row_multiple(u, i, r, -q)

        r += 1

    return HermiteForm(IntMatrix.from_rows(a, m.cols), IntMatrix.from_rows(u, m.rows))


def hnf_rank(h: IntMatrix) -> int:
    """The number of non-zero rows of a matrix in row echelon form."""
    return sum(1 for i in range(h.rows) if any(h.row(i)))


################################################################################
# Smith normal form
################################################################################


class SmithForm(NamedTuple):
    D: IntMatrix
    U: IntMatrix
    V: IntMatrix

    def diagonal(self) -> list[int]:
        """The diagonal entries d_1, ..., d_min(rows, cols)."""
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    def rank(self) -> int:
        return sum(1 for d in self.diagonal() if d != 0)


def _smallest_nonzero(a: list[list[int]], t: int) -> tuple[int, int] | None:
    """Position of the smallest non-zero |entry| in the submatrix a[t:, t:]."""
    best: tuple[int, int] | None = None
    best_abs = 0
    for i in range(t, len(a)):
        row = a[i]
        for j in range(t, len(row)):
            v = abs(row[j])
            if v and (best is None or v < best_abs):
                best, best_abs = (i, j), v
                if v == 1:
                    return best
    return best


def snf(m: IntMatrix) -> SmithForm:
    """
    Compute the Smith normal form of m. Returns (D, U, V) with U and V
    unimodular and U @ m @ V == D.
    """
    rows, cols = m.rows, m.cols
    a = m.rows_list()
    u = _identity_lists(rows)
    # V is accumulated as its transpose so column operations become row
    # operations on a list of rows.
    vt = _identity_lists(cols)

    for t in range(min(rows, cols)):
        while True:
            position = _smallest_nonzero(a, t)
            if position is None:
                # Remaining submatrix is zero
                return SmithForm(
                    IntMatrix.from_rows(a, cols),
                    IntMatrix.from_rows(u, rows),
                    IntMatrix.from_rows(vt, cols).transpose(),
                )
            i, j = position
            _swap_rows(a, t, i)
            _swap_rows(u, t, i)
            _swap_cols(a, t, j)
            _swap_rows(vt, t, j)

            pivot = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                q = a[i][t] // pivot
                _add_row_multiple(a, i, t, -q)
                _add_row_multiple(u, i, t, -q)
                if a[i][t]:
                    clean = False
            for j in range(t + 1, cols):
                q = a[t][j] // pivot
                _add_col_multiple(a, j, t, -q)
                _add_row_multiple(vt, j, t, -q)
                if a[t][j]:
                    clean = False
            if not clean:
                continue

            # Enforce divisibility of the remaining block by the pivot
            offender = next(
                (
                    i
                    for i in range(t + 1, rows)
                    if any(a[i][j] % pivot for j in range(t + 1, cols))
                ),
                None,
            )
            if offender is not None:
                _add_row_multiple(a, t, offender, 1)
                _add_row_multiple(u, t, offender, 1)
                continue

            break

        if a[t][t] < 0:
            _negate_row(a, t)
            _negate_row(u, t)

    return SmithForm(
        IntMatrix.from_rows(a, cols),
        IntMatrix.from_rows(u, rows),
        IntMatrix.from_rows(vt, cols).transpose(),
    )


def rank(m: IntMatrix) -> int:
    """The rank of m (over the rationals, equivalently over the integers)."""
    return hnf_rank(hnf(m).H)


def unimodular_inverse(u: IntMatrix) -> IntMatrix:
    """
    Invert a unimodular matrix exactly. Throws NotUnimodularError when u is
    not square or has determinant other than +/-1.
    """
    if u.rows != u.cols:
        raise NotUnimodularError(u)
    h, w = hnf(u)
    if h != IntMatrix.identity(u.rows):
        raise NotUnimodularError(u)
    return w


################################################################################
# Solving and kernels
################################################################################


def solve_linear(a: IntMatrix, b: IntMatrix) -> IntMatrix | None:
    """
    Find an integer column vector x with a @ x == b, or return None when no
    integer solution exists.
    """
    if b.cols != 1 or a.rows != b.rows:
        raise DimensionMismatchError("solve", a.shape, b.shape)

    d, u, v = snf(a)
    ub = (u @ b).column(0)
    y = [0] * a.cols
    for k, value in enumerate(ub):
        dk = d[k, k] if k < min(a.rows, a.cols) else 0
        if dk == 0:
            if value != 0:
                return None
        else:
            if value % dk:
                return None
            y[k] = value // dk
    return v @ IntMatrix.column_vector(y)


def lattice_basis(generators: IntMatrix) -> IntMatrix:
    """
    A canonical basis (as columns) of the lattice spanned by the columns of
    generators: the non-zero rows of the Hermite form of the transpose.
    """
    h = hnf(generators.transpose()).H
    return h.select_rows(range(hnf_rank(h))).transpose() if h.rows else IntMatrix.zeros(
        generators.rows, 0
    )


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """
    A lattice basis (as columns) of {x : a @ x == 0}. The result has a.cols
    rows and cols - rank(a) independent columns, in Hermite-reduced form.
    """
    h, u = hnf(a.transpose())
    r = hnf_rank(h)
    # Rows of u beyond the rank annihilate a: x^T a^T = 0
    kernel_rows = u.select_rows(range(r, a.cols))
    if kernel_rows.rows == 0:
        return IntMatrix.zeros(a.cols, 0)
    return lattice_basis(kernel_rows.transpose())
