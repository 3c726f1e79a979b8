import pytest

import hypothesis
import hypothesis.strategies as strat

from mvkit.intmatrix import (
    IntMatrix,
    DimensionMismatchError,
    MatrixTextError,
    format_matrix,
    parse_matrix_text,
)


def matrices(
    rows: strat.SearchStrategy[int] = strat.integers(0, 4),
    cols: strat.SearchStrategy[int] = strat.integers(0, 4),
    max_entry: int = 20,
) -> strat.SearchStrategy[IntMatrix]:
    return strat.tuples(rows, cols).flatmap(
        lambda shape: strat.lists(
            strat.integers(-max_entry, max_entry),
            min_size=shape[0] * shape[1],
            max_size=shape[0] * shape[1],
        ).map(lambda entries: IntMatrix(shape[0], shape[1], tuple(entries)))
    )


class TestConstruction:
    def test_from_rows(self) -> None:
        m = IntMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
        assert m.shape == (2, 3)
        assert m[1, 0] == 4
        assert m.row(0) == (1, 2, 3)
        assert m.column(2) == (3, 6)

    def test_from_rows_empty(self) -> None:
        assert IntMatrix.from_rows([]).shape == (0, 0)
        assert IntMatrix.from_rows([], 3).shape == (0, 3)
        assert IntMatrix.from_rows([[], []]).shape == (2, 0)

    def test_ragged(self) -> None:
        with pytest.raises(ValueError):
            IntMatrix.from_rows([[1, 2], [3]])

    def test_wrong_entry_count(self) -> None:
        with pytest.raises(ValueError):
            IntMatrix(2, 2, (1, 2, 3))

    def test_diagonal(self) -> None:
        assert IntMatrix.diagonal([2, 3]) == IntMatrix.from_rows([[2, 0], [0, 3]])
        assert IntMatrix.diagonal([2], rows=2, cols=3) == IntMatrix.from_rows(
            [[2, 0, 0], [0, 0, 0]]
        )

    def test_identity_and_zeros(self) -> None:
        assert IntMatrix.identity(2) == IntMatrix.from_rows([[1, 0], [0, 1]])
        assert IntMatrix.zeros(2, 3).is_zero()
        assert IntMatrix.identity(0).shape == (0, 0)

    def test_index_out_of_range(self) -> None:
        with pytest.raises(IndexError):
            IntMatrix.identity(2)[2, 0]

    def test_big_entries(self) -> None:
        big = 10**40
        m = IntMatrix.from_rows([[big]])
        assert (m @ m)[0, 0] == big * big


class TestArithmetic:
    def test_matmul(self) -> None:
        a = IntMatrix.from_rows([[1, 2], [3, 4]])
        b = IntMatrix.from_rows([[0, 1], [1, 0]])
        assert a @ b == IntMatrix.from_rows([[2, 1], [4, 3]])

    def test_matmul_empty_inner(self) -> None:
        a = IntMatrix.zeros(2, 0)
        b = IntMatrix.zeros(0, 3)
        assert a @ b == IntMatrix.zeros(2, 3)

    @pytest.mark.parametrize(
        "a, b",
        [
            (IntMatrix.zeros(2, 3), IntMatrix.zeros(2, 3)),
            (IntMatrix.zeros(1, 1), IntMatrix.zeros(2, 1)),
        ],
    )
    def test_matmul_mismatch(self, a: IntMatrix, b: IntMatrix) -> None:
        with pytest.raises(DimensionMismatchError):
            a @ b

    def test_add_sub_neg(self) -> None:
        a = IntMatrix.from_rows([[1, 2]])
        b = IntMatrix.from_rows([[3, -1]])
        assert a + b == IntMatrix.from_rows([[4, 1]])
        assert a - b == IntMatrix.from_rows([[-2, 3]])
        assert -a == IntMatrix.from_rows([[-1, -2]])
        assert a.scale(3) == IntMatrix.from_rows([[3, 6]])
        with pytest.raises(DimensionMismatchError):
            a + IntMatrix.zeros(2, 1)

    @hypothesis.given(matrices())
    def test_transpose_involution(self, m: IntMatrix) -> None:
        assert m.transpose().transpose() == m
        assert m.transpose().shape == (m.cols, m.rows)

    @hypothesis.given(
        strat.integers(0, 3).flatmap(
            lambda n: strat.tuples(
                matrices(cols=strat.just(n)), matrices(rows=strat.just(n))
            )
        )
    )
    def test_transpose_of_product(self, pair: tuple[IntMatrix, IntMatrix]) -> None:
        a, b = pair
        assert (a @ b).transpose() == b.transpose() @ a.transpose()

    @hypothesis.given(matrices())
    def test_identity_is_unit(self, m: IntMatrix) -> None:
        assert IntMatrix.identity(m.rows) @ m == m
        assert m @ IntMatrix.identity(m.cols) == m


class TestSlicingAndConcatenation:
    def test_select(self) -> None:
        m = IntMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
        assert m.select_rows([1]) == IntMatrix.from_rows([[4, 5, 6]])
        assert m.select_columns([0, 2]) == IntMatrix.from_rows([[1, 3], [4, 6]])
        assert m.select_rows([]).shape == (0, 3)

    def test_hstack_vstack(self) -> None:
        a = IntMatrix.from_rows([[1], [2]])
        b = IntMatrix.from_rows([[3], [4]])
        assert a.hstack(b) == IntMatrix.from_rows([[1, 3], [2, 4]])
        assert a.vstack(b) == IntMatrix.from_rows([[1], [2], [3], [4]])
        with pytest.raises(DimensionMismatchError):
            a.hstack(IntMatrix.zeros(3, 1))
        with pytest.raises(DimensionMismatchError):
            a.vstack(IntMatrix.zeros(1, 2))

    def test_empty_concatenation_is_identity(self) -> None:
        a = IntMatrix.from_rows([[1, 2]])
        assert a.hstack(IntMatrix.zeros(1, 0)) == a
        assert a.vstack(IntMatrix.zeros(0, 2)) == a

    def test_block_diagonal(self) -> None:
        assert IntMatrix.block_diagonal(
            IntMatrix.from_rows([[2]]), IntMatrix.zeros(0, 1), IntMatrix.from_rows([[3]])
        ) == IntMatrix.from_rows([[2, 0, 0], [0, 0, 3]])


class TestText:
    def test_parse(self) -> None:
        text = "# comment\n2 4\n  6 -8\n\nignored after blank\n"
        assert parse_matrix_text(text) == IntMatrix.from_rows([[2, 4], [6, -8]])

    @pytest.mark.parametrize(
        "text, line_number",
        [
            ("1 2\n3\n", 2),
            ("1 x\n", 1),
            ("# ok\n1\n1.5\n", 3),
        ],
    )
    def test_parse_errors(self, text: str, line_number: int) -> None:
        with pytest.raises(MatrixTextError) as exc_info:
            parse_matrix_text(text)
        assert exc_info.value.line_number == line_number

    def test_format(self) -> None:
        m = IntMatrix.from_rows([[1, -10], [100, 2]])
        assert format_matrix(m) == "  1 -10\n100   2\n"

    @hypothesis.given(matrices())
    def test_format_parse(self, m: IntMatrix) -> None:
        hypothesis.assume(m.rows > 0 and m.cols > 0)
        assert parse_matrix_text(format_matrix(m)) == m
