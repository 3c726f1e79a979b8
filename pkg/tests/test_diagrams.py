import pytest

import random

import hypothesis
import hypothesis.strategies as strat

from mvkit.intmatrix import IntMatrix
from mvkit.groups import FgGroup, group_from_invariants, trivial_group
from mvkit.homs import (
    Hom,
    EndpointMismatchError,
    make_hom,
    identity_hom,
    zero_hom,
    compose_homs,
    hom_equal,
    is_surjective,
)
from mvkit.diagrams import (
    NotComposableError,
    MalformedLadderError,
    CommutingConditionError,
    NotExactError,
    ExactRow,
    LadderDiagram,
    FiveLemmaReport,
    check_node_exact,
    check_row_exact,
    require_exact,
    check_ladder_squares,
    five_lemma_verify,
    Cospan,
    Span,
    pullback,
    pushout,
    into_pullback,
    from_pushout,
)

from mvkit.random_models import TrialConfig, gen_random_hom, gen_random_quotient

from test_homs import groups, homs


Zero = trivial_group()
Z2 = group_from_invariants([2])
Z4 = group_from_invariants([4])


def mult(src: FgGroup, tgt: FgGroup, k: int) -> Hom:
    return make_hom(src, tgt, IntMatrix.from_rows([[k]]))


double = mult(Z2, Z4, 2)
reduce = mult(Z4, Z2, 1)

Z3 = group_from_invariants([3])


def z3_row(at: list[int]) -> ExactRow:
    """
    Five nodes holding Z/3 at the given positions and 0 elsewhere. Adjacent
    copies of Z/3 are joined by the identity, every other map is zero.
    """
    groups = [Z3 if k in at else Zero for k in range(5)]
    return ExactRow(
        tuple(
            identity_hom(Z3)
            if k in at and k + 1 in at
            else zero_hom(groups[k], groups[k + 1])
            for k in range(4)
        )
    )


@pytest.fixture
def short_exact() -> ExactRow:
    """0 -> Z/2 -> Z/4 -> Z/2 -> 0"""
    return ExactRow(
        (zero_hom(Zero, Z2), double, reduce, zero_hom(Z2, Zero)),
    )


class TestExactRow:
    def test_properties(self) -> None:
        row = ExactRow((double, reduce))
        assert row.groups == (Z2, Z4, Z2)
        assert row.nodes == 3
        assert row.exact_nodes == [1]
        assert str(row) == "Z/2 -> Z/4 -> Z/2"

    def test_claimed(self, short_exact: ExactRow) -> None:
        row = ExactRow(short_exact.homs, frozenset({2}))
        assert row.exact_nodes == [2]

    def test_not_composable(self) -> None:
        with pytest.raises(NotComposableError) as exc_info:
            ExactRow((double, double))
        assert exc_info.value.index == 0

    @pytest.mark.parametrize("claimed", [{0}, {2}, {-1}])
    def test_claimed_non_interior(self, claimed: set[int]) -> None:
        with pytest.raises(MalformedLadderError):
            ExactRow((double, reduce), frozenset(claimed))

    def test_empty(self) -> None:
        with pytest.raises(MalformedLadderError):
            ExactRow(())


class TestCheckExact:
    @pytest.mark.parametrize(
        "f, g, image_in_kernel, kernel_in_image",
        [
            (double, reduce, True, True),
            (mult(Z4, Z4, 2), mult(Z4, Z4, 2), True, True),
            (identity_hom(Z4), mult(Z4, Z4, 2), False, True),
            (zero_hom(Z2, Z4), reduce, True, False),
            (identity_hom(Z4), reduce, False, True),
        ],
    )
    def test_node(
        self, f: Hom, g: Hom, image_in_kernel: bool, kernel_in_image: bool
    ) -> None:
        report = check_node_exact(f, g)
        assert report.image_in_kernel == image_in_kernel
        assert report.kernel_in_image == kernel_in_image
        assert report.exact == (image_in_kernel and kernel_in_image)
        if report.exact:
            assert report.witness is None
        else:
            assert report.witness == 0

    def test_row(self, short_exact: ExactRow) -> None:
        report = check_row_exact(short_exact)
        assert report.exact
        assert [n.node for n in report.nodes] == [1, 2, 3]
        assert report.failures() == []
        assert str(report).splitlines()[0] == "node 1: im<=ker ok, ker<=im ok"

    def test_row_failure(self) -> None:
        row = ExactRow((zero_hom(Z2, Z4), reduce, zero_hom(Z2, Zero)))
        report = check_row_exact(row)
        assert not report.exact
        assert [n.node for n in report.failures()] == [1]
        assert "ker<=im FAIL (witness generator 0)" in str(report)

    def test_require_exact(self, short_exact: ExactRow) -> None:
        require_exact(short_exact, [1, 2, 3], "row")
        row = ExactRow((zero_hom(Z2, Z4), reduce))
        with pytest.raises(NotExactError) as exc_info:
            require_exact(row, [1], "bottom row")
        assert str(exc_info.value) == "The bottom row is not exact at node 1."


class TestLadder:
    def test_identity(self, short_exact: ExactRow) -> None:
        ladder = LadderDiagram(
            short_exact, short_exact, tuple(identity_hom(g) for g in short_exact.groups)
        )
        assert all(s.commutes for s in check_ladder_squares(ladder))

    def test_non_commuting(self) -> None:
        row = ExactRow((double, reduce))
        ladder = LadderDiagram(
            row, row, (identity_hom(Z2), mult(Z4, Z4, 2), identity_hom(Z2))
        )
        squares = check_ladder_squares(ladder)
        assert [s.commutes for s in squares] == [False, False]
        assert [s.witness for s in squares] == [0, 0]

    def test_wrong_vertical_count(self) -> None:
        row = ExactRow((double, reduce))
        with pytest.raises(MalformedLadderError):
            LadderDiagram(row, row, (identity_hom(Z2), identity_hom(Z4)))

    def test_wrong_vertical_endpoints(self) -> None:
        row = ExactRow((double, reduce))
        with pytest.raises(MalformedLadderError):
            LadderDiagram(row, row, (identity_hom(Z2), identity_hom(Z2), identity_hom(Z2)))

    def test_rows_of_different_length(self, short_exact: ExactRow) -> None:
        with pytest.raises(MalformedLadderError):
            LadderDiagram(short_exact, ExactRow((double, reduce)), ())


class TestFiveLemma:
    def test_identity(self, short_exact: ExactRow) -> None:
        ladder = LadderDiagram(
            short_exact, short_exact, tuple(identity_hom(g) for g in short_exact.groups)
        )
        assert five_lemma_verify(ladder) == FiveLemmaReport([], True)

    def test_automorphism_in_the_middle(self, short_exact: ExactRow) -> None:
        verticals = [identity_hom(g) for g in short_exact.groups]
        verticals[2] = mult(Z4, Z4, 3)
        report = five_lemma_verify(LadderDiagram(short_exact, short_exact, tuple(verticals)))
        assert report.hypotheses_hold
        assert report.middle_isomorphism

    def test_violations_named(self, short_exact: ExactRow) -> None:
        verticals = [identity_hom(g) for g in short_exact.groups]
        verticals[1] = zero_hom(Z2, Z2)
        report = five_lemma_verify(LadderDiagram(short_exact, short_exact, tuple(verticals)))
        assert report.violations == [
            "square 1 does not commute",
            "vertical 1 is not an isomorphism",
        ]
        assert report.middle_isomorphism is None
        assert not report.hypotheses_hold

    def test_inexact_row_named(self, short_exact: ExactRow) -> None:
        bad = ExactRow(
            (zero_hom(Zero, Z2), zero_hom(Z2, Z4), reduce, zero_hom(Z2, Zero))
        )
        ladder = LadderDiagram(
            bad, bad, tuple(identity_hom(g) for g in short_exact.groups)
        )
        assert five_lemma_verify(ladder).violations == [
            "top row not exact at node 1",
            "top row not exact at node 2",
            "bottom row not exact at node 1",
            "bottom row not exact at node 2",
        ]

    @pytest.mark.parametrize("node", [1, 2, 3])
    def test_single_inexact_node(self, node: int) -> None:
        row = z3_row([node])
        ladder = LadderDiagram(row, row, tuple(identity_hom(g) for g in row.groups))
        report = five_lemma_verify(ladder)
        assert report.violations == [
            f"top row not exact at node {node}",
            f"bottom row not exact at node {node}",
        ]
        assert report.middle_isomorphism is None

    @pytest.mark.parametrize("square", [0, 1, 2, 3])
    def test_single_noncommuting_square(self, square: int) -> None:
        row = z3_row([square, square + 1])
        assert check_row_exact(row).exact
        verticals = [identity_hom(g) for g in row.groups]
        verticals[square + 1] = mult(Z3, Z3, 2)
        report = five_lemma_verify(LadderDiagram(row, row, tuple(verticals)))
        assert report.violations == [f"square {square} does not commute"]
        assert report.middle_isomorphism is None

    def test_wrong_length(self) -> None:
        row = ExactRow((double, reduce))
        ladder = LadderDiagram(row, row, tuple(identity_hom(g) for g in row.groups))
        with pytest.raises(MalformedLadderError):
            five_lemma_verify(ladder)


class TestPullback:
    @pytest.mark.parametrize(
        "f, g, exp",
        [
            # Pairs congruent mod 2
            (reduce, reduce, (2, 4)),
            # The diagonal
            (double, double, (2,)),
            # Everything
            (zero_hom(Z2, Z4), zero_hom(Z4, Z4), (2, 4)),
            # Only the second factor's kernel of x2
            (zero_hom(Z2, Z4), mult(Z4, Z4, 2), (2, 2)),
        ],
    )
    def test_examples(self, f: Hom, g: Hom, exp: tuple[int, ...]) -> None:
        assert pullback(Cospan(f, g)).group.invariants == exp

    def test_mismatched_cospan(self) -> None:
        with pytest.raises(EndpointMismatchError):
            Cospan(double, reduce)

    def test_into(self) -> None:
        data = pullback(Cospan(reduce, reduce))
        u = identity_hom(Z4)
        w = into_pullback(data, u, u)
        assert w.src == Z4
        assert hom_equal(compose_homs(data.p1, w), u)
        assert hom_equal(compose_homs(data.p2, w), u)

    def test_into_not_commuting(self) -> None:
        data = pullback(Cospan(reduce, reduce))
        with pytest.raises(CommutingConditionError) as exc_info:
            into_pullback(data, identity_hom(Z4), zero_hom(Z4, Z4))
        assert exc_info.value.generator == 0

    def test_into_wrong_endpoints(self) -> None:
        data = pullback(Cospan(reduce, reduce))
        with pytest.raises(EndpointMismatchError):
            into_pullback(data, identity_hom(Z2), identity_hom(Z4))

    @hypothesis.given(homs(), strat.data())
    def test_universal(self, f: Hom, data: strat.DataObject) -> None:
        g = data.draw(homs(tgt=strat.just(f.tgt)))
        pb = pullback(Cospan(f, g))
        assert hom_equal(compose_homs(f, pb.p1), compose_homs(g, pb.p2))
        assert hom_equal(into_pullback(pb, pb.p1, pb.p2), identity_hom(pb.group))

    def test_surjection_example(self) -> None:
        # Pairs (a, b) in Z/2 + Z/4 with b = a mod 2
        pb = pullback(Cospan(identity_hom(Z2), reduce))
        assert pb.group.invariants == (4,)
        assert is_surjective(pb.p1)
        kills = pullback(Cospan(identity_hom(Z2), zero_hom(Z4, Z2)))
        assert not is_surjective(kills.p1)

    @hypothesis.given(groups(), groups(), strat.randoms(use_true_random=False))
    def test_surjection_stable(
        self, a: FgGroup, x: FgGroup, rng: random.Random
    ) -> None:
        q = gen_random_quotient(x, TrialConfig(max_order=12), rng)
        e = gen_random_hom(a, q.tgt, rng)
        assert is_surjective(q)
        assert is_surjective(pullback(Cospan(e, q)).p1)


class TestPushout:
    @pytest.mark.parametrize(
        "f, g, exp",
        [
            (double, double, (2, 4)),
            (identity_hom(Z2), identity_hom(Z2), (2,)),
            (zero_hom(Z2, Zero), zero_hom(Z2, Zero), ()),
            (zero_hom(Z2, Z4), zero_hom(Z2, Z2), (2, 4)),
        ],
    )
    def test_examples(self, f: Hom, g: Hom, exp: tuple[int, ...]) -> None:
        assert pushout(Span(f, g)).group.invariants == exp

    def test_mismatched_span(self) -> None:
        with pytest.raises(EndpointMismatchError):
            Span(double, reduce)

    def test_from(self) -> None:
        data = pushout(Span(double, double))
        u = identity_hom(Z4)
        w = from_pushout(data, u, u)
        assert w.tgt == Z4
        assert hom_equal(compose_homs(w, data.q1), u)
        assert hom_equal(compose_homs(w, data.q2), u)

    def test_from_not_commuting(self) -> None:
        data = pushout(Span(double, double))
        with pytest.raises(CommutingConditionError):
            from_pushout(data, identity_hom(Z4), zero_hom(Z4, Z4))

    @hypothesis.given(homs(), strat.data())
    def test_universal(self, f: Hom, data: strat.DataObject) -> None:
        g = data.draw(homs(src=strat.just(f.src)))
        po = pushout(Span(f, g))
        assert hom_equal(compose_homs(po.q1, f), compose_homs(po.q2, g))
        assert hom_equal(from_pushout(po, po.q1, po.q2), identity_hom(po.group))
