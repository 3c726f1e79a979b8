"""
Moving exactness across pullbacks and pushouts.

All four constructions here take a four-term row

    A --f--> B --g--> C --h--> D

exact at B and C, together with a map into or out of one of its middle nodes,
and build a new four-term row exact at its middle nodes:

* :py:func:`stabilize_by_pullback` replaces C by a subgroup C1 (via an
  injection i2) and B by the pullback of g along i2.
* :py:func:`stabilize_by_pushout` replaces B by a quotient B2 (via a
  surjection pi1) and C by the pushout of g along pi1.
* :py:func:`lift_by_pushout` is the reverse direction of the first: from a
  row through B1 and an injection i1: B1 -> B it builds a row through B and
  the pushout of g1 along i1.
* :py:func:`lift_by_pullback` is the reverse direction of the second: from a
  row through C2 and a surjection pi2: C -> C2 it builds a row through C and
  the pullback of g2 along pi2.

Every construction returns the new row together with a :py:class:`Transfer`
ladder relating it to the input row (identities on the outer nodes). Both the
output exactness and the commutativity of that ladder are verified before
returning; a failure raises :py:exc:`~mvkit.diagrams.ExactnessFailure`.

The two ``*_round_trip`` functions check what happens when a stabilisation is
followed by the matching lifting. The result is compared with the original
row through a canonical comparison map which is always injective (pullback
then pushout) or surjective (pushout then pullback), and an isomorphism
exactly under the conditions documented on each function.
"""

from typing import NamedTuple

from mvkit.homs import (
    Hom,
    EndpointMismatchError,
    NotInjectiveError,
    NotSurjectiveError,
    compose_homs,
    identity_hom,
    zero_hom,
    image,
    kernel,
    full_subgroup,
    subgroup_equal,
    subgroup_sum,
    subgroup_intersection,
    is_injective,
    is_surjective,
    hom_classify,
    HomFlags,
)
from mvkit.diagrams import (
    ExactRow,
    LadderDiagram,
    Cospan,
    Span,
    ExactnessFailure,
    MalformedLadderError,
    pullback,
    pushout,
    into_pullback,
    from_pushout,
    check_row_exact,
    check_ladder_squares,
    require_exact,
)


class Transfer(NamedTuple):
    row: ExactRow
    """The constructed row."""

    ladder: LadderDiagram
    """The comparison ladder between the constructed row and the input row."""


def _require_four_terms(row: ExactRow) -> None:
    if len(row.homs) != 3:
        raise MalformedLadderError(
            f"Expected a four-term row A -> B -> C -> D, got {row.nodes} nodes."
        )


def _verify(name: str, row: ExactRow, ladder: LadderDiagram) -> Transfer:
    report = check_row_exact(row)
    if not report.exact:
        failure = report.failures()[0]
        raise ExactnessFailure(name, f"output row not exact at node {failure.node}")
    for square in check_ladder_squares(ladder):
        if not square.commutes:
            raise ExactnessFailure(name, f"square {square.square} does not commute")
    return Transfer(row, ladder)


def stabilize_by_pullback(row: ExactRow, i2: Hom) -> Transfer:
    """
    Given A -> B -> C -> D exact at B and C and an injection i2: C1 -> C,
    build A --f1--> B1 --g1--> C1 --h1--> D where B1 is the pullback of g and
    i2, f1 = (f, 0), g1 is the projection to C1 and h1 = h o i2.

    The ladder maps the new row (top) to the input row (bottom) by
    (id, i1, i2, id) where i1: B1 -> B is the other pullback projection.
    """
    _require_four_terms(row)
    f, g, h = row.homs
    if i2.tgt != g.tgt:
        raise EndpointMismatchError("stabilise by pullback", g.tgt, i2.tgt)
    require_exact(row, (1, 2), "input row")
    if not is_injective(i2):
        raise NotInjectiveError(i2, "subgroup map i2")

    p = pullback(Cospan(g, i2))
    f1 = into_pullback(p, f, zero_hom(f.src, i2.src))
    h1 = compose_homs(h, i2)
    new_row = ExactRow((f1, p.p2, h1))
    ladder = LadderDiagram(
        new_row, row, (identity_hom(f.src), p.p1, i2, identity_hom(h.tgt))
    )
    return _verify("stabilise by pullback", new_row, ladder)


def stabilize_by_pushout(row: ExactRow, pi1: Hom) -> Transfer:
    """
    Given A -> B -> C -> D exact at B and C and a surjection pi1: B -> B2,
    build A --f2--> B2 --g2--> C2 --h2--> D where C2 is the pushout of g and
    pi1, f2 = pi1 o f, g2 is the pushout leg from B2 and h2 is induced by
    (h, 0).

    The ladder maps the input row (top) to the new row (bottom) by
    (id, pi1, pi2, id) where pi2: C -> C2 is the other pushout leg.
    """
    _require_four_terms(row)
    f, g, h = row.homs
    if pi1.src != g.src:
        raise EndpointMismatchError("stabilise by pushout", g.src, pi1.src)
    require_exact(row, (1, 2), "input row")
    if not is_surjective(pi1):
        raise NotSurjectiveError(pi1, "quotient map pi1")

    q = pushout(Span(g, pi1))
    f2 = compose_homs(pi1, f)
    h2 = from_pushout(q, h, zero_hom(pi1.tgt, h.tgt))
    new_row = ExactRow((f2, q.q2, h2))
    ladder = LadderDiagram(
        row, new_row, (identity_hom(f.src), pi1, q.q1, identity_hom(h.tgt))
    )
    return _verify("stabilise by pushout", new_row, ladder)


def lift_by_pushout(row: ExactRow, i1: Hom) -> Transfer:
    """
    Given A --f1--> B1 --g1--> C1 --h1--> D exact at B1 and C1 and an
    injection i1: B1 -> B, build A --f--> B --g--> C --h--> D where C is the
    pushout of g1 and i1, f = i1 o f1, g is the pushout leg from B and h is
    induced by (h1, 0).

    The ladder maps the input row (top) to the new row (bottom) by
    (id, i1, i2, id) where i2: C1 -> C is the other pushout leg.
    """
    _require_four_terms(row)
    f1, g1, h1 = row.homs
    if i1.src != g1.src:
        raise EndpointMismatchError("lift by pushout", g1.src, i1.src)
    require_exact(row, (1, 2), "input row")
    if not is_injective(i1):
        raise NotInjectiveError(i1, "subgroup map i1")

    q = pushout(Span(g1, i1))
    f = compose_homs(i1, f1)
    h = from_pushout(q, h1, zero_hom(i1.tgt, h1.tgt))
    new_row = ExactRow((f, q.q2, h))
    ladder = LadderDiagram(
        row, new_row, (identity_hom(f1.src), i1, q.q1, identity_hom(h1.tgt))
    )
    return _verify("lift by pushout", new_row, ladder)


def lift_by_pullback(row: ExactRow, pi2: Hom, c: Hom | None = None) -> Transfer:
    """
    Given A --f2--> B2 --g2--> C2 --h2--> D exact at B2 and C2 and a surjection
    pi2: C -> C2, build A --f--> B --g--> C --h--> D where B is the pullback of
    g2 and pi2, f = (f2, c), g is the projection to C and h = h2 o pi2.

    A map into the pullback needs a second component c: A -> C with
    pi2 o c = g2 o f2. It defaults to zero. Since g o f = c, the output can
    only be exact at B when c is zero; any other c produces an
    ExactnessFailure.

    The ladder maps the new row (top) to the input row (bottom) by
    (id, pi1, pi2, id) where pi1: B -> B2 is the other pullback projection.
    """
    _require_four_terms(row)
    f2, g2, h2 = row.homs
    if pi2.tgt != g2.tgt:
        raise EndpointMismatchError("lift by pullback", g2.tgt, pi2.tgt)
    require_exact(row, (1, 2), "input row")
    if not is_surjective(pi2):
        raise NotSurjectiveError(pi2, "quotient map pi2")
    if c is None:
        c = zero_hom(f2.src, pi2.src)

    p = pullback(Cospan(g2, pi2))
    f = into_pullback(p, f2, c)
    h = compose_homs(h2, pi2)
    new_row = ExactRow((f, p.p2, h))
    ladder = LadderDiagram(
        new_row, row, (identity_hom(f2.src), p.p1, pi2, identity_hom(h2.tgt))
    )
    return _verify("lift by pullback", new_row, ladder)


################################################################################
# Round trips
################################################################################


class RoundTripReport(NamedTuple):
    comparison: Hom
    """The induced map between the rebuilt node and the original one."""

    flags: HomFlags

    squares_commute: bool

    expected_isomorphism: bool
    """Whether the comparison should be an isomorphism for this input."""

    @property
    def consistent(self) -> bool:
        return self.squares_commute and self.flags.isomorphism == self.expected_isomorphism


def pullback_pushout_round_trip(row: ExactRow, i2: Hom) -> RoundTripReport:
    """
    Stabilise by pullback along i2: C1 -> C then lift by pushout along the
    resulting B1 -> B, giving a row through some C'. The comparison
    C' -> C induced by (i2, g) is injective and is an isomorphism exactly when
    im(g) + C1 is all of C.
    """
    g = row.homs[1]
    stabilised = stabilize_by_pullback(row, i2)
    i1 = stabilised.ladder.verticals[1]
    lifted = lift_by_pushout(stabilised.row, i1)

    # The pushout built inside lift_by_pushout, rebuilt to induce the map
    q = pushout(Span(stabilised.row.homs[1], i1))
    comparison = from_pushout(q, i2, g)
    ladder = LadderDiagram(
        lifted.row,
        row,
        (
            identity_hom(row.groups[0]),
            identity_hom(row.groups[1]),
            comparison,
            identity_hom(row.groups[3]),
        ),
    )
    flags = hom_classify(comparison)
    if not flags.injective:
        raise ExactnessFailure("pullback/pushout round trip", "comparison not injective")
    expected = subgroup_equal(
        subgroup_sum(image(g), image(i2)), full_subgroup(g.tgt)
    )
    return RoundTripReport(
        comparison,
        flags,
        all(s.commutes for s in check_ladder_squares(ladder)),
        expected,
    )


def pushout_pullback_round_trip(row: ExactRow, pi1: Hom) -> RoundTripReport:
    """
    Stabilise by pushout along pi1: B -> B2 then lift by pullback along the
    resulting C -> C2, giving a row through some B'. The comparison B -> B'
    induced by (pi1, g) is surjective and is an isomorphism exactly when
    ker(pi1) and ker(g) intersect trivially.
    """
    g = row.homs[1]
    stabilised = stabilize_by_pushout(row, pi1)
    pi2 = stabilised.ladder.verticals[2]
    lifted = lift_by_pullback(stabilised.row, pi2)

    p = pullback(Cospan(stabilised.row.homs[1], pi2))
    comparison = into_pullback(p, pi1, g)
    ladder = LadderDiagram(
        row,
        lifted.row,
        (
            identity_hom(row.groups[0]),
            comparison,
            identity_hom(row.groups[2]),
            identity_hom(row.groups[3]),
        ),
    )
    flags = hom_classify(comparison)
    if not flags.surjective:
        raise ExactnessFailure("pushout/pullback round trip", "comparison not surjective")
    expected = subgroup_intersection(kernel(pi1), kernel(g)).group.is_trivial()
    return RoundTripReport(
        comparison,
        flags,
        all(s.commutes for s in check_ladder_squares(ladder)),
        expected,
    )
