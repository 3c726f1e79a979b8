"""
Exact rows, ladders, pullbacks and pushouts.

Rows
----

An :py:class:`ExactRow` is a composable chain of homs

    G_0 --h_0--> G_1 --h_1--> ... --h_{n-1}--> G_n

whose nodes are numbered from 0. Exactness is only ever claimed (and checked)
at interior nodes 1..n-1: by default at all of them, or at the subset given in
``claimed_exact_at``.

Pullbacks and pushouts
----------------------

Both are realised through a difference map on a direct sum, always
subtracting the second leg:

* pullback(f: B -> D, g: C -> D) = ker(B + C -> D, (b, c) -> f(b) - g(c))
* pushout(f: A -> B, g: A -> C) = coker(A -> B + C, a -> (f(a), -g(a)))

:py:func:`into_pullback` and :py:func:`from_pushout` implement the universal
properties, checking the commuting condition (reporting a witness generator
when it fails) and checking uniqueness rather than assuming it.
"""

from typing import NamedTuple, Sequence

from dataclasses import dataclass, field

from mvkit.groups import FgGroup
from mvkit.homs import (
    Hom,
    Subgroup,
    EndpointMismatchError,
    compose_homs,
    hom_equal,
    direct_sum,
    pair_homs,
    copair_homs,
    kernel,
    image,
    cokernel,
    subgroup_contains,
    lift_through_injection,
    descend,
    is_injective,
    is_surjective,
    hom_classify,
)


@dataclass
class DiagramError(Exception):
    """Base class for errors involving rows, ladders and universal properties."""


@dataclass
class NotComposableError(DiagramError):
    """Thrown when consecutive homs in a row do not compose."""

    index: int
    """The hom whose target does not match the next hom's source."""

    tgt: FgGroup
    src: FgGroup

    def __str__(self) -> str:
        return (
            f"Hom {self.index} ends at {self.tgt} but hom {self.index + 1} "
            f"starts at {self.src}."
        )


@dataclass
class MalformedLadderError(DiagramError):
    """Thrown when the verticals of a ladder do not fit its rows."""

    message: str

    def __str__(self) -> str:
        return self.message


@dataclass
class CommutingConditionError(DiagramError):
    """
    Thrown when the maps handed to a universal property do not satisfy its
    commuting condition.
    """

    operation: str

    generator: int
    """A source generator on which the two composites differ."""

    def __str__(self) -> str:
        return (
            f"Cannot {self.operation}: the commuting condition fails on "
            f"generator {self.generator}."
        )


@dataclass
class NotExactError(DiagramError):
    """Thrown when an input row is not exact where a construction needs it."""

    role: str
    node: int

    def __str__(self) -> str:
        return f"The {self.role} is not exact at node {self.node}."


@dataclass
class ExactnessFailure(DiagramError):
    """
    Thrown when a construction's verified postcondition fails: the output is
    not exact or a diagram which must commute does not.
    """

    construction: str
    detail: str

    def __str__(self) -> str:
        return f"{self.construction}: {self.detail}"


def _first_nonzero_column(h: Hom) -> int | None:
    return next((j for j, c in enumerate(h.mat.columns()) if any(c)), None)


def _first_difference(f: Hom, g: Hom) -> int | None:
    """A generator on which f and g differ, or None if they are equal."""
    return _first_nonzero_column(f - g)


################################################################################
# Rows
################################################################################


@dataclass(frozen=True)
class ExactRow:
    """A chain of composable homs with a set of nodes claimed exact."""

    homs: tuple[Hom, ...]

    claimed_exact_at: frozenset[int] | None = None
    """Interior nodes claimed exact. None means every interior node."""

    def __post_init__(self) -> None:
        if not self.homs:
            raise MalformedLadderError("A row needs at least one hom.")
        object.__setattr__(self, "homs", tuple(self.homs))
        for k, (f, g) in enumerate(zip(self.homs, self.homs[1:])):
            if f.tgt != g.src:
                raise NotComposableError(k, f.tgt, g.src)
        if self.claimed_exact_at is not None:
            claimed = frozenset(self.claimed_exact_at)
            bad = [k for k in claimed if not 0 < k < len(self.homs)]
            if bad:
                raise MalformedLadderError(
                    f"Exactness claimed at non-interior node(s) {sorted(bad)}."
                )
            object.__setattr__(self, "claimed_exact_at", claimed)

    @property
    def groups(self) -> tuple[FgGroup, ...]:
        return (self.homs[0].src,) + tuple(h.tgt for h in self.homs)

    @property
    def nodes(self) -> int:
        return len(self.homs) + 1

    @property
    def exact_nodes(self) -> list[int]:
        if self.claimed_exact_at is None:
            return list(range(1, len(self.homs)))
        return sorted(self.claimed_exact_at)

    def __str__(self) -> str:
        return " -> ".join(str(g) for g in self.groups)


class NodeReport(NamedTuple):
    node: int

    image_in_kernel: bool
    """The complex condition: the composite through this node is zero."""

    kernel_in_image: bool

    witness: int | None
    """A failing generator (of the incoming source or the kernel)."""

    @property
    def exact(self) -> bool:
        return self.image_in_kernel and self.kernel_in_image


class RowReport(NamedTuple):
    nodes: list[NodeReport]

    @property
    def exact(self) -> bool:
        return all(n.exact for n in self.nodes)

    def failures(self) -> list[NodeReport]:
        return [n for n in self.nodes if not n.exact]

    def __str__(self) -> str:
        return "\n".join(
            f"node {n.node}: im<=ker {'ok' if n.image_in_kernel else 'FAIL'}, "
            f"ker<=im {'ok' if n.kernel_in_image else 'FAIL'}"
            + ("" if n.witness is None else f" (witness generator {n.witness})")
            for n in self.nodes
        )


def check_node_exact(f: Hom, g: Hom, node: int = 1) -> NodeReport:
    """Check exactness of ``. --f--> . --g--> .`` at the middle node."""
    witness = _first_nonzero_column(compose_homs(g, f))
    image_in_kernel = witness is None
    kernel_in_image = True
    ker = kernel(g)
    im = image(f)
    for j, c in enumerate(ker.incl.mat.columns()):
        if not subgroup_contains(im, c):
            kernel_in_image = False
            if witness is None:
                witness = j
            break
    return NodeReport(node, image_in_kernel, kernel_in_image, witness)


def check_row_exact(row: ExactRow) -> RowReport:
    """
    Check every claimed node of a row, reporting im <= ker and ker <= im
    separately.
    """
    return RowReport(
        [check_node_exact(row.homs[k - 1], row.homs[k], k) for k in row.exact_nodes]
    )


def require_exact(row: ExactRow, nodes: Sequence[int], role: str) -> None:
    """Throw NotExactError unless row is exact at every listed node."""
    for k in nodes:
        if not check_node_exact(row.homs[k - 1], row.homs[k], k).exact:
            raise NotExactError(role, k)


################################################################################
# Ladders
################################################################################


@dataclass(frozen=True)
class LadderDiagram:
    """Two rows of equal length joined by one vertical hom per node."""

    top: ExactRow
    bottom: ExactRow
    verticals: tuple[Hom, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "verticals", tuple(self.verticals))
        if self.top.nodes != self.bottom.nodes:
            raise MalformedLadderError(
                f"Top row has {self.top.nodes} nodes but bottom row has "
                f"{self.bottom.nodes}."
            )
        if len(self.verticals) != self.top.nodes:
            raise MalformedLadderError(
                f"Ladder with {self.top.nodes} nodes given "
                f"{len(self.verticals)} verticals."
            )
        for k, (v, a, b) in enumerate(
            zip(self.verticals, self.top.groups, self.bottom.groups)
        ):
            if v.src != a or v.tgt != b:
                raise MalformedLadderError(
                    f"Vertical {k} is {v.src} -> {v.tgt} but must be {a} -> {b}."
                )


class SquareReport(NamedTuple):
    square: int
    commutes: bool
    witness: int | None


def check_ladder_squares(ladder: LadderDiagram) -> list[SquareReport]:
    """Check vertical[k+1] o top[k] == bottom[k] o vertical[k] for every k."""
    out = []
    for k, (t, b) in enumerate(zip(ladder.top.homs, ladder.bottom.homs)):
        witness = _first_difference(
            compose_homs(ladder.verticals[k + 1], t),
            compose_homs(b, ladder.verticals[k]),
        )
        out.append(SquareReport(k, witness is None, witness))
    return out


class FiveLemmaReport(NamedTuple):
    violations: list[str]
    """Names of every violated hypothesis (empty when all hold)."""

    middle_isomorphism: bool | None
    """Whether the middle vertical is an isomorphism; None when not claimed."""

    @property
    def hypotheses_hold(self) -> bool:
        return not self.violations


def five_lemma_verify(ladder: LadderDiagram) -> FiveLemmaReport:
    """
    Check the hypotheses of the five lemma on a five-node ladder and, when they
    all hold, confirm that the middle vertical is an isomorphism.
    """
    if ladder.top.nodes != 5:
        raise MalformedLadderError(
            f"The five lemma needs a 5-node ladder, got {ladder.top.nodes} nodes."
        )

    violations = []
    for name, row in (("top", ladder.top), ("bottom", ladder.bottom)):
        for k in (1, 2, 3):
            if not check_node_exact(row.homs[k - 1], row.homs[k], k).exact:
                violations.append(f"{name} row not exact at node {k}")
    for square in check_ladder_squares(ladder):
        if not square.commutes:
            violations.append(f"square {square.square} does not commute")
    for k in (0, 1, 3, 4):
        if not hom_classify(ladder.verticals[k]).isomorphism:
            violations.append(f"vertical {k} is not an isomorphism")

    if violations:
        return FiveLemmaReport(violations, None)

    if not hom_classify(ladder.verticals[2]).isomorphism:
        raise ExactnessFailure(
            "five lemma", "hypotheses hold but the middle vertical is not an isomorphism"
        )
    return FiveLemmaReport([], True)


################################################################################
# Pullbacks and pushouts
################################################################################


@dataclass(frozen=True)
class Cospan:
    """B --f--> D <--g-- C"""

    f: Hom
    g: Hom

    def __post_init__(self) -> None:
        if self.f.tgt != self.g.tgt:
            raise EndpointMismatchError("form cospan", self.f.tgt, self.g.tgt)


@dataclass(frozen=True)
class Span:
    """B <--f-- A --g--> C"""

    f: Hom
    g: Hom

    def __post_init__(self) -> None:
        if self.f.src != self.g.src:
            raise EndpointMismatchError("form span", self.f.src, self.g.src)


@dataclass(frozen=True)
class PullbackData:
    cospan: Cospan
    group: FgGroup

    p1: Hom
    """Projection to the source of cospan.f."""

    p2: Hom
    """Projection to the source of cospan.g."""

    incl: Hom = field(repr=False)
    """The pullback as a subgroup of the direct sum."""


@dataclass(frozen=True)
class PushoutData:
    span: Span
    group: FgGroup

    q1: Hom
    """Leg from the target of span.f."""

    q2: Hom
    """Leg from the target of span.g."""

    proj: Hom = field(repr=False)
    """The projection from the direct sum."""


def pullback(cospan: Cospan) -> PullbackData:
    s = direct_sum(cospan.f.src, cospan.g.src)
    difference = compose_homs(cospan.f, s.pr1) - compose_homs(cospan.g, s.pr2)
    k: Subgroup = kernel(difference)
    return PullbackData(
        cospan=cospan,
        group=k.group,
        p1=compose_homs(s.pr1, k.incl),
        p2=compose_homs(s.pr2, k.incl),
        incl=k.incl,
    )


def pushout(span: Span) -> PushoutData:
    s = direct_sum(span.f.tgt, span.g.tgt)
    difference = compose_homs(s.in1, span.f) - compose_homs(s.in2, span.g)
    q = cokernel(difference)
    return PushoutData(
        span=span,
        group=q.group,
        q1=compose_homs(q.proj, s.in1),
        q2=compose_homs(q.proj, s.in2),
        proj=q.proj,
    )


def into_pullback(data: PullbackData, u: Hom, v: Hom) -> Hom:
    """
    The unique map w: T -> P with p1 o w = u and p2 o w = v, given
    u: T -> B and v: T -> C with f o u = g o v.
    """
    f, g = data.cospan.f, data.cospan.g
    if u.tgt != f.src:
        raise EndpointMismatchError("map into pullback", f.src, u.tgt)
    if v.tgt != g.src:
        raise EndpointMismatchError("map into pullback", g.src, v.tgt)
    witness = _first_difference(compose_homs(f, u), compose_homs(g, v))
    if witness is not None:
        raise CommutingConditionError("map into pullback", witness)

    w = lift_through_injection(data.incl, pair_homs(u, v))

    if not (hom_equal(compose_homs(data.p1, w), u) and hom_equal(compose_homs(data.p2, w), v)):
        raise ExactnessFailure("pullback", "induced map does not reproduce its components")
    if not is_injective(pair_homs(data.p1, data.p2)):
        raise ExactnessFailure("pullback", "projections are not jointly injective")
    return w


def from_pushout(data: PushoutData, u: Hom, v: Hom) -> Hom:
    """
    The unique map w: Q -> T with w o q1 = u and w o q2 = v, given
    u: B -> T and v: C -> T with u o f = v o g.
    """
    f, g = data.span.f, data.span.g
    if u.src != f.tgt:
        raise EndpointMismatchError("map out of pushout", f.tgt, u.src)
    if v.src != g.tgt:
        raise EndpointMismatchError("map out of pushout", g.tgt, v.src)
    witness = _first_difference(compose_homs(u, f), compose_homs(v, g))
    if witness is not None:
        raise CommutingConditionError("map out of pushout", witness)

    w = descend(data.proj, copair_homs(u, v))

    if not (hom_equal(compose_homs(w, data.q1), u) and hom_equal(compose_homs(w, data.q2), v)):
        raise ExactnessFailure("pushout", "induced map does not reproduce its components")
    if not is_surjective(copair_homs(data.q1, data.q2)):
        raise ExactnessFailure("pushout", "legs are not jointly surjective")
    return w
