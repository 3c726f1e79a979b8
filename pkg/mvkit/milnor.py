"""
Mayer-Vietoris constructions on the K-group ladder of a Milnor square.

A Milnor square of rings A -> B, A/I -> B/I induces a commutative ladder of
long exact sequences of K-groups. mvkit consumes one degree window of that
ladder as a :py:class:`KLadder`: two six-node rows

    K_{i+1}(R,I) -> K_{i+1}(R) -> K_{i+1}(R/I) -> K_i(R,I) -> K_i(R) -> K_i(R/I)

for R = A (``a_row``) and R = B (``b_row``) plus the six vertical maps
between them. Nodes are numbered 0..5 in that order, so ``verticals[0]`` is
eps_{i+1}: K_{i+1}(A,I) -> K_{i+1}(B,I) and ``verticals[3]`` is
eps_i: K_i(A,I) -> K_i(B,I). ker(eps_i) is the i-th *excision kernel*.

From a validated ladder this module builds:

* quo-K_i(A) = K_i(A) / alpha_i(ker eps_i), computed both as a pushout and as
  a cokernel (:py:func:`quo_k`),
* sub-K_{i+1}(B/I) = {x : beta_i(x) in im eps_i}, computed both as a pullback
  and as a preimage (:py:func:`sub_k`),
* the map between them (:py:func:`connecting_bar`) and the modified
  Mayer-Vietoris segment through them (:py:func:`weibel_segment`),
* the pullback X_i of that map along K_i(A) -> quo-K_i(A), the map
  phi_i: X_i -> K_{i+1}(B/I) (:py:func:`build_x_and_phi`) and the segment
  through X_i (:py:func:`mv2_segment`),
* checks for birelative data (:py:func:`check_birelative`) and for the
  degeneration to the classical sequence when excision holds
  (:py:func:`compare_with_classical`).

Every function validates the ladder first and rejects invalid ladders with
:py:exc:`InvalidLadderError`. Postconditions which must hold for every valid
ladder are checked and raise :py:exc:`~mvkit.diagrams.ExactnessFailure` when
they do not.
"""

from typing import NamedTuple, Sequence

from dataclasses import dataclass

from mvkit.groups import FgGroup
from mvkit.homs import (
    Hom,
    Subgroup,
    Cokernel,
    compose_homs,
    hom_equal,
    identity_hom,
    zero_hom,
    copair_homs,
    pair_homs,
    kernel,
    image,
    cokernel,
    preimage,
    quotient,
    direct_sum,
    descend,
    hom_inverse,
    lift_through_injection,
    subgroup_equal,
    is_injective,
    is_surjective,
    hom_classify,
)
from mvkit.diagrams import (
    ExactRow,
    LadderDiagram,
    RowReport,
    SquareReport,
    Cospan,
    Span,
    PullbackData,
    PushoutData,
    MalformedLadderError,
    ExactnessFailure,
    pullback,
    pushout,
    into_pullback,
    from_pushout,
    check_row_exact,
    check_ladder_squares,
    check_node_exact,
)


@dataclass
class LadderError(Exception):
    """Base class for errors raised by the Milnor-square constructions."""


@dataclass
class InvalidLadderError(LadderError):
    """Thrown when a ladder fails validation."""

    report: "LadderReport"

    def __str__(self) -> str:
        return "Invalid ladder:\n" + "\n".join(
            f"  {v}" for v in self.report.violations()
        )


@dataclass
class LevelError(LadderError):
    """Thrown when asking for a degree outside a ladder's window."""

    degree: int
    level: int

    def __str__(self) -> str:
        return (
            f"Level {self.level} is outside the window of a degree "
            f"{self.degree} ladder (expected {self.degree} or {self.degree + 1})."
        )


@dataclass
class NotExcisiveError(LadderError):
    """Thrown when the classical sequence is requested but excision fails."""

    vertical: int

    def __str__(self) -> str:
        return f"Vertical {self.vertical} (an excision map) is not an isomorphism."


@dataclass
class BirelativeEndpointError(LadderError):
    """Thrown when birelative data does not fit the ladder's groups."""

    field: str
    expected: FgGroup
    actual: FgGroup

    def __str__(self) -> str:
        return (
            f"Birelative data {self.field} should involve {self.expected} "
            f"but involves {self.actual}."
        )


################################################################################
# Ladders
################################################################################


@dataclass(frozen=True)
class KLadder:
    """One degree window of the K-group ladder of a Milnor square."""

    degree: int
    a_row: ExactRow
    b_row: ExactRow
    verticals: tuple[Hom, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "verticals", tuple(self.verticals))
        for name, row in (("a_row", self.a_row), ("b_row", self.b_row)):
            if row.nodes != 6:
                raise MalformedLadderError(
                    f"{name} must have 6 nodes, not {row.nodes}."
                )
        # Constructing the diagram checks the vertical endpoints
        _ = self.diagram

    @property
    def diagram(self) -> LadderDiagram:
        return LadderDiagram(self.a_row, self.b_row, self.verticals)

    @property
    def eps_hi(self) -> Hom:
        """eps_{i+1}: K_{i+1}(A,I) -> K_{i+1}(B,I)"""
        return self.verticals[0]

    @property
    def eps(self) -> Hom:
        """eps_i: K_i(A,I) -> K_i(B,I)"""
        return self.verticals[3]

    @property
    def boundary_a(self) -> Hom:
        """K_{i+1}(A/I) -> K_i(A,I)"""
        return self.a_row.homs[2]

    @property
    def alpha(self) -> Hom:
        """alpha_i: K_i(A,I) -> K_i(A)"""
        return self.a_row.homs[3]

    @property
    def beta(self) -> Hom:
        """beta_i: K_{i+1}(B/I) -> K_i(B,I)"""
        return self.b_row.homs[2]


class LadderReport(NamedTuple):
    a_row: RowReport
    b_row: RowReport
    squares: list[SquareReport]

    @property
    def valid(self) -> bool:
        return (
            self.a_row.exact
            and self.b_row.exact
            and all(s.commutes for s in self.squares)
        )

    def violations(self) -> list[str]:
        out = []
        for name, report in (("a_row", self.a_row), ("b_row", self.b_row)):
            for node in report.failures():
                out.append(
                    f"{name} not exact at node {node.node} "
                    f"(witness generator {node.witness})"
                )
        for square in self.squares:
            if not square.commutes:
                out.append(
                    f"square {square.square} does not commute "
                    f"(witness generator {square.witness})"
                )
        return out


def validate_ladder(k: KLadder) -> LadderReport:
    """Check both rows for exactness at nodes 1-4 and every square."""
    return LadderReport(
        check_row_exact(k.a_row),
        check_row_exact(k.b_row),
        check_ladder_squares(k.diagram),
    )


def require_valid(k: KLadder) -> None:
    report = validate_ladder(k)
    if not report.valid:
        raise InvalidLadderError(report)


def excision_kernel(k: KLadder, level: int) -> Subgroup:
    """
    ker(eps) at the given level (k.degree for eps_i, k.degree + 1 for
    eps_{i+1}) as a subgroup of the relative group at that level.
    """
    require_valid(k)
    if level == k.degree:
        return kernel(k.eps)
    elif level == k.degree + 1:
        return kernel(k.eps_hi)
    else:
        raise LevelError(k.degree, level)


################################################################################
# quo-K and sub-K
################################################################################


class RelativeQuotient(NamedTuple):
    """K_i(A,I) / ker(eps_i) and the maps in and out of it."""

    excision_kernel: Subgroup

    pi1: Hom
    """K_i(A,I) -> K_i(A,I)/ker(eps_i)"""

    i2: Hom
    """The injection K_i(A,I)/ker(eps_i) -> K_i(B,I) induced by eps_i."""

    @property
    def group(self) -> FgGroup:
        return self.pi1.tgt


class QuoK(NamedTuple):
    group: FgGroup

    pi: Hom
    """K_i(A) -> quo-K_i(A)"""

    q: Hom
    """K_i(A,I)/ker(eps_i) -> quo-K_i(A)"""

    pushout: PushoutData

    quotient: Cokernel
    """quo-K_i(A) computed directly as K_i(A)/alpha_i(ker eps_i)."""

    comparison: Hom
    """The isomorphism from the pushout to the direct quotient."""


class SubK(NamedTuple):
    subgroup: Subgroup
    """sub-K_{i+1}(B/I) as a subgroup of K_{i+1}(B/I)."""

    p: Hom
    """sub-K_{i+1}(B/I) -> K_i(A,I)/ker(eps_i)"""

    pullback: PullbackData

    preimage: Subgroup
    """sub-K_{i+1}(B/I) computed directly as beta_i^-1(im eps_i)."""

    @property
    def group(self) -> FgGroup:
        return self.subgroup.group

    @property
    def i1(self) -> Hom:
        return self.subgroup.incl


def _relative_quotient(k: KLadder) -> RelativeQuotient:
    ker = kernel(k.eps)
    pi1 = quotient(ker).proj
    i2 = descend(pi1, k.eps)
    if not is_injective(i2):
        raise ExactnessFailure("relative quotient", "induced map i2 is not injective")
    return RelativeQuotient(ker, pi1, i2)


def _quo_k(k: KLadder, rq: RelativeQuotient) -> QuoK:
    p = pushout(Span(k.alpha, rq.pi1))
    direct = cokernel(compose_homs(k.alpha, rq.excision_kernel.incl))
    to_direct = descend(rq.pi1, compose_homs(direct.proj, k.alpha))
    comparison = from_pushout(p, direct.proj, to_direct)
    if not hom_classify(comparison).isomorphism:
        raise ExactnessFailure(
            "quo-K", "pushout and quotient constructions are not isomorphic"
        )
    return QuoK(p.group, p.q1, p.q2, p, direct, comparison)


def _sub_k(k: KLadder, rq: RelativeQuotient) -> SubK:
    p = pullback(Cospan(k.beta, rq.i2))
    if not is_injective(p.p1):
        raise ExactnessFailure("sub-K", "pullback projection is not injective")
    sub = Subgroup(k.beta.src, p.p1)
    direct = preimage(k.beta, image(k.eps))
    if not subgroup_equal(sub, direct):
        raise ExactnessFailure(
            "sub-K", "pullback and preimage constructions differ"
        )
    return SubK(sub, p.p2, p, direct)


def _connecting_bar(k: KLadder, rq: RelativeQuotient, quo: QuoK, sub: SubK) -> Hom:
    bar = compose_homs(quo.q, sub.p)
    if not hom_equal(compose_homs(quo.q, rq.pi1), compose_homs(quo.pi, k.alpha)):
        raise ExactnessFailure("connecting map", "quo-K square does not commute")
    if not hom_equal(compose_homs(rq.i2, sub.p), compose_homs(k.beta, sub.i1)):
        raise ExactnessFailure("connecting map", "sub-K square does not commute")
    return bar


def relative_quotient(k: KLadder) -> RelativeQuotient:
    require_valid(k)
    return _relative_quotient(k)


def quo_k(k: KLadder) -> QuoK:
    """quo-K_i(A) with its two legs, checked against the direct quotient."""
    require_valid(k)
    return _quo_k(k, _relative_quotient(k))


def sub_k(k: KLadder) -> SubK:
    """sub-K_{i+1}(B/I) with its two legs, checked against the preimage."""
    require_valid(k)
    return _sub_k(k, _relative_quotient(k))


def connecting_bar(k: KLadder) -> Hom:
    """The map sub-K_{i+1}(B/I) -> quo-K_i(A)."""
    require_valid(k)
    rq = _relative_quotient(k)
    return _connecting_bar(k, rq, _quo_k(k, rq), _sub_k(k, rq))


################################################################################
# Sequences
################################################################################


@dataclass(frozen=True)
class MVSegment:
    """A four-term window of a Mayer-Vietoris style sequence."""

    name: str
    maps: tuple[Hom, Hom, Hom]
    report: RowReport

    @property
    def terms(self) -> tuple[FgGroup, ...]:
        return self.row.groups

    @property
    def row(self) -> ExactRow:
        return ExactRow(self.maps)

    @property
    def exact(self) -> bool:
        return self.report.exact

    def __str__(self) -> str:
        return f"{self.name}: " + " -> ".join(str(t) for t in self.terms)


def _segment(name: str, maps: tuple[Hom, Hom, Hom]) -> MVSegment:
    return MVSegment(name, maps, check_row_exact(ExactRow(maps)))


class WeibelMaps(NamedTuple):
    h1: Hom
    """K_{i+1}(A/I) -> sub-K_{i+1}(B/I)"""

    g: Hom
    """K_{i+1}(B) -> sub-K_{i+1}(B/I)"""

    h2: Hom
    """quo-K_i(A) -> K_i(B)"""

    h2_prime: Hom
    """quo-K_i(A) -> K_i(A/I)"""


def _weibel(
    k: KLadder, rq: RelativeQuotient, quo: QuoK, sub: SubK, bar: Hom
) -> tuple[MVSegment, WeibelMaps]:
    h1 = into_pullback(
        sub.pullback, k.verticals[2], compose_homs(rq.pi1, k.boundary_a)
    )
    g = into_pullback(
        sub.pullback, k.b_row.homs[1], zero_hom(k.b_row.groups[1], rq.group)
    )
    h2 = from_pushout(quo.pushout, k.verticals[4], compose_homs(k.b_row.homs[3], rq.i2))
    h2_prime = from_pushout(
        quo.pushout, k.a_row.homs[4], zero_hom(rq.group, k.a_row.groups[5])
    )
    segment = _segment(
        "weibel", (copair_homs(h1, -g), bar, pair_homs(h2_prime, h2))
    )
    return segment, WeibelMaps(h1, g, h2, h2_prime)


def weibel_segment(k: KLadder) -> MVSegment:
    """
    K_{i+1}(A/I) + K_{i+1}(B) -> sub-K_{i+1}(B/I) -> quo-K_i(A)
    -> K_i(A/I) + K_i(B), with its exactness report.
    """
    require_valid(k)
    rq = _relative_quotient(k)
    quo = _quo_k(k, rq)
    sub = _sub_k(k, rq)
    return _weibel(k, rq, quo, sub, _connecting_bar(k, rq, quo, sub))[0]


class XPhiChecks(NamedTuple):
    kernel_is_alpha_image: bool
    """ker(phi), carried into K_i(A), equals alpha_i(ker eps_i)."""

    kernel_embeds: bool
    """proj_A is injective on ker(phi)."""

    image_is_sub_k: bool
    proj_sub_surjective: bool

    @property
    def passed(self) -> bool:
        return all(self)


class XPhi(NamedTuple):
    group: FgGroup
    proj_sub: Hom
    proj_a: Hom
    phi: Hom
    pullback: PullbackData
    checks: XPhiChecks


def _x_and_phi(k: KLadder, rq: RelativeQuotient, quo: QuoK, sub: SubK, bar: Hom) -> XPhi:
    p = pullback(Cospan(bar, quo.pi))
    phi = compose_homs(sub.i1, p.p1)

    ker_phi = kernel(phi)
    carried = compose_homs(p.p2, ker_phi.incl)
    alpha_image = image(compose_homs(k.alpha, rq.excision_kernel.incl))
    checks = XPhiChecks(
        kernel_is_alpha_image=subgroup_equal(image(carried), alpha_image),
        kernel_embeds=is_injective(carried),
        image_is_sub_k=subgroup_equal(image(phi), sub.subgroup),
        proj_sub_surjective=is_surjective(p.p1),
    )
    return XPhi(p.group, p.p1, p.p2, phi, p, checks)


def build_x_and_phi(k: KLadder) -> XPhi:
    """
    X_i as the pullback of sub-K -> quo-K along K_i(A) -> quo-K, and
    phi_i: X_i -> K_{i+1}(B/I), with its kernel and image checks.
    """
    require_valid(k)
    rq = _relative_quotient(k)
    quo = _quo_k(k, rq)
    sub = _sub_k(k, rq)
    return _x_and_phi(k, rq, quo, sub, _connecting_bar(k, rq, quo, sub))


def _mv2(k: KLadder, weibel: MVSegment, x: XPhi) -> MVSegment:
    sum_b = k.b_row.groups[1]
    m1 = weibel.maps[0]
    m2 = copair_homs(
        compose_homs(k.alpha, k.boundary_a), zero_hom(sum_b, k.a_row.groups[4])
    )
    first = into_pullback(x.pullback, m1, m2)
    third = pair_homs(k.a_row.homs[4], k.verticals[4])
    return _segment("mv2", (first, x.proj_a, third))


def mv2_segment(k: KLadder) -> MVSegment:
    """
    K_{i+1}(A/I) + K_{i+1}(B) -> X_i -> K_i(A) -> K_i(A/I) + K_i(B), with its
    exactness report.
    """
    return analyse_ladder(k).mv2


################################################################################
# Birelative data
################################################################################


@dataclass(frozen=True)
class BirelativeData:
    """Group-level data for the birelative group K_i(A,B,I)."""

    group: FgGroup

    to_relative: Hom
    """K_i(A,B,I) -> K_i(A,I)"""

    from_cokernel: Hom
    """coker(eps_{i+1}) -> K_i(A,B,I)"""

    psi: Hom | None = None
    """K_i(A,B,I) -> X_i"""

    delta: Hom | None = None
    """K_{i+1}(B/I) -> K_{i-1}(A,B,I)"""


class BirelativeReport(NamedTuple):
    cokernel_injects: bool
    lands_in_excision_kernel: bool
    onto_excision_kernel: bool
    exact_in_middle: bool

    psi_image_is_phi_kernel: bool | None
    """None when no psi was supplied."""

    delta_kernel_is_sub_k: bool | None
    """None when no delta was supplied."""

    @property
    def passed(self) -> bool:
        return all(check is not False for check in self)


def _check_endpoint(name: str, expected: FgGroup, actual: FgGroup) -> None:
    if expected != actual:
        raise BirelativeEndpointError(name, expected, actual)


def check_birelative(k: KLadder, data: BirelativeData) -> BirelativeReport:
    """
    Check the group-level consequences of the birelative sequence:
    coker(eps_{i+1}) >-> data.group ->> ker(eps_i) is short exact, and (when
    supplied) im(psi) = ker(phi_i) and ker(delta) = sub-K_{i+1}(B/I).
    """
    analysis = analyse_ladder(k)
    coker_hi = cokernel(k.eps_hi)
    ker = analysis.relative_quotient.excision_kernel

    _check_endpoint("from_cokernel source", coker_hi.group, data.from_cokernel.src)
    _check_endpoint("from_cokernel target", data.group, data.from_cokernel.tgt)
    _check_endpoint("to_relative source", data.group, data.to_relative.src)
    _check_endpoint("to_relative target", k.eps.src, data.to_relative.tgt)
    if data.psi is not None:
        _check_endpoint("psi source", data.group, data.psi.src)
        _check_endpoint("psi target", analysis.x.group, data.psi.tgt)
    if data.delta is not None:
        _check_endpoint("delta source", k.beta.src, data.delta.src)

    lands = compose_homs(k.eps, data.to_relative).is_zero()
    onto = exact = False
    if lands:
        to_kernel = lift_through_injection(ker.incl, data.to_relative)
        onto = is_surjective(to_kernel)
        exact = check_node_exact(data.from_cokernel, to_kernel).exact

    psi_ok = None
    if data.psi is not None:
        psi_ok = subgroup_equal(image(data.psi), kernel(analysis.x.phi))
    delta_ok = None
    if data.delta is not None:
        delta_ok = subgroup_equal(kernel(data.delta), analysis.sub_k.subgroup)

    return BirelativeReport(
        cokernel_injects=is_injective(data.from_cokernel),
        lands_in_excision_kernel=lands,
        onto_excision_kernel=onto,
        exact_in_middle=exact,
        psi_image_is_phi_kernel=psi_ok,
        delta_kernel_is_sub_k=delta_ok,
    )


def split_birelative_data(k: KLadder) -> BirelativeData:
    """
    The split choice K_i(A,B,I) = coker(eps_{i+1}) + ker(eps_i), with psi
    induced through alpha_i and delta the projection of K_{i+1}(B/I) onto
    K_{i+1}(B/I)/sub-K_{i+1}(B/I).
    """
    analysis = analyse_ladder(k)
    ker = analysis.relative_quotient.excision_kernel
    s = direct_sum(cokernel(k.eps_hi).group, ker.group)
    psi = into_pullback(
        analysis.x.pullback,
        zero_hom(s.group, analysis.sub_k.group),
        compose_homs(k.alpha, ker.incl, s.pr2),
    )
    return BirelativeData(
        group=s.group,
        to_relative=compose_homs(ker.incl, s.pr2),
        from_cokernel=s.in1,
        psi=psi,
        delta=quotient(analysis.sub_k.subgroup).proj,
    )


################################################################################
# Excision and the classical sequence
################################################################################


def classical_window(k: KLadder) -> MVSegment:
    """
    The classical Mayer-Vietoris window
    K_{i+1}(A/I) + K_{i+1}(B) -> K_{i+1}(B/I) -> K_i(A) -> K_i(A/I) + K_i(B)
    whose connecting map is alpha_i o eps_i^-1 o beta_i. Requires eps_i to be
    an isomorphism.
    """
    require_valid(k)
    if not hom_classify(k.eps).isomorphism:
        raise NotExcisiveError(3)
    first = copair_homs(k.verticals[2], -k.b_row.homs[1])
    connecting = compose_homs(k.alpha, hom_inverse(k.eps), k.beta)
    third = pair_homs(k.a_row.homs[4], k.verticals[4])
    return _segment("classical", (first, connecting, third))


class ClassicalComparison(NamedTuple):
    window: MVSegment
    phi_isomorphism: bool

    squares_commute: bool
    """mv2 maps to the classical window by (id, phi, id, id)."""

    @property
    def passed(self) -> bool:
        return self.window.exact and self.phi_isomorphism and self.squares_commute


def compare_with_classical(k: KLadder) -> ClassicalComparison:
    """
    When eps_{i+1} and eps_i are both isomorphisms, check that phi_i is an
    isomorphism carrying the mv2 segment onto the classical window.
    """
    for index in (0, 3):
        if not hom_classify(k.verticals[index]).isomorphism:
            raise NotExcisiveError(index)
    analysis = analyse_ladder(k)
    window = classical_window(k)
    phi = analysis.x.phi
    ladder = LadderDiagram(
        analysis.mv2.row,
        window.row,
        (
            identity_hom(analysis.mv2.terms[0]),
            phi,
            identity_hom(analysis.mv2.terms[2]),
            identity_hom(analysis.mv2.terms[3]),
        ),
    )
    return ClassicalComparison(
        window,
        hom_classify(phi).isomorphism,
        all(s.commutes for s in check_ladder_squares(ladder)),
    )


################################################################################
# Relabeling
################################################################################


def relabel_ladder(
    k: KLadder, a_isos: Sequence[Hom], b_isos: Sequence[Hom]
) -> KLadder:
    """
    Transport a ladder along isomorphisms of each of its nodes (a_isos for
    a_row nodes, b_isos for b_row nodes), conjugating every map.
    """
    if len(a_isos) != 6 or len(b_isos) != 6:
        raise MalformedLadderError("Relabeling needs six isomorphisms per row.")
    a_inv = [hom_inverse(t) for t in a_isos]
    b_inv = [hom_inverse(t) for t in b_isos]

    def conjugate(row: ExactRow, isos: Sequence[Hom], inv: list[Hom]) -> ExactRow:
        return ExactRow(
            tuple(
                compose_homs(isos[j + 1], h, inv[j]) for j, h in enumerate(row.homs)
            )
        )

    return KLadder(
        k.degree,
        conjugate(k.a_row, a_isos, a_inv),
        conjugate(k.b_row, b_isos, b_inv),
        tuple(compose_homs(b_isos[j], v, a_inv[j]) for j, v in enumerate(k.verticals)),
    )


class RelabelWitnesses(NamedTuple):
    quo_k: Hom
    sub_k: Hom
    x: Hom

    @property
    def all_isomorphisms(self) -> bool:
        return all(hom_classify(h).isomorphism for h in self)


def relabel_witnesses(
    k: KLadder, a_isos: Sequence[Hom], b_isos: Sequence[Hom]
) -> RelabelWitnesses:
    """
    Relabel k and induce the maps between the quo-K, sub-K and X groups of
    the original and relabeled ladders.
    """
    before = analyse_ladder(k)
    after = analyse_ladder(relabel_ladder(k, a_isos, b_isos))

    quo = descend(before.quo_k.pi, compose_homs(after.quo_k.pi, a_isos[4]))
    sub = lift_through_injection(
        after.sub_k.i1, compose_homs(b_isos[2], before.sub_k.i1)
    )
    x = into_pullback(
        after.x.pullback,
        compose_homs(sub, before.x.proj_sub),
        compose_homs(a_isos[4], before.x.proj_a),
    )
    return RelabelWitnesses(quo, sub, x)


################################################################################
# Everything at once
################################################################################


class MilnorAnalysis(NamedTuple):
    ladder: KLadder
    excision_kernel_hi: Subgroup
    relative_quotient: RelativeQuotient
    quo_k: QuoK
    sub_k: SubK
    connecting_bar: Hom
    weibel: MVSegment
    weibel_maps: WeibelMaps
    x: XPhi
    mv2: MVSegment


def analyse_ladder(k: KLadder) -> MilnorAnalysis:
    """Validate k and run every construction once."""
    require_valid(k)
    rq = _relative_quotient(k)
    quo = _quo_k(k, rq)
    sub = _sub_k(k, rq)
    bar = _connecting_bar(k, rq, quo, sub)
    weibel, maps = _weibel(k, rq, quo, sub, bar)
    x = _x_and_phi(k, rq, quo, sub, bar)
    return MilnorAnalysis(
        ladder=k,
        excision_kernel_hi=kernel(k.eps_hi),
        relative_quotient=rq,
        quo_k=quo,
        sub_k=sub,
        connecting_bar=bar,
        weibel=weibel,
        weibel_maps=maps,
        x=x,
        mv2=_mv2(k, weibel, x),
    )
