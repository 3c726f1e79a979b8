"""
Homomorphisms between finitely generated abelian groups and the
kernel/image/cokernel/direct-sum/preimage calculus built on them.

A :py:class:`Hom` stores an integer matrix in canonical coordinates: one column
per canonical generator of the source giving that generator's image in the
target's canonical coordinates. Matrices are reduced modulo the target's
invariant factors on construction so two homs are equal exactly when their
matrices are.

Subgroups are represented by an injective inclusion hom
(:py:class:`Subgroup`). Subgroup equality is tested by mutual membership of
generators, never by comparing inclusion matrices.

The factorisation helpers at the end of this module
(:py:func:`lift_through_injection`, :py:func:`descend`) are the workhorses
behind every universal property used in :py:mod:`mvkit.diagrams`.
"""

from typing import NamedTuple, Sequence, Iterable

from dataclasses import dataclass

from mvkit.intmatrix import IntMatrix
from mvkit.normal_forms import solve_linear, kernel_basis
from mvkit.groups import (
    FgGroup,
    GroupElement,
    GroupError,
    make_group,
    trivial_group,
)


@dataclass
class HomShapeError(GroupError):
    """Thrown when a hom matrix has the wrong shape for its endpoints."""

    src: FgGroup
    tgt: FgGroup
    shape: tuple[int, int]
    expected: tuple[int, int]

    def __str__(self) -> str:
        return (
            f"A hom {self.src} -> {self.tgt} needs a "
            f"{self.expected[0]}x{self.expected[1]} matrix, "
            f"got {self.shape[0]}x{self.shape[1]}."
        )


@dataclass
class IllDefinedHomError(GroupError):
    """
    Thrown when a matrix does not define a homomorphism: the image of a
    torsion generator does not have (a divisor of) that generator's order.
    """

    src: FgGroup
    tgt: FgGroup

    generator: int
    """The (0-based) canonical source generator whose relation is violated."""

    image: tuple[int, ...]

    def __str__(self) -> str:
        d = self.src.invariants[self.generator]
        return (
            f"Map {self.src} -> {self.tgt} is not well defined: generator "
            f"{self.generator} has order {d} but {d} * {list(self.image)} "
            f"is non-zero in {self.tgt}."
        )


@dataclass
class EndpointMismatchError(GroupError):
    """Thrown when homs or subgroups are combined whose endpoints disagree."""

    operation: str
    expected: FgGroup
    actual: FgGroup

    def __str__(self) -> str:
        return (
            f"Cannot {self.operation}: expected {self.expected} "
            f"but got {self.actual}."
        )


@dataclass
class NotInjectiveError(GroupError):
    """Thrown when a hom required to be injective is not."""

    hom: "Hom"
    role: str

    def __str__(self) -> str:
        return f"The {self.role} {self.hom.src} -> {self.hom.tgt} is not injective."


@dataclass
class NotSurjectiveError(GroupError):
    """Thrown when a hom required to be surjective is not."""

    hom: "Hom"
    role: str

    def __str__(self) -> str:
        return f"The {self.role} {self.hom.src} -> {self.hom.tgt} is not surjective."


@dataclass
class NotInImageError(GroupError):
    """Thrown when a map cannot be lifted through an injection."""

    generator: int
    """The source generator whose image lies outside the injection's image."""

    def __str__(self) -> str:
        return f"The image of generator {self.generator} is not in the subgroup."


@dataclass
class DoesNotFactorError(GroupError):
    """Thrown when a map does not vanish on the kernel of a surjection."""

    generator: int
    """The kernel generator which is not sent to zero."""

    def __str__(self) -> str:
        return (
            f"The map does not factor through the quotient: kernel "
            f"generator {self.generator} has a non-zero image."
        )


def _reduce_columns(tgt: FgGroup, mat: IntMatrix) -> IntMatrix:
    rows = mat.rows_list()
    for row, d in zip(rows, tgt.invariants):
        if d:
            row[:] = [x % d for x in row]
    return IntMatrix.from_rows(rows, mat.cols)


def _from_columns(columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
    return IntMatrix.from_rows(columns, rows).transpose()


@dataclass(frozen=True)
class Hom:
    """
    A homomorphism src -> tgt. Build validated homs with
    :py:func:`make_hom`; the constructor only checks the shape.
    """

    src: FgGroup
    tgt: FgGroup
    mat: IntMatrix

    def __post_init__(self) -> None:
        expected = (self.tgt.nfactors, self.src.nfactors)
        if self.mat.shape != expected:
            raise HomShapeError(self.src, self.tgt, self.mat.shape, expected)
        object.__setattr__(self, "mat", _reduce_columns(self.tgt, self.mat))

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.parent != self.src:
            raise EndpointMismatchError("apply hom", self.src, x.parent)
        return self.tgt.element((self.mat @ IntMatrix.column_vector(x.coords)).column(0))

    def is_zero(self) -> bool:
        return self.mat.is_zero()

    def _same_endpoints(self, other: "Hom", operation: str) -> None:
        if self.src != other.src:
            raise EndpointMismatchError(operation, self.src, other.src)
        if self.tgt != other.tgt:
            raise EndpointMismatchError(operation, self.tgt, other.tgt)

    def __add__(self, other: "Hom") -> "Hom":
        self._same_endpoints(other, "add homs")
        return Hom(self.src, self.tgt, self.mat + other.mat)

    def __sub__(self, other: "Hom") -> "Hom":
        self._same_endpoints(other, "subtract homs")
        return Hom(self.src, self.tgt, self.mat - other.mat)

    def __neg__(self) -> "Hom":
        return Hom(self.src, self.tgt, -self.mat)

    def __str__(self) -> str:
        cols = [list(c) for c in self.mat.columns()]
        return f"{self.src} -> {self.tgt} {cols}"


def make_hom(src: FgGroup, tgt: FgGroup, mat: IntMatrix) -> Hom:
    """
    Construct a hom from a matrix in canonical coordinates, checking it is
    well defined.
    """
    hom = Hom(src, tgt, mat)
    for j, d in enumerate(src.invariants):
        if d and not tgt.in_relations([d * x for x in hom.mat.column(j)]):
            raise IllDefinedHomError(src, tgt, j, hom.mat.column(j))
    return hom


def hom_from_presentation(src: FgGroup, tgt: FgGroup, mat: IntMatrix) -> Hom:
    """
    Construct a hom from a matrix written in the presentation coordinates of
    src and tgt (one column per presentation generator of src).
    """
    expected = (tgt.ngens, src.ngens)
    if mat.shape != expected:
        raise HomShapeError(src, tgt, mat.shape, expected)
    return make_hom(src, tgt, tgt.to_canonical @ mat @ src.from_canonical)


def identity_hom(g: FgGroup) -> Hom:
    return Hom(g, g, IntMatrix.identity(g.nfactors))


def zero_hom(src: FgGroup, tgt: FgGroup) -> Hom:
    return Hom(src, tgt, IntMatrix.zeros(tgt.nfactors, src.nfactors))


def compose_homs(*homs: Hom) -> Hom:
    """
    Compose homs written right-to-left: ``compose_homs(g, f)`` is g after f.
    """
    if not homs:
        raise ValueError("compose_homs needs at least one hom")
    out = homs[-1]
    for g in reversed(homs[:-1]):
        if out.tgt != g.src:
            raise EndpointMismatchError("compose homs", g.src, out.tgt)
        out = Hom(out.src, g.tgt, g.mat @ out.mat)
    return out


def hom_equal(f: Hom, g: Hom) -> bool:
    """
    True iff f and g agree on every canonical generator (each column of f - g
    lies in the target's relation lattice).
    """
    f._same_endpoints(g, "compare homs")
    return all(f.tgt.in_relations(c) for c in (f.mat - g.mat).columns())


################################################################################
# Direct sums
################################################################################


class DirectSum(NamedTuple):
    group: FgGroup
    in1: Hom
    in2: Hom
    pr1: Hom
    pr2: Hom


def direct_sum(g: FgGroup, h: FgGroup) -> DirectSum:
    """
    The direct sum g + h with its injections and projections. The sum is
    recanonicalised so e.g. Z/2 + Z/3 has invariants (6,).
    """
    m, n = g.nfactors, h.nfactors
    s = make_group(IntMatrix.block_diagonal(g.canonical_relations, h.canonical_relations))
    return DirectSum(
        group=s,
        in1=Hom(g, s, s.to_canonical.select_columns(range(m))),
        in2=Hom(h, s, s.to_canonical.select_columns(range(m, m + n))),
        pr1=Hom(s, g, s.from_canonical.select_rows(range(m))),
        pr2=Hom(s, h, s.from_canonical.select_rows(range(m, m + n))),
    )


def pair_homs(f: Hom, g: Hom) -> Hom:
    """The map x -> (f(x), g(x)) into f.tgt + g.tgt."""
    if f.src != g.src:
        raise EndpointMismatchError("pair homs", f.src, g.src)
    s = direct_sum(f.tgt, g.tgt)
    return compose_homs(s.in1, f) + compose_homs(s.in2, g)


def copair_homs(f: Hom, g: Hom) -> Hom:
    """The map (x, y) -> f(x) + g(y) out of f.src + g.src."""
    if f.tgt != g.tgt:
        raise EndpointMismatchError("copair homs", f.tgt, g.tgt)
    s = direct_sum(f.src, g.src)
    return compose_homs(f, s.pr1) + compose_homs(g, s.pr2)


################################################################################
# Subgroups, kernels, images and cokernels
################################################################################


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of ``ambient`` given by an injective inclusion."""

    ambient: FgGroup
    incl: Hom

    def __post_init__(self) -> None:
        if self.incl.tgt != self.ambient:
            raise EndpointMismatchError("form subgroup", self.ambient, self.incl.tgt)

    @property
    def group(self) -> FgGroup:
        return self.incl.src

    def __str__(self) -> str:
        gens = [list(c) for c in self.incl.mat.columns()]
        return f"{self.group} <= {self.ambient} generated by {gens}"


class Cokernel(NamedTuple):
    group: FgGroup
    proj: Hom


def subgroup_generated_by(g: FgGroup, gens: IntMatrix) -> Subgroup:
    """
    The subgroup of g generated by the columns of gens (canonical
    coordinates).
    """
    if gens.rows != g.nfactors:
        raise HomShapeError(g, g, gens.shape, (g.nfactors, gens.cols))
    s = gens.cols
    # y gives the relation sum(y_j gens_j) = 0 iff (y, z) solves [gens | D]
    relations = kernel_basis(gens.hstack(g.canonical_relations)).select_rows(range(s))
    sub = make_group(relations)
    return Subgroup(g, Hom(sub, g, gens @ sub.from_canonical))


def full_subgroup(g: FgGroup) -> Subgroup:
    return Subgroup(g, identity_hom(g))


def zero_subgroup(g: FgGroup) -> Subgroup:
    return Subgroup(g, zero_hom(trivial_group(), g))


def kernel(h: Hom) -> Subgroup:
    """The kernel of h as a subgroup of h.src."""
    m = h.src.nfactors
    solutions = kernel_basis(h.mat.hstack(h.tgt.canonical_relations))
    return subgroup_generated_by(h.src, solutions.select_rows(range(m)))


def image(h: Hom) -> Subgroup:
    """The image of h as a subgroup of h.tgt."""
    return subgroup_generated_by(h.tgt, h.mat)


def cokernel(h: Hom) -> Cokernel:
    """h.tgt / im(h) with its (surjective) projection."""
    q = make_group(h.mat.hstack(h.tgt.canonical_relations))
    return Cokernel(q, Hom(h.tgt, q, q.to_canonical))


def preimage(h: Hom, s: Subgroup) -> Subgroup:
    """The subgroup {x : h(x) in s} of h.src."""
    if s.ambient != h.tgt:
        raise EndpointMismatchError("take preimage", h.tgt, s.ambient)
    m = h.src.nfactors
    solutions = kernel_basis(
        h.mat.hstack(s.incl.mat, h.tgt.canonical_relations)
    )
    return subgroup_generated_by(h.src, solutions.select_rows(range(m)))


def is_injective(h: Hom) -> bool:
    return kernel(h).group.is_trivial()


def is_surjective(h: Hom) -> bool:
    return cokernel(h).group.is_trivial()


class HomFlags(NamedTuple):
    injective: bool
    surjective: bool
    isomorphism: bool


def hom_classify(h: Hom) -> HomFlags:
    injective = is_injective(h)
    surjective = is_surjective(h)
    return HomFlags(injective, surjective, injective and surjective)


def quotient(s: Subgroup) -> Cokernel:
    """
    ambient / s. Throws NotInjectiveError if the subgroup's inclusion is not
    actually injective.
    """
    if not is_injective(s.incl):
        raise NotInjectiveError(s.incl, "subgroup inclusion")
    return cokernel(s.incl)


def subgroup_contains(s: Subgroup, x: GroupElement | Sequence[int]) -> bool:
    coords = x.coords if isinstance(x, GroupElement) else tuple(x)
    return (
        solve_linear(
            s.incl.mat.hstack(s.ambient.canonical_relations),
            IntMatrix.column_vector(coords),
        )
        is not None
    )


def subgroup_le(a: Subgroup, b: Subgroup) -> bool:
    """True iff a is contained in b (both in the same ambient group)."""
    if a.ambient != b.ambient:
        raise EndpointMismatchError("compare subgroups", a.ambient, b.ambient)
    return all(subgroup_contains(b, c) for c in a.incl.mat.columns())


def subgroup_equal(a: Subgroup, b: Subgroup) -> bool:
    """Equality as subgroups of a common ambient group (mutual membership)."""
    return subgroup_le(a, b) and subgroup_le(b, a)


def subgroup_intersection(a: Subgroup, b: Subgroup) -> Subgroup:
    if a.ambient != b.ambient:
        raise EndpointMismatchError("intersect subgroups", a.ambient, b.ambient)
    return Subgroup(a.ambient, compose_homs(a.incl, preimage(a.incl, b).incl))


def subgroup_sum(a: Subgroup, b: Subgroup) -> Subgroup:
    if a.ambient != b.ambient:
        raise EndpointMismatchError("add subgroups", a.ambient, b.ambient)
    return subgroup_generated_by(a.ambient, a.incl.mat.hstack(b.incl.mat))


################################################################################
# Lifting and factorisation
################################################################################


def lift_element(h: Hom, y: GroupElement | Sequence[int]) -> tuple[int, ...] | None:
    """
    Some x (canonical coordinates of h.src) with h(x) = y, or None when y is
    not in the image of h.
    """
    coords = y.coords if isinstance(y, GroupElement) else tuple(y)
    solution = solve_linear(
        h.mat.hstack(h.tgt.canonical_relations), IntMatrix.column_vector(coords)
    )
    if solution is None:
        return None
    return h.src.reduce(solution.column(0)[: h.src.nfactors])


def lift_through_injection(incl: Hom, u: Hom) -> Hom:
    """
    Given an injection incl: K -> G and u: T -> G with im(u) inside im(incl),
    return the unique v: T -> K with incl o v = u.
    """
    if u.tgt != incl.tgt:
        raise EndpointMismatchError("lift through injection", incl.tgt, u.tgt)
    columns = []
    for j, image_j in enumerate(u.mat.columns()):
        x = lift_element(incl, image_j)
        if x is None:
            raise NotInImageError(j)
        columns.append(x)
    return make_hom(u.src, incl.src, _from_columns(columns, incl.src.nfactors))


def descend(proj: Hom, u: Hom) -> Hom:
    """
    Given a surjection proj: G -> Q and u: G -> T vanishing on ker(proj),
    return the unique v: Q -> T with v o proj = u.
    """
    if u.src != proj.src:
        raise EndpointMismatchError("descend through quotient", proj.src, u.src)
    killed = compose_homs(u, kernel(proj).incl)
    for j, c in enumerate(killed.mat.columns()):
        if any(c):
            raise DoesNotFactorError(j)
    columns = []
    for j in range(proj.tgt.nfactors):
        x = lift_element(proj, proj.tgt.generator(j))
        if x is None:
            raise NotSurjectiveError(proj, "quotient map")
        columns.append((u.mat @ IntMatrix.column_vector(x)).column(0))
    return make_hom(proj.tgt, u.tgt, _from_columns(columns, u.tgt.nfactors))


def hom_inverse(h: Hom) -> Hom:
    """The inverse of an isomorphism."""
    flags = hom_classify(h)
    if not flags.injective:
        raise NotInjectiveError(h, "map to invert")
    if not flags.surjective:
        raise NotSurjectiveError(h, "map to invert")
    return lift_through_injection(h, identity_hom(h.tgt))


def homs_from_columns(
    src: FgGroup, tgt: FgGroup, columns: Iterable[Sequence[int]]
) -> Hom:
    """Construct a (validated) hom from a list of generator images."""
    return make_hom(src, tgt, _from_columns(list(columns), tgt.nfactors))
