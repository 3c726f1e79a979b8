"""
Finitely generated abelian groups given by relation presentations.

A group is presented as Z^n / im(R) where R is an n-row matrix whose columns
are relators. :py:func:`make_group` computes the Smith normal form of R and
from it the canonical invariant-factor decomposition

    Z/d_1 + Z/d_2 + ... + Z/d_k + Z + ... + Z

with d_1 | d_2 | ... | d_k (all > 1), written as the invariant list
``(d_1, ..., d_k, 0, ..., 0)``. Every element and homomorphism elsewhere in
mvkit is expressed in these canonical coordinates; the presentation only
matters when converting user-supplied matrices (see
:py:func:`mvkit.homs.hom_from_presentation`).

Two groups compare equal when their invariant lists agree, i.e. when they are
isomorphic. Canonical coordinates make such groups interchangeable as the
endpoints of homomorphisms.
"""

from typing import Iterator, Sequence

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import prod

from mvkit.intmatrix import IntMatrix
from mvkit.normal_forms import snf, unimodular_inverse


@dataclass
class GroupError(Exception):
    """Base class for errors involving groups and homomorphisms."""


@dataclass
class InfiniteGroupError(GroupError):
    """Thrown when enumerating the elements of an infinite group."""

    group: "FgGroup"

    def __str__(self) -> str:
        return f"Cannot enumerate the elements of infinite group {self.group}."


@dataclass
class ElementShapeError(GroupError):
    """Thrown when a coordinate vector has the wrong length for its group."""

    group: "FgGroup"
    coords: tuple[int, ...]

    def __str__(self) -> str:
        return (
            f"{len(self.coords)} coordinates given for an element of {self.group} "
            f"which has {self.group.nfactors} canonical generators."
        )


def format_invariants(invariants: Sequence[int]) -> str:
    """Human-readable rendering, e.g. (2, 4, 0) -> 'Z/2 + Z/4 + Z'."""
    if not invariants:
        return "0"
    return " + ".join("Z" if d == 0 else f"Z/{d}" for d in invariants)


@dataclass(frozen=True, eq=False)
class FgGroup:
    """
    A finitely generated abelian group. Construct with :py:func:`make_group`.
    """

    relations: IntMatrix
    """The presentation: ngens rows, one column per relator."""

    invariants: tuple[int, ...]
    """Canonical invariant factors (torsion in a divisibility chain, then 0s)."""

    to_canonical: IntMatrix
    """nfactors x ngens: presentation coordinates -> canonical coordinates."""

    from_canonical: IntMatrix
    """ngens x nfactors: canonical coordinates -> presentation coordinates."""

    @property
    def ngens(self) -> int:
        """The number of generators in the presentation."""
        return self.relations.rows

    @property
    def nfactors(self) -> int:
        """The number of canonical (cyclic) generators."""
        return len(self.invariants)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariants if d == 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariants if d != 0)

    def is_trivial(self) -> bool:
        return not self.invariants

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int | None:
        """The number of elements, or None when infinite."""
        if not self.is_finite():
            return None
        return prod(self.invariants)

    @property
    def canonical_relations(self) -> IntMatrix:
        """The square diagonal relation matrix of the canonical form."""
        return IntMatrix.diagonal(self.invariants)

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        """Reduce canonical coordinates: torsion coordinates into [0, d)."""
        if len(coords) != self.nfactors:
            raise ElementShapeError(self, tuple(coords))
        return tuple(c % d if d else c for c, d in zip(coords, self.invariants))

    def in_relations(self, coords: Sequence[int]) -> bool:
        """True iff the canonical coordinate vector lies in the relation lattice."""
        return not any(self.reduce(coords))

    def element(self, coords: Sequence[int]) -> "GroupElement":
        return GroupElement(self, self.reduce(coords))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.nfactors)

    def generator(self, j: int) -> "GroupElement":
        """The j-th canonical generator."""
        return self.element([int(i == j) for i in range(self.nfactors)])

    def elements(self) -> Iterator["GroupElement"]:
        """Enumerate every element of a finite group."""
        if not self.is_finite():
            raise InfiniteGroupError(self)
        for coords in product(*(range(d) for d in self.invariants)):
            yield GroupElement(self, tuple(coords))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FgGroup):
            return NotImplemented
        return self.invariants == other.invariants

    def __hash__(self) -> int:
        return hash(self.invariants)

    def __str__(self) -> str:
        return format_invariants(self.invariants)

    def __repr__(self) -> str:
        return f"FgGroup({list(self.invariants)})"


@dataclass(frozen=True)
class GroupElement:
    """An element of a group in reduced canonical coordinates."""

    parent: FgGroup
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.parent.reduce(self.coords) != self.coords:
            raise ElementShapeError(self.parent, self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return self.parent.element([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self.parent.element([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "GroupElement":
        return self.parent.element([-a for a in self.coords])

    def __mul__(self, k: int) -> "GroupElement":
        return self.parent.element([k * a for a in self.coords])

    __rmul__ = __mul__

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.coords)) + ")"


@lru_cache(maxsize=4096)
def make_group(relations: IntMatrix) -> FgGroup:
    """
    Build the group Z^n / im(relations) (n = relations.rows) and compute its
    canonical form.
    """
    d, u, _v = snf(relations)
    n = relations.rows
    diagonal = [
        d[k, k] if k < min(relations.rows, relations.cols) else 0 for k in range(n)
    ]
    kept = [k for k, dk in enumerate(diagonal) if dk != 1]
    return FgGroup(
        relations=relations,
        invariants=tuple(diagonal[k] for k in kept),
        to_canonical=u.select_rows(kept),
        from_canonical=unimodular_inverse(u).select_columns(kept),
    )


def group_from_invariants(invariants: Sequence[int]) -> FgGroup:
    """
    The group Z/d_1 + ... + Z/d_k presented on k generators (d = 0 giving an
    infinite cyclic factor). For a list already in canonical form the
    presentation and canonical coordinates coincide.
    """
    if any(d < 0 for d in invariants):
        raise ValueError(f"negative invariant factor in {list(invariants)}")
    return make_group(IntMatrix.diagonal(list(invariants)))


def free_group(rank: int) -> FgGroup:
    return group_from_invariants([0] * rank)


def trivial_group() -> FgGroup:
    return make_group(IntMatrix.zeros(0, 0))
