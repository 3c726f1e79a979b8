"""
Seeded random generation of groups, homs, exact rows and valid K-ladders.

Groups and homs are drawn directly. Exact rows and ladders are never found by
rejection sampling (valid ladders have measure zero among random maps).
Instead they come from two-term chain complexes with a degreewise split
filtration:

    C = C' + C''  with differential  d = [[d', kappa], [0, d'']]

The short exact sequence of complexes 0 -> C' -> C -> C'' -> 0 gives the
six-term exact homology row

    H1 C' -> H1 C -> H1 C'' --boundary--> H0 C' -> H0 C -> H0 C''

(:py:func:`exact_row_from_complex`). A block-triangular chain map between two
such complexes induces a commuting map of the two rows
(:py:func:`ladder_from_morphism`), i.e. a valid :py:class:`~mvkit.milnor.KLadder`.
Chain maps are drawn by :py:func:`random_chain_map` as a random point of the
integer solution lattice of the chain map equations.

Every generator takes an explicit :py:class:`random.Random` so (seed, config)
fully determines every instance; see :py:func:`trial_rng`.
"""

from typing import NamedTuple, Sequence

from dataclasses import dataclass, replace
from math import gcd

import logging
import random
import tomllib

from sympy import divisors

from mvkit.intmatrix import IntMatrix
from mvkit.normal_forms import kernel_basis
from mvkit.groups import FgGroup, make_group, group_from_invariants
from mvkit.homs import (
    Hom,
    Subgroup,
    DirectSum,
    make_hom,
    identity_hom,
    zero_hom,
    compose_homs,
    direct_sum,
    kernel,
    image,
    cokernel,
    lift_through_injection,
    descend,
    hom_inverse,
)
from mvkit.diagrams import ExactRow, LadderDiagram
from mvkit.milnor import KLadder, relabel_ladder

LOGGER = logging.getLogger(__name__)


@dataclass
class TrialConfigError(ValueError):
    """Thrown when a trial configuration has out-of-range values."""

    message: str

    def __str__(self) -> str:
        return self.message


@dataclass(frozen=True)
class TrialConfig:
    """Bounds and seed for randomly generated instances."""

    seed: int = 42
    """Master seed (a 64-bit unsigned integer)."""

    trials: int = 500

    max_order: int = 64
    """The largest torsion invariant factor drawn."""

    max_rank: int = 2
    """The largest free rank drawn."""

    max_factors: int = 3
    """The largest number of torsion invariant factors drawn."""

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise TrialConfigError(f"seed must be a 64-bit unsigned integer, not {self.seed}")
        if self.trials < 0:
            raise TrialConfigError(f"trials must be non-negative, not {self.trials}")
        if self.max_order < 2:
            raise TrialConfigError(f"max_order must be at least 2, not {self.max_order}")
        if self.max_rank < 0:
            raise TrialConfigError(f"max_rank must be non-negative, not {self.max_rank}")
        if self.max_factors < 0:
            raise TrialConfigError(
                f"max_factors must be non-negative, not {self.max_factors}"
            )


@dataclass
class TrialConfigTOMLDecodeError(TrialConfigError):
    """Thrown when a trial configuration file is not valid TOML."""

    error: tomllib.TOMLDecodeError

    def __str__(self) -> str:
        return f"{self.message}: {self.error}"


def trial_config_from_toml(text: str, **overrides: int | None) -> TrialConfig:
    """
    Read a TrialConfig from the [trials] table of a TOML document. Overrides
    which are not None take precedence over values in the document.
    """
    try:
        parsed = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise TrialConfigTOMLDecodeError("invalid configuration file", e) from None

    table = parsed.get("trials", {})
    if not isinstance(table, dict):
        raise TrialConfigError("[trials] must be a table")
    known = set(TrialConfig.__dataclass_fields__)
    if unknown := set(table) - known:
        raise TrialConfigError(f"unknown [trials] keys: {', '.join(sorted(unknown))}")
    for key, value in table.items():
        if not isinstance(value, int) or isinstance(value, bool):
            raise TrialConfigError(f"[trials] {key} must be an integer")

    values = dict(table)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return TrialConfig(**values)


def trial_rng(cfg: TrialConfig, suite: str, trial: int) -> random.Random:
    """The independent, reproducible generator for one trial of a suite."""
    return random.Random(f"{cfg.seed}:{suite}:{trial}")


def complex_config(cfg: TrialConfig) -> TrialConfig:
    """
    The smaller bounds used for the components of random chain complexes, whose
    homology groups and maps are built from several components at once.
    """
    return replace(
        cfg, max_factors=min(cfg.max_factors, 2), max_rank=min(cfg.max_rank, 1)
    )


################################################################################
# Matrices, groups and homs
################################################################################


def gen_random_matrix(
    rng: random.Random, max_dim: int = 6, max_entry: int = 100
) -> IntMatrix:
    rows = rng.randint(1, max_dim)
    cols = rng.randint(1, max_dim)
    return IntMatrix.from_rows(
        [[rng.randint(-max_entry, max_entry) for _ in range(cols)] for _ in range(rows)],
        cols,
    )


def gen_random_invariants(cfg: TrialConfig, rng: random.Random) -> list[int]:
    """A canonical invariant factor list within the bounds of cfg."""
    chain: list[int] = []
    nfactors = rng.randint(0, cfg.max_factors)
    if nfactors:
        chain.append(rng.randint(2, cfg.max_order))
        while len(chain) < nfactors:
            chain.insert(0, rng.choice([d for d in divisors(chain[0]) if d > 1]))
    return chain + [0] * rng.randint(0, cfg.max_rank)


def gen_random_group(cfg: TrialConfig, rng: random.Random) -> FgGroup:
    return group_from_invariants(gen_random_invariants(cfg, rng))


def gen_random_presentation(
    rng: random.Random, max_gens: int = 4, max_relators: int = 4, max_entry: int = 12
) -> FgGroup:
    """A group given by a random (generally non-diagonal) relation matrix."""
    ngens = rng.randint(0, max_gens)
    nrel = rng.randint(0, max_relators)
    return make_group(
        IntMatrix.from_rows(
            [[rng.randint(-max_entry, max_entry) for _ in range(nrel)] for _ in range(ngens)],
            nrel,
        )
    )


def _entry_step(d: int, e: int) -> int:
    """
    Images of a generator of order d (0 = infinite) in a cyclic factor Z/e
    (e = 0 for Z) must be multiples of this step; 0 means the image is 0.
    """
    if e == 0:
        return 0 if d else 1
    return e // gcd(d, e)


def gen_random_hom(src: FgGroup, tgt: FgGroup, rng: random.Random, spread: int = 3) -> Hom:
    """
    A random well-defined hom: each generator's image is drawn from the
    subgroup it may legally map to.
    """
    columns = []
    for d in src.invariants:
        column = []
        for e in tgt.invariants:
            step = _entry_step(d, e)
            if step == 0:
                column.append(0)
            elif e:
                column.append(step * rng.randrange(e // step))
            else:
                column.append(rng.randint(-spread, spread))
        columns.append(column)
    return make_hom(src, tgt, IntMatrix.from_rows(columns, tgt.nfactors).transpose())


def random_unimodular(n: int, rng: random.Random, steps: int | None = None) -> IntMatrix:
    """A random n x n unimodular matrix built from elementary row operations."""
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n if steps is None else steps):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        match rng.randrange(3):
            case 0:
                k = rng.choice([-2, -1, 1, 2])
                rows[i] = [a + k * b for a, b in zip(rows[i], rows[j])]
            case 1:
                rows[i], rows[j] = rows[j], rows[i]
            case _:
                rows[i] = [-a for a in rows[i]]
    return IntMatrix.from_rows(rows, n)


def random_isomorphism(g: FgGroup, rng: random.Random) -> Hom:
    """
    A random automorphism of g: change the basis of the canonical presentation
    by a random unimodular W and read x -> W x back in canonical coordinates.
    """
    w = random_unimodular(g.nfactors, rng)
    conjugate = make_group(w @ g.canonical_relations)
    return make_hom(g, g, conjugate.to_canonical @ w)


def gen_random_subgroup(g: FgGroup, cfg: TrialConfig, rng: random.Random) -> Subgroup:
    return image(gen_random_hom(gen_random_group(cfg, rng), g, rng))


def gen_random_quotient(g: FgGroup, cfg: TrialConfig, rng: random.Random) -> Hom:
    """A random surjection out of g."""
    return cokernel(gen_random_subgroup(g, cfg, rng).incl).proj


################################################################################
# Two-term complexes
################################################################################


@dataclass(frozen=True)
class ComplexData:
    """
    A two-term complex C1 -> C0 with C_n = C'_n + C''_n and triangular
    differential [[d', kappa], [0, d'']].
    """

    d_sub: Hom
    """d': C'1 -> C'0"""

    d_quo: Hom
    """d'': C''1 -> C''0"""

    kappa: Hom
    """C''1 -> C'0"""

    def __post_init__(self) -> None:
        if self.kappa.src != self.d_quo.src or self.kappa.tgt != self.d_sub.tgt:
            raise ValueError("kappa must map C''1 to C'0")

    @property
    def sum1(self) -> DirectSum:
        return direct_sum(self.d_sub.src, self.d_quo.src)

    @property
    def sum0(self) -> DirectSum:
        return direct_sum(self.d_sub.tgt, self.d_quo.tgt)

    @property
    def differential(self) -> Hom:
        s1, s0 = self.sum1, self.sum0
        return (
            compose_homs(s0.in1, self.d_sub, s1.pr1)
            + compose_homs(s0.in1, self.kappa, s1.pr2)
            + compose_homs(s0.in2, self.d_quo, s1.pr2)
        )


def gen_random_complex(cfg: TrialConfig, rng: random.Random) -> ComplexData:
    ccfg = complex_config(cfg)
    sub1, sub0, quo1, quo0 = (gen_random_group(ccfg, rng) for _ in range(4))
    return ComplexData(
        d_sub=gen_random_hom(sub1, sub0, rng),
        d_quo=gen_random_hom(quo1, quo0, rng),
        kappa=gen_random_hom(quo1, sub0, rng),
    )


class _Homology(NamedTuple):
    """Cycles and homology projections of the three complexes C', C, C''."""

    cycles: tuple[Subgroup, ...]
    projections: tuple[Hom, ...]


def _homology(c: ComplexData) -> _Homology:
    differentials = (c.d_sub, c.differential, c.d_quo)
    return _Homology(
        tuple(kernel(d) for d in differentials),
        tuple(cokernel(d).proj for d in differentials),
    )


def exact_row_from_complex(c: ComplexData) -> ExactRow:
    """
    H1 C' -> H1 C -> H1 C'' -> H0 C' -> H0 C -> H0 C'', the homology exact
    sequence of 0 -> C' -> C -> C'' -> 0. The boundary map is induced by kappa.
    """
    h = _homology(c)
    z_sub, z, z_quo = h.cycles
    p_sub, p, p_quo = h.projections
    s1, s0 = c.sum1, c.sum0
    return ExactRow(
        (
            lift_through_injection(z.incl, compose_homs(s1.in1, z_sub.incl)),
            lift_through_injection(z_quo.incl, compose_homs(s1.pr2, z.incl)),
            compose_homs(p_sub, c.kappa, z_quo.incl),
            descend(p_sub, compose_homs(p, s0.in1)),
            descend(p, compose_homs(p_quo, s0.pr2)),
        )
    )


def gen_random_exact_row(cfg: TrialConfig, rng: random.Random) -> ExactRow:
    """A random six-term exact row."""
    return exact_row_from_complex(gen_random_complex(cfg, rng))


def gen_random_four_term_row(cfg: TrialConfig, rng: random.Random) -> ExactRow:
    """A random row A -> B -> C -> D exact at B and C."""
    row = gen_random_exact_row(cfg, rng)
    start = rng.randrange(3)
    return ExactRow(row.homs[start : start + 3])


################################################################################
# Chain maps
################################################################################


@dataclass(frozen=True)
class ComplexMorphism:
    """
    A block-triangular chain map C -> D: in each degree
    F_n = [[sub_n, theta_n], [0, quo_n]].
    """

    src: ComplexData
    tgt: ComplexData
    sub1: Hom
    sub0: Hom
    quo1: Hom
    quo0: Hom
    theta1: Hom
    theta0: Hom

    def total(self, degree: int) -> Hom:
        if degree == 1:
            s, t = self.src.sum1, self.tgt.sum1
            sub, quo, theta = self.sub1, self.quo1, self.theta1
        else:
            s, t = self.src.sum0, self.tgt.sum0
            sub, quo, theta = self.sub0, self.quo0, self.theta0
        return (
            compose_homs(t.in1, sub, s.pr1)
            + compose_homs(t.in1, theta, s.pr2)
            + compose_homs(t.in2, quo, s.pr2)
        )

    def is_chain_map(self) -> bool:
        return compose_homs(self.tgt.differential, self.total(1)) == compose_homs(
            self.total(0), self.src.differential
        )

    @classmethod
    def identity(cls, c: ComplexData) -> "ComplexMorphism":
        return cls(
            c,
            c,
            identity_hom(c.d_sub.src),
            identity_hom(c.d_sub.tgt),
            identity_hom(c.d_quo.src),
            identity_hom(c.d_quo.tgt),
            zero_hom(c.d_quo.src, c.d_sub.src),
            zero_hom(c.d_quo.tgt, c.d_sub.tgt),
        )

    @classmethod
    def zero(cls, c: ComplexData, d: ComplexData) -> "ComplexMorphism":
        return cls(
            c,
            d,
            zero_hom(c.d_sub.src, d.d_sub.src),
            zero_hom(c.d_sub.tgt, d.d_sub.tgt),
            zero_hom(c.d_quo.src, d.d_quo.src),
            zero_hom(c.d_quo.tgt, d.d_quo.tgt),
            zero_hom(c.d_quo.src, d.d_sub.src),
            zero_hom(c.d_quo.tgt, d.d_sub.tgt),
        )


# A linear form in the unknowns: variable index -> coefficient
_Form = dict[int, int]


class _Unknown:
    """A hom whose matrix entries are unknowns, each a multiple of a fixed step."""

    def __init__(self, src: FgGroup, tgt: FgGroup, variables: list[tuple[int, int]]):
        self.src = src
        self.tgt = tgt
        self.forms: list[list[_Form]] = []
        for e in tgt.invariants:
            row: list[_Form] = []
            for d in src.invariants:
                step = _entry_step(d, e)
                if step:
                    row.append({len(variables): step})
                    variables.append((len(self.forms), len(row) - 1))
                else:
                    row.append({})
            self.forms.append(row)


def _add(a: _Form, b: _Form, k: int = 1) -> _Form:
    out = dict(a)
    for v, c in b.items():
        out[v] = out.get(v, 0) + k * c
    return out


def _known_times_unknown(m: IntMatrix, u: _Unknown) -> list[list[_Form]]:
    out = []
    for i in range(m.rows):
        row = []
        for j in range(u.src.nfactors):
            form: _Form = {}
            for l in range(m.cols):
                if m[i, l]:
                    form = _add(form, u.forms[l][j], m[i, l])
            row.append(form)
        out.append(row)
    return out


def _unknown_times_known(u: _Unknown, m: IntMatrix) -> list[list[_Form]]:
    out = []
    for i in range(u.tgt.nfactors):
        row = []
        for j in range(m.cols):
            form: _Form = {}
            for l in range(m.rows):
                if m[l, j]:
                    form = _add(form, u.forms[i][l], m[l, j])
            row.append(form)
        out.append(row)
    return out


def _combine(*terms: tuple[int, list[list[_Form]]]) -> list[list[_Form]]:
    rows = len(terms[0][1])
    cols = len(terms[0][1][0]) if rows else 0
    return [
        [
            {
                v: c
                for v, c in _sum_forms(
                    [(k, t[i][j]) for k, t in terms]
                ).items()
                if c
            }
            for j in range(cols)
        ]
        for i in range(rows)
    ]


def _sum_forms(weighted: Sequence[tuple[int, _Form]]) -> _Form:
    out: _Form = {}
    for k, form in weighted:
        out = _add(out, form, k)
    return out


def random_chain_map(
    c: ComplexData, d: ComplexData, rng: random.Random, spread: int = 2
) -> ComplexMorphism:
    """
    A random block-triangular chain map c -> d: a random integer combination
    of a basis of the lattice of solutions of the chain map equations

        d'_D sub1 = sub0 d'_C
        d''_D quo1 = quo0 d''_C
        d'_D theta1 + lambda quo1 = sub0 kappa + theta0 d''_C

    (each holding modulo the relations of the target group).
    """
    variables: list[tuple[int, int]] = []
    sub1 = _Unknown(c.d_sub.src, d.d_sub.src, variables)
    sub0 = _Unknown(c.d_sub.tgt, d.d_sub.tgt, variables)
    quo1 = _Unknown(c.d_quo.src, d.d_quo.src, variables)
    quo0 = _Unknown(c.d_quo.tgt, d.d_quo.tgt, variables)
    theta1 = _Unknown(c.d_quo.src, d.d_sub.src, variables)
    theta0 = _Unknown(c.d_quo.tgt, d.d_sub.tgt, variables)
    nvars = len(variables)

    equations = [
        (
            d.d_sub.tgt,
            _combine(
                (1, _known_times_unknown(d.d_sub.mat, sub1)),
                (-1, _unknown_times_known(sub0, c.d_sub.mat)),
            ),
        ),
        (
            d.d_quo.tgt,
            _combine(
                (1, _known_times_unknown(d.d_quo.mat, quo1)),
                (-1, _unknown_times_known(quo0, c.d_quo.mat)),
            ),
        ),
        (
            d.d_sub.tgt,
            _combine(
                (1, _known_times_unknown(d.d_sub.mat, theta1)),
                (1, _known_times_unknown(d.kappa.mat, quo1)),
                (-1, _unknown_times_known(sub0, c.kappa.mat)),
                (-1, _unknown_times_known(theta0, c.d_quo.mat)),
            ),
        ),
    ]

    # Each entry must vanish modulo its row's invariant factor e: add a slack
    # variable s with form - e*s = 0 for every torsion row.
    rows: list[list[int]] = []
    slacks: list[int] = []
    for group, forms in equations:
        for i, row in enumerate(forms):
            for form in row:
                coeffs = [form.get(v, 0) for v in range(nvars)]
                slacks.append(group.invariants[i])
                rows.append(coeffs)
    nslack = len(slacks)
    system = IntMatrix.from_rows(
        [
            coeffs + [-e if k == n else 0 for k in range(nslack)]
            for n, (coeffs, e) in enumerate(zip(rows, slacks))
        ],
        nvars + nslack,
    )
    basis = kernel_basis(system)

    values = [0] * nvars
    for column in basis.columns():
        k = rng.randint(-spread, spread)
        for v in range(nvars):
            values[v] += k * column[v]

    def build(u: _Unknown) -> Hom:
        entries = [
            [sum(c * values[v] for v, c in form.items()) for form in row]
            for row in u.forms
        ]
        return make_hom(u.src, u.tgt, IntMatrix.from_rows(entries, u.src.nfactors))

    return ComplexMorphism(
        c,
        d,
        build(sub1),
        build(sub0),
        build(quo1),
        build(quo0),
        build(theta1),
        build(theta0),
    )


def ladder_from_morphism(f: ComplexMorphism, degree: int = 0) -> KLadder:
    """The K-ladder formed by the homology rows of f.src and f.tgt."""
    hs, ht = _homology(f.src), _homology(f.tgt)
    in1 = (f.sub1, f.total(1), f.quo1)
    in0 = (f.sub0, f.total(0), f.quo0)
    verticals = [
        lift_through_injection(zt.incl, compose_homs(g, zs.incl))
        for zs, zt, g in zip(hs.cycles, ht.cycles, in1)
    ] + [
        descend(ps, compose_homs(pt, g))
        for ps, pt, g in zip(hs.projections, ht.projections, in0)
    ]
    return KLadder(
        degree,
        exact_row_from_complex(f.src),
        exact_row_from_complex(f.tgt),
        tuple(verticals),
    )


def gen_random_ladder(cfg: TrialConfig, rng: random.Random, attempts: int = 8) -> KLadder:
    """
    A random valid K-ladder from a random chain map between random complexes.

    Draws giving the zero chain map are redrawn up to ``attempts`` times. If
    every draw is zero the identity chain map of the last source complex is
    used instead, so the verticals are all zero only when every node of that
    complex is trivial.
    """
    degree = rng.randint(0, 3)
    for attempt in range(attempts):
        src = gen_random_complex(cfg, rng)
        tgt = src if rng.random() < 0.25 else gen_random_complex(cfg, rng)
        ladder = ladder_from_morphism(random_chain_map(src, tgt, rng), degree)
        if not all(v.is_zero() for v in ladder.verticals):
            return ladder
        LOGGER.debug("Redrawing zero ladder (attempt %d)", attempt + 1)
    LOGGER.debug("Falling back to the identity ladder")
    return ladder_from_morphism(ComplexMorphism.identity(src), degree)


def gen_excisive_ladder(cfg: TrialConfig, rng: random.Random) -> KLadder:
    """
    A random K-ladder whose verticals are all isomorphisms: the identity chain
    map with the bottom row relabeled by random automorphisms.
    """
    c = gen_random_complex(cfg, rng)
    ladder = ladder_from_morphism(ComplexMorphism.identity(c), rng.randint(0, 3))
    return relabel_ladder(
        ladder,
        [identity_hom(g) for g in ladder.a_row.groups],
        [random_isomorphism(g, rng) for g in ladder.b_row.groups],
    )


def random_relabeling(k: KLadder, rng: random.Random) -> tuple[list[Hom], list[Hom]]:
    """Random automorphisms of every node of both rows of k."""
    return (
        [random_isomorphism(g, rng) for g in k.a_row.groups],
        [random_isomorphism(g, rng) for g in k.b_row.groups],
    )


################################################################################
# Five lemma ladders
################################################################################


def transport_row(row: ExactRow, isos: Sequence[Hom]) -> LadderDiagram:
    """The ladder from row to its conjugate along the given node isomorphisms."""
    inverses = [hom_inverse(t) for t in isos]
    bottom = ExactRow(
        tuple(compose_homs(isos[j + 1], h, inverses[j]) for j, h in enumerate(row.homs))
    )
    return LadderDiagram(row, bottom, tuple(isos))


def gen_five_node_row(cfg: TrialConfig, rng: random.Random) -> ExactRow:
    """A random five-node row exact at its three interior nodes."""
    row = gen_random_exact_row(cfg, rng)
    start = rng.randrange(2)
    return ExactRow(row.homs[start : start + 4])


def gen_five_lemma_ladder(cfg: TrialConfig, rng: random.Random) -> LadderDiagram:
    """A five-node ladder of exact rows whose verticals are all isomorphisms."""
    five = gen_five_node_row(cfg, rng)
    return transport_row(five, [random_isomorphism(g, rng) for g in five.groups])


def gen_degenerate_five_lemma_ladder(
    cfg: TrialConfig, rng: random.Random
) -> LadderDiagram:
    """
    A five-node ladder of a row over itself whose verticals are all zero. The
    squares commute and both rows are exact, so the only violated hypotheses
    are the outer verticals on non-trivial nodes.
    """
    five = gen_five_node_row(cfg, rng)
    return LadderDiagram(five, five, tuple(zero_hom(g, g) for g in five.groups))


def gen_inexact_five_lemma_ladder(
    cfg: TrialConfig, rng: random.Random, node: int
) -> LadderDiagram:
    """
    A five-node ladder whose squares commute and whose verticals are all
    isomorphisms, but whose rows are exact everywhere except at the given
    interior node.

    A non-trivial cyclic group E is added to that node with zero maps in and
    out: the kernel of the outgoing map gains E while the image of the
    incoming map does not.
    """
    if not 1 <= node <= 3:
        raise ValueError(f"node must be 1, 2 or 3, not {node}")
    five = gen_five_node_row(cfg, rng)
    extra = group_from_invariants([rng.randint(2, cfg.max_order)])
    spiked = direct_sum(five.groups[node], extra)
    homs = list(five.homs)
    homs[node - 1] = compose_homs(spiked.in1, homs[node - 1])
    homs[node] = compose_homs(homs[node], spiked.pr1)
    row = ExactRow(tuple(homs))
    return transport_row(row, [random_isomorphism(g, rng) for g in row.groups])


def gen_noncommuting_five_lemma_ladder(
    cfg: TrialConfig, rng: random.Random, square: int
) -> LadderDiagram:
    """
    A five-node ladder of exact rows whose verticals are all isomorphisms but
    whose given square does not commute.

    A cyclic group E of order at least 3 is added to both nodes of the square,
    joined by the identity on E, so the row stays exact. Every vertical is the
    identity except the one at the square's right-hand node, which negates E.
    """
    if not 0 <= square <= 3:
        raise ValueError(f"square must be between 0 and 3, not {square}")
    five = gen_five_node_row(cfg, rng)
    extra = group_from_invariants([rng.randint(3, max(3, cfg.max_order))])
    lo = direct_sum(five.groups[square], extra)
    hi = direct_sum(five.groups[square + 1], extra)
    homs = list(five.homs)
    homs[square] = compose_homs(hi.in1, homs[square], lo.pr1) + compose_homs(
        hi.in2, lo.pr2
    )
    if square > 0:
        homs[square - 1] = compose_homs(lo.in1, homs[square - 1])
    if square < 3:
        homs[square + 1] = compose_homs(homs[square + 1], hi.pr1)
    row = ExactRow(tuple(homs))
    verticals = [identity_hom(g) for g in row.groups]
    verticals[square + 1] = compose_homs(hi.in1, hi.pr1) - compose_homs(hi.in2, hi.pr2)
    return LadderDiagram(row, row, tuple(verticals))
