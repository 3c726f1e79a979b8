"""
Seeded property suites.

Each suite draws ``cfg.trials`` random instances and runs a fixed list of
named properties on every one. An instance is always a
:py:class:`~mvkit.model_file.Model` using a small set of well-known names
(e.g. a K-group ladder named ``K``) so that a failing instance can be written
out with :py:func:`~mvkit.model_file.format_model` and fed back through
:py:func:`replay` to reproduce the failure.

A property is a function taking an instance and returning None when it holds
or a short description of what went wrong. Errors raised by mvkit's own
constructions (for example an
:py:exc:`~mvkit.diagrams.ExactnessFailure` thrown by a postcondition check)
count as failures of the property which triggered them.
"""

from typing import Callable, NamedTuple

from dataclasses import dataclass, field

import logging
import random
import re
import time

from sympy import Matrix

from mvkit.intmatrix import IntMatrix, MatrixError
from mvkit.normal_forms import hnf, snf, rank, kernel_basis, solve_linear
from mvkit.groups import FgGroup, GroupError, free_group
from mvkit.homs import (
    Hom,
    make_hom,
    identity_hom,
    zero_hom,
    compose_homs,
    direct_sum,
    pair_homs,
    copair_homs,
    kernel,
    image,
    quotient,
    is_injective,
    is_surjective,
    hom_classify,
    hom_inverse,
    subgroup_equal,
    full_subgroup,
)
from mvkit.diagrams import (
    DiagramError,
    CommutingConditionError,
    ExactnessFailure,
    ExactRow,
    LadderDiagram,
    FiveLemmaReport,
    Cospan,
    Span,
    pullback,
    pushout,
    into_pullback,
    from_pushout,
    check_row_exact,
    check_ladder_squares,
    five_lemma_verify,
)
from mvkit.exactness_transfer import (
    Transfer,
    stabilize_by_pullback,
    stabilize_by_pushout,
    lift_by_pushout,
    lift_by_pullback,
    pullback_pushout_round_trip,
    pushout_pullback_round_trip,
)
from mvkit.milnor import (
    KLadder,
    LadderError,
    BirelativeData,
    BirelativeEndpointError,
    validate_ladder,
    analyse_ladder,
    check_birelative,
    split_birelative_data,
    compare_with_classical,
    relabel_witnesses,
)
from mvkit.model_file import Model
from mvkit.random_models import (
    TrialConfig,
    trial_rng,
    gen_random_matrix,
    gen_random_group,
    gen_random_presentation,
    gen_random_hom,
    gen_random_subgroup,
    gen_random_quotient,
    gen_random_exact_row,
    gen_random_four_term_row,
    gen_random_ladder,
    gen_excisive_ladder,
    gen_five_lemma_ladder,
    gen_degenerate_five_lemma_ladder,
    gen_inexact_five_lemma_ladder,
    gen_noncommuting_five_lemma_ladder,
    random_isomorphism,
    random_relabeling,
)

LOGGER = logging.getLogger(__name__)


ENUMERATION_LIMIT = 4096
"""Finite groups up to this order are checked against brute-force enumeration."""


@dataclass
class SuiteError(Exception):
    """Base class for errors in running a suite."""


@dataclass
class UnknownSuiteError(SuiteError):
    name: str

    def __str__(self) -> str:
        return f"unknown suite '{self.name}' (choose from {', '.join(SUITES)})"


@dataclass
class InstanceError(SuiteError):
    """Thrown when a model does not contain what a suite needs."""

    suite: str
    message: str

    def __str__(self) -> str:
        return f"{self.suite}: {self.message}"


Property = Callable[[Model], str | None]

Facts = Callable[[Model], dict[str, str]]


class Suite(NamedTuple):
    name: str
    description: str
    generate: Callable[[TrialConfig, random.Random], Model]
    properties: dict[str, Property]
    facts: Facts | None = None


class PropertyResult(NamedTuple):
    name: str
    trials: int
    failures: int

    counterexample: Model | None = None
    """The first failing instance."""

    detail: str | None = None
    """What went wrong on the first failing instance."""

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class ReportDocument:
    suite: str

    config: TrialConfig | None
    """The trial configuration (None for a single replayed model)."""

    properties: list[PropertyResult] = field(default_factory=list)

    facts: dict[str, str] = field(default_factory=dict)
    """Named values computed from a replayed model (e.g. the groups found)."""

    duration: float = 0.0
    """Wall-clock seconds."""

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties)

    def failures(self) -> list[PropertyResult]:
        return [p for p in self.properties if not p.passed]


CHECK_ERRORS = (MatrixError, GroupError, DiagramError, LadderError)
"""Errors which, raised during a property, mean the property failed."""


def _run_property(prop: Property, model: Model) -> str | None:
    try:
        return prop(model)
    except CHECK_ERRORS as exc:
        return f"{type(exc).__name__}: {exc}"


def _small_order(g: FgGroup) -> int | None:
    """The order of g when it is small enough to enumerate, otherwise None."""
    order = g.order()
    return order if order is not None and order <= ENUMERATION_LIMIT else None


################################################################################
# snf
################################################################################


def _generate_matrix(cfg: TrialConfig, rng: random.Random) -> Model:
    m = gen_random_matrix(rng)
    src, tgt = free_group(m.cols), free_group(m.rows)
    return Model(groups={"Src": src, "Tgt": tgt}, homs={"M": make_hom(src, tgt, m)})


def _matrix(model: Model) -> IntMatrix:
    return model.homs["M"].mat


def _snf_transform(model: Model) -> str | None:
    m = _matrix(model)
    d, u, v = snf(m)
    if u @ m @ v != d:
        return "U M V != D"
    if any(d[i, j] for i in range(d.rows) for j in range(d.cols) if i != j):
        return "D is not diagonal"
    return None


def _snf_unimodular(model: Model) -> str | None:
    _d, u, v = snf(_matrix(model))
    for name, t in (("U", u), ("V", v)):
        if abs(Matrix(t.rows_list()).det()) != 1:
            return f"|det {name}| != 1"
    return None


def _snf_divisibility(model: Model) -> str | None:
    diagonal = snf(_matrix(model)).diagonal()
    nonzero = [x for x in diagonal if x]
    if any(x < 0 for x in diagonal):
        return f"negative diagonal entry in {diagonal}"
    if diagonal[: len(nonzero)] != nonzero:
        return f"zeros before non-zero entries in {diagonal}"
    for a, b in zip(nonzero, nonzero[1:]):
        if b % a:
            return f"{a} does not divide {b}"
    return None


def _snf_rank(model: Model) -> str | None:
    m = _matrix(model)
    expected = Matrix(m.rows_list()).rank()
    if snf(m).rank() != expected or rank(m) != expected:
        return f"rank differs from the fraction-free rank {expected}"
    return None


def _hnf_transform(model: Model) -> str | None:
    m = _matrix(model)
    h, u = hnf(m)
    if u @ m != h:
        return "U M != H"
    if abs(Matrix(u.rows_list()).det()) != 1:
        return "|det U| != 1"
    return None


def _kernel_basis(model: Model) -> str | None:
    m = _matrix(model)
    k = kernel_basis(m)
    if not (m @ k).is_zero():
        return "M K != 0"
    if k.cols != m.cols - rank(m) or (k.cols and rank(k) != k.cols):
        return f"kernel basis has {k.cols} columns, rank {rank(k)}"
    return None


def _solve_linear(model: Model) -> str | None:
    m = _matrix(model)
    x0 = IntMatrix.column_vector([(3 * j + 1) % 7 - 3 for j in range(m.cols)])
    b = m @ x0
    x = solve_linear(m, b)
    if x is None:
        return "no solution found for a solvable system"
    if m @ x != b:
        return "returned x does not solve M x = b"
    return None


################################################################################
# group
################################################################################


def _generate_groups(cfg: TrialConfig, rng: random.Random) -> Model:
    g, h, k, l = (gen_random_group(cfg, rng) for _ in range(4))
    return Model(
        groups={"P": gen_random_presentation(rng), "G": g, "H": h, "K": k, "L": l},
        homs={
            "f": gen_random_hom(g, h, rng),
            "g": gen_random_hom(h, k, rng),
            "h": gen_random_hom(k, l, rng),
        },
    )


def _presentation(model: Model) -> str | None:
    p = model.groups["P"]
    torsion = p.torsion
    if any(d < 2 for d in torsion) or any(b % a for a, b in zip(torsion, torsion[1:])):
        return f"invariants {p.invariants} are not a divisibility chain"
    if p.free_rank != p.ngens - Matrix(p.relations.rows_list()).rank():
        return "free rank disagrees with the fraction-free rank of the relations"
    if any(not p.in_relations(c) for c in (p.to_canonical @ p.relations).columns()):
        return "to_canonical does not carry relations to relations"
    roundtrip = p.to_canonical @ p.from_canonical - IntMatrix.identity(p.nfactors)
    if any(not p.in_relations(c) for c in roundtrip.columns()):
        return "to_canonical o from_canonical is not the identity"
    return None


def _well_defined(model: Model) -> str | None:
    for h in model.homs.values():
        make_hom(h.src, h.tgt, h.mat)
    return None


def _associative(model: Model) -> str | None:
    f, g, h = (model.homs[n] for n in "fgh")
    if compose_homs(h, compose_homs(g, f)) != compose_homs(compose_homs(h, g), f):
        return "composition is not associative"
    if compose_homs(identity_hom(f.tgt), f) != f or compose_homs(f, identity_hom(f.src)) != f:
        return "identity is not a unit for composition"
    return None


def _first_isomorphism(model: Model) -> str | None:
    f = model.homs["f"]
    if quotient(kernel(f)).group != image(f).group:
        return f"G/ker f = {quotient(kernel(f)).group} but im f = {image(f).group}"
    return None


def _kernel_order(model: Model) -> str | None:
    f = model.homs["f"]
    if _small_order(f.src) is None:
        return None
    count = sum(1 for x in f.src.elements() if f(x).is_zero())
    if kernel(f).group.order() != count:
        return f"ker f has order {kernel(f).group.order()}, enumeration gives {count}"
    return None


################################################################################
# pullback and pushout
################################################################################


def _generate_cospan(cfg: TrialConfig, rng: random.Random) -> Model:
    a, b, c, t, s = (gen_random_group(cfg, rng) for _ in range(5))
    f, g = gen_random_hom(a, c, rng), gen_random_hom(b, c, rng)
    if rng.random() < 0.5:
        data = pullback(Cospan(f, g))
        w = gen_random_hom(t, data.group, rng)
        u, v = compose_homs(data.p1, w), compose_homs(data.p2, w)
    else:
        u, v = gen_random_hom(t, a, rng), gen_random_hom(t, b, rng)
    s_hom = gen_random_hom(s, t, rng)
    # A second cospan A --e--> D <--q-- X with q surjective
    x = gen_random_group(cfg, rng)
    q = gen_random_quotient(x, cfg, rng)
    e = gen_random_hom(a, q.tgt, rng)
    return Model(
        groups={"A": a, "B": b, "C": c, "T": t, "S": s, "X": x, "D": q.tgt},
        homs={"f": f, "g": g, "u": u, "v": v, "s": s_hom, "e": e, "q": q},
    )


def _generate_span(cfg: TrialConfig, rng: random.Random) -> Model:
    a, b, c, t, s = (gen_random_group(cfg, rng) for _ in range(5))
    f, g = gen_random_hom(a, b, rng), gen_random_hom(a, c, rng)
    if rng.random() < 0.5:
        data = pushout(Span(f, g))
        w = gen_random_hom(data.group, t, rng)
        u, v = compose_homs(w, data.q1), compose_homs(w, data.q2)
    else:
        u, v = gen_random_hom(b, t, rng), gen_random_hom(c, t, rng)
    return Model(
        groups={"A": a, "B": b, "C": c, "T": t, "S": s},
        homs={"f": f, "g": g, "u": u, "v": v, "s": gen_random_hom(t, s, rng)},
    )


def _pullback_universal(model: Model) -> str | None:
    f, g, u, v = (model.homs[n] for n in "fguv")
    data = pullback(Cospan(f, g))
    commutes = compose_homs(f, u) == compose_homs(g, v)
    try:
        w = into_pullback(data, u, v)
    except CommutingConditionError:
        return "commuting maps were rejected" if commutes else None
    if not commutes:
        return "non-commuting maps were accepted"
    if compose_homs(data.p1, w) != u or compose_homs(data.p2, w) != v:
        return "induced map does not reproduce u and v"
    return None


def _pullback_natural(model: Model) -> str | None:
    f, g, u, v, s = (model.homs[n] for n in "fguvs")
    if compose_homs(f, u) != compose_homs(g, v):
        return None
    data = pullback(Cospan(f, g))
    w = into_pullback(data, u, v)
    if into_pullback(data, compose_homs(u, s), compose_homs(v, s)) != compose_homs(w, s):
        return "induced maps do not compose"
    return None


def _pullback_unique(model: Model) -> str | None:
    data = pullback(Cospan(model.homs["f"], model.homs["g"]))
    if not is_injective(pair_homs(data.p1, data.p2)):
        return "projections are not jointly injective"
    return None


def _pullback_surjection_stable(model: Model) -> str | None:
    e, q = model.homs["e"], model.homs["q"]
    if not is_surjective(q):
        return "q is not a surjection"
    if not is_surjective(pullback(Cospan(e, q)).p1):
        return "pullback of a surjection is not surjective"
    return None


def _pullback_order(model: Model) -> str | None:
    f, g = model.homs["f"], model.homs["g"]
    if _small_order(f.src) is None or _small_order(g.src) is None:
        return None
    images = {}
    for b in g.src.elements():
        images[g(b).coords] = images.get(g(b).coords, 0) + 1
    count = sum(images.get(f(a).coords, 0) for a in f.src.elements())
    order = pullback(Cospan(f, g)).group.order()
    if order != count:
        return f"pullback has order {order}, enumeration gives {count}"
    return None


def _pushout_universal(model: Model) -> str | None:
    f, g, u, v = (model.homs[n] for n in "fguv")
    data = pushout(Span(f, g))
    commutes = compose_homs(u, f) == compose_homs(v, g)
    try:
        w = from_pushout(data, u, v)
    except CommutingConditionError:
        return "commuting maps were rejected" if commutes else None
    if not commutes:
        return "non-commuting maps were accepted"
    if compose_homs(w, data.q1) != u or compose_homs(w, data.q2) != v:
        return "induced map does not reproduce u and v"
    return None


def _pushout_natural(model: Model) -> str | None:
    f, g, u, v, s = (model.homs[n] for n in "fguvs")
    if compose_homs(u, f) != compose_homs(v, g):
        return None
    data = pushout(Span(f, g))
    w = from_pushout(data, u, v)
    if from_pushout(data, compose_homs(s, u), compose_homs(s, v)) != compose_homs(s, w):
        return "induced maps do not compose"
    return None


def _pushout_unique(model: Model) -> str | None:
    data = pushout(Span(model.homs["f"], model.homs["g"]))
    if not is_surjective(copair_homs(data.q1, data.q2)):
        return "legs are not jointly surjective"
    return None


def _pushout_order(model: Model) -> str | None:
    f, g = model.homs["f"], model.homs["g"]
    orders = [_small_order(x) for x in (f.src, f.tgt, g.tgt)]
    if orders[0] is None or orders[1] is None or orders[2] is None:
        return None
    relations = {(f(a).coords, (-g(a)).coords) for a in f.src.elements()}
    expected = orders[1] * orders[2] // len(relations)
    order = pushout(Span(f, g)).group.order()
    if order != expected:
        return f"pushout has order {order}, enumeration gives {expected}"
    return None


################################################################################
# Exactness transfer
################################################################################


def _row(model: Model) -> ExactRow:
    return model.rows["R"]


def _generate_subgroup_row(cfg: TrialConfig, rng: random.Random) -> Model:
    row = gen_random_four_term_row(cfg, rng)
    i2 = gen_random_subgroup(row.groups[2], cfg, rng).incl
    return Model(rows={"R": row}, homs={"i2": i2})


def _generate_quotient_row(cfg: TrialConfig, rng: random.Random) -> Model:
    row = gen_random_four_term_row(cfg, rng)
    return Model(rows={"R": row}, homs={"pi1": gen_random_quotient(row.groups[1], cfg, rng)})


def _generate_extension_row(cfg: TrialConfig, rng: random.Random) -> Model:
    """A row through B1 and an injection of B1 into a bigger group."""
    row = gen_random_four_term_row(cfg, rng)
    s = direct_sum(row.groups[1], gen_random_group(cfg, rng))
    i1 = compose_homs(random_isomorphism(s.group, rng), s.in1)
    return Model(rows={"R": row}, homs={"i1": i1})


def _generate_cover_row(cfg: TrialConfig, rng: random.Random) -> Model:
    """
    A row through C2, a surjection pi2 onto C2 from a bigger group and a
    compatible map c (pi2 o c = 0) which is usually non-zero.
    """
    row = gen_random_four_term_row(cfg, rng)
    extra = gen_random_group(cfg, rng)
    s = direct_sum(row.groups[2], extra)
    iso = random_isomorphism(s.group, rng)
    pi2 = compose_homs(s.pr1, iso)
    c = compose_homs(
        hom_inverse(iso), s.in2, gen_random_hom(row.groups[0], extra, rng)
    )
    return Model(rows={"R": row}, homs={"pi2": pi2, "c": c})


def _exact_output(transfer: Callable[[ExactRow, Hom], Transfer], hom: str) -> Property:
    def check(model: Model) -> str | None:
        result = transfer(_row(model), model.homs[hom])
        report = check_row_exact(result.row)
        if not report.exact:
            return f"output row not exact at node {report.failures()[0].node}"
        if not all(s.commutes for s in check_ladder_squares(result.ladder)):
            return "comparison ladder does not commute"
        return None

    return check


def _pullback_round_trip(model: Model) -> str | None:
    report = pullback_pushout_round_trip(_row(model), model.homs["i2"])
    if not report.consistent:
        return (
            f"comparison {report.flags}, expected isomorphism: "
            f"{report.expected_isomorphism}, squares commute: {report.squares_commute}"
        )
    return None


def _pushout_round_trip(model: Model) -> str | None:
    report = pushout_pullback_round_trip(_row(model), model.homs["pi1"])
    if not report.consistent:
        return (
            f"comparison {report.flags}, expected isomorphism: "
            f"{report.expected_isomorphism}, squares commute: {report.squares_commute}"
        )
    return None


def _lift_with_c(model: Model) -> str | None:
    c = model.homs["c"]
    try:
        lift_by_pullback(_row(model), model.homs["pi2"], c)
    except ExactnessFailure:
        return None if not c.is_zero() else "lifting with c = 0 failed"
    if not c.is_zero():
        return "lifting with a non-zero c gave an exact row"
    return None


################################################################################
# Five lemma
################################################################################


def _generate_five(cfg: TrialConfig, rng: random.Random) -> Model:
    model = Model(
        ladders={
            "L": gen_five_lemma_ladder(cfg, rng),
            "Z": gen_degenerate_five_lemma_ladder(cfg, rng),
        }
    )
    # The broken node or square is part of the ladder's name so that a
    # replayed instance knows what to expect
    node = rng.randint(1, 3)
    model.ladders[f"inexact_at_{node}"] = gen_inexact_five_lemma_ladder(cfg, rng, node)
    square = rng.randrange(4)
    model.ladders[f"noncommuting_{square}"] = gen_noncommuting_five_lemma_ladder(
        cfg, rng, square
    )
    return model


def _numbered_ladder(model: Model, prefix: str) -> tuple[int, LadderDiagram]:
    for name, ladder in model.ladders.items():
        if match := re.fullmatch(rf"{prefix}_([0-9]+)", name):
            return int(match.group(1)), ladder
    raise InstanceError("five", f"model has no '{prefix}_<n>' ladder")


def _five_middle(model: Model) -> str | None:
    report = five_lemma_verify(model.ladders["L"])
    if not report.hypotheses_hold:
        return f"hypotheses violated: {'; '.join(report.violations)}"
    if not report.middle_isomorphism:
        return "middle vertical is not an isomorphism"
    return None


def _five_violations(model: Model) -> str | None:
    ladder = model.ladders["Z"]
    report = five_lemma_verify(ladder)
    # A zero vertical is an isomorphism exactly on a trivial node
    expected = [
        f"vertical {k} is not an isomorphism"
        for k in (0, 1, 3, 4)
        if not ladder.top.groups[k].is_trivial()
    ]
    return _expect_violations(report, expected)


def _expect_violations(report: FiveLemmaReport, expected: list[str]) -> str | None:
    if report.violations != expected:
        return f"reported {report.violations}, expected {expected}"
    if expected and report.middle_isomorphism is not None:
        return "middle isomorphism asserted despite violated hypotheses"
    return None


def _five_inexact_named(model: Model) -> str | None:
    node, ladder = _numbered_ladder(model, "inexact_at")
    return _expect_violations(
        five_lemma_verify(ladder),
        [f"top row not exact at node {node}", f"bottom row not exact at node {node}"],
    )


def _five_noncommuting_named(model: Model) -> str | None:
    square, ladder = _numbered_ladder(model, "noncommuting")
    return _expect_violations(
        five_lemma_verify(ladder), [f"square {square} does not commute"]
    )


################################################################################
# K-group ladders
################################################################################


def _ladder(model: Model) -> KLadder:
    if "K" in model.k_ladders:
        return model.k_ladders["K"]
    if len(model.k_ladders) == 1:
        return next(iter(model.k_ladders.values()))
    raise InstanceError("ladder", "expected exactly one K-group ladder")


def _generate_ladder(cfg: TrialConfig, rng: random.Random) -> Model:
    return Model(k_ladders={"K": gen_random_ladder(cfg, rng)})


def _generate_excisive(cfg: TrialConfig, rng: random.Random) -> Model:
    return Model(k_ladders={"K": gen_excisive_ladder(cfg, rng)})


def _weibel_exact(model: Model) -> str | None:
    weibel = analyse_ladder(_ladder(model)).weibel
    if not weibel.exact:
        return f"not exact at {[n.node for n in weibel.report.failures()]}"
    return None


def _quo_k_agree(model: Model) -> str | None:
    quo = analyse_ladder(_ladder(model)).quo_k
    if not hom_classify(quo.comparison).isomorphism:
        return "pushout and quotient are not isomorphic"
    return None


def _sub_k_agree(model: Model) -> str | None:
    sub = analyse_ladder(_ladder(model)).sub_k
    if not subgroup_equal(sub.subgroup, sub.preimage):
        return "pullback and preimage differ"
    return None


def _mv2_exact(model: Model) -> str | None:
    mv2 = analyse_ladder(_ladder(model)).mv2
    if not mv2.exact:
        return f"not exact at {[n.node for n in mv2.report.failures()]}"
    return None


def _relabeling(model: Model) -> str | None:
    k = _ladder(model)
    # Seeded from the instance alone so that replays draw the same relabeling
    a_isos, b_isos = random_relabeling(k, random.Random(str(k.verticals)))
    witnesses = relabel_witnesses(k, a_isos, b_isos)
    if not witnesses.all_isomorphisms:
        return "relabeling changed quo-K, sub-K or X"
    return None


def _phi_check(name: str) -> Property:
    def check(model: Model) -> str | None:
        checks = analyse_ladder(_ladder(model)).x.checks
        return None if getattr(checks, name) else f"{name.replace('_', ' ')} failed"

    return check


def _classical(model: Model) -> str | None:
    comparison = compare_with_classical(_ladder(model))
    if not comparison.window.exact:
        return "classical window is not exact"
    if not comparison.phi_isomorphism:
        return "phi is not an isomorphism"
    if not comparison.squares_commute:
        return "mv2 does not map onto the classical window"
    return None


def _excision_degenerates(model: Model) -> str | None:
    analysis = analyse_ladder(_ladder(model))
    if not analysis.relative_quotient.excision_kernel.group.is_trivial():
        return "excision kernel is not trivial"
    if not hom_classify(analysis.quo_k.pi).isomorphism:
        return "K_i(A) -> quo-K is not an isomorphism"
    if not subgroup_equal(analysis.sub_k.subgroup, full_subgroup(analysis.sub_k.subgroup.ambient)):
        return "sub-K is not all of K_{i+1}(B/I)"
    return None


def _birelative_split(model: Model) -> str | None:
    k = _ladder(model)
    report = check_birelative(k, split_birelative_data(k))
    if not report.passed:
        failed = [name for name, ok in report._asdict().items() if ok is False]
        return f"failed checks: {', '.join(failed)}"
    return None


def _birelative_mismatch(model: Model) -> str | None:
    k = _ladder(model)
    data = split_birelative_data(k)
    bigger = direct_sum(k.eps.src, free_group(1)).group
    bad = BirelativeData(data.group, zero_hom(data.group, bigger), data.from_cokernel)
    try:
        check_birelative(k, bad)
    except BirelativeEndpointError:
        return None
    return "mismatched endpoint accepted"


def _ladder_facts(model: Model) -> dict[str, str]:
    a = analyse_ladder(_ladder(model))
    return {
        "excision_kernel": str(a.relative_quotient.excision_kernel.group),
        "quo_k": str(a.quo_k.group),
        "sub_k": str(a.sub_k.group),
        "weibel": " -> ".join(str(t) for t in a.weibel.terms),
    }


def _mv2_facts(model: Model) -> dict[str, str]:
    a = analyse_ladder(_ladder(model))
    return {
        "x": str(a.x.group),
        "mv2": " -> ".join(str(t) for t in a.mv2.terms),
    }


def _phi_facts(model: Model) -> dict[str, str]:
    a = analyse_ladder(_ladder(model))
    return {
        "x": str(a.x.group),
        "phi_kernel": str(kernel(a.x.phi).group),
        "phi_image": str(image(a.x.phi).group),
    }


################################################################################
# Generator soundness
################################################################################


def _generate_everything(cfg: TrialConfig, rng: random.Random) -> Model:
    g, h = gen_random_group(cfg, rng), gen_random_group(cfg, rng)
    return Model(
        homs={"f": gen_random_hom(g, h, rng)},
        rows={"R": gen_random_exact_row(cfg, rng)},
        k_ladders={"K": gen_random_ladder(cfg, rng)},
    )


def _row_exact(model: Model) -> str | None:
    report = check_row_exact(_row(model))
    return None if report.exact else str(report)


def _ladder_valid(model: Model) -> str | None:
    report = validate_ladder(_ladder(model))
    return None if report.valid else "; ".join(report.violations())


################################################################################
# Registry
################################################################################


SUITES: dict[str, Suite] = {
    suite.name: suite
    for suite in [
        Suite(
            "snf",
            "Hermite and Smith normal forms, kernels and solving",
            _generate_matrix,
            {
                "snf-transform": _snf_transform,
                "snf-unimodular": _snf_unimodular,
                "snf-divisibility": _snf_divisibility,
                "snf-rank": _snf_rank,
                "hnf-transform": _hnf_transform,
                "kernel-basis": _kernel_basis,
                "solve-linear": _solve_linear,
            },
        ),
        Suite(
            "group",
            "Canonical forms and the hom calculus",
            _generate_groups,
            {
                "presentation": _presentation,
                "well-defined": _well_defined,
                "associative": _associative,
                "first-isomorphism": _first_isomorphism,
                "kernel-order": _kernel_order,
            },
        ),
        Suite(
            "pullback",
            "Universal property of pullbacks",
            _generate_cospan,
            {
                "universal": _pullback_universal,
                "natural": _pullback_natural,
                "unique": _pullback_unique,
                "surjection-stable": _pullback_surjection_stable,
                "order": _pullback_order,
            },
        ),
        Suite(
            "pushout",
            "Universal property of pushouts",
            _generate_span,
            {
                "universal": _pushout_universal,
                "natural": _pushout_natural,
                "unique": _pushout_unique,
                "order": _pushout_order,
            },
        ),
        Suite(
            "prop21a",
            "Exactness is stable under pullback along an injection",
            _generate_subgroup_row,
            {
                "output-exact": _exact_output(stabilize_by_pullback, "i2"),
                "round-trip": _pullback_round_trip,
            },
        ),
        Suite(
            "prop21b",
            "Exactness is stable under pushout along a surjection",
            _generate_quotient_row,
            {
                "output-exact": _exact_output(stabilize_by_pushout, "pi1"),
                "round-trip": _pushout_round_trip,
            },
        ),
        Suite(
            "prop22a",
            "Exactness lifts through pushout along an injection",
            _generate_extension_row,
            {"output-exact": _exact_output(lift_by_pushout, "i1")},
        ),
        Suite(
            "prop22b",
            "Exactness lifts through pullback along a surjection",
            _generate_cover_row,
            {
                "output-exact": _exact_output(lift_by_pullback, "pi2"),
                "nonzero-c-fails": _lift_with_c,
            },
        ),
        Suite(
            "five",
            "The five lemma",
            _generate_five,
            {
                "middle-isomorphism": _five_middle,
                "violations-named": _five_violations,
                "inexact-row-named": _five_inexact_named,
                "noncommuting-square-named": _five_noncommuting_named,
            },
        ),
        Suite(
            "mv1",
            "The modified Mayer-Vietoris segment through sub-K and quo-K",
            _generate_ladder,
            {
                "weibel-exact": _weibel_exact,
                "quo-k-agree": _quo_k_agree,
                "sub-k-agree": _sub_k_agree,
            },
            _ladder_facts,
        ),
        Suite(
            "mv2",
            "The Mayer-Vietoris segment through X",
            _generate_ladder,
            {"mv2-exact": _mv2_exact, "relabeling": _relabeling},
            _mv2_facts,
        ),
        Suite(
            "phi",
            "Kernel and image of phi: X -> K_{i+1}(B/I)",
            _generate_ladder,
            {
                name.replace("_", "-"): _phi_check(name)
                for name in (
                    "kernel_is_alpha_image",
                    "kernel_embeds",
                    "image_is_sub_k",
                    "proj_sub_surjective",
                )
            },
            _phi_facts,
        ),
        Suite(
            "excision",
            "Degeneration to the classical sequence when excision holds",
            _generate_excisive,
            {
                "classical": _classical,
                "degenerates": _excision_degenerates,
            },
        ),
        Suite(
            "birelative-ses",
            "Birelative data built from the split extension",
            _generate_ladder,
            {
                "split-data": _birelative_split,
                "endpoint-mismatch": _birelative_mismatch,
            },
        ),
        Suite(
            "generators",
            "Soundness of the random generators",
            _generate_everything,
            {
                "hom-well-defined": _well_defined,
                "row-exact": _row_exact,
                "ladder-valid": _ladder_valid,
            },
        ),
    ]
}


def get_suite(name: str) -> Suite:
    try:
        return SUITES[name]
    except KeyError:
        raise UnknownSuiteError(name) from None


def run_suite(name: str, cfg: TrialConfig) -> ReportDocument:
    """
    Run every property of the named suite on cfg.trials seeded instances.
    The first failing instance of each property is kept as its counterexample.
    """
    suite = get_suite(name)
    LOGGER.info("Running suite %s (%d trials, seed %d)", name, cfg.trials, cfg.seed)
    start = time.monotonic()

    failures = dict.fromkeys(suite.properties, 0)
    first: dict[str, tuple[Model | None, str | None]] = {}
    for trial in range(cfg.trials):
        model = suite.generate(cfg, trial_rng(cfg, name, trial))
        for prop_name, prop in suite.properties.items():
            detail = _run_property(prop, model)
            if detail is None:
                continue
            LOGGER.warning("%s: %s failed on trial %d: %s", name, prop_name, trial, detail)
            failures[prop_name] += 1
            if prop_name not in first:
                model.comments = [
                    f"{name} suite, seed {cfg.seed}, trial {trial}",
                    f"property {prop_name}: {detail}",
                ]
                first[prop_name] = (model, detail)

    results = []
    for prop_name in suite.properties:
        counterexample, detail = first.get(prop_name, (None, None))
        results.append(
            PropertyResult(
                prop_name, cfg.trials, failures[prop_name], counterexample, detail
            )
        )
    doc = ReportDocument(name, cfg, results, duration=time.monotonic() - start)
    LOGGER.info(
        "Suite %s finished: %d of %d properties failed",
        name,
        len(doc.failures()),
        len(results),
    )
    return doc


def replay(name: str, model: Model, ladder: str | None = None) -> ReportDocument:
    """
    Run the named suite's properties on one model (e.g. a counterexample
    written by run_suite). When ladder is given, that K-group ladder of the
    model is the one examined.
    """
    suite = get_suite(name)
    if ladder is not None:
        if ladder not in model.k_ladders:
            raise InstanceError(name, f"no K-group ladder named '{ladder}'")
        model = Model(
            groups=model.groups,
            homs=model.homs,
            rows=model.rows,
            ladders=model.ladders,
            k_ladders={"K": model.k_ladders[ladder]},
            comments=model.comments,
        )
    start = time.monotonic()
    results = []
    for prop_name, prop in suite.properties.items():
        try:
            detail = _run_property(prop, model)
        except KeyError as exc:
            raise InstanceError(name, f"model has no {exc.args[0]!r}") from None
        results.append(
            PropertyResult(
                prop_name,
                1,
                int(detail is not None),
                model if detail is not None else None,
                detail,
            )
        )
    facts = {}
    if suite.facts is not None:
        try:
            facts = suite.facts(model)
        except CHECK_ERRORS as exc:
            LOGGER.warning("Could not compute facts: %s", exc)
    return ReportDocument(name, None, results, facts, time.monotonic() - start)
