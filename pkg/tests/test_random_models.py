from typing import Callable

import pytest

import random

import hypothesis
import hypothesis.strategies as strat

from sympy import Matrix

from mvkit.groups import group_from_invariants
from mvkit.homs import hom_classify, compose_homs, hom_equal, identity_hom
from mvkit.diagrams import (
    LadderDiagram,
    check_row_exact,
    check_ladder_squares,
    five_lemma_verify,
)
from mvkit.milnor import validate_ladder
from mvkit.random_models import (
    TrialConfig,
    TrialConfigError,
    TrialConfigTOMLDecodeError,
    trial_config_from_toml,
    trial_rng,
    complex_config,
    gen_random_matrix,
    gen_random_invariants,
    gen_random_group,
    gen_random_presentation,
    gen_random_hom,
    random_unimodular,
    random_isomorphism,
    gen_random_subgroup,
    gen_random_quotient,
    gen_random_complex,
    gen_random_exact_row,
    gen_random_four_term_row,
    ComplexMorphism,
    random_chain_map,
    ladder_from_morphism,
    gen_random_ladder,
    gen_excisive_ladder,
    random_relabeling,
    transport_row,
    gen_five_lemma_ladder,
    gen_degenerate_five_lemma_ladder,
    gen_inexact_five_lemma_ladder,
    gen_noncommuting_five_lemma_ladder,
)


SMALL = TrialConfig(max_order=8, max_rank=1, max_factors=2)

rngs = strat.randoms(use_true_random=False)


class TestTrialConfig:
    def test_defaults(self) -> None:
        cfg = TrialConfig()
        assert (cfg.seed, cfg.trials, cfg.max_order, cfg.max_rank, cfg.max_factors) == (
            42,
            500,
            64,
            2,
            3,
        )

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"seed": -1},
            {"seed": 2**64},
            {"trials": -1},
            {"max_order": 1},
            {"max_rank": -1},
            {"max_factors": -1},
        ],
    )
    def test_invalid(self, kwargs: dict[str, int]) -> None:
        with pytest.raises(TrialConfigError):
            TrialConfig(**kwargs)

    def test_zero_trials_allowed(self) -> None:
        assert TrialConfig(trials=0).trials == 0


class TestTrialConfigFromToml:
    def test_empty(self) -> None:
        assert trial_config_from_toml("") == TrialConfig()

    def test_table(self) -> None:
        cfg = trial_config_from_toml("[trials]\nseed = 7\nmax_order = 16\n")
        assert cfg == TrialConfig(seed=7, max_order=16)

    def test_overrides(self) -> None:
        cfg = trial_config_from_toml(
            "[trials]\nseed = 7\ntrials = 10\n", seed=9, trials=None
        )
        assert cfg.seed == 9
        assert cfg.trials == 10

    def test_other_tables_ignored(self) -> None:
        assert trial_config_from_toml("[other]\nx = 'y'\n") == TrialConfig()

    @pytest.mark.parametrize(
        "text, message",
        [
            ("[trials]\ncolour = 3\n", "unknown [trials] keys: colour"),
            ("[trials]\nseed = 'seven'\n", "[trials] seed must be an integer"),
            ("[trials]\nseed = true\n", "[trials] seed must be an integer"),
            ("trials = 3\n", "[trials] must be a table"),
            ("[trials]\nseed = -3\n", "seed must be a 64-bit unsigned integer, not -3"),
        ],
    )
    def test_invalid(self, text: str, message: str) -> None:
        with pytest.raises(TrialConfigError) as exc_info:
            trial_config_from_toml(text)
        assert str(exc_info.value) == message

    def test_bad_toml(self) -> None:
        with pytest.raises(TrialConfigTOMLDecodeError) as exc_info:
            trial_config_from_toml("[trials\n")
        assert str(exc_info.value).startswith("invalid configuration file: ")


class TestTrialRng:
    def test_reproducible(self) -> None:
        cfg = TrialConfig(seed=3)
        a = trial_rng(cfg, "mv2", 5).random()
        b = trial_rng(cfg, "mv2", 5).random()
        assert a == b

    @pytest.mark.parametrize(
        "seed, suite, trial", [(4, "mv2", 5), (3, "mv1", 5), (3, "mv2", 6)]
    )
    def test_independent(self, seed: int, suite: str, trial: int) -> None:
        base = trial_rng(TrialConfig(seed=3), "mv2", 5).random()
        assert trial_rng(TrialConfig(seed=seed), suite, trial).random() != base

    def test_complex_config(self) -> None:
        cfg = complex_config(TrialConfig(max_order=32, max_rank=2, max_factors=3))
        assert (cfg.max_order, cfg.max_rank, cfg.max_factors) == (32, 1, 2)


class TestGroupsAndHoms:
    @hypothesis.given(rngs)
    def test_matrix_bounds(self, rng: random.Random) -> None:
        m = gen_random_matrix(rng, max_dim=3, max_entry=5)
        assert 1 <= m.rows <= 3 and 1 <= m.cols <= 3
        assert all(abs(m[i, j]) <= 5 for i in range(m.rows) for j in range(m.cols))

    @hypothesis.given(rngs)
    def test_invariants_canonical(self, rng: random.Random) -> None:
        invariants = gen_random_invariants(SMALL, rng)
        g = group_from_invariants(invariants)
        assert list(g.invariants) == invariants
        assert all(d <= SMALL.max_order for d in g.torsion)
        assert len(g.torsion) <= SMALL.max_factors
        assert g.free_rank <= SMALL.max_rank

    @hypothesis.given(rngs)
    def test_presentation(self, rng: random.Random) -> None:
        g = gen_random_presentation(rng)
        assert g.nfactors <= g.ngens <= 4

    @hypothesis.given(rngs)
    def test_hom(self, rng: random.Random) -> None:
        # make_hom checks well-definedness
        src = gen_random_group(SMALL, rng)
        tgt = gen_random_group(SMALL, rng)
        h = gen_random_hom(src, tgt, rng)
        assert (h.src, h.tgt) == (src, tgt)

    @hypothesis.given(strat.integers(0, 5), rngs)
    def test_unimodular(self, n: int, rng: random.Random) -> None:
        u = random_unimodular(n, rng)
        assert u.shape == (n, n)
        if n:
            assert abs(Matrix(u.rows_list()).det()) == 1

    @hypothesis.given(rngs)
    def test_isomorphism(self, rng: random.Random) -> None:
        g = gen_random_group(SMALL, rng)
        assert hom_classify(random_isomorphism(g, rng)).isomorphism

    @hypothesis.given(rngs)
    def test_subgroup_and_quotient(self, rng: random.Random) -> None:
        g = gen_random_group(SMALL, rng)
        s = gen_random_subgroup(g, SMALL, rng)
        assert s.ambient == g
        assert hom_classify(s.incl).injective
        q = gen_random_quotient(g, SMALL, rng)
        assert q.src == g
        assert hom_classify(q).surjective


class TestRows:
    @hypothesis.given(rngs)
    def test_exact_row(self, rng: random.Random) -> None:
        row = gen_random_exact_row(SMALL, rng)
        assert row.nodes == 6
        assert check_row_exact(row).exact

    @hypothesis.given(rngs)
    def test_four_term_row(self, rng: random.Random) -> None:
        row = gen_random_four_term_row(SMALL, rng)
        assert row.nodes == 4
        assert check_row_exact(row).exact

    @hypothesis.given(rngs)
    def test_differential_blocks(self, rng: random.Random) -> None:
        c = gen_random_complex(SMALL, rng)
        d = c.differential
        assert hom_equal(compose_homs(c.sum0.pr1, d, c.sum1.in1), c.d_sub)
        assert hom_equal(compose_homs(c.sum0.pr2, d, c.sum1.in2), c.d_quo)
        assert hom_equal(compose_homs(c.sum0.pr1, d, c.sum1.in2), c.kappa)
        assert compose_homs(c.sum0.pr2, d, c.sum1.in1).is_zero()

    def test_kappa_endpoints(self) -> None:
        c = gen_random_complex(SMALL, random.Random(1))
        with pytest.raises(ValueError):
            type(c)(c.d_sub, c.d_quo, identity_hom(group_from_invariants([9])))


class TestChainMaps:
    @hypothesis.given(rngs)
    def test_identity_and_zero(self, rng: random.Random) -> None:
        c = gen_random_complex(SMALL, rng)
        d = gen_random_complex(SMALL, rng)
        assert ComplexMorphism.identity(c).is_chain_map()
        assert ComplexMorphism.zero(c, d).is_chain_map()

    @hypothesis.settings(max_examples=20)
    @hypothesis.given(rngs)
    def test_random_chain_map(self, rng: random.Random) -> None:
        c = gen_random_complex(SMALL, rng)
        d = gen_random_complex(SMALL, rng)
        f = random_chain_map(c, d, rng)
        assert f.is_chain_map()
        assert validate_ladder(ladder_from_morphism(f)).valid

    @hypothesis.settings(max_examples=20)
    @hypothesis.given(rngs)
    def test_identity_ladder(self, rng: random.Random) -> None:
        k = ladder_from_morphism(ComplexMorphism.identity(gen_random_complex(SMALL, rng)), 2)
        assert k.degree == 2
        assert k.a_row == k.b_row
        assert all(hom_classify(v).isomorphism for v in k.verticals)


class TestLadders:
    @hypothesis.settings(max_examples=20)
    @hypothesis.given(rngs)
    def test_random_ladder(self, rng: random.Random) -> None:
        k = gen_random_ladder(SMALL, rng)
        assert 0 <= k.degree <= 3
        assert validate_ladder(k).valid

    @hypothesis.settings(max_examples=20)
    @hypothesis.given(rngs)
    def test_excisive_ladder(self, rng: random.Random) -> None:
        k = gen_excisive_ladder(SMALL, rng)
        assert validate_ladder(k).valid
        assert all(hom_classify(v).isomorphism for v in k.verticals)

    @hypothesis.settings(max_examples=20)
    @hypothesis.given(rngs)
    def test_relabeling(self, rng: random.Random) -> None:
        k = gen_random_ladder(SMALL, rng)
        a_isos, b_isos = random_relabeling(k, rng)
        assert [t.src for t in a_isos] == list(k.a_row.groups)
        assert [t.src for t in b_isos] == list(k.b_row.groups)
        assert all(hom_classify(t).isomorphism for t in a_isos + b_isos)

    @pytest.mark.parametrize("seed", range(5))
    def test_zero_draws_fall_back_to_identity(
        self, seed: int, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        monkeypatch.setattr(
            "mvkit.random_models.random_chain_map",
            lambda c, d, rng: ComplexMorphism.zero(c, d),
        )
        k = gen_random_ladder(SMALL, random.Random(seed), attempts=3)
        assert validate_ladder(k).valid
        assert k.a_row == k.b_row
        assert all(hom_equal(v, identity_hom(v.src)) for v in k.verticals)

    def test_deterministic(self) -> None:
        a = gen_random_ladder(TrialConfig(), trial_rng(TrialConfig(), "mv2", 0))
        b = gen_random_ladder(TrialConfig(), trial_rng(TrialConfig(), "mv2", 0))
        assert a == b


class TestFiveLemmaLadders:
    @hypothesis.given(rngs)
    def test_transport_row(self, rng: random.Random) -> None:
        row = gen_random_four_term_row(SMALL, rng)
        ladder = transport_row(row, [random_isomorphism(g, rng) for g in row.groups])
        assert all(s.commutes for s in check_ladder_squares(ladder))
        assert check_row_exact(ladder.bottom).exact

    @hypothesis.given(rngs)
    def test_five_lemma_ladder(self, rng: random.Random) -> None:
        report = five_lemma_verify(gen_five_lemma_ladder(SMALL, rng))
        assert report.hypotheses_hold
        assert report.middle_isomorphism

    @hypothesis.given(rngs)
    def test_degenerate(self, rng: random.Random) -> None:
        ladder = gen_degenerate_five_lemma_ladder(SMALL, rng)
        report = five_lemma_verify(ladder)
        exp = [
            f"vertical {k} is not an isomorphism"
            for k in (0, 1, 3, 4)
            if not ladder.top.groups[k].is_trivial()
        ]
        assert report.violations == exp

    @hypothesis.given(rngs, strat.integers(1, 3))
    def test_inexact(self, rng: random.Random, node: int) -> None:
        ladder = gen_inexact_five_lemma_ladder(SMALL, rng, node)
        assert all(s.commutes for s in check_ladder_squares(ladder))
        assert all(hom_classify(v).isomorphism for v in ladder.verticals)
        for row in (ladder.top, ladder.bottom):
            assert [n.node for n in check_row_exact(row).failures()] == [node]

    @hypothesis.given(rngs, strat.integers(0, 3))
    def test_noncommuting(self, rng: random.Random, square: int) -> None:
        ladder = gen_noncommuting_five_lemma_ladder(SMALL, rng, square)
        assert check_row_exact(ladder.top).exact
        assert all(hom_classify(v).isomorphism for v in ladder.verticals)
        assert [s.square for s in check_ladder_squares(ladder) if not s.commutes] == [
            square
        ]

    @pytest.mark.parametrize(
        "gen, position",
        [
            (gen_inexact_five_lemma_ladder, 0),
            (gen_inexact_five_lemma_ladder, 4),
            (gen_noncommuting_five_lemma_ladder, 4),
        ],
    )
    def test_position_out_of_range(
        self, gen: Callable[..., LadderDiagram], position: int
    ) -> None:
        with pytest.raises(ValueError):
            gen(SMALL, random.Random(0), position)
