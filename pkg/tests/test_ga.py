"""Genetic algorithm: presets, operator closure, selection pressure, runs."""

import random

import pytest

from dsmseq import (
    GaConfig,
    order_crossover,
    pmx_crossover,
    preset_config,
    run_ga,
    shuffle_mutation,
    tournament_select,
)
from conftest import adjacency, make_case, naive_score

LETTERS = tuple("abcdefgh")


def chain_matrix(n=7):
    return adjacency(make_case(n, [(i + 1, i) for i in range(n - 1)]))


def cycle_matrix():
    return adjacency(make_case(3, [(1, 0), (2, 1), (0, 2)]))


class FakeRng:
    """Scripted stand-in for random.Random, for pinning operator internals."""

    def __init__(self, sample_result=None, randrange_results=None):
        self._sample = sample_result
        self._randrange = list(randrange_results or [])

    def sample(self, population, k):
        assert k == len(self._sample)
        return list(self._sample)

    def randrange(self, n):
        return self._randrange.pop(0)


class TestPresets:
    @pytest.mark.parametrize(
        "name, pop, indpb, tournament, cxpb, mutpb",
        [
            ("exploration", 50, 0.05, 5, 0.6, 0.4),
            ("exploitation", 10, 0.01, 20, 0.9, 0.1),
            ("balanced", 20, 0.02, 10, 0.7, 0.3),
        ],
    )
    def test_tuned_values(self, name, pop, indpb, tournament, cxpb, mutpb):
        cfg = preset_config(name, seed=7)
        assert cfg.population_size == pop
        assert cfg.indpb == indpb
        assert cfg.tournament_size == tournament
        assert cfg.cxpb == cxpb
        assert cfg.mutpb == mutpb
        assert cfg.generations == 2000
        assert cfg.seed == 7
        assert cfg.crossover == "ox"

    def test_unknown_preset(self):
        with pytest.raises(ValueError, match="unknown preset"):
            preset_config("chaotic")

    def test_generation_override(self):
        assert preset_config("balanced", generations=50).generations == 50


class TestConfigValidation:
    def test_population_floor(self):
        with pytest.raises(ValueError, match="population_size"):
            GaConfig(population_size=1, generations=10, indpb=0.1, tournament_size=2, cxpb=0.5, mutpb=0.5)

    def test_generation_floor(self):
        with pytest.raises(ValueError, match="generations"):
            GaConfig(population_size=4, generations=0, indpb=0.1, tournament_size=2, cxpb=0.5, mutpb=0.5)

    @pytest.mark.parametrize("field, value", [("indpb", -0.1), ("cxpb", 1.5), ("mutpb", 2.0)])
    def test_probability_bounds(self, field, value):
        kwargs = dict(population_size=4, generations=10, indpb=0.1, tournament_size=2, cxpb=0.5, mutpb=0.5)
        kwargs[field] = value
        with pytest.raises(ValueError, match=field):
            GaConfig(**kwargs)

    def test_tournament_floor(self):
        with pytest.raises(ValueError, match="tournament_size"):
            GaConfig(population_size=4, generations=10, indpb=0.1, tournament_size=0, cxpb=0.5, mutpb=0.5)

    def test_crossover_name(self):
        with pytest.raises(ValueError, match="crossover"):
            GaConfig(population_size=4, generations=10, indpb=0.1, tournament_size=2, cxpb=0.5, mutpb=0.5, crossover="uniform")


class TestMutation:
    def test_zero_rate_is_identity(self):
        rng = random.Random(0)
        assert shuffle_mutation(LETTERS, 0.0, rng) == LETTERS

    def test_always_a_permutation(self):
        rng = random.Random(1)
        for _ in range(200):
            out = shuffle_mutation(LETTERS, 1.0, rng)
            assert sorted(out) == sorted(LETTERS)

    def test_deterministic_under_seed(self):
        a = shuffle_mutation(LETTERS, 0.5, random.Random(9))
        b = shuffle_mutation(LETTERS, 0.5, random.Random(9))
        assert a == b

    def test_swap_partner_is_never_self(self):
        # with two positions, a triggered swap must exchange them
        out = shuffle_mutation(("x", "y"), 1.0, FakeRngAlwaysSwap())
        assert out in (("x", "y"), ("y", "x"))
        assert sorted(out) == ["x", "y"]


class FakeRngAlwaysSwap:
    """random() below any threshold; randrange picks 0."""

    def random(self):
        return 0.0

    def randrange(self, n):
        return 0


class TestOrderCrossover:
    def test_hand_worked_slice(self):
        p1 = tuple("abcdefgh")
        p2 = tuple("hgfedcba")
        c1, c2 = order_crossover(p1, p2, FakeRng(sample_result=[2, 4]))
        assert c1 == tuple("gfcdebah")
        assert c2 == tuple("bcfedgha")

    def test_children_are_permutations(self):
        rng = random.Random(3)
        ids = [f"v{i:02d}" for i in range(9)]
        for _ in range(200):
            p1 = tuple(rng.sample(ids, 9))
            p2 = tuple(rng.sample(ids, 9))
            c1, c2 = order_crossover(p1, p2, rng)
            assert sorted(c1) == sorted(ids)
            assert sorted(c2) == sorted(ids)

    def test_equal_parents_reproduce(self):
        rng = random.Random(5)
        parent = tuple(rng.sample(list(LETTERS), len(LETTERS)))
        c1, c2 = order_crossover(parent, parent, rng)
        assert c1 == parent and c2 == parent

    def test_two_gene_parents(self):
        c1, c2 = order_crossover(("x", "y"), ("y", "x"), random.Random(0))
        assert sorted(c1) == ["x", "y"]
        assert sorted(c2) == ["x", "y"]

    def test_mismatched_parents_rejected(self):
        with pytest.raises(ValueError, match="permutations"):
            order_crossover(("a", "b"), ("a", "c"), random.Random(0))


class TestPmxCrossover:
    def test_children_are_permutations(self):
        rng = random.Random(11)
        ids = [f"v{i:02d}" for i in range(9)]
        for _ in range(200):
            p1 = tuple(rng.sample(ids, 9))
            p2 = tuple(rng.sample(ids, 9))
            c1, c2 = pmx_crossover(p1, p2, rng)
            assert sorted(c1) == sorted(ids)
            assert sorted(c2) == sorted(ids)

    def test_equal_parents_reproduce(self):
        rng = random.Random(13)
        parent = tuple(rng.sample(list(LETTERS), len(LETTERS)))
        c1, c2 = pmx_crossover(parent, parent, rng)
        assert c1 == parent and c2 == parent

    def test_deterministic_under_seed(self):
        p1 = tuple("abcdefgh")
        p2 = tuple("cadbfehg")
        first = pmx_crossover(p1, p2, random.Random(2))
        second = pmx_crossover(p1, p2, random.Random(2))
        assert first == second

    def test_mismatched_parents_rejected(self):
        with pytest.raises(ValueError, match="permutations"):
            pmx_crossover(("a", "b", "c"), ("a", "b", "d"), random.Random(0))


class TestTournament:
    def test_size_one_is_a_uniform_pick(self):
        pop = [(("a",), 5), (("b",), 1), (("c",), 3)]
        rng = random.Random(0)
        seen = {tournament_select(pop, 1, rng) for _ in range(200)}
        assert seen == {("a",), ("b",), ("c",)}

    def test_large_tournament_finds_the_best(self):
        pop = [((f"s{i}",), score) for i, score in enumerate([9, 4, 7, 0, 6])]
        rng = random.Random(1)
        for _ in range(50):
            assert tournament_select(pop, 60, rng) == ("s3",)

    def test_tie_keeps_first_sampled(self):
        pop = [(("first",), 2), (("second",), 2)]
        winner = tournament_select(pop, 2, FakeRng(randrange_results=[1, 0]))
        assert winner == ("second",)

    def test_oversized_tournament_allowed(self):
        pop = [(("a",), 1), (("b",), 0)]
        assert tournament_select(pop, 10, random.Random(3)) == ("b",)


class TestRunGa:
    def test_solves_an_acyclic_network(self):
        matrix = chain_matrix(7)
        cfg = preset_config("balanced", seed=3, generations=300)
        best, convergence = run_ga(matrix, cfg, stop_score=0)
        assert best.score == 0
        assert best.source == "ga"
        assert sorted(best.sequence) == sorted(matrix.ids)
        assert convergence[-1][1] == 0

    def test_cycle_floor_is_one(self):
        best, _ = run_ga(cycle_matrix(), preset_config("exploitation", seed=0, generations=50), stop_score=1)
        assert best.score == 1

    def test_score_agrees_with_independent_count(self):
        case = make_case(8, [(i + 1, i) for i in range(7)] + [(0, 7), (3, 6)])
        cfg = preset_config("exploration", seed=2, generations=20)
        best, _ = run_ga(adjacency(case), cfg)
        assert best.score == naive_score(case, best.sequence)

    def test_convergence_series_shape(self):
        cfg = preset_config("balanced", seed=5, generations=60)
        _, convergence = run_ga(chain_matrix(8), cfg)
        for (x0, y0), (x1, y1) in zip(convergence, convergence[1:]):
            assert x1 > x0
            assert y1 <= y0
        # a repeated score is only legal as the terminal extent marker
        repeats = [
            i
            for i in range(1, len(convergence))
            if convergence[i][1] == convergence[i - 1][1]
        ]
        assert repeats in ([], [len(convergence) - 1])

    def test_unique_counter_bounds(self):
        cfg = preset_config("balanced", seed=8, generations=40)
        _, convergence = run_ga(chain_matrix(6), cfg)
        evaluated = convergence[-1][0]
        assert 1 <= evaluated <= cfg.population_size * (cfg.generations + 1)

    def test_deterministic_runs(self):
        cfg = preset_config("exploration", seed=12, generations=30)
        assert run_ga(chain_matrix(6), cfg) == run_ga(chain_matrix(6), cfg)

    def test_seed_changes_the_search(self):
        a = run_ga(chain_matrix(6), preset_config("balanced", seed=1, generations=30))
        b = run_ga(chain_matrix(6), preset_config("balanced", seed=2, generations=30))
        assert a != b

    def test_stop_score_short_circuits(self):
        matrix = chain_matrix(6)
        cfg = preset_config("balanced", seed=4, generations=2000)
        best, convergence = run_ga(matrix, cfg, stop_score=0)
        assert best.score == 0
        # far fewer evaluations than the full budget would allow
        assert convergence[-1][0] < cfg.population_size * (cfg.generations + 1) / 10

    def test_pmx_variant_runs(self):
        cfg = GaConfig(
            population_size=12,
            generations=80,
            indpb=0.05,
            tournament_size=4,
            cxpb=0.8,
            mutpb=0.3,
            seed=6,
            crossover="pmx",
        )
        best, _ = run_ga(chain_matrix(5), cfg, stop_score=0)
        assert sorted(best.sequence) == sorted(chain_matrix(5).ids)
        assert best.score >= 0
