"""Permutation genetic algorithm: tournament selection, ordered crossover,
shuffle-index mutation, plain generational replacement (no elitism)."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .model import AdjacencyMatrix
from .scoring import score_sequence
from .solutions import SolutionRecord

GENERATIONS_DEFAULT = 2000


@dataclass(frozen=True)
class GaConfig:
    population_size: int
    generations: int
    indpb: float
    tournament_size: int
    cxpb: float
    mutpb: float
    seed: int = 0
    crossover: str = "ox"  # "ox" or "pmx"

    def __post_init__(self) -> None:
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        for name in ("indpb", "cxpb", "mutpb"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if self.tournament_size < 1:
            # larger than the population is fine: sampling is with replacement
            raise ValueError("tournament_size must be >= 1")
        if self.crossover not in ("ox", "pmx"):
            raise ValueError(f"crossover must be 'ox' or 'pmx', got {self.crossover!r}")


# population / indpb / tournament size / cxpb / mutpb
_PRESETS = {
    "exploration": (50, 0.05, 5, 0.6, 0.4),
    "exploitation": (10, 0.01, 20, 0.9, 0.1),
    "balanced": (20, 0.02, 10, 0.7, 0.3),
}


def preset_config(name: str, seed: int = 0, generations: int = GENERATIONS_DEFAULT) -> GaConfig:
    """One of the three tuned presets: exploration, exploitation, balanced."""
    if name not in _PRESETS:
        raise ValueError(f"unknown preset {name!r}, expected one of {sorted(_PRESETS)}")
    pop, indpb, tourn, cxpb, mutpb = _PRESETS[name]
    return GaConfig(
        population_size=pop,
        generations=generations,
        indpb=indpb,
        tournament_size=tourn,
        cxpb=cxpb,
        mutpb=mutpb,
        seed=seed,
    )


def tournament_select(scored_pop: list[tuple[tuple[str, ...], int]], k: int, rng: random.Random) -> tuple[str, ...]:
    """Sample k entrants uniformly with replacement, return the lowest score."""
    best = None
    for _ in range(k):
        candidate = scored_pop[rng.randrange(len(scored_pop))]
        if best is None or candidate[1] < best[1]:
            best = candidate
    return best[0]


def shuffle_mutation(seq, indpb: float, rng: random.Random) -> tuple[str, ...]:
    """Each position independently swaps with another uniform position with
    probability indpb. Always returns a permutation of the input."""
    out = list(seq)
    n = len(out)
    for i in range(n):
        if rng.random() < indpb:
            j = rng.randrange(n - 1)
            if j >= i:
                j += 1
            out[i], out[j] = out[j], out[i]
    return tuple(out)


def order_crossover(p1, p2, rng: random.Random) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Ordered crossover: keep a contiguous slice of one parent, fill the
    remaining positions in the other parent's relative order, wrapping past
    the slice end."""
    p1, p2 = tuple(p1), tuple(p2)
    if set(p1) != set(p2) or len(p1) != len(p2):
        raise ValueError("parents must be permutations of the same node set")
    n = len(p1)
    if n < 2:
        return p1, p2
    a, b = sorted(rng.sample(range(n), 2))

    def ox(keep, other):
        child: list = [None] * n
        child[a : b + 1] = keep[a : b + 1]
        used = set(keep[a : b + 1])
        fill = [g for i in range(n) if (g := other[(b + 1 + i) % n]) not in used]
        for offset, gene in enumerate(fill):
            child[(b + 1 + offset) % n] = gene
        return tuple(child)

    return ox(p1, p2), ox(p2, p1)


def pmx_crossover(p1, p2, rng: random.Random) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Partially matched crossover on a random slice."""
    p1, p2 = list(p1), list(p2)
    if set(p1) != set(p2) or len(p1) != len(p2):
        raise ValueError("parents must be permutations of the same node set")
    n = len(p1)
    if n < 2:
        return tuple(p1), tuple(p2)
    a, b = sorted(rng.sample(range(n), 2))
    c1, c2 = p1[:], p2[:]
    pos1 = {g: i for i, g in enumerate(c1)}
    pos2 = {g: i for i, g in enumerate(c2)}
    for i in range(a, b + 1):
        g1, g2 = c1[i], c2[i]
        j1, j2 = pos1[g2], pos2[g1]
        c1[i], c1[j1] = g2, g1
        c2[i], c2[j2] = g1, g2
        pos1[g1], pos1[g2] = j1, i
        pos2[g2], pos2[g1] = j2, i
    return tuple(c1), tuple(c2)


def run_ga(
    matrix: AdjacencyMatrix,
    cfg: GaConfig,
    stop_score: int | None = None,
) -> tuple[SolutionRecord, list[tuple[int, int]]]:
    """Generational GA over permutations of the matrix's node ids.

    Returns the best record found and a compact convergence series of
    (unique_count, best_score) change points: one point when the first
    individual is scored and one per strict improvement, each stamped with
    the number of distinct permutations evaluated so far. stop_score, when
    given, ends the run as soon as best <= stop_score (the series still
    reflects everything evaluated).
    """
    rng = random.Random(cfg.seed)
    ids = list(matrix.ids)
    n = len(ids)
    crossover = order_crossover if cfg.crossover == "ox" else pmx_crossover

    score_cache: dict[tuple[str, ...], int] = {}
    unique_count = 0
    best_seq: tuple[str, ...] | None = None
    best_score: int | None = None
    best_generation = 0
    convergence: list[tuple[int, int]] = []

    def evaluate(individual: tuple[str, ...], generation: int) -> int:
        nonlocal unique_count, best_seq, best_score, best_generation
        cached = score_cache.get(individual)
        if cached is not None:
            return cached
        score = score_sequence(matrix, individual)
        score_cache[individual] = score
        unique_count += 1
        if best_score is None or score < best_score:
            best_seq, best_score, best_generation = individual, score, generation
            convergence.append((unique_count, score))
        return score

    population = [tuple(rng.sample(ids, n)) for _ in range(cfg.population_size)]
    scores = [evaluate(ind, 0) for ind in population]

    for generation in range(1, cfg.generations + 1):
        if stop_score is not None and best_score is not None and best_score <= stop_score:
            break
        scored = list(zip(population, scores))
        offspring = [
            tournament_select(scored, cfg.tournament_size, rng)
            for _ in range(cfg.population_size)
        ]
        for i in range(0, cfg.population_size - 1, 2):
            if rng.random() < cfg.cxpb:
                offspring[i], offspring[i + 1] = crossover(offspring[i], offspring[i + 1], rng)
        for i in range(cfg.population_size):
            if rng.random() < cfg.mutpb:
                offspring[i] = shuffle_mutation(offspring[i], cfg.indpb, rng)
        population = offspring
        scores = [evaluate(ind, generation) for ind in population]

    best = SolutionRecord(
        sequence=best_seq,
        score=best_score,
        iteration_found=best_generation,
        source="ga",
    )
    if not convergence or convergence[-1] != (unique_count, best_score):
        convergence.append((unique_count, best_score))
    return best, convergence
