"""Archive of explored sequences with sampling and termination logic."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .model import VALID_SOURCES, AdjacencyMatrix
from .scoring import score_sequence


@dataclass(frozen=True)
class SolutionRecord:
    sequence: tuple[str, ...]
    score: int
    iteration_found: int
    source: str

    def __post_init__(self) -> None:
        if self.source not in VALID_SOURCES:
            raise ValueError(f"unknown source {self.source!r}, expected one of {VALID_SOURCES}")
        if self.score < 0:
            raise ValueError("score must be non-negative")


@dataclass(frozen=True)
class SamplingPolicy:
    """How many archive entries feed the prompt: k_p best plus k_q random."""

    k_p: int = 5
    k_q: int = 5

    def __post_init__(self) -> None:
        if self.k_p < 1:
            raise ValueError("k_p must be >= 1")
        if self.k_q < 0:
            raise ValueError("k_q must be >= 0")


@dataclass(frozen=True)
class TerminationPolicy:
    max_iterations: int = 20
    optimal_threshold: int | None = None

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


class SolutionBase:
    """Stores every distinct explored sequence with its verified score.

    Single-writer: the search loop inserts sequentially. Insertion order is
    remembered, and score ties are broken by it wherever ordering matters.
    """

    def __init__(self, matrix: AdjacencyMatrix):
        self._matrix = matrix
        self._records: list[SolutionRecord] = []
        self._seen: set[tuple[str, ...]] = set()

    def __len__(self) -> int:
        return len(self._records)

    @property
    def unique_count(self) -> int:
        return len(self._records)

    @property
    def records(self) -> tuple[SolutionRecord, ...]:
        return tuple(self._records)

    def insert(self, record: SolutionRecord) -> bool:
        """Add a record; returns False (and stores nothing) for a repeat sequence.

        The stored score must equal the evaluator's verdict on the sequence;
        a mismatch means the caller scored against the wrong matrix.
        """
        seq = tuple(record.sequence)
        actual = score_sequence(self._matrix, seq)  # also validates the permutation
        if actual != record.score:
            raise ValueError(
                f"record score {record.score} does not match evaluated score {actual}"
            )
        if seq in self._seen:
            return False
        self._seen.add(seq)
        self._records.append(record)
        return True

    def __contains__(self, sequence) -> bool:
        return tuple(sequence) in self._seen

    def best(self) -> SolutionRecord:
        if not self._records:
            raise ValueError("solution base is empty")
        return min(
            self._records,
            key=lambda r: (r.score, r.iteration_found, r.sequence),
        )

    def sample_for_prompt(
        self, policy: SamplingPolicy, rng: random.Random | int
    ) -> list[SolutionRecord]:
        """k_p best records plus k_q uniform picks from the rest, worst first.

        The returned list is ordered by descending score so the best
        precedent sits closest to the end of the prompt. Ties keep
        insertion order throughout.
        """
        if not self._records:
            raise ValueError("solution base is empty")
        if isinstance(rng, int):
            rng = random.Random(rng)
        ranked = sorted(
            range(len(self._records)), key=lambda i: (self._records[i].score, i)
        )
        top = ranked[: policy.k_p]
        rest = ranked[policy.k_p :]
        picked = rng.sample(rest, min(policy.k_q, len(rest)))
        chosen = [self._records[i] for i in top + picked]
        return sorted(chosen, key=lambda r: -r.score)

    def should_terminate(self, policy: TerminationPolicy, iterations_done: int) -> bool:
        if iterations_done >= policy.max_iterations:
            return True
        if policy.optimal_threshold is not None and self._records:
            return self.best().score <= policy.optimal_threshold
        return False

    def snapshot(self) -> list[dict]:
        """JSON-ready export of the whole archive, insertion order."""
        return [
            {
                "sequence": list(r.sequence),
                "score": r.score,
                "iteration_found": r.iteration_found,
                "source": r.source,
            }
            for r in self._records
        ]
