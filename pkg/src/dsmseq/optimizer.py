"""The iterative LLM search loop over sequences.

Each iteration samples precedent solutions from the archive, renders the
prompt, asks the provider for one candidate order, validates and scores it,
and inserts it back into the archive. The loop stops at the iteration
budget or when the best score reaches a known optimal threshold.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from pathlib import Path

from .llm import ChatRequest, ProviderError
from .model import DsmCase, build_adjacency
from .prompts import (
    WITH_KNOWLEDGE,
    WITHOUT_KNOWLEDGE,
    OrderParseError,
    PromptContext,
    build_prompt,
    parse_order_response,
)
from .scoring import score_sequence
from .solutions import SamplingPolicy, SolutionBase, SolutionRecord, TerminationPolicy


@dataclass(frozen=True)
class OptimizerConfig:
    sampling: SamplingPolicy = field(default_factory=SamplingPolicy)
    termination: TerminationPolicy = field(default_factory=TerminationPolicy)
    knowledge_mode: str = WITH_KNOWLEDGE
    seed: int = 0
    invalid_retry_budget: int = 2
    reshuffle_edges_each_iteration: bool = False
    audit_dir: str | Path | None = None

    def __post_init__(self) -> None:
        if self.knowledge_mode not in (WITH_KNOWLEDGE, WITHOUT_KNOWLEDGE):
            raise ValueError(f"unknown knowledge_mode {self.knowledge_mode!r}")
        if self.invalid_retry_budget < 0:
            raise ValueError("invalid_retry_budget must be >= 0")


class OptimizationAborted(RuntimeError):
    """Provider gave up mid-run; best-so-far and the partial trace survive."""

    def __init__(self, message: str, best: SolutionRecord, trace: list[dict]):
        super().__init__(message)
        self.best = best
        self.trace = trace


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _audit_write(audit_dir, iteration: int, attempt: int, kind: str, text: str) -> None:
    if audit_dir is None:
        return
    directory = Path(audit_dir)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / f"iter{iteration:03d}_attempt{attempt}_{kind}.txt").write_text(
        text, encoding="utf-8"
    )


def run_optimization(case: DsmCase, cfg: OptimizerConfig, client) -> tuple[SolutionRecord, list[dict]]:
    """Run the loop; returns (best record, per-iteration trace).

    The trace has one entry for iteration 0 (the random seed order) and one
    per LLM iteration after that, with prompt/response hashes, the parsed
    sequence or failure kind, and the running unique count and best-so-far.
    Raises OptimizationAborted if the provider fails; the exception carries
    the partial trace.
    """
    matrix = build_adjacency(case)
    rng = random.Random(cfg.seed)
    base = SolutionBase(matrix)

    initial = tuple(rng.sample(list(case.node_ids), case.n))
    base.insert(
        SolutionRecord(
            sequence=initial,
            score=score_sequence(matrix, initial),
            iteration_found=0,
            source="initial-random",
        )
    )
    edges_fixed = list(case.edges)
    rng.shuffle(edges_fixed)

    def entry(iteration: int, **extra) -> dict:
        best = base.best()
        row = {
            "iteration": iteration,
            "prompt_sha256": None,
            "response_sha256": None,
            "sequence": None,
            "score": None,
            "failure": None,
            "duplicate": False,
            "attempts": 0,
            "unique_count": base.unique_count,
            "best_score": best.score,
            "best_sequence": list(best.sequence),
        }
        row.update(extra)
        return row

    trace = [entry(0, sequence=list(initial), score=base.best().score)]

    model_name = getattr(client, "model", "") or ""
    iteration = 0
    while not base.should_terminate(cfg.termination, iteration):
        iteration += 1
        records = base.sample_for_prompt(cfg.sampling, rng)
        if cfg.reshuffle_edges_each_iteration:
            edges = list(case.edges)
            rng.shuffle(edges)
        else:
            edges = edges_fixed
        ctx = PromptContext(
            network_description=case.description,
            nodes=case.nodes,
            edges=tuple(edges),
            historical=tuple(
                {"solution": ", ".join(r.sequence), "score": float(r.score)}
                for r in records
            ),
            knowledge_mode=cfg.knowledge_mode,
        )
        prompt = build_prompt(ctx)

        attempt_prompt = prompt
        parsed = None
        failure = None
        response_text = None
        attempts = 0
        for _ in range(cfg.invalid_retry_budget + 1):
            try:
                result = client.complete(ChatRequest.single_turn(model_name, attempt_prompt))
            except ProviderError as exc:
                trace.append(
                    entry(
                        iteration,
                        prompt_sha256=_sha256(attempt_prompt),
                        failure="provider-error",
                        attempts=attempts,
                    )
                )
                raise OptimizationAborted(
                    f"provider failed at iteration {iteration}: {exc}",
                    best=base.best(),
                    trace=trace,
                ) from exc
            attempts += 1
            response_text = result.text
            _audit_write(cfg.audit_dir, iteration, attempts, "prompt", attempt_prompt)
            _audit_write(cfg.audit_dir, iteration, attempts, "response", response_text)
            try:
                parsed = parse_order_response(response_text, matrix)
                failure = None
                break
            except OrderParseError as exc:
                failure = exc.kind
                attempt_prompt = (
                    prompt
                    + f"\n\nYour previous response was invalid ({exc}). Please answer "
                    "again: cover all nodes exactly once, start with <order> and "
                    "end with </order>."
                )

        if parsed is None:
            trace.append(
                entry(
                    iteration,
                    prompt_sha256=_sha256(attempt_prompt),
                    response_sha256=_sha256(response_text),
                    failure=failure,
                    attempts=attempts,
                )
            )
            continue

        sequence = tuple(parsed)
        score = score_sequence(matrix, sequence)
        inserted = base.insert(
            SolutionRecord(
                sequence=sequence, score=score, iteration_found=iteration, source="llm"
            )
        )
        trace.append(
            entry(
                iteration,
                prompt_sha256=_sha256(attempt_prompt),
                response_sha256=_sha256(response_text),
                sequence=list(sequence),
                score=score,
                duplicate=not inserted,
                attempts=attempts,
            )
        )

    return base.best(), trace
