"""Seeded experiment grid over cases and methods, with CSV/JSONL/SVG outputs.

Runs every (case, method, run) cell, aggregates mean/std/best per cell
(population std), writes convergence series on the unique-solutions axis,
and can render reordered-matrix snapshots along an optimization trace.
Seeds are derived as base_seed + run index so a manifest replays exactly.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .ga import GENERATIONS_DEFAULT, preset_config, run_ga
from .model import DsmCase, anonymize_ids, build_adjacency, load_case
from .optimizer import OptimizationAborted, OptimizerConfig, run_optimization
from .prompts import WITH_KNOWLEDGE, WITHOUT_KNOWLEDGE
from .llm import ProviderError
from .ranking import DETERMINISTIC_METHODS
from .scoring import reorder_matrix, score_sequence
from .solutions import SamplingPolicy, TerminationPolicy

GA_METHODS = ("ga-exploration", "ga-exploitation", "ga-balanced")
DET_METHODS = tuple(f"det-{name}" for name in DETERMINISTIC_METHODS)
LLM_METHODS = ("llm-with-knowledge", "llm-without-knowledge")
ALL_METHODS = LLM_METHODS + GA_METHODS + DET_METHODS

CONVERGENCE_WINDOW = 10_000


@dataclass
class ExperimentSpec:
    cases: list[str | Path]
    methods: list[str]
    output_dir: str | Path
    runs_per_method: int = 10
    trial_budgets: list[int] = field(default_factory=lambda: [1, 5, 20])
    base_seed: int = 0
    ga_generations: int = GENERATIONS_DEFAULT
    ascending: bool = False
    # an instance with .complete, or a zero-arg factory returning one per run
    provider: object = None

    def __post_init__(self) -> None:
        if self.runs_per_method < 1:
            raise ValueError("runs_per_method must be >= 1")
        unknown = [m for m in self.methods if m not in ALL_METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; choose from {list(ALL_METHODS)}")
        if any(b < 1 for b in self.trial_budgets):
            raise ValueError("trial budgets must be >= 1")


def load_experiment_spec(path: str | Path, provider=None) -> ExperimentSpec:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    return ExperimentSpec(
        cases=raw["cases"],
        methods=raw.get("methods", list(ALL_METHODS)),
        output_dir=raw["output_dir"],
        runs_per_method=raw.get("runs_per_method", 10),
        trial_budgets=raw.get("trial_budgets", [1, 5, 20]),
        base_seed=raw.get("base_seed", 0),
        ga_generations=raw.get("ga_generations", GENERATIONS_DEFAULT),
        ascending=raw.get("ascending", False),
        provider=provider,
    )


def aggregate_stats(scores) -> dict:
    """Mean, population standard deviation, and best (minimum)."""
    scores = list(scores)
    if not scores:
        raise ValueError("no scores to aggregate")
    return {
        "mean": float(np.mean(scores)),
        "std": float(np.std(scores)),  # ddof=0: population formula
        "best": float(min(scores)),
    }


def convergence_curve(trace: list[dict]) -> list[tuple[int, int]]:
    """Change points (unique_count, best_score) from an optimizer trace.

    Duplicate or failed iterations advance nothing; x is strictly
    increasing and y non-increasing.
    """
    if not trace:
        raise ValueError("empty trace")
    points: list[tuple[int, int]] = []
    for row in trace:
        x, y = row["unique_count"], row["best_score"]
        if not points:
            points.append((x, y))
        elif x == points[-1][0]:
            if y < points[-1][1]:
                points[-1] = (x, y)
        elif y < points[-1][1]:
            points.append((x, y))
    final_x, final_y = trace[-1]["unique_count"], trace[-1]["best_score"]
    if points[-1][0] != final_x:
        points.append((final_x, final_y))  # marks how far the run explored
    return points


def step_value(curve: list[tuple[int, float]], x: int) -> float:
    """Value of a change-point step function at x (first y before the curve starts)."""
    value = curve[0][1]
    for cx, cy in curve:
        if cx <= x:
            value = cy
        else:
            break
    return float(value)


def merge_curves(curves: list[list[tuple[int, float]]]) -> list[tuple[int, float]]:
    """Mean of several step functions, evaluated on the union of their x grids."""
    if not curves:
        raise ValueError("no curves to merge")
    grid = sorted({x for curve in curves for x, _ in curve})
    return [(x, float(np.mean([step_value(c, x) for c in curves]))) for x in grid]


def _atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    handle, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header: list[str], rows: list[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


@dataclass
class ResultTable:
    rows: list[dict]
    summary: list[dict]
    failures: list[dict]

    def scores_for(self, case: str, method: str, budget: int | None = None) -> list[float]:
        return [
            row["score"]
            for row in self.rows
            if row["case"] == case
            and row["method"] == method
            and (budget is None or row["budget"] == budget)
        ]


def _llm_provider(spec: ExperimentSpec):
    provider = spec.provider
    if provider is None:
        raise ProviderError("auth", "LLM methods need a provider (or a provider factory)")
    if callable(provider) and not hasattr(provider, "complete"):
        return provider()
    return provider


def _run_llm_cell(case: DsmCase, method: str, seed: int, spec: ExperimentSpec):
    """One anonymized optimization run; returns (per-budget scores, trace in
    the case's original id space)."""
    anon_case, mapping = anonymize_ids(case, seed)
    inverse = {new: old for old, new in mapping.items()}
    budgets = sorted(spec.trial_budgets)
    cfg = OptimizerConfig(
        sampling=SamplingPolicy(),
        termination=TerminationPolicy(
            max_iterations=max(budgets),
            optimal_threshold=case.known_optimum,
        ),
        knowledge_mode=WITH_KNOWLEDGE if method == "llm-with-knowledge" else WITHOUT_KNOWLEDGE,
        seed=seed,
    )
    best, trace = run_optimization(anon_case, cfg, _llm_provider(spec))
    for row in trace:
        for key in ("sequence", "best_sequence"):
            if row[key] is not None:
                row[key] = [inverse[i] for i in row[key]]
    last_iteration = trace[-1]["iteration"]
    snapshots = {}
    for budget in budgets:
        upto = min(budget, last_iteration)
        rows = [r for r in trace if r["iteration"] <= upto]
        snapshots[budget] = rows[-1]["best_score"]
    return snapshots, trace


def _trace_jsonl(trace: list[dict]) -> str:
    return "\n".join(json.dumps(row, sort_keys=True) for row in trace) + "\n"


def run_experiment(spec: ExperimentSpec) -> ResultTable:
    """Execute the whole grid and write artifacts under spec.output_dir.

    Writes results.csv (per-run rows), results_summary.csv (mean/std/best
    per cell), convergence/*.csv for stochastic methods, traces/*.jsonl for
    LLM runs, and manifest.json with every seed used. A provider failure
    marks that cell failed and the grid keeps going.
    """
    out = Path(spec.output_dir)
    rows: list[dict] = []
    failures: list[dict] = []
    seeds_used: dict[str, dict[str, list[int]]] = {}

    for case_path in spec.cases:
        case = load_case(case_path)
        case_name = Path(case_path).stem
        matrix = build_adjacency(case)
        seeds_used[case_name] = {}
        for method in spec.methods:
            seeds = [spec.base_seed + run for run in range(spec.runs_per_method)]
            seeds_used[case_name][method] = seeds
            ga_curves: list[list[tuple[int, int]]] = []
            for run, seed in enumerate(seeds):
                try:
                    if method in DET_METHODS:
                        ranking = DETERMINISTIC_METHODS[method.removeprefix("det-")](
                            matrix, seed=seed, ascending=spec.ascending
                        )
                        score = score_sequence(matrix, ranking.order)
                        rows.append(
                            {"case": case_name, "method": method, "budget": None,
                             "run": run, "seed": seed, "score": score}
                        )
                    elif method in GA_METHODS:
                        cfg = preset_config(
                            method.removeprefix("ga-"), seed=seed,
                            generations=spec.ga_generations,
                        )
                        best, curve = run_ga(matrix, cfg)
                        curve = [(x, y) for x, y in curve if x <= CONVERGENCE_WINDOW]
                        ga_curves.append(curve)
                        _atomic_write_text(
                            out / "convergence" / f"{case_name}__{method}__run{run}.csv",
                            _csv_text(["unique_count", "best_score"], [list(p) for p in curve]),
                        )
                        rows.append(
                            {"case": case_name, "method": method, "budget": None,
                             "run": run, "seed": seed, "score": best.score}
                        )
                    elif method in LLM_METHODS:
                        snapshots, trace = _run_llm_cell(case, method, seed, spec)
                        _atomic_write_text(
                            out / "traces" / f"{case_name}__{method}__run{run}.jsonl",
                            _trace_jsonl(trace),
                        )
                        for budget, score in snapshots.items():
                            rows.append(
                                {"case": case_name, "method": method, "budget": budget,
                                 "run": run, "seed": seed, "score": score}
                            )
                except (ProviderError, OptimizationAborted) as exc:
                    failures.append(
                        {"case": case_name, "method": method, "run": run,
                         "seed": seed, "error": str(exc)}
                    )
            if ga_curves:
                merged = merge_curves(ga_curves)
                _atomic_write_text(
                    out / "convergence" / f"{case_name}__{method}__mean.csv",
                    _csv_text(["unique_count", "mean_best_score"], [list(p) for p in merged]),
                )

    summary: list[dict] = []
    cells: dict[tuple, list[float]] = {}
    for row in rows:
        cells.setdefault((row["case"], row["method"], row["budget"]), []).append(row["score"])
    failed_counts: dict[tuple, int] = {}
    for failure in failures:
        failed_counts[(failure["case"], failure["method"])] = (
            failed_counts.get((failure["case"], failure["method"]), 0) + 1
        )
    for (case_name, method, budget), scores in sorted(
        cells.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2] if kv[0][2] is not None else -1)
    ):
        stats = aggregate_stats(scores)
        summary.append(
            {"case": case_name, "method": method, "budget": budget,
             "runs": len(scores),
             "failed": failed_counts.get((case_name, method), 0),
             **stats}
        )

    _atomic_write_text(
        out / "results.csv",
        _csv_text(
            ["case", "method", "budget", "run", "seed", "score"],
            [
                [r["case"], r["method"], "" if r["budget"] is None else r["budget"],
                 r["run"], r["seed"], r["score"]]
                for r in rows
            ],
        ),
    )
    _atomic_write_text(
        out / "results_summary.csv",
        _csv_text(
            ["case", "method", "budget", "runs", "failed", "mean", "std", "best"],
            [
                [s["case"], s["method"], "" if s["budget"] is None else s["budget"],
                 s["runs"], s["failed"], f"{s['mean']:.6f}", f"{s['std']:.6f}", s["best"]]
                for s in summary
            ],
        ),
    )
    manifest = {
        "cases": [str(Path(p).name) for p in spec.cases],
        "methods": list(spec.methods),
        "runs_per_method": spec.runs_per_method,
        "trial_budgets": list(spec.trial_budgets),
        "base_seed": spec.base_seed,
        "ga_generations": spec.ga_generations,
        "ascending": spec.ascending,
        "seed_derivation": "base_seed + run_index",
        "seeds": seeds_used,
        "failures": failures,
    }
    _atomic_write_text(out / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return ResultTable(rows=rows, summary=summary, failures=failures)


def _snapshot_svg(a: np.ndarray, ids, iteration: int, score: int) -> str:
    """Hand-rolled SVG: filled cells for dependencies, above-diagonal in red."""
    n = a.shape[0]
    cell = 16
    margin = 28
    size = n * cell
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size + 2 * margin}" '
        f'height="{size + 2 * margin}" viewBox="0 0 {size + 2 * margin} {size + 2 * margin}">',
        f'<text x="{margin}" y="{margin - 10}" font-family="monospace" font-size="12">'
        f"iteration {iteration}: feedback={score}</text>",
        f'<rect x="{margin}" y="{margin}" width="{size}" height="{size}" '
        'fill="white" stroke="black"/>',
    ]
    for i in range(n):
        for j in range(n):
            if i == j:
                parts.append(
                    f'<rect x="{margin + j * cell}" y="{margin + i * cell}" '
                    f'width="{cell}" height="{cell}" fill="#dddddd"/>'
                )
            elif a[i, j]:
                color = "#d62728" if j > i else "#1f77b4"  # above diagonal = feedback
                parts.append(
                    f'<rect x="{margin + j * cell}" y="{margin + i * cell}" '
                    f'width="{cell}" height="{cell}" fill="{color}"/>'
                )
    for k in range(1, n):
        parts.append(
            f'<line x1="{margin + k * cell}" y1="{margin}" x2="{margin + k * cell}" '
            f'y2="{margin + size}" stroke="#bbbbbb" stroke-width="0.5"/>'
        )
        parts.append(
            f'<line x1="{margin}" y1="{margin + k * cell}" x2="{margin + size}" '
            f'y2="{margin + k * cell}" stroke="#bbbbbb" stroke-width="0.5"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_trajectory(
    case: DsmCase,
    trace: list[dict],
    iterations: list[int],
    out_dir: str | Path,
    prefix: str = "trajectory",
) -> list[Path]:
    """Write SVG + CSV snapshots of the best-so-far reordered matrix.

    For each requested iteration, rows/columns follow that iteration's
    best sequence and the annotation states the recomputed feedback count.
    The trace's ids must match the case's.
    """
    out = Path(out_dir)
    matrix = build_adjacency(case)
    by_iteration: dict[int, dict] = {}
    for row in trace:
        by_iteration[row["iteration"]] = row  # last entry per iteration wins
    written: list[Path] = []
    for iteration in iterations:
        if iteration not in by_iteration:
            raise ValueError(f"iteration {iteration} not present in trace")
        row = by_iteration[iteration]
        sequence = row["best_sequence"]
        reordered = reorder_matrix(matrix, sequence)
        score = score_sequence(matrix, sequence)
        svg_path = out / f"{prefix}_iter{iteration:03d}.svg"
        csv_path = out / f"{prefix}_iter{iteration:03d}.csv"
        _atomic_write_text(svg_path, _snapshot_svg(reordered.a, sequence, iteration, score))
        _atomic_write_text(
            csv_path,
            _csv_text(list(sequence), [list(map(int, r)) for r in reordered.a]),
        )
        written.extend([svg_path, csv_path])
    return written
