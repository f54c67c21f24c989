"""Command-line front end. Thin wrappers over the library functions.

Subcommands: run, score, baseline, ga, llm, oracle, metrics. Results go to
stdout as JSON (or to files under an output directory for `run`).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import bench, ga
from .llm import OpenAIChatProvider, ScriptedProvider
from .model import build_adjacency, load_case, network_metrics
from .optimizer import OptimizerConfig, run_optimization
from .prompts import WITH_KNOWLEDGE, WITHOUT_KNOWLEDGE
from .ranking import DETERMINISTIC_METHODS
from .scoring import brute_force_optimum, score_sequence
from .solutions import SamplingPolicy, TerminationPolicy


def _emit(payload) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _cmd_run(args) -> int:
    provider = None
    if args.script:
        responses = json.loads(Path(args.script).read_text(encoding="utf-8"))
        provider = lambda: ScriptedProvider(list(responses))  # noqa: E731 - fresh stub per run
    spec = bench.load_experiment_spec(args.spec, provider=provider)
    if provider is None and any(m in bench.LLM_METHODS for m in spec.methods):
        spec.provider = OpenAIChatProvider.from_env()
    table = bench.run_experiment(spec)
    _emit({"summary": table.summary, "failures": table.failures,
           "output_dir": str(spec.output_dir)})
    return 0


def _cmd_score(args) -> int:
    case = load_case(args.case)
    matrix = build_adjacency(case)
    order = [part.strip() for part in args.order.split(",") if part.strip()]
    _emit({"order": order, "score": score_sequence(matrix, order)})
    return 0


def _cmd_baseline(args) -> int:
    case = load_case(args.case)
    matrix = build_adjacency(case)
    method = args.method.removeprefix("det-")
    if method not in DETERMINISTIC_METHODS:
        raise SystemExit(
            f"unknown baseline {args.method!r}; choose from {sorted(DETERMINISTIC_METHODS)}"
        )
    ranking = DETERMINISTIC_METHODS[method](matrix, seed=args.seed, ascending=args.ascending)
    payload = ranking.to_dict()
    payload["score"] = score_sequence(matrix, ranking.order)
    _emit(payload)
    return 0


def _cmd_ga(args) -> int:
    case = load_case(args.case)
    matrix = build_adjacency(case)
    cfg = ga.preset_config(args.preset, seed=args.seed, generations=args.generations)
    best, convergence = ga.run_ga(matrix, cfg)
    if args.convergence_out:
        bench._atomic_write_text(
            Path(args.convergence_out),
            bench._csv_text(["unique_count", "best_score"], [list(p) for p in convergence]),
        )
    _emit(
        {
            "preset": args.preset,
            "config": dataclasses.asdict(cfg),
            "best_order": list(best.sequence),
            "best_score": best.score,
            "unique_solutions": convergence[-1][0],
        }
    )
    return 0


def _cmd_llm(args) -> int:
    case = load_case(args.case)
    if args.script:
        responses = json.loads(Path(args.script).read_text(encoding="utf-8"))
        provider = ScriptedProvider(list(responses))
    else:
        provider = OpenAIChatProvider.from_env(model=args.model)
    cfg = OptimizerConfig(
        sampling=SamplingPolicy(k_p=args.kp, k_q=args.kq),
        termination=TerminationPolicy(
            max_iterations=args.trials,
            optimal_threshold=case.known_optimum if args.stop_at_optimum else None,
        ),
        knowledge_mode=WITH_KNOWLEDGE if args.knowledge == "on" else WITHOUT_KNOWLEDGE,
        seed=args.seed,
        audit_dir=args.audit_dir,
    )
    best, trace = run_optimization(case, cfg, provider)
    if args.trace_out:
        bench._atomic_write_text(Path(args.trace_out), bench._trace_jsonl(trace))
    _emit(
        {
            "knowledge": args.knowledge,
            "trials": args.trials,
            "best_order": list(best.sequence),
            "best_score": best.score,
            "iterations_run": trace[-1]["iteration"],
            "unique_solutions": trace[-1]["unique_count"],
        }
    )
    return 0


def _cmd_oracle(args) -> int:
    case = load_case(args.case)
    matrix = build_adjacency(case)
    score, order = brute_force_optimum(matrix)
    _emit({"optimal_score": score, "optimal_order": order})
    return 0


def _cmd_metrics(args) -> int:
    case = load_case(args.case)
    _emit(dataclasses.asdict(network_metrics(case)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dsm-seq",
        description="Sequence dependency networks to minimize feedback loops.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute an experiment grid from a JSON spec")
    p.add_argument("--spec", required=True, help="experiment spec JSON file")
    p.add_argument("--script", help="JSON list of canned responses (offline LLM runs)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("score", help="score one comma-separated order")
    p.add_argument("--case", required=True)
    p.add_argument("--order", required=True, help='e.g. "a,b,c"')
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("baseline", help="run one deterministic ordering")
    p.add_argument("method", help=f"one of {sorted(DETERMINISTIC_METHODS)} (det- prefix ok)")
    p.add_argument("--case", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ascending", action="store_true",
                   help="rank ascending by primary key instead of descending")
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("ga", help="run the genetic algorithm")
    p.add_argument("--preset", default="balanced",
                   choices=["exploration", "exploitation", "balanced"])
    p.add_argument("--case", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--generations", type=int, default=ga.GENERATIONS_DEFAULT)
    p.add_argument("--convergence-out", help="write (unique_count, best_score) CSV here")
    p.set_defaults(func=_cmd_ga)

    p = sub.add_parser("llm", help="run the LLM search loop")
    p.add_argument("--knowledge", choices=["on", "off"], required=True)
    p.add_argument("--trials", type=int, default=20, help="LLM generations budget")
    p.add_argument("--case", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kp", type=int, default=5)
    p.add_argument("--kq", type=int, default=5)
    p.add_argument("--model", default=None, help="override OPENAI_MODEL")
    p.add_argument("--script", help="JSON list of canned responses instead of a live provider")
    p.add_argument("--stop-at-optimum", action="store_true",
                   help="terminate early at the case's known_optimum")
    p.add_argument("--audit-dir", help="dump per-iteration prompts and responses here")
    p.add_argument("--trace-out", help="write the JSONL trace here")
    p.set_defaults(func=_cmd_llm)

    p = sub.add_parser("oracle", help="exact optimum by exhaustive search (n <= 10)")
    p.add_argument("--case", required=True)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("metrics", help="network size/shape statistics")
    p.add_argument("--case", required=True)
    p.set_defaults(func=_cmd_metrics)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
