"""Sequencing toolkit for dependency networks: reorder the nodes of a
directed dependency matrix to minimize feedback loops, by LLM-guided
search, a permutation GA, or deterministic matrix-function rankings."""

from .bench import (
    ExperimentSpec,
    ResultTable,
    aggregate_stats,
    convergence_curve,
    load_experiment_spec,
    merge_curves,
    render_trajectory,
    run_experiment,
)
from .ga import GaConfig, order_crossover, pmx_crossover, preset_config, run_ga, shuffle_mutation, tournament_select
from .llm import (
    ChatRequest,
    ChatResult,
    OpenAIChatProvider,
    ProviderConfig,
    ProviderError,
    ScriptedProvider,
    scripted_stub,
)
from .model import (
    AdjacencyMatrix,
    CaseError,
    DsmCase,
    Edge,
    NetworkMetrics,
    Node,
    anonymize_ids,
    build_adjacency,
    bundled_case,
    bundled_case_names,
    case_from_dict,
    case_to_dict,
    load_case,
    matrix_from_array,
    network_metrics,
)
from .optimizer import OptimizationAborted, OptimizerConfig, run_optimization
from .prompts import (
    OrderParseError,
    PromptContext,
    build_prompt,
    make_prompt_context,
    parse_order_response,
)
from .ranking import (
    DETERMINISTIC_METHODS,
    NodeRanking,
    eigenvector_order,
    out_in_degree_order,
    reachability_closure,
    visibility_order,
    walk_exponential_order,
    walk_resolvent_order,
)
from .scoring import brute_force_optimum, is_valid_sequence, reorder_matrix, score_sequence
from .solutions import SamplingPolicy, SolutionBase, SolutionRecord, TerminationPolicy

__version__ = "0.1.0"

__all__ = [
    "AdjacencyMatrix",
    "CaseError",
    "ChatRequest",
    "ChatResult",
    "DETERMINISTIC_METHODS",
    "DsmCase",
    "Edge",
    "ExperimentSpec",
    "GaConfig",
    "NetworkMetrics",
    "Node",
    "NodeRanking",
    "OpenAIChatProvider",
    "OptimizationAborted",
    "OptimizerConfig",
    "OrderParseError",
    "PromptContext",
    "ProviderConfig",
    "ProviderError",
    "ResultTable",
    "SamplingPolicy",
    "ScriptedProvider",
    "SolutionBase",
    "SolutionRecord",
    "TerminationPolicy",
    "aggregate_stats",
    "anonymize_ids",
    "brute_force_optimum",
    "build_adjacency",
    "build_prompt",
    "bundled_case",
    "bundled_case_names",
    "case_from_dict",
    "case_to_dict",
    "convergence_curve",
    "eigenvector_order",
    "is_valid_sequence",
    "load_case",
    "load_experiment_spec",
    "make_prompt_context",
    "matrix_from_array",
    "merge_curves",
    "network_metrics",
    "order_crossover",
    "out_in_degree_order",
    "parse_order_response",
    "pmx_crossover",
    "preset_config",
    "reachability_closure",
    "render_trajectory",
    "reorder_matrix",
    "run_experiment",
    "run_ga",
    "run_optimization",
    "score_sequence",
    "scripted_stub",
    "shuffle_mutation",
    "tournament_select",
    "visibility_order",
    "walk_exponential_order",
    "walk_resolvent_order",
]
