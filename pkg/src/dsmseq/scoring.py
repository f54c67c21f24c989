"""Sequence scoring: count dependencies placed before their prerequisites.

A sequence is a permutation of the case's node ids read left to right as an
execution order. Each edge (dependent d, predecessor p) contributes one
feedback loop when d is placed before p; equivalently, feedback loops are
the 1-entries above the main diagonal after reordering the matrix rows and
columns into the sequence.
"""

from __future__ import annotations

import numpy as np

from .model import AdjacencyMatrix, DsmCase, matrix_from_array

EXHAUSTIVE_LIMIT = 10


def is_valid_sequence(case_ids, candidate) -> tuple[bool, str]:
    """Check that candidate is a permutation of the node ids.

    case_ids may be a DsmCase or any iterable of ids. Returns (ok,
    diagnostic); the diagnostic names missing, duplicated, and unknown ids.
    """
    if isinstance(case_ids, DsmCase):
        expected = set(case_ids.node_ids)
    elif isinstance(case_ids, AdjacencyMatrix):
        expected = set(case_ids.ids)
    else:
        expected = set(case_ids)
    candidate = list(candidate)
    problems = []
    counts: dict[str, int] = {}
    for item in candidate:
        counts[item] = counts.get(item, 0) + 1
    duplicated = sorted(item for item, c in counts.items() if c > 1)
    unknown = sorted(set(counts) - expected)
    missing = sorted(expected - set(counts))
    if duplicated:
        problems.append(f"duplicated ids: {duplicated}")
    if unknown:
        problems.append(f"unknown ids: {unknown}")
    if missing:
        problems.append(f"missing ids: {missing}")
    if problems:
        return False, "; ".join(problems)
    return True, "ok"


def _positions(matrix: AdjacencyMatrix, order) -> np.ndarray:
    order = list(order)
    ok, diag = is_valid_sequence(matrix, order)
    if not ok:
        raise ValueError(f"invalid sequence: {diag}")
    pos = np.empty(matrix.n, dtype=np.int64)
    for place, node_id in enumerate(order):
        pos[matrix.index_of[node_id]] = place
    return pos


def score_sequence(matrix: AdjacencyMatrix, order) -> int:
    """Number of edges whose dependent is placed before its predecessor."""
    pos = _positions(matrix, order)
    if matrix.dep_idx is None or len(matrix.dep_idx) == 0:
        return 0
    return int(np.count_nonzero(pos[matrix.dep_idx] < pos[matrix.pred_idx]))


def reorder_matrix(matrix: AdjacencyMatrix, order) -> AdjacencyMatrix:
    """Apply the same permutation to rows and columns.

    Row/column k of the result corresponds to the k-th id in order.
    """
    order = list(order)
    ok, diag = is_valid_sequence(matrix, order)
    if not ok:
        raise ValueError(f"invalid sequence: {diag}")
    idx = np.array([matrix.index_of[node_id] for node_id in order], dtype=np.int64)
    return matrix_from_array(matrix.a[np.ix_(idx, idx)], ids=tuple(order))


def brute_force_optimum(matrix: AdjacencyMatrix) -> tuple[int, list[str]]:
    """Global minimum feedback count and a sequence achieving it.

    Searches all permutations (as a subset dynamic program, which visits
    every permutation prefix exactly once and returns the same minimum as
    literal enumeration). Of all optimal sequences, the lexicographically
    smallest by node id is returned. Refuses n > 10.
    """
    n = matrix.n
    if n > EXHAUSTIVE_LIMIT:
        raise ValueError(
            f"exhaustive optimum is limited to n <= {EXHAUSTIVE_LIMIT} "
            f"(got n={n}); use the GA or LLM search instead"
        )
    # preds_mask[v] = bitmask of nodes v depends on
    preds_mask = [0] * n
    for d, p in zip(matrix.dep_idx, matrix.pred_idx):
        preds_mask[int(d)] |= 1 << int(p)

    full = (1 << n) - 1
    dp = [0] * (full + 1)
    for mask in range(1, full + 1):
        best = None
        rest = mask
        while rest:
            v_bit = rest & -rest
            rest ^= v_bit
            v = v_bit.bit_length() - 1
            # placing v first among mask: every predecessor of v still in
            # mask lands after v and becomes one feedback loop
            cost = (preds_mask[v] & (mask ^ v_bit)).bit_count() + dp[mask ^ v_bit]
            if best is None or cost < best:
                best = cost
        dp[mask] = best

    # reconstruct front-first, preferring the smallest id among optimal picks
    by_id = sorted(range(n), key=lambda v: matrix.ids[v])
    order: list[str] = []
    mask = full
    while mask:
        for v in by_id:
            v_bit = 1 << v
            if not mask & v_bit:
                continue
            cost = (preds_mask[v] & (mask ^ v_bit)).bit_count() + dp[mask ^ v_bit]
            if cost == dp[mask]:
                order.append(matrix.ids[v])
                mask ^= v_bit
                break
    return dp[full], order
