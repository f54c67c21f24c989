"""Deterministic node orderings from degree and walk-based matrix functions.

All five methods produce a full ordering of the node ids. Ranking runs on a
primary key per node (descending by default, so aggregate "supplier" scores
come first), then a secondary key where the method defines one, then a
seeded random shuffle for whatever ties remain. Keys closer than a relative
tolerance of 1e-9 count as tied.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .model import AdjacencyMatrix

KEY_TOLERANCE = 1e-9
POWER_TOL = 1e-10
POWER_MAX_ITER = 10_000
EIG_EPSILON = 1e-6
DEFAULT_DELTA = 0.025
CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class NodeRanking:
    """An ordering plus the keys and tie groups that produced it."""

    method: str
    order: tuple[str, ...]
    primary_keys: dict[str, float]
    secondary_keys: dict[str, float] | None
    tie_groups: tuple[tuple[str, ...], ...]
    warning: str | None = None

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "order": list(self.order),
            "primary_keys": self.primary_keys,
            "secondary_keys": self.secondary_keys,
            "tie_groups": [list(g) for g in self.tie_groups],
            "warning": self.warning,
        }


def _tie_partition(values: list[float]) -> list[list[int]]:
    """Group positions of a descending-sorted value list, chaining near-equals."""
    groups: list[list[int]] = []
    for i, v in enumerate(values):
        if groups:
            prev = values[groups[-1][-1]]
            tol = KEY_TOLERANCE * max(1.0, abs(prev), abs(v))
            if abs(prev - v) <= tol:
                groups[-1].append(i)
                continue
        groups.append([i])
    return groups


def _rank(
    method: str,
    matrix: AdjacencyMatrix,
    primary: np.ndarray,
    secondary: np.ndarray | None,
    seed: int,
    ascending: bool,
    warning: str | None = None,
) -> NodeRanking:
    rng = random.Random(seed)
    ids = matrix.ids
    direction = 1.0 if ascending else -1.0
    order_idx = sorted(range(matrix.n), key=lambda i: (direction * primary[i], i))
    sorted_primary = [float(primary[i]) for i in order_idx]

    final: list[int] = []
    residual_groups: list[tuple[str, ...]] = []
    for group in _tie_partition(sorted_primary):
        members = [order_idx[g] for g in group]
        if len(members) == 1:
            final.extend(members)
            continue
        if secondary is not None:
            members.sort(key=lambda i: (float(secondary[i]), i))
            sub_groups = _tie_partition([float(secondary[i]) for i in members])
        else:
            sub_groups = [list(range(len(members)))]
        for sub in sub_groups:
            sub_members = [members[s] for s in sub]
            if len(sub_members) > 1:
                rng.shuffle(sub_members)
                residual_groups.append(tuple(ids[i] for i in sub_members))
            final.extend(sub_members)

    return NodeRanking(
        method=method,
        order=tuple(ids[i] for i in final),
        primary_keys={ids[i]: float(primary[i]) for i in range(matrix.n)},
        secondary_keys=(
            None if secondary is None else {ids[i]: float(secondary[i]) for i in range(matrix.n)}
        ),
        tie_groups=tuple(residual_groups),
        warning=warning,
    )


def out_in_degree_order(matrix: AdjacencyMatrix, seed: int = 0, ascending: bool = False) -> NodeRanking:
    """Rank by out-degree minus in-degree.

    A node's out-degree counts edges where it is the predecessor (its column
    sum); in-degree counts edges where it is the dependent (its row sum).
    Descending puts pure prerequisite suppliers first.
    """
    a = matrix.a
    out_deg = a.sum(axis=0).astype(float)
    in_deg = a.sum(axis=1).astype(float)
    return _rank("out-in-degree", matrix, out_deg - in_deg, None, seed, ascending)


def eigenvector_order(matrix: AdjacencyMatrix, seed: int = 0, ascending: bool = False) -> NodeRanking:
    """Rank by the dominant eigenvector of the dependency matrix.

    Power iteration with 1-norm normalization, relative tolerance 1e-10,
    at most 10,000 steps. A zero matrix yields an all-tie random order with
    a warning; breakdown or non-convergence falls back to A + 1e-6 I.
    """
    a = matrix.a.astype(float)
    if not a.any():
        keys = np.zeros(matrix.n)
        return _rank("eigenvector", matrix, keys, None, seed, ascending, warning="zero-matrix")

    def power_iteration(m: np.ndarray) -> np.ndarray | None:
        v = np.full(matrix.n, 1.0 / matrix.n)
        for _ in range(POWER_MAX_ITER):
            nxt = m @ v
            norm = np.abs(nxt).sum()
            if norm == 0.0:
                return None  # breakdown: v left the matrix's range
            nxt = nxt / norm
            if np.abs(nxt - v).sum() < POWER_TOL:
                return nxt
            v = nxt
        return None

    vec = power_iteration(a)
    warning = None
    if vec is None:
        warning = "power-iteration-fallback"
        warnings.warn(
            "power iteration on A failed to converge; retrying on A + eps*I",
            RuntimeWarning,
            stacklevel=2,
        )
        vec = power_iteration(a + EIG_EPSILON * np.eye(matrix.n))
        if vec is None:
            # best effort: one long pass, keep the final iterate
            v = np.full(matrix.n, 1.0 / matrix.n)
            m = a + EIG_EPSILON * np.eye(matrix.n)
            for _ in range(POWER_MAX_ITER):
                nxt = m @ v
                norm = np.abs(nxt).sum()
                if norm == 0.0:
                    break
                v = nxt / norm
            vec = v
            warning = "power-iteration-no-convergence"
    return _rank("eigenvector", matrix, vec, None, seed, ascending, warning=warning)


def _walk_rank(method: str, matrix: AdjacencyMatrix, f: np.ndarray, seed: int, ascending: bool) -> NodeRanking:
    return _rank(method, matrix, f.sum(axis=1), f.sum(axis=0), seed, ascending)


def walk_exponential_order(matrix: AdjacencyMatrix, seed: int = 0, ascending: bool = False) -> NodeRanking:
    """Rank by row sums of exp(A); ties by column sums, then seeded RNG.

    exp(A) weights walks of length k by 1/k!, so the row sum aggregates a
    node's inbound dependency chains of every length.
    """
    f = scipy.linalg.expm(matrix.a.astype(float))
    return _walk_rank("walk-exponential", matrix, f, seed, ascending)


def walk_resolvent_order(
    matrix: AdjacencyMatrix,
    delta: float = DEFAULT_DELTA,
    seed: int = 0,
    ascending: bool = False,
) -> NodeRanking:
    """Rank by row sums of (I - delta*A)^-1, the attenuated-walk aggregate.

    delta plays the role of an edge traversal probability; the series
    converges when delta times the spectral radius stays below 1.
    """
    a = matrix.a.astype(float)
    system = np.eye(matrix.n) - delta * a
    try:
        condition = np.linalg.cond(system, 1)
    except np.linalg.LinAlgError:  # exactly singular: cond would need inv()
        condition = np.inf
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise ValueError(
            f"(I - delta*A) is near-singular (1-norm condition {condition:.3g}); "
            "use a smaller delta"
        )
    f = np.linalg.solve(system, np.eye(matrix.n))
    return _walk_rank("walk-resolvent", matrix, f, seed, ascending)


def reachability_closure(matrix: AdjacencyMatrix) -> np.ndarray:
    """Binary matrix with entry [i][j] = 1 iff some directed dependency
    path (length >= 0) leads from j to i. Equals the binarized sum of
    matrix powers A^0 .. A^n without ever forming the huge integer sums."""
    a = matrix.a.astype(np.int64)
    reach = np.eye(matrix.n, dtype=bool)
    frontier = np.eye(matrix.n, dtype=np.int64)
    for _ in range(matrix.n):
        frontier = ((a @ frontier) > 0).astype(np.int64)
        new = (frontier > 0) & ~reach
        if not new.any():
            break
        reach |= new
    return reach.astype(np.int64)


def visibility_order(matrix: AdjacencyMatrix, seed: int = 0, ascending: bool = False) -> NodeRanking:
    """Rank by row sums of the reachability closure (all path-based
    dependencies, binarized); ties by column sums, then seeded RNG."""
    f = reachability_closure(matrix)
    return _walk_rank("visibility", matrix, f.astype(float), seed, ascending)


DETERMINISTIC_METHODS = {
    "outin": out_in_degree_order,
    "eig": eigenvector_order,
    "exp": walk_exponential_order,
    "resolvent": walk_resolvent_order,
    "visibility": visibility_order,
}
