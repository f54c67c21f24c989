"""Dependency-network cases: loading, validation, adjacency matrices, metrics.

A case is a directed dependency network. An edge ``{dependent: d,
predecessor: p}`` means task ``d`` needs the output of task ``p``. The
adjacency matrix follows the convention ``a[i][j] = 1`` iff node ``i``
depends on node ``j`` (a directed edge from ``j`` to ``i``).
"""

from __future__ import annotations

import json
import random
import string
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import networkx as nx
import numpy as np

ALPHANUMERIC = string.ascii_uppercase + string.ascii_lowercase + string.digits
ANON_ID_LENGTH = 5

VALID_SOURCES = ("initial-random", "llm", "ga", "deterministic")


class CaseError(ValueError):
    """Raised when a case file or case structure is invalid."""


@dataclass(frozen=True)
class Node:
    id: str
    name: str = ""


@dataclass(frozen=True)
class Edge:
    dependent: str
    predecessor: str


@dataclass(frozen=True)
class DsmCase:
    """A named dependency network plus optional context text.

    nodes keep file order; that order defines matrix row/column order.
    """

    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]
    description: str = ""
    known_optimum: int | None = None

    def __post_init__(self) -> None:
        validate_case(self)

    @property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(node.id for node in self.nodes)

    @property
    def n(self) -> int:
        return len(self.nodes)


def validate_case(case: DsmCase) -> None:
    """Check structural invariants, raising CaseError with a location."""
    if len(case.nodes) < 2:
        raise CaseError(f"need at least 2 nodes, got {len(case.nodes)}")
    seen: set[str] = set()
    for pos, node in enumerate(case.nodes):
        if not node.id:
            raise CaseError(f"nodes[{pos}]: empty id")
        if node.id in seen:
            raise CaseError(f"nodes[{pos}]: duplicate node id {node.id!r}")
        seen.add(node.id)
    pairs: set[tuple[str, str]] = set()
    for pos, edge in enumerate(case.edges):
        if edge.dependent == edge.predecessor:
            raise CaseError(f"edges[{pos}]: self-loop on {edge.dependent!r}")
        for endpoint in (edge.dependent, edge.predecessor):
            if endpoint not in seen:
                raise CaseError(
                    f"edges[{pos}]: endpoint {endpoint!r} is not a known node id"
                )
        key = (edge.dependent, edge.predecessor)
        if key in pairs:
            raise CaseError(f"edges[{pos}]: duplicate edge {key!r}")
        pairs.add(key)
    if case.known_optimum is not None:
        if case.known_optimum < 0:
            raise CaseError("known_optimum must be non-negative")


def load_case(path: str | Path) -> DsmCase:
    """Load and validate a case from a JSON file.

    Expected shape::

        {
          "description": "...",
          "known_optimum": 3,            # optional
          "nodes": [{"id": "...", "name": "..."}, ...],
          "edges": [{"dependent": "...", "predecessor": "..."}, ...]
        }
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CaseError(f"{path}: not valid JSON: {exc}") from exc
    return case_from_dict(raw, where=str(path))


def case_from_dict(raw: dict, where: str = "<dict>") -> DsmCase:
    if not isinstance(raw, dict):
        raise CaseError(f"{where}: top level must be an object")
    try:
        nodes = tuple(
            Node(id=str(item["id"]), name=str(item.get("name", "")))
            for item in raw.get("nodes", [])
        )
        edges = tuple(
            Edge(dependent=str(item["dependent"]), predecessor=str(item["predecessor"]))
            for item in raw.get("edges", [])
        )
    except (KeyError, TypeError) as exc:
        raise CaseError(f"{where}: malformed node or edge entry: {exc}") from exc
    known = raw.get("known_optimum")
    try:
        return DsmCase(
            nodes=nodes,
            edges=edges,
            description=str(raw.get("description", "")),
            known_optimum=None if known is None else int(known),
        )
    except CaseError as exc:
        raise CaseError(f"{where}: {exc}") from exc


def bundled_case_names() -> tuple[str, ...]:
    """Names of the case files shipped inside the package, sorted."""
    data = resources.files("dsmseq") / "data"
    return tuple(sorted(p.name[: -len(".json")] for p in data.iterdir() if p.name.endswith(".json")))


def bundled_case(name: str) -> DsmCase:
    """Load a case shipped with the package by name (with or without .json)."""
    if name.endswith(".json"):
        name = name[: -len(".json")]
    entry = resources.files("dsmseq") / "data" / f"{name}.json"
    if not entry.is_file():
        known = ", ".join(bundled_case_names())
        raise CaseError(f"no bundled case named {name!r}; available: {known}")
    raw = json.loads(entry.read_text(encoding="utf-8"))
    return case_from_dict(raw, where=f"bundled:{name}")


def case_to_dict(case: DsmCase) -> dict:
    out: dict = {
        "description": case.description,
        "nodes": [{"id": n.id, "name": n.name} for n in case.nodes],
        "edges": [
            {"dependent": e.dependent, "predecessor": e.predecessor}
            for e in case.edges
        ],
    }
    if case.known_optimum is not None:
        out["known_optimum"] = case.known_optimum
    return out


@dataclass(frozen=True)
class AdjacencyMatrix:
    """Binary dependency matrix with its id bookkeeping.

    a[i][j] = 1 means node ids[i] depends on node ids[j]. dep_idx/pred_idx
    are the matrix coordinates of each edge, kept for fast scoring.
    """

    n: int
    a: np.ndarray
    ids: tuple[str, ...]
    index_of: dict[str, int]
    dep_idx: np.ndarray = field(repr=False, default=None)
    pred_idx: np.ndarray = field(repr=False, default=None)


def build_adjacency(case: DsmCase) -> AdjacencyMatrix:
    """Build the n-by-n 0/1 matrix in the case's node-list order."""
    ids = case.node_ids
    index_of = {node_id: i for i, node_id in enumerate(ids)}
    n = len(ids)
    a = np.zeros((n, n), dtype=np.int64)
    dep_idx = np.fromiter(
        (index_of[e.dependent] for e in case.edges), dtype=np.int64, count=len(case.edges)
    )
    pred_idx = np.fromiter(
        (index_of[e.predecessor] for e in case.edges), dtype=np.int64, count=len(case.edges)
    )
    a[dep_idx, pred_idx] = 1
    return AdjacencyMatrix(
        n=n, a=a, ids=ids, index_of=index_of, dep_idx=dep_idx, pred_idx=pred_idx
    )


def matrix_from_array(a: np.ndarray, ids: tuple[str, ...] | None = None) -> AdjacencyMatrix:
    """Wrap a raw 0/1 array (diagonal must be zero) as an AdjacencyMatrix."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if np.any(np.diag(a) != 0):
        raise ValueError("diagonal must be all zero (no self-dependencies)")
    n = a.shape[0]
    if ids is None:
        ids = tuple(f"n{i:03d}" for i in range(n))
    if len(ids) != n:
        raise ValueError("ids length must match matrix size")
    dep_idx, pred_idx = np.nonzero(a)
    return AdjacencyMatrix(
        n=n,
        a=(a != 0).astype(np.int64),
        ids=tuple(ids),
        index_of={node_id: i for i, node_id in enumerate(ids)},
        dep_idx=dep_idx.astype(np.int64),
        pred_idx=pred_idx.astype(np.int64),
    )


def fresh_anon_id(rng: random.Random) -> str:
    return "".join(rng.choice(ALPHANUMERIC) for _ in range(ANON_ID_LENGTH))


def anonymize_ids(case: DsmCase, seed: int) -> tuple[DsmCase, dict[str, str]]:
    """Replace every node id with a fresh 5-char alphanumeric id.

    Deterministic for a given seed. Names, description, known_optimum and
    node/edge order are preserved. Returns the rewritten case and the
    old-to-new mapping.
    """
    rng = random.Random(seed)
    mapping: dict[str, str] = {}
    used: set[str] = set()
    for node in case.nodes:
        new_id = fresh_anon_id(rng)
        while new_id in used:
            new_id = fresh_anon_id(rng)
        used.add(new_id)
        mapping[node.id] = new_id
    new_case = DsmCase(
        nodes=tuple(Node(id=mapping[n.id], name=n.name) for n in case.nodes),
        edges=tuple(
            Edge(dependent=mapping[e.dependent], predecessor=mapping[e.predecessor])
            for e in case.edges
        ),
        description=case.description,
        known_optimum=case.known_optimum,
    )
    return new_case, mapping


@dataclass(frozen=True)
class NetworkMetrics:
    """Size and shape statistics of a case's dependency network.

    density and average_degree use the directed edge count E with the
    undirected normalizations (2E/(n(n-1)) and 2E/n). diameter,
    clustering_coefficient and average_path_length are computed on the
    undirected projection; when that projection is disconnected they refer
    to the largest connected component and ``connected`` is False.
    """

    n: int
    e: int
    diameter: int
    density: float
    average_degree: float
    clustering_coefficient: float
    average_path_length: float
    connected: bool = True


def network_metrics(case: DsmCase) -> NetworkMetrics:
    n = case.n
    e = len(case.edges)
    graph = nx.Graph()
    graph.add_nodes_from(case.node_ids)
    graph.add_edges_from((edge.predecessor, edge.dependent) for edge in case.edges)
    connected = nx.is_connected(graph)
    component = graph
    if not connected:
        largest = max(nx.connected_components(graph), key=len)
        component = graph.subgraph(largest)
    return NetworkMetrics(
        n=n,
        e=e,
        diameter=int(nx.diameter(component)),
        density=2.0 * e / (n * (n - 1)),
        average_degree=2.0 * e / n,
        clustering_coefficient=float(nx.average_clustering(graph)),
        average_path_length=float(nx.average_shortest_path_length(component)),
        connected=connected,
    )
