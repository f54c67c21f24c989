import random
from pathlib import Path

import pytest

from dsmseq import DsmCase, Edge, Node, build_adjacency, load_case

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "dsmseq" / "data"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture(scope="session")
def demo_case() -> DsmCase:
    return load_case(DATA_DIR / "demo_gearbox_7.json")


def make_case(n: int, edge_pairs, names=None) -> DsmCase:
    """Small helper: build a case from index pairs (dependent, predecessor)."""
    ids = [f"v{i:02d}" for i in range(n)]
    nodes = tuple(
        Node(id=ids[i], name=(names[i] if names else f"Task {i}")) for i in range(n)
    )
    edges = tuple(Edge(dependent=ids[d], predecessor=ids[p]) for d, p in edge_pairs)
    return DsmCase(nodes=nodes, edges=edges, description="test network")


def random_case(rng: random.Random, n: int, density: float) -> DsmCase:
    """Random directed graph on n nodes; each ordered pair kept with
    probability density."""
    pairs = [
        (d, p)
        for d in range(n)
        for p in range(n)
        if d != p and rng.random() < density
    ]
    return make_case(n, pairs)


def naive_score(case: DsmCase, order) -> int:
    """Independent double-loop scoring: count edges whose dependent comes
    before its predecessor in the order. Deliberately avoids the package's
    matrix machinery."""
    position = {node_id: i for i, node_id in enumerate(order)}
    total = 0
    for edge in case.edges:
        if position[edge.dependent] < position[edge.predecessor]:
            total += 1
    return total


def adjacency(case: DsmCase):
    return build_adjacency(case)
