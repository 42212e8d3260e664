import networkx as nx
import pytest

from bippr import Graph


def to_graph(nxg: nx.Graph) -> Graph:
    return Graph.from_edges(list(nxg.edges()), n=nxg.number_of_nodes())


def random_connected(n: int, kind: str, seed: int) -> Graph:
    """Deterministic connected random graph, Erdos-Renyi or preferential-attachment."""
    if kind == "er":
        nxg = nx.gnp_random_graph(n, min(1.0, 4.0 / n), seed=seed)
    elif kind == "ba":
        nxg = nx.barabasi_albert_graph(n, 2, seed=seed)
    else:
        raise ValueError(kind)
    comps = sorted(nx.connected_components(nxg), key=min)
    for comp in comps[1:]:
        nxg.add_edge(min(comps[0]), min(comp))
    return to_graph(nxg)


@pytest.fixture
def k2():
    return Graph.from_edges([(0, 1)])


@pytest.fixture
def k3():
    return Graph.from_edges([(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def s3():
    # star: center 0, leaves 1..3
    return Graph.from_edges([(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def path3():
    return Graph.from_edges([(0, 1), (1, 2)])


@pytest.fixture(scope="session")
def g500():
    return random_connected(500, "ba", seed=7)
