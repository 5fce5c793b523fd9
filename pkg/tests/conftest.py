import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lfid.topology import Topology, bundled_topology  # noqa: E402
from oracles import corpus, path_graph, ring  # noqa: E402


@pytest.fixture
def triangle():
    return Topology.from_links(3, [(0, 1, 1000), (1, 2, 1000), (0, 2, 1000)])


@pytest.fixture
def ring6():
    return ring(6)


@pytest.fixture
def path4():
    return path_graph(4)


@pytest.fixture(scope="session")
def abilene():
    return bundled_topology("abilene")


@pytest.fixture(scope="session")
def small_corpus():
    return corpus(200)


@pytest.fixture
def excised_neighbor_topology():
    """D-1, 1-X, X-0, X-3, 0-3 with unit weights; ids D=0, 1=1, X=2, 0=3, 3=4."""
    return Topology.from_links(
        5,
        [(0, 1, 1000), (1, 2, 1000), (2, 3, 1000), (2, 4, 1000), (3, 4, 1000)],
        ["D", "1", "X", "0", "3"],
    )
