import numpy as np
import pytest

from hyperline.idmap import IdMap
from hyperline.linegraph import (
    LineGraph,
    slinegraph_ensemble,
    slinegraph_hashmap,
    slinegraph_intersection,
    slinegraph_naive,
    slinegraph_spgemm,
)
from hyperline.metrics import s_betweenness

from worked_example import EXAMPLE_TSV, example_hypergraph


@pytest.fixture
def example():
    return example_hypergraph()


@pytest.fixture
def example_tsv(tmp_path):
    path = tmp_path / "example.tsv"
    path.write_text(EXAMPLE_TSV)
    return path


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Load every JIT kernel once so timing-sensitive tests measure steady state."""
    h = example_hypergraph()
    for build in (slinegraph_naive, slinegraph_hashmap, slinegraph_intersection, slinegraph_spgemm):
        build(h, 1)
    slinegraph_hashmap(h, 1, tls="preallocated")
    slinegraph_ensemble(h, [1, 2])
    s_betweenness(LineGraph(1, np.array([[0, 1]]), np.arange(2), IdMap.identity(2)))
