import pytest

from hyperkoszul.fields import GF, QQ
from hyperkoszul.hypergraph import Hypergraph, VertexTable


@pytest.fixture
def table3():
    return VertexTable.range(3)


@pytest.fixture
def three_vertex(table3):
    """Two complexes, two independence hypergraphs and a general pair on three vertices."""
    T = table3
    return {
        "K1": Hypergraph.of(T, [(0, 1), (0, 2), (0,), (1,), (2,)]),
        "K2": Hypergraph.of(T, [(0, 1), (1, 2), (0,), (1,), (2,)]),
        "L1": Hypergraph.of(T, [(0, 1, 2), (0, 2), (0, 1), (0,)]),
        "L2": Hypergraph.of(T, [(0, 1, 2), (0, 2), (1, 2), (2,)]),
        "H1": Hypergraph.of(T, [(0, 1), (0, 2), (0,), (1,)]),
        "H2": Hypergraph.of(T, [(0, 1, 2), (0, 1), (2,)]),
    }


@pytest.fixture(params=["rational", "gf"])
def field(request):
    return QQ if request.param == "rational" else GF(65521)
