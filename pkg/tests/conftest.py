import pytest

from laplab.graph import grid_graph

from .helpers import figure_graph, pairwise_structure


@pytest.fixture
def figure():
    return figure_graph()


@pytest.fixture
def figure_structure(figure):
    return pairwise_structure(figure)


@pytest.fixture
def grid_structure():
    return pairwise_structure(grid_graph(3, 3))
