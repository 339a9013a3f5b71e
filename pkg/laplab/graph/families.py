from itertools import combinations

from laplab.exceptions import GraphError

from .undirected_graph import UndirectedGraph


def grid_graph(rows: int, cols: int) -> UndirectedGraph:
    """
    A rows x cols lattice with 4-neighbour connectivity; node r * cols + c sits at row r, column c.
    """

    if rows < 1 or cols < 1:
        raise GraphError(f"Grid dimensions must be positive, got {rows}x{cols}")

    edges = []
    for r in range(rows):
        for c in range(cols):
            node = r * cols + c
            if c + 1 < cols:
                edges.append((node, node + 1))
            if r + 1 < rows:
                edges.append((node, node + cols))
    return UndirectedGraph(rows * cols, edges)


def complete_graph(num_nodes: int) -> UndirectedGraph:
    if num_nodes < 1:
        raise GraphError(f"A complete graph needs at least one node, got {num_nodes}")
    return UndirectedGraph(num_nodes, combinations(range(num_nodes), 2))


def bipartite_graph(left: int, right: int) -> UndirectedGraph:
    """
    The complete bipartite graph between nodes 0..left-1 and left..left+right-1 (the layout of a fully observed
    restricted Boltzmann machine).
    """

    if left < 1 or right < 1:
        raise GraphError(f"Both sides of a bipartite graph must be non-empty, got {left}x{right}")
    return UndirectedGraph(left + right, [(i, left + k) for i in range(left) for k in range(right)])
