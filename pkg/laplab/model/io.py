"""
Text formats for graphs, models and datasets.

Graph file::

    nodes 9
    edge 0 1
    edge 0 3

Model file: a graph file plus a cardinality line and one line per clique listing its free entries in row-major order
over the states >= 1::

    cards 2 2 2 2 2 2 2 2 2
    clique 0 : 0.25
    clique 0,1 : -0.5

Dataset file: a header `N M` followed by one row of space-separated integer states per sample.
"""
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from laplab.exceptions import FormatError, LapLabError
from laplab.graph import Clique, CliqueSystem, UndirectedGraph, make_clique
from laplab.potentials import ParamVector, PotentialTable
from laplab.util import format_clique, parse_node_list

from .dataset import Dataset
from .mrf_model import ModelStructure, MrfModel

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _content_lines(path: PathLike) -> List[Tuple[int, str]]:
    try:
        text = Path(path).read_text()
    except OSError as error:
        raise FormatError(f"Cannot read {path}: {error}")
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((number, line))
    return lines


def _parse_model_text(path: PathLike):
    num_nodes: Optional[int] = None
    cards: Optional[Tuple[int, ...]] = None
    edges: List[Tuple[int, int]] = []
    cliques: Dict[Clique, List[float]] = {}

    for number, line in _content_lines(path):
        keyword, _, rest = line.partition(" ")
        try:
            if keyword == "nodes":
                num_nodes = int(rest)
            elif keyword == "cards":
                cards = tuple(int(value) for value in rest.split())
            elif keyword == "edge":
                i, j = (int(value) for value in rest.split())
                edges.append((i, j))
            elif keyword == "clique":
                scope_text, separator, values_text = rest.partition(":")
                if not separator:
                    raise ValueError("missing ':' between clique and values")
                scope = make_clique(parse_node_list(scope_text))
                if scope in cliques:
                    raise ValueError(f"clique {scope} listed twice")
                cliques[scope] = [float(value) for value in values_text.split()]
            else:
                raise ValueError(f"unknown keyword '{keyword}'")
        except (ValueError, LapLabError) as error:
            raise FormatError(f"{path}:{number}: {error}")

    if num_nodes is None:
        raise FormatError(f"{path}: missing 'nodes M' line")
    return num_nodes, cards, edges, cliques


def _build_graph(num_nodes: int, edges: List[Tuple[int, int]], cliques: Sequence[Clique]) -> UndirectedGraph:
    pairs = {(min(i, j), max(i, j)) for i, j in edges}
    for clique in cliques:
        pairs.update((a, b) for index, a in enumerate(clique) for b in clique[index + 1 :])
    return UndirectedGraph(num_nodes, pairs)


def read_graph(path: PathLike) -> UndirectedGraph:
    num_nodes, _, edges, cliques = _parse_model_text(path)
    return _build_graph(num_nodes, edges, list(cliques))


def read_structure(path: PathLike, default_card: int = 2) -> ModelStructure:
    """
    Reads the structure of a model file. A plain graph file yields the pairwise structure with unary potentials and
    `default_card` states per node.
    """

    num_nodes, cards, edges, cliques = _parse_model_text(path)
    graph = _build_graph(num_nodes, edges, list(cliques))
    cards = cards or (default_card,) * num_nodes
    if not cliques:
        return ModelStructure.pairwise(graph, cards)
    return ModelStructure(graph, CliqueSystem(tuple(cliques)), cards)


def read_model(path: PathLike) -> MrfModel:
    num_nodes, cards, edges, cliques = _parse_model_text(path)
    if cards is None or not cliques:
        raise FormatError(f"{path}: a model file needs a 'cards' line and at least one 'clique' line")

    graph = _build_graph(num_nodes, edges, list(cliques))
    try:
        tables = tuple(
            PotentialTable.from_free(scope, [cards[node] for node in scope], values)
            for scope, values in cliques.items()
        )
        return MrfModel(graph, CliqueSystem(tuple(cliques)), cards, tables)
    except (LapLabError, IndexError) as error:
        raise FormatError(f"{path}: {error}")


def format_model(graph: UndirectedGraph, params: ParamVector) -> str:
    lines = [f"nodes {graph.num_nodes}", "cards " + " ".join(str(card) for card in params.layout.cards)]
    lines.extend(f"edge {i} {j}" for i, j in graph.sorted_edges)
    for scope in params.layout.scopes:
        values = " ".join(repr(float(value)) for value in params.clique_values(scope))
        lines.append(f"clique {format_clique(scope)} : {values}")
    return "\n".join(lines) + "\n"


def write_model(path: PathLike, model: MrfModel):
    Path(path).write_text(format_model(model.graph, model.params))
    logger.info("wrote model with %d cliques to %s", len(model.cliques), path)


def write_estimate(path: PathLike, structure: ModelStructure, params: ParamVector):
    Path(path).write_text(format_model(structure.graph, params))
    logger.info("wrote estimate of %d parameters to %s", params.layout.dimension, path)


def write_dataset(path: PathLike, d: Dataset):
    lines = [f"{d.num_samples} {d.num_variables}"]
    lines.extend(" ".join(str(int(value)) for value in row) for row in d.observations)
    Path(path).write_text("\n".join(lines) + "\n")
    logger.info("wrote %d samples to %s", d.num_samples, path)


def read_dataset(path: PathLike, cards: Optional[Sequence[int]] = None) -> Dataset:
    """
    Reads a dataset file. Without `cards`, every variable is given max(observed) + 1 states (at least 2).
    """

    lines = _content_lines(path)
    if not lines:
        raise FormatError(f"{path}: empty dataset file")
    try:
        num_samples, num_variables = (int(value) for value in lines[0][1].split())
        rows = [[int(value) for value in line.split()] for _, line in lines[1:]]
    except ValueError as error:
        raise FormatError(f"{path}: {error}")

    if len(rows) != num_samples or any(len(row) != num_variables for row in rows):
        raise FormatError(f"{path}: expected {num_samples} rows of {num_variables} values")

    observations = np.asarray(rows, dtype=np.int64).reshape(num_samples, num_variables)
    if cards is None:
        observed = observations.max(axis=0) + 1 if num_samples else np.zeros(num_variables, dtype=int)
        cards = tuple(max(2, int(value)) for value in observed)
    try:
        return Dataset(observations, tuple(cards))
    except LapLabError as error:
        raise FormatError(f"{path}: {error}")
