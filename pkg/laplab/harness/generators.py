import logging
import re

from laplab.exceptions import ConfigError, FormatError, LapLabError
from laplab.graph import UndirectedGraph, bipartite_graph, complete_graph, grid_graph
from laplab.model import ModelStructure, MrfModel, read_model, read_structure
from laplab.util import make_stream

logger = logging.getLogger(__name__)

_PAIR = re.compile(r"^(\d+)x(\d+)$")


def _pair(text: str, spec: str):
    match = _PAIR.match(text)
    if not match:
        raise ConfigError(f"Expected dimensions like 3x3 in model spec '{spec}'")
    return int(match.group(1)), int(match.group(2))


def _count(text: str, spec: str) -> int:
    if not text.isdigit():
        raise ConfigError(f"Expected a node count in model spec '{spec}'")
    return int(text)


def _graph(kind: str, argument: str, spec: str) -> UndirectedGraph:
    if kind == "grid":
        return grid_graph(*_pair(argument, spec))
    if kind in ("complete", "fully-connected"):
        return complete_graph(_count(argument, spec))
    if kind in ("bipartite", "fully-connected-bipartite"):
        return bipartite_graph(*_pair(argument, spec))
    raise ConfigError(f"Unknown model family '{kind}' in '{spec}'")


def model_structure(spec: str, cards: int = 2) -> ModelStructure:
    """
    The pairwise structure (unary and edge potentials) named by `spec`: grid:RxC, complete:M (or fully-connected:M),
    bipartite:MxN (or fully-connected-bipartite:MxN), or file:PATH for a graph or model file.
    """

    kind, _, argument = spec.partition(":")
    try:
        if kind == "file":
            return read_structure(argument, default_card=cards)
        graph = _graph(kind, argument, spec)
        return ModelStructure.pairwise(graph, (cards,) * graph.num_nodes)
    except ConfigError:
        raise
    except LapLabError as error:
        raise ConfigError(f"Invalid model spec '{spec}': {error}")


def random_parameters(structure: ModelStructure, seed: int, width: float = 1.0) -> MrfModel:
    """
    A model over `structure` with every free entry drawn i.i.d. uniform on [-width, width].
    """

    if width < 0:
        raise ConfigError(f"The parameter width must be non-negative, got {width}")
    values = make_stream(seed, "model").uniform(-width, width, size=structure.dimension)
    return MrfModel.from_vector(structure, values)


def generate_model(spec: str, seed: int, cards: int = 2, width: float = 1.0) -> MrfModel:
    """
    A random model for `spec`, identical for identical arguments. A model file that already carries parameters is
    returned as it is.
    """

    if spec.startswith("file:"):
        try:
            return read_model(spec[len("file:") :])
        except FormatError:
            # graph-only files get random parameters below
            pass

    model = random_parameters(model_structure(spec, cards), seed, width)
    logger.info("generated %s model: %d nodes, %d parameters", spec, model.num_nodes, model.layout.dimension)
    return model
