import logging
from itertools import combinations
from typing import List, Sequence

import numpy as np

from laplab.exceptions import PotentialError

from .potential_table import PotentialTable

logger = logging.getLogger(__name__)

MAX_EXTRACTION_NODES = 16
MIN_PROBABILITY = 1e-300


def extract_canonical_potentials(
    joint: np.ndarray,
    nodes: Sequence[int],
    tol: float = 1e-10,
    max_nodes: int = MAX_EXTRACTION_NODES,
) -> List[PotentialTable]:
    """
    Recovers the unique potentials normalized with respect to zero whose Gibbs density is `joint`.

    Parameters
    ----------
    joint      Strictly positive probability table, one axis per node of `nodes` in that order.
    nodes      Node ids labelling the axes (ascending).
    tol        Tables whose largest absolute entry does not exceed `tol` are treated as zero and left out.
    max_nodes  Extraction visits all 2^|nodes| subsets; larger inputs are refused.

    For every subset c the table is E_c(x_c) = -sum_{b subset of c} (-1)^{|c \\ b|} log p(x_b, 0 elsewhere). The
    alternating sum is applied one axis at a time as (I - P_a), where P_a pins axis a to state 0.
    """

    joint = np.asarray(joint, dtype=float)
    nodes = tuple(int(node) for node in nodes)
    if joint.ndim != len(nodes):
        raise PotentialError(f"Table has {joint.ndim} axes but {len(nodes)} nodes were given")
    if list(nodes) != sorted(set(nodes)):
        raise PotentialError("Nodes must be distinct and in ascending order")
    if len(nodes) > max_nodes:
        raise PotentialError(f"Canonical extraction is limited to {max_nodes} nodes, got {len(nodes)}")
    if np.any(~np.isfinite(joint)) or np.any(joint < MIN_PROBABILITY):
        raise PotentialError("Canonical extraction needs a strictly positive distribution (not a Gibbs density)")
    if abs(joint.sum() - 1.0) > 1e-8:
        raise PotentialError(f"Probabilities must sum to 1, got {joint.sum()}")

    log_p = np.log(joint)
    tables = []
    for size in range(1, len(nodes) + 1):
        for axes in combinations(range(len(nodes)), size):
            pinned = tuple(slice(None) if axis in axes else 0 for axis in range(len(nodes)))
            table = log_p[pinned]
            for axis in range(size):
                table = table - np.take(table, [0], axis=axis)

            energies = -table
            if np.max(np.abs(energies)) <= tol:
                continue
            tables.append(PotentialTable(tuple(nodes[axis] for axis in axes), energies.shape, energies))

    logger.debug("extracted %d nonzero canonical tables over %d nodes", len(tables), len(nodes))
    return tables
