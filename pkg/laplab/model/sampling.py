import logging
from typing import List, Tuple

import numpy as np
from scipy.special import logsumexp

from laplab.exceptions import PotentialError
from laplab.util import SeedLike, as_generator

from .dataset import Dataset
from .mrf_model import DEFAULT_ENUMERATION_CAP, MrfModel, exact_joint

logger = logging.getLogger(__name__)

DEFAULT_BURN_IN = 1000
DEFAULT_THINNING = 10


def sample_exact(m: MrfModel, n: int, seed: SeedLike, cap: int = DEFAULT_ENUMERATION_CAP) -> Dataset:
    """
    Draws n i.i.d. samples from the exact joint by inverting its cumulative table.
    """

    if n < 0:
        raise PotentialError(f"Sample count must be non-negative, got {n}")
    rng = as_generator(seed)

    probabilities = exact_joint(m, cap).ravel()
    cumulative = np.cumsum(probabilities)
    cumulative[-1] = 1.0

    flat = np.searchsorted(cumulative, rng.random(n), side="right")
    flat = np.minimum(flat, probabilities.size - 1)
    observations = np.stack(np.unravel_index(flat, m.cards), axis=1) if n else np.zeros((0, m.num_nodes))
    return Dataset(observations, m.cards)


def _site_tables(m: MrfModel) -> List[List[Tuple[np.ndarray, Tuple[int, ...]]]]:
    """
    For every node j, the negated energy tables containing j with j's axis moved last, paired with the other nodes of
    the scope. Indexing such a table with the other nodes' states yields the logits of x_j directly.
    """

    sites = []
    for j in m.graph.nodes:
        entries = []
        for table in m.tables_containing(j):
            position = table.scope.index(j)
            others = tuple(node for node in table.scope if node != j)
            entries.append((np.moveaxis(-table.energies, position, -1), others))
        sites.append(entries)
    return sites


def sample_gibbs(
    m: MrfModel,
    n: int,
    burn_in: int = DEFAULT_BURN_IN,
    thinning: int = DEFAULT_THINNING,
    seed: SeedLike = 0,
    chains: int = 1,
) -> Dataset:
    """
    Single-site systematic-scan Gibbs sampling.

    `chains` independent chains advance together (vectorized over chains). After `burn_in` sweeps, every `thinning`-th
    sweep contributes one sample per chain until n samples are collected. Each full conditional only reads the tables
    containing the updated node.
    """

    if n < 0 or burn_in < 0 or thinning < 0 or chains < 1:
        raise PotentialError("n, burn_in and thinning must be non-negative and chains positive")

    rng = as_generator(seed)
    sites = _site_tables(m)
    state = np.stack([rng.integers(0, card, size=chains) for card in m.cards], axis=1)
    step = max(thinning, 1)

    samples = []
    collected = 0
    sweep = 0
    while collected < n:
        for j, entries in enumerate(sites):
            logits = np.zeros((chains, m.cards[j]))
            for table, others in entries:
                logits += table[tuple(state[:, node] for node in others) + (slice(None),)]
            probabilities = np.exp(logits - logsumexp(logits, axis=1, keepdims=True))
            cumulative = np.cumsum(probabilities, axis=1)
            draws = rng.random(chains)[:, None]
            state[:, j] = np.minimum((cumulative < draws).sum(axis=1), m.cards[j] - 1)

        sweep += 1
        if sweep > burn_in and (sweep - burn_in) % step == 0:
            samples.append(state.copy())
            collected += chains

    logger.debug("gibbs sampler ran %d sweeps over %d chains", sweep, chains)
    observations = np.concatenate(samples, axis=0)[:n] if samples else np.zeros((0, m.num_nodes))
    return Dataset(observations, m.cards)
