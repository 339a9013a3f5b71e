import logging
import time
from functools import partial
from typing import List, Optional, Tuple

import numpy as np

from laplab.estimators import EstimatorResult, run_estimator
from laplab.exceptions import ConfigError, EnumerationLimitError, LapLabError, NonConvergenceError
from laplab.model import Dataset, MrfModel, sample_exact, sample_gibbs
from laplab.util import format_clique, make_stream, parallel_map

from .communication import result_communication
from .config import ExperimentConfig
from .generators import generate_model
from .report import AGGREGATE, OK, ResultRow

logger = logging.getLogger(__name__)

FAILED_CAP = "failed-cap"
NOT_CONVERGED = "not-converged"
ERROR = "error"

# (replicate, sample size)
Unit = Tuple[int, int]


def draw_dataset(truth: MrfModel, cfg: ExperimentConfig, replicate: int, n: int) -> Dataset:
    """
    The data of one (replicate, N) pair. Every pair has its own random substream, so the draw does not depend on which
    other pairs are run or in which order.
    """

    rng = make_stream(cfg.seed, "data", replicate, n)
    if cfg.sampler == "gibbs":
        return sample_gibbs(truth, n, cfg.burn_in, cfg.thinning, rng, cfg.chains)
    return sample_exact(truth, n, rng, cfg.enumeration_cap)


def _result_rows(
    name: str, unit: Unit, truth: MrfModel, result: EstimatorResult, wall_ms: int
) -> List[ResultRow]:
    replicate, n = unit
    errors = np.abs(result.estimate.params.values - truth.params.values)
    rmse = float(np.sqrt(np.mean(errors**2))) if errors.size else 0.0
    status = OK if result.converged else NOT_CONVERGED
    comm_units = result_communication(result, truth.structure)

    def row(clique: str, abs_error: float) -> ResultRow:
        return ResultRow(name, n, replicate, clique, abs_error, rmse, wall_ms, result.blocks, comm_units, status)

    rows = [row(AGGREGATE, float(errors.max()) if errors.size else 0.0)]
    for clique in truth.cliques:
        rows.append(row(format_clique(clique, "-"), float(errors[truth.layout.slice_of(clique)].max())))
    return rows


def _failed_row(name: str, unit: Unit, status: str, wall_ms: int) -> ResultRow:
    replicate, n = unit
    return ResultRow(name, n, replicate, AGGREGATE, None, None, wall_ms, 0, 0, status)


def _run_estimator(
    name: str, unit: Unit, truth: MrfModel, data: Dataset, cfg: ExperimentConfig, block_workers: int
) -> List[ResultRow]:
    start = time.perf_counter()

    def elapsed() -> int:
        return int(round((time.perf_counter() - start) * 1000)) if cfg.timing else 0

    status: Optional[str] = None
    try:
        result = run_estimator(name, truth.structure, data, cfg.opt, block_workers, cfg.enumeration_cap)
    except EnumerationLimitError as error:
        status, reason = FAILED_CAP, error
    except NonConvergenceError as error:
        status, reason = NOT_CONVERGED, error
    except LapLabError as error:
        status, reason = ERROR, error

    if status is not None:
        logger.warning("%s failed at replicate %d, N=%d: %s", name, unit[0], unit[1], reason)
        return [_failed_row(name, unit, status, elapsed())]
    return _result_rows(name, unit, truth, result, elapsed())


def run_unit(unit: Unit, truth: MrfModel, cfg: ExperimentConfig, block_workers: int = 1) -> List[ResultRow]:
    replicate, n = unit
    logger.info("replicate %d, N=%d", replicate, n)
    data = draw_dataset(truth, cfg, replicate, n)

    rows = []
    for name in cfg.estimators:
        rows.extend(_run_estimator(name, unit, truth, data, cfg, block_workers))
    return rows


def run_experiment(cfg: ExperimentConfig, truth: Optional[MrfModel] = None) -> List[ResultRow]:
    """
    Runs every estimator on every (replicate, N) pair and returns the sorted result rows.

    Pairs run in parallel when there are several; a single pair hands the workers to its estimators' blocks instead.
    Either way the numbers depend on the configuration only.
    """

    truth = truth or generate_model(cfg.model, cfg.seed, cfg.cards, cfg.width)
    if cfg.sampler == "exact" and truth.num_states > cfg.enumeration_cap:
        raise ConfigError(
            f"The model has {truth.num_states} joint states, too many for exact sampling; use sampler = gibbs"
        )

    units = [(replicate, n) for replicate in range(cfg.replicates) for n in cfg.sample_sizes]
    block_workers = cfg.workers if len(units) == 1 else 1
    unit_workers = 1 if len(units) == 1 else cfg.workers
    results = parallel_map(partial(run_unit, truth=truth, cfg=cfg, block_workers=block_workers), units, unit_workers)

    rows = [row for unit_rows in results for row in unit_rows]
    logger.info("experiment finished: %d rows", len(rows))
    return sorted(rows, key=lambda row: row.sort_key)
