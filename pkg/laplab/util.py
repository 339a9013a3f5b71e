from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Sequence, Tuple, TypeVar, Union

import numpy as np

from laplab.exceptions import ConfigError, FormatError

T = TypeVar("T")
R = TypeVar("R")

SeedLike = Union[int, np.random.Generator]


def parse_node_list(text: str) -> Tuple[int, ...]:
    """
    Parses a comma-separated list of node ids (e.g. "4,5,7") as used on the command line and in model files.
    """

    parts = [part.strip() for part in text.split(",") if part.strip()]
    try:
        return tuple(int(part) for part in parts)
    except ValueError:
        raise FormatError(f"Expected a comma-separated list of node ids, got '{text}'")


def format_clique(clique: Sequence[int], sep: str = ",") -> str:
    return sep.join(str(node) for node in clique)


def make_stream(seed: int, *keys: Union[int, str]) -> np.random.Generator:
    """
    Returns a counter-based (Philox) generator for the substream identified by `keys`.

    Substreams are derived from the seed and the keys alone, so a task draws the same numbers no matter which worker
    runs it or in which order tasks are scheduled. String keys are folded into integers with a stable hash.
    """

    if int(seed) < 0:
        raise ConfigError(f"Seeds must be non-negative, got {seed}")
    spawn_key = tuple(_stable_key(key) for key in keys)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=spawn_key)))


def as_generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return make_stream(int(seed))


def _stable_key(key: Union[int, str]) -> int:
    if isinstance(key, (int, np.integer)):
        return int(key)
    # python's hash() is salted per process, which would break reproducibility across workers
    value = 0
    for byte in str(key).encode("utf-8"):
        value = (value * 131 + byte) % (2**61 - 1)
    return value


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """
    Maps `fn` over `items`, preserving input order in the result.

    With more than one worker the calls run in a process pool; `fn` and the items must then be picklable (module-level
    functions or functools.partial objects wrapping them).
    """

    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))
