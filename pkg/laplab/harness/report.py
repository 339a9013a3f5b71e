import csv
import logging
import math
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Iterable, List, Optional, Tuple, Union

from pydantic import BaseModel

from laplab.exceptions import FormatError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

HEADER = ("estimator", "N", "replicate", "clique", "abs_error", "rmse", "wall_ms", "blocks", "comm_units", "status")
AGGREGATE = "ALL"
OK = "ok"


@dataclass(frozen=True)
class ResultRow:
    """
    One line of the result table. Clique rows carry the largest absolute error over the clique's entries; the
    aggregate row (clique `ALL`) carries the largest over all parameters. `rmse` is always over all parameters. Rows of
    a failed estimator have no error values.
    """

    estimator: str
    n: int
    replicate: int
    clique: str
    abs_error: Optional[float]
    rmse: Optional[float]
    wall_ms: int
    blocks: int
    comm_units: int
    status: str = OK

    def __post_init__(self):
        for value in (self.abs_error, self.rmse):
            if value is not None and (not math.isfinite(value) or value < 0):
                raise FormatError(f"Error values must be finite and non-negative, got {value}")

    @property
    def sort_key(self) -> Tuple:
        if self.clique == AGGREGATE:
            clique_key: Tuple = (0,)
        else:
            clique_key = (1,) + tuple(int(node) for node in self.clique.split("-"))
        return self.estimator, self.n, self.replicate, clique_key


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def report_csv(rows: Iterable[ResultRow], path: PathLike):
    """
    Writes the rows sorted by estimator, sample size, replicate and clique (aggregate first).
    """

    ordered = sorted(rows, key=lambda row: row.sort_key)
    if not ordered:
        raise FormatError("Refusing to write an empty result table")
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(HEADER)
        for row in ordered:
            writer.writerow([_format(value) for value in astuple(row)])
    logger.info("wrote %d result rows to %s", len(ordered), path)


def _parse_row(values: List[str]) -> ResultRow:
    kwargs = {}
    for field, text in zip(fields(ResultRow), values):
        if field.name in ("abs_error", "rmse"):
            kwargs[field.name] = float(text) if text else None
        elif field.name in ("n", "replicate", "wall_ms", "blocks", "comm_units"):
            kwargs[field.name] = int(text)
        else:
            kwargs[field.name] = text
    return ResultRow(**kwargs)


def read_csv(path: PathLike) -> List[ResultRow]:
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if tuple(header or ()) != HEADER:
            raise FormatError(f"{path}: unexpected header {header}")
        rows = []
        for number, values in enumerate(reader, start=2):
            if len(values) != len(HEADER):
                raise FormatError(f"{path}:{number}: expected {len(HEADER)} columns, got {len(values)}")
            try:
                rows.append(_parse_row(values))
            except ValueError as error:
                raise FormatError(f"{path}:{number}: {error}")
    return rows


def metadata_path(path: PathLike) -> Path:
    return Path(path).with_suffix(".meta.json")


def write_metadata(path: PathLike, config: BaseModel) -> Path:
    """
    Writes the resolved configuration, defaults included, next to the report at `path`.
    """

    target = metadata_path(path)
    target.write_text(config.model_dump_json(indent=2) + "\n")
    return target
