import logging
from pathlib import Path
from typing import Dict, List, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from laplab.estimators import ALL_ESTIMATORS, parse_estimator
from laplab.exceptions import ConfigError
from laplab.model import DEFAULT_BURN_IN, DEFAULT_ENUMERATION_CAP, DEFAULT_THINNING
from laplab.optimize import OptConfig

logger = logging.getLogger(__name__)

LIST_KEYS = {"sample_sizes", "estimators"}
OPT_PREFIX = "opt_"


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    model: str = "grid:3x3"
    cards: int = Field(default=2, ge=2)
    width: float = Field(default=1.0, ge=0)
    sample_sizes: List[int] = Field(default_factory=lambda: [100, 1000, 10000, 100000], min_length=1)
    replicates: int = Field(default=20, ge=1)
    seed: int = Field(default=0, ge=0)
    estimators: List[str] = Field(default_factory=lambda: list(ALL_ESTIMATORS), min_length=1)
    sampler: Literal["exact", "gibbs"] = "exact"
    burn_in: int = Field(default=DEFAULT_BURN_IN, ge=0)
    thinning: int = Field(default=DEFAULT_THINNING, ge=0)
    chains: int = Field(default=1, ge=1)
    workers: int = Field(default=1, ge=1)
    timing: bool = False
    enumeration_cap: int = Field(default=DEFAULT_ENUMERATION_CAP, ge=1)
    opt: OptConfig = Field(default_factory=OptConfig)

    @field_validator("sample_sizes")
    @classmethod
    def _positive_sizes(cls, sizes: List[int]) -> List[int]:
        if any(size < 1 for size in sizes):
            raise ValueError("sample sizes must be positive")
        return sizes

    @field_validator("estimators")
    @classmethod
    def _known_estimators(cls, names: List[str]) -> List[str]:
        for name in names:
            parse_estimator(name)
        if len(set(names)) != len(names):
            raise ValueError("estimators may be listed only once")
        return names


def parse_config_text(text: str, source: str = "<config>") -> ExperimentConfig:
    """
    Parses `key = value` lines. `#` starts a comment, list values are comma separated and optimizer settings carry an
    `opt_` prefix (opt_grad_tol = 1e-10).
    """

    values: Dict[str, Union[str, List[str], Dict[str, str]]] = {}
    opt: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, separator, value = (part.strip() for part in line.partition("="))
        if not separator or not key:
            raise ConfigError(f"{source}:{number}: expected 'key = value'")

        target = opt if key.startswith(OPT_PREFIX) else values
        name = key[len(OPT_PREFIX) :] if key.startswith(OPT_PREFIX) else key
        if name in target:
            raise ConfigError(f"{source}:{number}: '{key}' is set twice")
        target[name] = [item.strip() for item in value.split(",") if item.strip()] if key in LIST_KEYS else value

    if opt:
        values["opt"] = opt
    try:
        return ExperimentConfig.model_validate(values)
    except ValidationError as error:
        raise ConfigError(f"{source}: invalid configuration\n{error}")


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as error:
        raise ConfigError(f"Cannot read {path}: {error}")
    config = parse_config_text(text, str(path))
    logger.info("loaded configuration from %s", path)
    return config
