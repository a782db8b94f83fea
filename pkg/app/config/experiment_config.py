# -*- coding: utf-8 -*-
"""
Experiment Config - 평평한 key = value (INI 스타일) 실험 설정 파일

섹션 헤더가 없으면 하나의 암묵적 섹션으로 읽고, [experiment] 섹션 하나도 허용한다.
목록 값(eps, seeds, m)은 쉼표로 구분한다. 알 수 없는 키나 잘못된 값은 필드 이름과 줄 번호를 담은 ConfigError.
"""
import configparser
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from app.exceptions import ConfigError
from app.schemas.boost import BoostConfig
from app.schemas.mcmc import McmcConfig
from app.schemas.train import TrainConfig

logger = logging.getLogger(__name__)

SECTION = "experiment"
DEFAULT_EPS_SWEEP = [0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 5.0]
LIST_KEYS = {"eps", "seeds", "m"}

FULL_SCALE = {"n_train": 10_000, "epochs": 750, "n_eval": 100_000}

Domain = Literal["ring", "mix1d", "random1d", "random2d", "normal1d"]


class ExperimentConfig(BaseModel):
    """해석이 끝난 실험 설정 (manifest에 그대로 기록된다)"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    domain: Domain = "mix1d"
    eps: List[float] = Field(default_factory=lambda: list(DEFAULT_EPS_SWEEP), min_length=1)
    T: int = Field(default=3, ge=0)
    n_train: int = Field(default=2000, ge=1)
    n_eval: int = Field(default=100_000, ge=1)
    n_mc: int = Field(default=100_000, ge=100)
    repeats: int = Field(default=4, ge=1)
    seed: int = Field(default=0, ge=0)
    seeds: Optional[List[int]] = None
    m: List[int] = Field(default_factory=lambda: [1, 2, 3, 4, 5, 6, 7, 8, 9, 10], min_length=1)
    target_m: int = Field(default=5, ge=1)
    ring_radius: float = Field(default=1.0, gt=0.0)
    data_mode: Literal["fresh", "fixed"] = "fresh"
    dataset_size: int = Field(default=10_000, ge=1)
    coverage_level: float = Field(default=0.95, gt=0.0, lt=1.0)
    epochs: int = Field(default=200, ge=1)
    learning_rate: float = Field(default=0.01, gt=0.0)
    momentum: float = Field(default=0.9, ge=0.0, lt=1.0)
    batch_size: int = Field(default=0, ge=0)
    proposal_sigma: float = Field(default=0.25, gt=0.0)
    burn_in: int = Field(default=1000, ge=0)
    thinning: int = Field(default=10, ge=1)
    n_chains: int = Field(default=4, ge=1)
    out: str = "outputs"

    @model_validator(mode="after")
    def _check(self) -> "ExperimentConfig":
        if any(not e > 0.0 for e in self.eps):
            raise ValueError("every eps must be positive")
        if any(s < 0 for s in self.seeds or []):
            raise ValueError("seeds must be nonnegative")
        if self.seeds is not None and len(self.seeds) != self.repeats:
            raise ValueError(f"seeds lists {len(self.seeds)} values but repeats = {self.repeats}")
        if any(v < 1 for v in self.m):
            raise ValueError("m values must be >= 1")
        return self

    def repeat_seeds(self) -> List[int]:
        """repeat별 기준 시드 (seeds가 없으면 seed, seed+1, ...)"""
        if self.seeds is not None:
            return list(self.seeds)
        return [self.seed + r for r in range(self.repeats)]

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.learning_rate,
            momentum=self.momentum,
            epochs=self.epochs,
            batch_size=self.batch_size,
        )

    def mcmc_config(self, seed: int = 0) -> McmcConfig:
        return McmcConfig(
            proposal_sigma=self.proposal_sigma,
            burn_in=self.burn_in,
            thinning=self.thinning,
            n_chains=self.n_chains,
            seed=seed,
        )

    def boost_config(self, eps: float, seed: int, T: Optional[int] = None) -> BoostConfig:
        return BoostConfig(
            T=self.T if T is None else T,
            eps=eps,
            n_train=self.n_train,
            n_mc=self.n_mc,
            data_mode=self.data_mode,
            dataset_size=self.dataset_size,
            mcmc=self.mcmc_config(seed),
            train=self.train_config(),
            seed=seed,
        )

    def with_overrides(self, **overrides: Any) -> "ExperimentConfig":
        """None이 아닌 값만 덮어쓰고 다시 검증"""
        values = {k: v for k, v in overrides.items() if v is not None}
        if not values:
            return self
        try:
            return ExperimentConfig.model_validate({**self.model_dump(), **values})
        except ValidationError as e:
            raise _config_error(e, {}) from e

    def full_scaled(self) -> "ExperimentConfig":
        return self.with_overrides(**FULL_SCALE)


def _key_lines(text: str) -> Dict[str, int]:
    """키가 처음 설정된 1-based 줄 번호"""
    lines: Dict[str, int] = {}
    pattern = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*[=:]")
    for number, line in enumerate(text.splitlines(), start=1):
        match = pattern.match(line)
        if match:
            lines.setdefault(match.group(1), number)
    return lines


def _config_error(error: ValidationError, lines: Dict[str, int]) -> ConfigError:
    first = error.errors()[0]
    field = str(first["loc"][0]) if first.get("loc") else None
    return ConfigError(first["msg"], field=field, line=lines.get(field) if field else None)


def parse_experiment_config(text: str) -> ExperimentConfig:
    """
    설정 텍스트 해석

    Raises:
        ConfigError: 문법 오류, 알 수 없는 키, 잘못된 값
    """
    lines = _key_lines(text)
    has_header = any(line.strip().startswith("[") for line in text.splitlines())
    body = text if has_header else f"[{SECTION}]\n{text}"
    offset = 0 if has_header else 1

    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str  # T 같은 대문자 키 보존
    try:
        parser.read_string(body)
    except configparser.Error as e:
        line = getattr(e, "lineno", None)
        raise ConfigError(f"malformed config: {e.message}", line=line - offset if line else None) from e

    sections = parser.sections()
    if sections != [SECTION]:
        raise ConfigError(f"expected a single [{SECTION}] section, got {sections}")

    raw: Dict[str, Union[str, List[str]]] = {}
    for key, value in parser.items(SECTION):
        if key not in ExperimentConfig.model_fields:
            raise ConfigError("unknown key", field=key, line=lines.get(key))
        if key in LIST_KEYS:
            raw[key] = [v.strip() for v in value.split(",") if v.strip()]
        else:
            raw[key] = value.strip()

    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        raise _config_error(e, lines) from e


def load_experiment_config(path: Optional[Union[str, Path]]) -> ExperimentConfig:
    """파일이 없으면 (path=None) 기본값"""
    if path is None:
        return ExperimentConfig()
    target = Path(path)
    if not target.exists():
        raise ConfigError(f"config file not found: {target}")
    config = parse_experiment_config(target.read_text(encoding="utf-8"))
    logger.info(f"Loaded experiment config from {target} (domain={config.domain}, eps={config.eps})")
    return config
