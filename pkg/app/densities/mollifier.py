# -*- coding: utf-8 -*-
"""
Mollifier - 유한 격자 밀도의 scale-and-shift mollification과 ε-mollifier 인증

g = α·f + (1 − α) 는 단위 측도 support 위에서 질량을 보존하고, argmax와 기울기 방향을 유지한 채
값의 범위를 [e^{−ε/2}, e^{ε/2}] 안으로 줄인다.
"""
import logging
import math
from typing import Any, Callable, List, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.exceptions import InvalidParameterError, MollifierError
from app.schemas.dataset import Dataset
from app.schemas.report import Certificate

logger = logging.getLogger(__name__)

MASS_TOLERANCE = 1e-6
UNIT_MEASURE_TOLERANCE = 1e-9
CERTIFICATE_TOLERANCE = 1e-9


class FiniteGridDensity(BaseModel):
    """
    축 정렬 box 위 정규 격자(midpoint) 밀도

    values는 축마다 셀 하나에 값 하나인 (n_1[, n_2]) 배열이며, Σ values · cell_measure = 1 이어야 한다.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    lower: List[float] = Field(..., min_length=1)
    upper: List[float] = Field(..., min_length=1)
    values: np.ndarray

    @model_validator(mode="before")
    @classmethod
    def _coerce_values(cls, data: Any) -> Any:
        if isinstance(data, dict) and "values" in data:
            arr = np.array(data["values"], dtype=np.float64, copy=True)
            arr.setflags(write=False)
            data = {**data, "values": arr}
        return data

    @model_validator(mode="after")
    def _check(self) -> "FiniteGridDensity":
        if len(self.lower) != len(self.upper):
            raise ValueError("lower and upper must have the same dimension")
        if any(lo >= hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError("lower must be strictly below upper on every axis")
        if self.values.ndim != len(self.lower) or self.values.size == 0:
            raise ValueError(f"values must be a non-empty {len(self.lower)}-D grid")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid values must be finite")
        if np.any(self.values < 0.0):
            raise ValueError("grid values must be nonnegative")
        mass = self.mass()
        if abs(mass - 1.0) > MASS_TOLERANCE:
            raise ValueError(f"grid density must integrate to 1 (got {mass!r})")
        return self

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def cell_measure(self) -> float:
        return math.prod((hi - lo) / n for lo, hi, n in zip(self.lower, self.upper, self.values.shape))

    @property
    def support_measure(self) -> float:
        return math.prod(hi - lo for lo, hi in zip(self.lower, self.upper))

    def mass(self) -> float:
        """Riemann sum"""
        return float(np.sum(self.values) * self.cell_measure)

    def axes(self) -> List[np.ndarray]:
        """축별 셀 중심 좌표"""
        return [
            lo + (np.arange(n) + 0.5) * (hi - lo) / n
            for lo, hi, n in zip(self.lower, self.upper, self.values.shape)
        ]

    @classmethod
    def from_function(
        cls,
        fn: Callable[[np.ndarray], np.ndarray],
        lower: Sequence[float],
        upper: Sequence[float],
        n: int,
    ) -> "FiniteGridDensity":
        """
        셀 중심에서 fn을 평가해 격자 밀도를 만든다

        Args:
            fn: (m, d) 점 배열 → (m,) 밀도 값
            lower, upper: box 모서리
            n: 축마다 셀 수
        """
        if n < 1:
            raise InvalidParameterError(f"n must be >= 1, got {n}")
        lower, upper = list(map(float, lower)), list(map(float, upper))
        axes = [lo + (np.arange(n) + 0.5) * (hi - lo) / n for lo, hi in zip(lower, upper)]
        mesh = np.meshgrid(*axes, indexing="ij")
        points = np.column_stack([m.ravel() for m in mesh])
        values = np.asarray(fn(points), dtype=np.float64).reshape((n,) * len(axes))
        return cls(lower=lower, upper=upper, values=values)

    @classmethod
    def normalized(cls, values: np.ndarray, lower: Sequence[float], upper: Sequence[float]) -> "FiniteGridDensity":
        """임의의 비음수 격자 값을 질량 1로 정규화"""
        arr = np.asarray(values, dtype=np.float64)
        cell = math.prod((hi - lo) / n for lo, hi, n in zip(lower, upper, arr.shape))
        total = float(np.sum(arr)) * cell
        if not total > 0.0:
            raise InvalidParameterError("cannot normalize a grid with zero mass")
        return cls(lower=list(lower), upper=list(upper), values=arr / total)


def mollification_scale(f: FiniteGridDensity, eps: float) -> float:
    """
    f를 M_ε 안으로 넣는 가장 큰 α ∈ (0, 1]

    α = min(1, (e^{ε/2}−1)/(f_max−1) [f_max>1], (1−e^{−ε/2})/(1−f_min) [f_min<1])
    """
    if not eps > 0.0:
        raise InvalidParameterError(f"eps must be positive, got {eps}")
    f_max = float(np.max(f.values))
    f_min = float(np.min(f.values))
    alpha = 1.0
    if f_max > 1.0:
        alpha = min(alpha, math.expm1(min(eps / 2.0, 700.0)) / (f_max - 1.0))
    if f_min < 1.0:
        alpha = min(alpha, -math.expm1(-eps / 2.0) / (1.0 - f_min))
    return alpha


def mollify(f: FiniteGridDensity, eps: float) -> FiniteGridDensity:
    """
    scale-and-shift mollification g = α·f + (1 − α)

    Raises:
        MollifierError: support 측도가 1이 아닌 경우 (affine 변환이 질량을 보존하지 않음)
    """
    if abs(f.support_measure - 1.0) > UNIT_MEASURE_TOLERANCE:
        raise MollifierError(f"support must have unit measure, got {f.support_measure!r}")

    alpha = mollification_scale(f, eps)
    if alpha == 1.0:
        return f
    logger.debug(f"Mollifying grid density with alpha={alpha:.6g} (eps={eps})")
    return FiniteGridDensity(lower=f.lower, upper=f.upper, values=alpha * f.values + (1.0 - alpha))


def mollifier_certificate(
    q_log: Callable[[np.ndarray], np.ndarray],
    q_prime_log: Callable[[np.ndarray], np.ndarray],
    eval_points: Dataset,
    eps: float,
) -> Certificate:
    """
    평가 점 위에서 max |log q − log q'| ≤ ε 인지 확인

    Returns:
        Certificate: (max_abs_log_ratio, passed)
    """
    if len(eval_points) == 0:
        raise InvalidParameterError("eval_points must be non-empty")
    a = np.asarray(q_log(eval_points.points), dtype=np.float64)
    b = np.asarray(q_prime_log(eval_points.points), dtype=np.float64)
    max_abs = float(np.max(np.abs(a - b)))
    return Certificate(max_abs=max_abs, passed=bool(max_abs <= eps + CERTIFICATE_TOLERANCE))
