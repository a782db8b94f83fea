# -*- coding: utf-8 -*-
"""
θ-schedule - θ_t(ε) = (ε / (ε + 4 log 2))^t

기하급수이므로 Σ_{t≤T} θ_t = (ε / 4 log 2)·(1 − r^T) 이고, 상한 ε/(4 log 2)와의 차이는 정확히 (ε / 4 log 2)·r^T > 0 이다.
"""
import math
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.exceptions import InvalidParameterError

FOUR_LOG2 = 4.0 * math.log(2.0)


class ThetaSchedule(BaseModel):
    """θ_1..θ_T (매우 큰 t에서는 float underflow로 0이 될 수 있다)"""

    model_config = ConfigDict(frozen=True)

    eps: float = Field(..., gt=0.0)
    values: List[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check(self) -> "ThetaSchedule":
        if any(not 0.0 <= v < 1.0 for v in self.values):
            raise ValueError("every theta must lie in [0, 1)")
        if any(b > a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("theta schedule must be non-increasing")
        return self

    @property
    def T(self) -> int:
        return len(self.values)

    @property
    def ratio(self) -> float:
        return theta_ratio(self.eps)

    @property
    def bound(self) -> float:
        """Σθ의 상한 ε / (4 log 2)"""
        return self.eps / FOUR_LOG2

    def partial_sums(self) -> np.ndarray:
        return np.cumsum(np.asarray(self.values, dtype=np.float64))

    def head(self, t: int) -> "ThetaSchedule":
        return ThetaSchedule(eps=self.eps, values=self.values[:t])


def theta_ratio(eps: float) -> float:
    return eps / (eps + FOUR_LOG2)


def theta_schedule(eps: float, T: int) -> ThetaSchedule:
    """
    Raises:
        InvalidParameterError: eps ≤ 0 또는 T < 0
    """
    if not eps > 0.0 or not math.isfinite(eps):
        raise InvalidParameterError(f"eps must be a positive finite number, got {eps}")
    if T < 0:
        raise InvalidParameterError(f"T must be >= 0, got {T}")
    r = theta_ratio(eps)
    return ThetaSchedule(eps=eps, values=[r ** t for t in range(1, T + 1)])


def theta_sum_log_gap(eps: float, T: int) -> float:
    """
    log(ε/(4 log 2) − Σ_{t=1}^T θ_t) 닫힌 형태

    = log(ε / 4 log 2) + T·log r. 유한하면 부등식이 엄밀하게 성립한다.
    """
    if not eps > 0.0:
        raise InvalidParameterError(f"eps must be positive, got {eps}")
    if T < 0:
        raise InvalidParameterError(f"T must be >= 0, got {T}")
    return math.log(eps / FOUR_LOG2) + T * math.log(theta_ratio(eps))
