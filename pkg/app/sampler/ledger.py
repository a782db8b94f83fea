# -*- coding: utf-8 -*-
"""
Privacy Ledger - 한 모델에서 공개한 샘플 수와 소모한 ε (선형 회계)

spent는 누적하지 않고 항상 eps_per_sample × released로 다시 계산한다.
"""
import logging

from pydantic import BaseModel, ConfigDict, Field, computed_field

from app.exceptions import BudgetExceededError, InvalidParameterError

logger = logging.getLogger(__name__)

# 10000 × 1e-4 같은 경계값이 float 반올림으로 거부되지 않도록 하는 상대 허용치
BUDGET_RTOL = 1e-12


def budget_split(eps_total: float, k: int) -> float:
    """k개 샘플에 ε_total을 균등 분배한 샘플당 ε"""
    if k < 1:
        raise InvalidParameterError(f"k must be >= 1, got {k}")
    if not eps_total > 0.0:
        raise InvalidParameterError(f"eps_total must be positive, got {eps_total}")
    return eps_total / k


class PrivacyLedger(BaseModel):
    """JSON {eps_per_sample, released, spent}"""

    model_config = ConfigDict(validate_assignment=True, extra="ignore")

    eps_per_sample: float = Field(..., gt=0.0)
    released: int = Field(default=0, ge=0)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def spent(self) -> float:
        return self.eps_per_sample * self.released

    def cost(self, k: int) -> float:
        """k개를 더 공개한 뒤의 총 소모량"""
        return self.eps_per_sample * (self.released + k)

    def remaining(self, eps_total: float) -> float:
        return eps_total - self.spent

    def check(self, k: int, eps_total: float) -> None:
        """
        Raises:
            BudgetExceededError: k개를 더 공개하면 eps_total을 넘는 경우
        """
        if k < 0:
            raise InvalidParameterError(f"k must be >= 0, got {k}")
        required = self.cost(k)
        if required > eps_total * (1.0 + BUDGET_RTOL):
            raise BudgetExceededError(required=required, available=eps_total)

    def release(self, k: int) -> None:
        if k < 0:
            raise InvalidParameterError(f"k must be >= 0, got {k}")
        if k == 0:
            return
        self.released = self.released + k
        logger.info(f"Released {k} samples (total {self.released}, spent {self.spent!r})")
