"""Weak Learner Schema - 학습 설정, WLA 리포트, 분류기 직렬화 레코드"""
from typing import List, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

HIGH_REGIME_THRESHOLD = 1.0 / 3.0

Regime = Literal["high", "low", "failed"]


def classify_regime(gamma_p: float, gamma_q: float) -> Regime:
    """γ_Q 기준 부스팅 regime 판정 (경계 1/3은 high)"""
    if gamma_p <= 0.0 or gamma_q <= 0.0:
        return "failed"
    if gamma_q >= HIGH_REGIME_THRESHOLD:
        return "high"
    return "low"


class TrainConfig(BaseModel):
    """분류기 학습 설정 (Nesterov momentum, binary cross-entropy)"""

    model_config = ConfigDict(frozen=True)

    learning_rate: float = Field(default=0.01, gt=0.0, description="학습률 η")
    momentum: float = Field(default=0.9, ge=0.0, lt=1.0, description="Nesterov momentum 계수")
    epochs: int = Field(default=750, ge=1, description="epoch 수 (데스크 규모에서는 override)")
    batch_size: int = Field(default=0, ge=0, description="0 또는 n 이상이면 full-batch")
    seed: int = Field(default=0, ge=0, description="초기화/셔플 시드")


class WlaReport(BaseModel):
    """라운드별 weak learning advantage 측정 결과"""

    model_config = ConfigDict(frozen=True)

    gamma_p: float = Field(..., ge=-1.0, le=1.0)
    gamma_q: float = Field(..., ge=-1.0, le=1.0)
    c_star: float = Field(..., gt=0.0)
    regime: Regime

    @model_validator(mode="after")
    def _check_regime(self) -> "WlaReport":
        expected = classify_regime(self.gamma_p, self.gamma_q)
        if self.regime != expected:
            raise ValueError(f"regime '{self.regime}' inconsistent with gammas (expected '{expected}')")
        return self

    @classmethod
    def from_gammas(cls, gamma_p: float, gamma_q: float, c_star: float) -> "WlaReport":
        return cls(
            gamma_p=gamma_p,
            gamma_q=gamma_q,
            c_star=c_star,
            regime=classify_regime(gamma_p, gamma_q),
        )


class ClassifierRecord(BaseModel):
    """분류기 JSON 레코드 {widths, weights (layer별 row-major), biases, c_star}"""

    widths: List[int]
    weights: List[List[List[float]]]
    biases: List[List[float]]
    c_star: float = Field(..., gt=0.0)

    @model_validator(mode="after")
    def _check_layers(self) -> "ClassifierRecord":
        if len(self.weights) != len(self.widths) - 1 or len(self.biases) != len(self.widths) - 1:
            raise ValueError("weights/biases must have one entry per layer")
        for idx, (w, b) in enumerate(zip(self.weights, self.biases)):
            fan_in, fan_out = self.widths[idx], self.widths[idx + 1]
            if len(w) != fan_in or any(len(row) != fan_out for row in w):
                raise ValueError(f"layer {idx} weight shape must be ({fan_in}, {fan_out})")
            if len(b) != fan_out:
                raise ValueError(f"layer {idx} bias length must be {fan_out}")
        return self
