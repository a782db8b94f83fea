"""Boosting Schema - MBDE 설정과 모델 JSON 레코드"""
from typing import List, Literal

from pydantic import BaseModel, ConfigDict, Field

from app.schemas.mcmc import McmcConfig
from app.schemas.train import ClassifierRecord, TrainConfig, WlaReport


class BoostConfig(BaseModel):
    """부스팅 입력 설정"""

    model_config = ConfigDict(frozen=True)

    T: int = Field(default=3, ge=0, description="부스팅 라운드 수")
    eps: float = Field(..., gt=0.0, description="프라이버시 파라미터 ε")
    n_train: int = Field(default=2000, ge=1, description="라운드별 P/Q 학습 샘플 수")
    n_mc: int = Field(default=100_000, ge=100, description="log-partition 추정 샘플 수")
    data_mode: Literal["fresh", "fixed"] = Field(
        default="fresh", description="fresh: 매 라운드 P에서 새로 샘플, fixed: 하나의 D에서 subsample"
    )
    dataset_size: int = Field(default=10_000, ge=1, description="fixed 모드에서 D의 크기 (D가 주어지지 않을 때)")
    mcmc: McmcConfig = Field(default_factory=McmcConfig)
    train: TrainConfig = Field(default_factory=lambda: TrainConfig(epochs=200))
    seed: int = Field(default=0, ge=0)


class ModelRecord(BaseModel):
    """모델 파일 {eps, dim, T, thetas, phi_hat, phi_stderr, classifiers, wla_history, seed}"""

    eps: float = Field(..., gt=0.0)
    dim: int = Field(..., ge=1)
    T: int = Field(..., ge=0)
    thetas: List[float]
    phi_hat: float
    phi_stderr: float = Field(..., ge=0.0)
    classifiers: List[ClassifierRecord]
    wla_history: List[WlaReport]
    seed: int
