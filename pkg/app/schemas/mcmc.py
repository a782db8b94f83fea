"""MCMC Schema - Random walk Metropolis-Hastings 설정과 진단"""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class McmcConfig(BaseModel):
    """RWMH 설정 (여러 개의 짧은 chain을 round-robin으로 pooling)"""

    model_config = ConfigDict(frozen=True)

    proposal_sigma: float = Field(default=0.25, gt=0.0, description="등방 Gaussian proposal 표준편차")
    burn_in: int = Field(default=1000, ge=0, description="chain별 burn-in step 수")
    thinning: int = Field(default=10, ge=1, description="thinning 간격")
    n_chains: int = Field(default=4, ge=1, description="독립 chain 수")
    seed: int = Field(default=0, ge=0, description="chain 시드의 기준값")


class MhDiagnostics(BaseModel):
    """MH 실행 진단"""

    acceptance_rate: float = Field(..., ge=0.0, le=1.0, description="accepted / proposed")
    chain_count: int = Field(..., ge=0)
    steps_total: int = Field(..., ge=0, description="모든 chain의 proposal 총 횟수")
    warning: Optional[str] = Field(default=None, description="acceptance < 1% 등 경고")
