"""Report Schema - MC 추정치, 인증서, 메트릭/이론 리포트"""
from typing import Any, Dict, List, Literal, NamedTuple, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Estimate(NamedTuple):
    """(value, stderr) MC 추정치"""

    value: float
    stderr: float


class Certificate(NamedTuple):
    """(max_abs, passed) 인증 결과"""

    max_abs: float
    passed: bool


class RatioCheck(NamedTuple):
    """post-processing 빈도비 검사 (log_ratio, passed, stderr)"""

    log_ratio: float
    passed: bool
    stderr: float


class Coverage(NamedTuple):
    """mode coverage (value, log_threshold)"""

    value: float
    log_threshold: float


# ==================== Metrics ====================


class MetricReport(BaseModel):
    """메트릭 JSON {metric, value, stderr, n, seed, params}"""

    metric: str
    value: float
    stderr: Optional[float] = None
    n: int
    seed: int
    params: Dict[str, Any] = Field(default_factory=dict)


class SweepRow(BaseModel):
    """sweep 테이블 한 행. 필드 순서가 sweep.csv 열 순서다"""

    m: Optional[int] = None
    eps: float
    T: int
    seed: int
    nll: float
    nll_stderr: float
    coverage: float
    kl: float
    kl_stderr: float


# ==================== Theory ====================


class DropBound(BaseModel):
    """라운드별 KL 감소 하한 Λ_t"""

    model_config = ConfigDict(frozen=True)

    lambda_t: float
    regime: Literal["high", "low"]
    theta_t: float
    c_star: float


class BarrierReport(BaseModel):
    """Δ(Q) = KL(P,Q_0) − KL(P,Q_T) 관측치와 상/하한"""

    delta_observed: float
    upper: float
    lower: float
    stderr: float
    eps: float

    @model_validator(mode="after")
    def _check_upper(self) -> "BarrierReport":
        if self.upper != self.eps / 2.0:
            raise ValueError("upper must equal eps / 2")
        return self

    @property
    def passed(self) -> bool:
        return self.delta_observed <= self.upper + 3.0 * self.stderr


class KlDropRound(BaseModel):
    """KL drop 라운드별 검사 결과"""

    round_index: int
    kl_prev: float
    kl_curr: float
    stderr: float
    theta_t: float
    regime: Literal["high", "low", "failed"]
    lambda_stated: Optional[float] = None
    lambda_hoeffding: Optional[float] = None
    passed_stated: Optional[bool] = None
    passed_hoeffding: Optional[bool] = None


class ModeCaptureReport(BaseModel):
    """mode capture 검사 결과"""

    status: Literal["pass", "fail", "not_applicable"]
    reason: Optional[str] = None
    required_mass: float
    mass_p: float
    mass_p_stderr: float
    mass_q: float
    mass_q_stderr: float
    restricted_kl_q0: float
    restricted_kl_stderr: float
    alpha: float
    conclusion_rhs: float
    conclusion_holds: bool


class KlTransferReport(BaseModel):
    """같은 ε 모델 간 KL 차이 검사"""

    kl_a: float
    kl_b: float
    difference: float
    stderr: float
    eps: float
    passed: bool


class TheoryCheck(BaseModel):
    """이론 리포트 항목 {check, inputs, bound, observed, stderr, pass}"""

    model_config = ConfigDict(populate_by_name=True)

    check: str
    inputs: Dict[str, Any] = Field(default_factory=dict)
    bound: Optional[float] = None
    observed: Optional[float] = None
    stderr: Optional[float] = None
    passed: bool = Field(..., alias="pass")
    exact: bool = Field(default=True, description="False면 통계적 검사 (종료 코드에 영향 없음)")

    def to_record(self) -> Dict[str, Any]:
        return self.model_dump(by_alias=True)


class TheoryReport(BaseModel):
    checks: List[TheoryCheck] = Field(default_factory=list)

    @property
    def exact_failures(self) -> List[TheoryCheck]:
        return [c for c in self.checks if c.exact and not c.passed]


class HistogramPrivacyReport(BaseModel):
    """고정 bin 분할 위 두 샘플 집합의 bin별 log 빈도비 검사"""

    bins_total: int
    bins_checked: int
    max_abs_log_ratio: float
    worst_excess: float = Field(..., description="max(|log ratio| − (ε + 3·stderr)), 음수면 통과")
    eps: float
    passed: bool
