# -*- coding: utf-8 -*-
"""
Mollified Boosted Density Estimation

Q_T(x) = Q_0(x) · exp(Σ_t θ_t c_t(x) − φ),  φ = log E_{Q_0}[exp(Σ_t θ_t c_t)]

라운드 t마다 P-샘플과 Q_{t−1}-샘플을 구분하는 분류기 c_t를 학습해 곱셈 갱신한다.
|c_t| < log 2 이고 Σθ_t < ε/(4 log 2) 이므로 |Σθc| < ε/4, 따라서 |log Q_T − log Q_0| ≤ ε/2.
"""
import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import logsumexp

from app.booster.schedule import ThetaSchedule, theta_schedule
from app.config.seeds import derive_seed
from app.densities.targets import BaseDensity, TargetDensity, as_points, sample_target
from app.exceptions import InvalidParameterError, SamplerDiagnosticsError
from app.learner.network import Classifier, classify
from app.learner.weak_learner import train_classifier, wla_advantages
from app.sampler.ledger import PrivacyLedger
from app.sampler.mh import LOW_ACCEPTANCE, mh_sample
from app.schemas.boost import BoostConfig, ModelRecord
from app.schemas.dataset import Dataset
from app.schemas.mcmc import McmcConfig, MhDiagnostics
from app.schemas.report import Certificate, Estimate
from app.schemas.train import WlaReport

logger = logging.getLogger(__name__)

CERTIFICATE_TOLERANCE = 1e-9
MIN_N_MC = 100


class MollifiedDensity(BaseModel):
    """
    부스팅 결과 Q_T (불변)

    Attributes:
        base: Q_0 = N(0, I_d)
        thetas: θ_1..θ_T
        classifiers: c_1..c_T
        phi_hat / phi_stderr: log-partition MC 추정치와 표준오차
        eps: 프라이버시 파라미터
        wla_history: 라운드별 WLA 측정
        seed: 학습에 쓴 기준 시드
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    base: BaseDensity
    thetas: ThetaSchedule
    classifiers: List[Classifier] = Field(default_factory=list)
    phi_hat: float = 0.0
    phi_stderr: float = Field(default=0.0, ge=0.0)
    eps: float = Field(..., gt=0.0)
    wla_history: List[WlaReport] = Field(default_factory=list)
    seed: int = 0

    def model_post_init(self, __context) -> None:
        if len(self.classifiers) != self.thetas.T:
            raise InvalidParameterError(
                f"need one theta per classifier ({self.thetas.T} thetas, {len(self.classifiers)} classifiers)"
            )
        if any(c.dim != self.base.dim for c in self.classifiers):
            raise InvalidParameterError("classifier input dimension differs from the base density")

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def T(self) -> int:
        return len(self.classifiers)

    def statistic(self, x) -> np.ndarray:
        return statistic(self, x)

    def unnormalized_log_density(self, x) -> np.ndarray:
        return unnormalized_log_density(self, x)

    def log_density(self, x) -> np.ndarray:
        return log_density(self, x)

    def log_prob(self, x) -> np.ndarray:
        return log_density(self, x)

    def to_record(self) -> ModelRecord:
        return ModelRecord(
            eps=self.eps,
            dim=self.dim,
            T=self.T,
            thetas=list(self.thetas.values),
            phi_hat=self.phi_hat,
            phi_stderr=self.phi_stderr,
            classifiers=[c.to_record() for c in self.classifiers],
            wla_history=list(self.wla_history),
            seed=self.seed,
        )

    @classmethod
    def from_record(cls, record: ModelRecord) -> "MollifiedDensity":
        # 저장된 θ를 그대로 사용 (재계산 시 반올림 차이가 생기지 않도록)
        return cls(
            base=BaseDensity(dim=record.dim),
            thetas=ThetaSchedule(eps=record.eps, values=record.thetas),
            classifiers=[Classifier.from_record(r) for r in record.classifiers],
            phi_hat=record.phi_hat,
            phi_stderr=record.phi_stderr,
            eps=record.eps,
            wla_history=record.wla_history,
            seed=record.seed,
        )


# ==================== 밀도 평가 ====================


def statistic(Q: MollifiedDensity, x) -> np.ndarray:
    """⟨θ, c(x)⟩ = Σ_t θ_t c_t(x)"""
    points = as_points(x, Q.dim)
    total = np.zeros(len(points))
    for theta, c in zip(Q.thetas.values, Q.classifiers):
        total += theta * classify(c, points)
    return total


def unnormalized_log_density(Q: MollifiedDensity, x) -> np.ndarray:
    """log q_0(x) + Σ_t θ_t c_t(x) (MH 비율에서 φ는 상쇄된다)"""
    points = as_points(x, Q.dim)
    return Q.base.log_prob(points) + statistic(Q, points)


def log_density(Q: MollifiedDensity, x) -> np.ndarray:
    return unnormalized_log_density(Q, x) - Q.phi_hat


def estimate_log_partition(Q: MollifiedDensity, n_mc: int, seed: int) -> Estimate:
    """
    φ̂ = log mean_{x~Q_0} exp(⟨θ, c(x)⟩), stderr는 delta method

    분류기가 없으면 (0, 0)
    """
    if n_mc < MIN_N_MC:
        raise InvalidParameterError(f"n_mc must be >= {MIN_N_MC}, got {n_mc}")
    if Q.T == 0:
        return Estimate(0.0, 0.0)

    s = statistic(Q, Q.base.sample(n_mc, seed))
    phi = float(logsumexp(s) - math.log(n_mc))
    # Var[log mean w] ≈ Var[w] / (n · E[w]²)
    w = np.exp(s - s.max())
    stderr = float(np.std(w, ddof=1) / (math.sqrt(n_mc) * np.mean(w)))
    return Estimate(phi, stderr)


def privacy_certificate(Q: MollifiedDensity, eval_points: Dataset) -> Certificate:
    """
    max_x |⟨θ, c(x)⟩ − φ̂| ≤ ε/2 + 3·stderr (+1e-9) 인지 확인
    """
    if len(eval_points) == 0:
        raise InvalidParameterError("eval_points must be non-empty")
    max_abs = float(np.max(np.abs(statistic(Q, eval_points) - Q.phi_hat)))
    limit = Q.eps / 2.0 + 3.0 * Q.phi_stderr + CERTIFICATE_TOLERANCE
    return Certificate(max_abs=max_abs, passed=bool(max_abs <= limit))


def certificate_points(Q: MollifiedDensity, n: int, seed: int, n_grid: Optional[int] = None) -> Dataset:
    """Q_0 샘플과 ±5 격자를 섞은 인증용 평가 점"""
    draws = Q.base.sample(n, seed)
    if n_grid is None:
        n_grid = 2001 if Q.dim == 1 else 201
    axis = np.linspace(-5.0, 5.0, n_grid)
    if Q.dim == 1:
        grid = axis.reshape(-1, 1)
    else:
        mesh = np.meshgrid(*([axis] * Q.dim), indexing="ij")
        grid = np.column_stack([m.ravel() for m in mesh])
    return draws.concat(Dataset(dim=Q.dim, points=grid))


# ==================== 부스팅 ====================


def base_model(dim: int, eps: float, seed: int = 0) -> MollifiedDensity:
    """T = 0 모델 (Q_0 자체)"""
    return MollifiedDensity(base=BaseDensity(dim=dim), thetas=theta_schedule(eps, 0), eps=eps, seed=seed)


def _p_samples(P: TargetDensity, cfg: BoostConfig, data: Optional[Dataset], seed: int) -> Dataset:
    if cfg.data_mode == "fresh" and data is None:
        return sample_target(P, cfg.n_train, seed)
    # fixed 모드: 하나의 D에서 subsample (충분히 크면 비복원)
    rng = np.random.default_rng(seed)
    replace = len(data) < cfg.n_train
    idx = rng.choice(len(data), size=cfg.n_train, replace=replace)
    return Dataset(dim=data.dim, points=data.points[np.sort(idx)])


def sample_model(
    Q: MollifiedDensity,
    n: int,
    mcmc: McmcConfig,
    seed: int,
    ledger: Optional[PrivacyLedger] = None,
) -> Tuple[Dataset, MhDiagnostics]:
    """Q에서 n개 샘플: T = 0이면 Q_0에서 정확히, 아니면 비정규화 밀도 위 MH"""
    if Q.T == 0:
        samples = Q.base.sample(n, seed)
        if ledger is not None:
            ledger.release(n)
        return samples, MhDiagnostics(acceptance_rate=1.0 if n else 0.0, chain_count=0, steps_total=0)
    return mh_sample(Q.unnormalized_log_density, Q.dim, n, mcmc.model_copy(update={"seed": seed}), ledger=ledger)


def boost(P: TargetDensity, cfg: BoostConfig, data: Optional[Dataset] = None) -> MollifiedDensity:
    """
    T 라운드 부스팅

    Args:
        P: 타깃 밀도 (fresh 모드에서 매 라운드 샘플)
        cfg: 부스팅 설정
        data: fixed 모드의 데이터셋 D. 주어지면 data_mode와 무관하게 D에서 subsample한다

    Raises:
        TrainingError: 라운드 번호와 함께 전파
        SamplerDiagnosticsError: 라운드 중 MH acceptance < 1%
    """
    if data is not None and data.dim != P.dim:
        raise InvalidParameterError(f"dataset dimension {data.dim} differs from target dimension {P.dim}")
    if cfg.data_mode == "fixed" and data is None:
        data = sample_target(P, cfg.dataset_size, derive_seed(cfg.seed, "dataset"))

    schedule = theta_schedule(cfg.eps, cfg.T)
    model = base_model(P.dim, cfg.eps, cfg.seed)
    classifiers: List[Classifier] = []
    history: List[WlaReport] = []

    for t in range(1, cfg.T + 1):
        logger.info(f"[round {t}/{cfg.T}] eps={cfg.eps} theta={schedule.values[t - 1]:.6g}")

        if t == 1:
            q_samples = model.base.sample(cfg.n_train, derive_seed(cfg.seed, t, "q"))
        else:
            q_samples, diagnostics = sample_model(model, cfg.n_train, cfg.mcmc, derive_seed(cfg.seed, t, "q"))
            if diagnostics.acceptance_rate < LOW_ACCEPTANCE:
                raise SamplerDiagnosticsError(diagnostics.acceptance_rate, round_index=t)
        p_samples = _p_samples(P, cfg, data, derive_seed(cfg.seed, t, "p"))

        train_cfg = cfg.train.model_copy(update={"seed": derive_seed(cfg.seed, t, "train")})
        classifier = train_classifier(p_samples, q_samples, train_cfg, round_index=t)
        report = wla_advantages(classifier, p_samples, q_samples)
        if report.regime == "failed":
            logger.warning(
                f"[round {t}] weak learning assumption violated "
                f"(gamma_p={report.gamma_p:.4f}, gamma_q={report.gamma_q:.4f}); update applied anyway"
            )
        else:
            logger.info(
                f"[round {t}] gamma_p={report.gamma_p:.4f} gamma_q={report.gamma_q:.4f} regime={report.regime}"
            )

        classifiers.append(classifier)
        history.append(report)
        model = MollifiedDensity(
            base=model.base,
            thetas=schedule.head(t),
            classifiers=list(classifiers),
            eps=cfg.eps,
            wla_history=list(history),
            seed=cfg.seed,
        )

    phi = estimate_log_partition(model, cfg.n_mc, derive_seed(cfg.seed, "phi"))
    logger.info(f"Boosting finished: T={cfg.T}, phi_hat={phi.value:.6g} ± {phi.stderr:.2g}")
    return model.model_copy(update={"phi_hat": phi.value, "phi_stderr": phi.stderr})


# ==================== 파생 모델 ====================


def truncate(Q: MollifiedDensity, t: int, n_mc: int, seed: int) -> MollifiedDensity:
    """앞의 t 라운드만 남긴 Q_t (φ 재추정)"""
    if not 0 <= t <= Q.T:
        raise InvalidParameterError(f"t must be in [0, {Q.T}], got {t}")
    head = MollifiedDensity(
        base=Q.base,
        thetas=Q.thetas.head(t),
        classifiers=Q.classifiers[:t],
        eps=Q.eps,
        wla_history=Q.wla_history[:t],
        seed=Q.seed,
    )
    phi = estimate_log_partition(head, n_mc, seed)
    return head.model_copy(update={"phi_hat": phi.value, "phi_stderr": phi.stderr})


def reschedule(Q: MollifiedDensity, eps: float, n_mc: int, seed: int) -> MollifiedDensity:
    """같은 분류기에 다른 ε의 θ-schedule을 적용 (φ 재추정)"""
    moved = MollifiedDensity(
        base=Q.base,
        thetas=theta_schedule(eps, Q.T),
        classifiers=Q.classifiers,
        eps=eps,
        wla_history=Q.wla_history,
        seed=Q.seed,
    )
    phi = estimate_log_partition(moved, n_mc, seed)
    return moved.model_copy(update={"phi_hat": phi.value, "phi_stderr": phi.stderr})
