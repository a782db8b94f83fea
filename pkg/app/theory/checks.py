# -*- coding: utf-8 -*-
"""
수치 검사기 - 이론적 부등식을 학습된 모델 위에서 실행 가능한 assertion으로

정확한(exact) 검사는 반올림 허용치 안에서 항상 성립해야 하고, 통계적 검사는 3·stderr 여유를 둔다.
같은 P-샘플을 두 모델에 함께 쓰는 common random numbers로 차이의 분산을 줄인다.
"""
import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from app.booster.mbde import MollifiedDensity, estimate_log_partition, privacy_certificate, truncate
from app.booster.schedule import theta_ratio, theta_schedule, theta_sum_log_gap
from app.config.seeds import derive_seed
from app.densities.targets import TargetDensity, sample_target
from app.exceptions import InvalidParameterError
from app.learner.network import Classifier, classify
from app.metrics.evaluation import mean_and_stderr, region_mass, restricted_kl
from app.schemas.dataset import Dataset
from app.schemas.mcmc import McmcConfig
from app.schemas.region import Region
from app.schemas.report import (
    BarrierReport,
    KlDropRound,
    KlTransferReport,
    ModeCaptureReport,
    TheoryCheck,
)
from app.theory.bounds import (
    barrier_bounds,
    gamma_fn,
    hoeffding_drop_bound,
    is_high_regime,
    kl_drop_bound,
    required_mode_mass,
)

logger = logging.getLogger(__name__)

EXACT_TOLERANCE = 1e-9
THETA_SUM_DIRECT_LIMIT = 2000
THETA_SUM_RESOLVABLE = math.log(1e-10)


def _min_gammas(Q: MollifiedDensity) -> Tuple[float, float]:
    return min(r.gamma_p for r in Q.wla_history), min(r.gamma_q for r in Q.wla_history)


# ==================== θ / Γ ====================


def theta_sum_check(eps: float, T: int) -> TheoryCheck:
    """
    Σθ_t < ε/(4 log 2): 닫힌 형태 gap이 유한해야 한다

    gap이 float 해상도보다 큰 경우 (r^T ≥ 1e-10, T ≤ 2000)에는 직접 합도 상한 아래인지 본다.
    """
    log_gap = theta_sum_log_gap(eps, T)
    passed = math.isfinite(log_gap)
    observed = None
    bound = eps / (4.0 * math.log(2.0))
    if T <= THETA_SUM_DIRECT_LIMIT and T * math.log(theta_ratio(eps)) >= THETA_SUM_RESOLVABLE:
        observed = math.fsum(theta_schedule(eps, T).values)
        passed = passed and observed < bound
    return TheoryCheck(
        check="theta_sum_bound",
        inputs={"eps": eps, "T": T, "log_gap": log_gap},
        bound=bound,
        observed=observed,
        passed=passed,
    )


def gamma_linear_claim_check(step: float = 1e-3) -> TheoryCheck:
    """
    Γ(z) ≥ z·log 2 를 (0, 1] 격자에서 확인 (정보용, 종료 코드에 영향 없음)

    Γ(1/3) = 0 < log 2 / 3 이므로 이 주장은 (0, 1)에서 성립하지 않는다.
    """
    grid = np.arange(1, int(round(1.0 / step)) + 1) * step
    slack = np.array([gamma_fn(z) for z in grid]) - grid * math.log(2.0)
    worst = int(np.argmin(slack))
    return TheoryCheck(
        check="gamma_linear_claim",
        inputs={"step": step, "worst_z": float(grid[worst])},
        bound=0.0,
        observed=float(slack[worst]),
        passed=bool(slack[worst] >= -EXACT_TOLERANCE),
        exact=False,
    )


def gamma_tangent_check(step: float = 1e-3) -> TheoryCheck:
    """Γ는 볼록하므로 z = 1/3에서의 접선 (3/4)(z − 1/3) 아래로 내려가지 않는다"""
    grid = np.arange(1, int(round(1.0 / step)) + 1) * step
    slack = np.array([gamma_fn(z) for z in grid]) - 0.75 * (grid - 1.0 / 3.0)
    return TheoryCheck(
        check="gamma_tangent_minorant",
        inputs={"step": step},
        bound=0.0,
        observed=float(slack.min()),
        passed=bool(slack.min() >= -EXACT_TOLERANCE),
    )


# ==================== 라운드별 KL 감소 ====================


def hoeffding_wla_check(c: Classifier, q_samples: Dataset, theta: float) -> TheoryCheck:
    """
    경험분포 위 Hoeffding lemma: log E_Q exp(θc) ≤ θ²c*²/2 − θ·γ_Q·c*

    c*와 γ_Q를 같은 q_samples 위에서 재므로 반올림 허용치 안에서 정확히 성립한다.
    """
    values = classify(c, q_samples)
    c_star = max(float(np.max(np.abs(values))), 1e-12)
    gamma_q = -float(np.mean(values)) / c_star
    lhs = float(logsumexp(theta * values) - math.log(len(values)))
    rhs = theta * theta * c_star * c_star / 2.0 - theta * gamma_q * c_star
    return TheoryCheck(
        check="hoeffding_wla",
        inputs={"theta": theta, "c_star": c_star, "gamma_q": gamma_q, "n": len(values)},
        bound=rhs,
        observed=lhs,
        passed=bool(lhs <= rhs + EXACT_TOLERANCE),
    )


def kl_drop_identity(P: TargetDensity, Q: MollifiedDensity, t: int, n: int, seed: int, n_mc: int = 20_000) -> TheoryCheck:
    """
    KL(P,Q_{t−1}) − KL(P,Q_t) = θ_t·E_P[c_t] − (φ_t − φ_{t−1}) 를 같은 샘플 위에서 확인 (정확)
    """
    if not 1 <= t <= Q.T:
        raise InvalidParameterError(f"t must be in [1, {Q.T}], got {t}")
    phi_seed = derive_seed(seed, "phi")
    prev = truncate(Q, t - 1, n_mc, phi_seed)
    curr = truncate(Q, t, n_mc, phi_seed)
    x = sample_target(P, n, derive_seed(seed, "p"))

    log_p = P.log_prob(x)
    drop = float(np.mean(log_p - prev.log_prob(x)) - np.mean(log_p - curr.log_prob(x)))
    theta = Q.thetas.values[t - 1]
    predicted = theta * float(np.mean(classify(Q.classifiers[t - 1], x))) - (curr.phi_hat - prev.phi_hat)
    return TheoryCheck(
        check="kl_drop_identity",
        inputs={"round": t, "n": n, "seed": seed},
        bound=predicted,
        observed=drop,
        passed=abs(drop - predicted) <= 1e-8,
    )


def kl_drop_check(P: TargetDensity, Q: MollifiedDensity, n: int, seed: int, n_mc: int = 20_000) -> List[KlDropRound]:
    """
    라운드마다 KL(P,Q_t) ≤ KL(P,Q_{t−1}) − θ_t·Λ_t + 3·stderr

    Λ_t는 측정된 WlaReport로 계산하므로 통계적 검사다. 실패한 라운드는 판정 없이 기록만 한다.
    """
    phi_seed = derive_seed(seed, "phi")
    x = sample_target(P, n, derive_seed(seed, "p"))
    log_p = P.log_prob(x)

    models = [truncate(Q, t, n_mc, phi_seed) for t in range(Q.T + 1)]
    rounds = []
    for t in range(1, Q.T + 1):
        prev, curr = models[t - 1], models[t]
        kl_prev = mean_and_stderr(log_p - prev.log_prob(x))
        kl_curr = mean_and_stderr(log_p - curr.log_prob(x))
        diff = mean_and_stderr(curr.log_prob(x) - prev.log_prob(x))
        stderr = math.sqrt(diff.stderr ** 2 + curr.phi_stderr ** 2 + prev.phi_stderr ** 2)

        report = Q.wla_history[t - 1]
        theta = Q.thetas.values[t - 1]
        row = KlDropRound(
            round_index=t,
            kl_prev=kl_prev.value,
            kl_curr=kl_curr.value,
            stderr=stderr,
            theta_t=theta,
            regime=report.regime,
        )
        if report.regime != "failed":
            stated = kl_drop_bound(report, theta).lambda_t
            hoeffding = hoeffding_drop_bound(report, theta)
            row = row.model_copy(
                update={
                    "lambda_stated": stated,
                    "lambda_hoeffding": hoeffding,
                    "passed_stated": kl_curr.value <= kl_prev.value - theta * stated + 3.0 * stderr,
                    "passed_hoeffding": kl_curr.value <= kl_prev.value - theta * hoeffding + 3.0 * stderr,
                }
            )
        else:
            logger.info(f"[round {t}] failed WLA round, KL drop not asserted")
        rounds.append(row)
    return rounds


# ==================== Barrier / mode capture / transfer ====================


def barrier_check(P: TargetDensity, Q: MollifiedDensity, n: int, seed: int) -> BarrierReport:
    """Δ(Q) = KL(P,Q_0) − KL(P,Q_T) = E_P[⟨θ,c⟩] − φ̂ 와 [lower, ε/2]"""
    x = sample_target(P, n, derive_seed(seed, "p"))
    delta = mean_and_stderr(Q.statistic(x) - Q.phi_hat)
    if Q.T > 0:
        gamma_p, gamma_q = _min_gammas(Q)
    else:
        gamma_p = gamma_q = 0.0
    upper, lower = barrier_bounds(Q.eps, gamma_p, gamma_q, Q.T)
    return BarrierReport(
        delta_observed=delta.value,
        upper=upper,
        lower=lower,
        stderr=math.sqrt(delta.stderr ** 2 + Q.phi_stderr ** 2),
        eps=Q.eps,
    )


def mode_capture_check(
    P: TargetDensity,
    Q: MollifiedDensity,
    B: Region,
    alpha: float,
    n: int,
    seed: int,
    mcmc: Optional[McmcConfig] = None,
) -> ModeCaptureReport:
    """
    전제 m(B,P) ≥ required 가 성립하면 m(B,Q_T) ≥ (1−α)·m(B,P) − KL(P,Q_0;B) − 3·stderr 를 확인

    γ는 라운드별 측정치의 최솟값을 사용한다. high regime이 아니거나 전제가 깨지면 not_applicable.
    세 MC 양은 판정 여부와 무관하게 항상 보고한다.
    """
    mass_p = region_mass(P, B, n, derive_seed(seed, "mass_p"))
    mass_q = region_mass(Q, B, n, derive_seed(seed, "mass_q"), mcmc)
    rkl = restricted_kl(P, Q.base, B, n, derive_seed(seed, "rkl"))

    rhs = (1.0 - alpha) * mass_p.value - rkl.value
    stderr = math.sqrt(mass_q.stderr ** 2 + ((1.0 - alpha) * mass_p.stderr) ** 2 + rkl.stderr ** 2)
    holds = mass_q.value >= rhs - 3.0 * stderr

    reason = None
    required = float("nan")
    if Q.T == 0:
        reason = "mode capture requires T >= 1"
    else:
        gamma_p, gamma_q = _min_gammas(Q)
        if not is_high_regime(gamma_p, gamma_q):
            reason = f"not in the high boosting regime (min gamma_p={gamma_p:.4f}, min gamma_q={gamma_q:.4f})"
        else:
            required = required_mode_mass(Q.eps, gamma_p, gamma_q, Q.T, alpha)
            if mass_p.value < required:
                reason = f"premise unmet: m(B,P)={mass_p.value:.4f} < required {required:.4f}"

    if reason is not None:
        status = "not_applicable"
    else:
        status = "pass" if holds else "fail"

    return ModeCaptureReport(
        status=status,
        reason=reason,
        required_mass=required,
        mass_p=mass_p.value,
        mass_p_stderr=mass_p.stderr,
        mass_q=mass_q.value,
        mass_q_stderr=mass_q.stderr,
        restricted_kl_q0=rkl.value,
        restricted_kl_stderr=rkl.stderr,
        alpha=alpha,
        conclusion_rhs=rhs,
        conclusion_holds=holds,
    )


def kl_transfer_check(P: TargetDensity, Q_a: MollifiedDensity, Q_b: MollifiedDensity, n: int, seed: int) -> KlTransferReport:
    """
    같은 ε의 두 모델: |KL(P,Q_a) − KL(P,Q_b)| ≤ ε + 3·stderr

    Raises:
        InvalidParameterError: ε 또는 차원이 다른 경우
    """
    if Q_a.eps != Q_b.eps:
        raise InvalidParameterError(f"models must share eps (got {Q_a.eps} and {Q_b.eps})")
    if Q_a.dim != Q_b.dim:
        raise InvalidParameterError("models must share the base density")

    x = sample_target(P, n, derive_seed(seed, "p"))
    log_p = P.log_prob(x)
    kl_a = mean_and_stderr(log_p - Q_a.log_prob(x))
    kl_b = mean_and_stderr(log_p - Q_b.log_prob(x))
    diff = mean_and_stderr(Q_b.log_prob(x) - Q_a.log_prob(x))
    stderr = math.sqrt(diff.stderr ** 2 + Q_a.phi_stderr ** 2 + Q_b.phi_stderr ** 2)
    return KlTransferReport(
        kl_a=kl_a.value,
        kl_b=kl_b.value,
        difference=diff.value,
        stderr=stderr,
        eps=Q_a.eps,
        passed=abs(diff.value) <= Q_a.eps + 3.0 * stderr,
    )


def certificate_check(Q: MollifiedDensity, eval_points: Dataset, label: str = "privacy_certificate") -> TheoryCheck:
    cert = privacy_certificate(Q, eval_points)
    return TheoryCheck(
        check=label,
        inputs={"eps": Q.eps, "T": Q.T, "n_eval": len(eval_points)},
        bound=Q.eps / 2.0 + 3.0 * Q.phi_stderr,
        observed=cert.max_abs,
        stderr=Q.phi_stderr,
        passed=cert.passed,
    )


def log_partition_range_check(Q: MollifiedDensity, n_mc: int, seed: int) -> TheoryCheck:
    """φ̂ ∈ [−ε/4 − 3·stderr, ε/4 + 3·stderr]"""
    phi = estimate_log_partition(Q, n_mc, seed)
    bound = Q.eps / 4.0 + 3.0 * phi.stderr
    return TheoryCheck(
        check="log_partition_range",
        inputs={"eps": Q.eps, "T": Q.T, "n_mc": n_mc},
        bound=bound,
        observed=phi.value,
        stderr=phi.stderr,
        passed=abs(phi.value) <= bound,
    )
