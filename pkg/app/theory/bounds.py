# -*- coding: utf-8 -*-
"""
닫힌 형태 bound 계산기

- gamma_fn: Γ(z) = log(4 / (5 − 3z))
- kl_drop_bound: 라운드별 KL 감소 하한 Λ_t (high / low regime)
- hoeffding_drop_bound: Hoeffding 기반 하한 c*(γ_P + γ_Q) − c*²θ/2
- barrier_bounds: Δ(Q)의 상한 ε/2와 하한
- mode_capture_threshold(_appendix): mode capture 전제에 필요한 m(B, P)
"""
import math
from typing import Tuple

from app.booster.schedule import FOUR_LOG2, theta_ratio
from app.exceptions import InvalidParameterError, NoGuaranteeError, TheoryDomainError
from app.schemas.report import DropBound
from app.schemas.train import HIGH_REGIME_THRESHOLD, WlaReport, classify_regime

GAMMA_POLE = 5.0 / 3.0


def gamma_fn(z: float) -> float:
    """
    Γ(z) = log(4 / (5 − 3z))

    Raises:
        TheoryDomainError: z ≥ 5/3 (log 인자가 양수가 아님)
    """
    if not z < GAMMA_POLE:
        raise TheoryDomainError(f"gamma_fn is undefined for z >= 5/3, got {z}")
    return math.log(4.0 / (5.0 - 3.0 * z))


def kl_drop_bound(report: WlaReport, theta_t: float) -> DropBound:
    """
    Λ_t: high (γ_Q ≥ 1/3) → c*·γ_P + Γ(γ_Q), low → γ_P + γ_Q − c*·θ_t/2

    Raises:
        NoGuaranteeError: WLA가 깨진 라운드
    """
    if report.regime == "failed":
        raise NoGuaranteeError(
            f"no KL drop guarantee for a failed round (gamma_p={report.gamma_p}, gamma_q={report.gamma_q})"
        )
    if report.gamma_q >= HIGH_REGIME_THRESHOLD:
        lam = report.c_star * report.gamma_p + gamma_fn(report.gamma_q)
        regime = "high"
    else:
        lam = report.gamma_p + report.gamma_q - report.c_star * theta_t / 2.0
        regime = "low"
    return DropBound(lambda_t=lam, regime=regime, theta_t=theta_t, c_star=report.c_star)


def hoeffding_drop_bound(report: WlaReport, theta_t: float) -> float:
    """Hoeffding lemma로부터 직접 얻는 Λ'_t = c*(γ_P + γ_Q) − c*²·θ_t/2"""
    if report.regime == "failed":
        raise NoGuaranteeError("no KL drop guarantee for a failed round")
    c = report.c_star
    return c * (report.gamma_p + report.gamma_q) - c * c * theta_t / 2.0


def barrier_bounds(eps: float, gamma_p: float, gamma_q: float, T: int) -> Tuple[float, float]:
    """(upper, lower) = (ε/2, (ε/2)·((γ_P + γ_Q)/2)·(1 − θ_T(ε)))"""
    if not eps > 0.0:
        raise InvalidParameterError(f"eps must be positive, got {eps}")
    if T < 0:
        raise InvalidParameterError(f"T must be >= 0, got {T}")
    theta_T = theta_ratio(eps) ** T
    upper = eps / 2.0
    lower = upper * ((gamma_p + gamma_q) / 2.0) * (1.0 - theta_T)
    return upper, lower


def _h(eps: float, x: float) -> float:
    return eps + 2.0 * x


def mode_capture_threshold(eps: float, gamma_p: float, gamma_q: float, T: int, alpha: float) -> float:
    """ε · h((2 − γ_P − γ_Q)·T) / (h(α)·h(T)), h(x) = ε + 2x"""
    _check_mode_capture_inputs(eps, T, alpha)
    return eps * _h(eps, (2.0 - gamma_p - gamma_q) * T) / (_h(eps, alpha) * _h(eps, T))


def mode_capture_threshold_appendix(eps: float, gamma_p: float, gamma_q: float, T: int, alpha: float) -> float:
    """ε·(ε + (1 − γ̄)·T·K) / ((ε + 2α)(ε + T·K)), K = 4 log 2, γ̄ = (γ_P + γ_Q)/2"""
    _check_mode_capture_inputs(eps, T, alpha)
    gamma_bar = (gamma_p + gamma_q) / 2.0
    return eps * (eps + (1.0 - gamma_bar) * T * FOUR_LOG2) / ((eps + 2.0 * alpha) * (eps + T * FOUR_LOG2))


def required_mode_mass(eps: float, gamma_p: float, gamma_q: float, T: int, alpha: float) -> float:
    """두 형태 중 큰 값 (전제 판정에 사용)"""
    return max(
        mode_capture_threshold(eps, gamma_p, gamma_q, T, alpha),
        mode_capture_threshold_appendix(eps, gamma_p, gamma_q, T, alpha),
    )


def is_high_regime(gamma_p: float, gamma_q: float) -> bool:
    return classify_regime(gamma_p, gamma_q) == "high"


def _check_mode_capture_inputs(eps: float, T: int, alpha: float) -> None:
    if not eps > 0.0:
        raise InvalidParameterError(f"eps must be positive, got {eps}")
    if T < 1:
        raise InvalidParameterError(f"mode capture requires T >= 1, got {T}")
    if not 0.0 <= alpha <= 1.0:
        raise InvalidParameterError(f"alpha must be in [0, 1], got {alpha}")
