# -*- coding: utf-8 -*-
"""
경험적 integral privacy 검사

두 샘플 집합에 같은 결정 함수 / 같은 bin 분할을 적용해 빈도비가 e^ε 안에 있는지 본다.
빈도는 pseudo-count 1로 Laplace smoothing하고, log 비의 표준오차는 delta method로 구한다.
"""
import logging
from typing import Callable, Optional, Tuple

import numpy as np

from app.exceptions import DimensionMismatchError, InvalidParameterError
from app.schemas.dataset import Dataset
from app.schemas.report import HistogramPrivacyReport, RatioCheck

logger = logging.getLogger(__name__)

DecisionFn = Callable[[np.ndarray], np.ndarray]


def _smoothed(k: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """(p̂, Var[log p̂]) with p̂ = (k+1)/(n+2)"""
    p = (k + 1.0) / (n + 2.0)
    return p, (1.0 - p) / (n * p)


def postprocessing_ratio_check(
    samples_d: Dataset,
    samples_dprime: Dataset,
    decision: DecisionFn,
    eps: float,
) -> RatioCheck:
    """
    결정 함수 f에 대해 |log Pr[f(A(D))=1] − log Pr[f(A(D'))=1]| ≤ ε + 3·stderr
    """
    if len(samples_d) == 0 or len(samples_dprime) == 0:
        raise InvalidParameterError("both sample sets must be non-empty")
    if samples_d.dim != samples_dprime.dim:
        raise DimensionMismatchError(samples_d.dim, samples_dprime.dim)

    k_a = float(np.count_nonzero(np.asarray(decision(samples_d.points)).astype(bool)))
    k_b = float(np.count_nonzero(np.asarray(decision(samples_dprime.points)).astype(bool)))
    p_a, var_a = _smoothed(np.asarray(k_a), len(samples_d))
    p_b, var_b = _smoothed(np.asarray(k_b), len(samples_dprime))

    log_ratio = float(np.log(p_a) - np.log(p_b))
    stderr = float(np.sqrt(var_a + var_b))
    return RatioCheck(log_ratio=log_ratio, passed=abs(log_ratio) <= eps + 3.0 * stderr, stderr=stderr)


def default_edges(a: Dataset, b: Dataset, n_bins: int = 50) -> np.ndarray:
    """두 집합을 모두 덮는 등간격 1D bin 경계"""
    pooled = np.concatenate([a.points[:, 0], b.points[:, 0]])
    return np.linspace(float(pooled.min()), float(pooled.max()), n_bins + 1)


def histogram_privacy_check(
    samples_a: Dataset,
    samples_b: Dataset,
    eps: float,
    edges: Optional[np.ndarray] = None,
    min_expected: int = 50,
) -> HistogramPrivacyReport:
    """
    1D 샘플의 고정 bin 분할 위 bin별 빈도비 검사

    두 집합 모두에서 count가 min_expected 이상인 bin만 검사한다.
    """
    for samples in (samples_a, samples_b):
        if samples.dim != 1:
            raise DimensionMismatchError(1, samples.dim)
        if len(samples) == 0:
            raise InvalidParameterError("both sample sets must be non-empty")
    if edges is None:
        edges = default_edges(samples_a, samples_b)

    k_a, _ = np.histogram(samples_a.points[:, 0], bins=edges)
    k_b, _ = np.histogram(samples_b.points[:, 0], bins=edges)
    p_a, var_a = _smoothed(k_a.astype(np.float64), len(samples_a))
    p_b, var_b = _smoothed(k_b.astype(np.float64), len(samples_b))

    checked = (k_a >= min_expected) & (k_b >= min_expected)
    log_ratio = np.log(p_a) - np.log(p_b)
    excess = np.abs(log_ratio) - (eps + 3.0 * np.sqrt(var_a + var_b))

    if not checked.any():
        logger.warning("No histogram bin has enough counts to be checked")
        max_abs, worst = 0.0, -eps
    else:
        max_abs = float(np.max(np.abs(log_ratio[checked])))
        worst = float(np.max(excess[checked]))

    return HistogramPrivacyReport(
        bins_total=len(edges) - 1,
        bins_checked=int(checked.sum()),
        max_abs_log_ratio=max_abs,
        worst_excess=worst,
        eps=eps,
        passed=worst <= 0.0,
    )
