# -*- coding: utf-8 -*-
"""
평가 메트릭 - NLL, MC KL, mode coverage, 영역 질량과 restricted KL

모든 MC 추정치는 (value, stderr)이며 stderr = 표본 표준편차(ddof=1) / √n.
모델 Q 자리에는 MollifiedDensity, TargetDensity, BaseDensity 모두 올 수 있다.
"""
import logging
import math
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from app.booster.mbde import MollifiedDensity, sample_model
from app.config.seeds import derive_seed
from app.densities.targets import BaseDensity, TargetDensity, bounding_box, sample_target
from app.exceptions import InvalidParameterError
from app.schemas.dataset import Dataset
from app.schemas.mcmc import McmcConfig
from app.schemas.region import Region
from app.schemas.report import Coverage, Estimate, MetricReport

logger = logging.getLogger(__name__)

Model = Union[MollifiedDensity, TargetDensity, BaseDensity]

MIN_KL_SAMPLES = 1000
MIN_COVERAGE_SAMPLES = 10_000


def mean_and_stderr(values: np.ndarray) -> Estimate:
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise InvalidParameterError("cannot estimate from zero samples")
    if values.size == 1:
        return Estimate(float(values[0]), 0.0)
    return Estimate(float(np.mean(values)), float(np.std(values, ddof=1) / math.sqrt(values.size)))


def pool_estimates(estimates: Sequence[Estimate], counts: Sequence[int]) -> Estimate:
    """
    샘플 수로 가중한 평균과, 합친 표본 위에서 다시 계산한 것과 같은 표준오차
    """
    if len(estimates) != len(counts) or not estimates:
        raise InvalidParameterError("need one count per estimate")
    n = np.asarray(counts, dtype=np.float64)
    means = np.array([e.value for e in estimates])
    # 개별 표본분산 s_i² = se_i² · n_i
    variances = np.array([e.stderr for e in estimates]) ** 2 * n
    total = n.sum()
    pooled_mean = float(np.sum(n * means) / total)
    if total <= 1:
        return Estimate(pooled_mean, 0.0)
    ss = np.sum((n - 1.0) * variances) + np.sum(n * (means - pooled_mean) ** 2)
    return Estimate(pooled_mean, float(math.sqrt(ss / (total - 1.0) / total)))


def _sample(model: Model, n: int, seed: int, mcmc: Optional[McmcConfig]) -> Dataset:
    if isinstance(model, MollifiedDensity):
        samples, _ = sample_model(model, n, mcmc or McmcConfig(), seed)
        return samples
    return sample_target(model, n, seed)


def nll(p_samples: Dataset, Q: Model) -> Estimate:
    """−E_P[log Q] (held-out P 샘플 위)"""
    if len(p_samples) == 0:
        raise InvalidParameterError("p_samples must be non-empty")
    return mean_and_stderr(-Q.log_prob(p_samples))


def kl_from_samples(P: TargetDensity, Q: Model, p_samples: Dataset) -> Estimate:
    return mean_and_stderr(P.log_prob(p_samples) - Q.log_prob(p_samples))


def kl_mc(P: TargetDensity, Q: Model, n: int, seed: int) -> Estimate:
    """KL(P, Q) = E_P[log p − log q]"""
    if n < MIN_KL_SAMPLES:
        raise InvalidParameterError(f"n must be >= {MIN_KL_SAMPLES}, got {n}")
    return kl_from_samples(P, Q, sample_target(P, n, seed))


def mode_coverage(
    P: TargetDensity,
    Q: Model,
    level: float = 0.95,
    n: int = 100_000,
    seed: int = 0,
    mcmc: Optional[McmcConfig] = None,
    unnormalized: bool = False,
) -> Coverage:
    """
    Q의 level-고밀도 영역 {x : q(x) ≥ t} 위 P의 질량

    t는 Q-샘플 log q 값의 (1 − level) 분위수 (type-7 선형 보간), log 공간에서 비교한다.
    """
    if not 0.0 < level < 1.0:
        raise InvalidParameterError(f"level must be in (0, 1), got {level}")
    if n < MIN_COVERAGE_SAMPLES:
        raise InvalidParameterError(f"n must be >= {MIN_COVERAGE_SAMPLES}, got {n}")

    if unnormalized and isinstance(Q, MollifiedDensity):
        log_q = Q.unnormalized_log_density
    else:
        log_q = Q.log_prob

    q_samples = _sample(Q, n, derive_seed(seed, "coverage", "q"), mcmc)
    log_t = float(np.quantile(log_q(q_samples), 1.0 - level, method="linear"))
    p_samples = sample_target(P, n, derive_seed(seed, "coverage", "p"))
    value = float(np.mean(log_q(p_samples) >= log_t))
    return Coverage(value=value, log_threshold=log_t)


def region_mass(
    D: Model,
    B: Region,
    n: int,
    seed: int,
    mcmc: Optional[McmcConfig] = None,
) -> Estimate:
    """m(B, D) = ∫_B dD (타깃은 정확한 샘플, 모델은 MH)"""
    if B.dim != D.dim:
        raise InvalidParameterError(f"region dimension {B.dim} differs from density dimension {D.dim}")
    inside = B.contains(_sample(D, n, seed, mcmc).points)
    p = float(np.mean(inside))
    return Estimate(p, math.sqrt(p * (1.0 - p) / n))


def restricted_kl(P: TargetDensity, Q: Model, B: Region, n: int, seed: int) -> Estimate:
    """KL(P, Q; B) = E_P[1_B(x)·(log p − log q)]"""
    if B.dim != P.dim:
        raise InvalidParameterError(f"region dimension {B.dim} differs from density dimension {P.dim}")
    x = sample_target(P, n, seed)
    inside = B.contains(x.points)
    values = np.zeros(len(x))
    if inside.any():
        sub = x.points[inside]
        values[inside] = P.log_prob(sub) - Q.log_prob(sub)
    return mean_and_stderr(values)


def log_density_grid(
    Q: Model,
    P: TargetDensity,
    n_1d: int = 1024,
    n_2d: int = 256,
    n_sigma: float = 4.0,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    P의 ±n_sigma 범위 위 정규 격자와 log q 값 (외부 contour plot용)

    Returns:
        (points (m, d), log_q (m,)): 1D는 m = n_1d, 2D는 m = n_2d²
    """
    lower, upper = bounding_box(P, n_sigma)
    if P.dim == 1:
        points = np.linspace(lower[0], upper[0], n_1d).reshape(-1, 1)
    elif P.dim == 2:
        xs = np.linspace(lower[0], upper[0], n_2d)
        ys = np.linspace(lower[1], upper[1], n_2d)
        xx, yy = np.meshgrid(xs, ys, indexing="ij")
        points = np.column_stack([xx.ravel(), yy.ravel()])
    else:
        raise InvalidParameterError("density grids are only available for d in {1, 2}")
    return points, Q.log_prob(points)


def metric_report(
    metric: str,
    estimate: Union[Estimate, Coverage],
    n: int,
    seed: int,
    params: Optional[Dict[str, Any]] = None,
) -> MetricReport:
    stderr = estimate.stderr if isinstance(estimate, Estimate) else None
    return MetricReport(metric=metric, value=estimate[0], stderr=stderr, n=n, seed=seed, params=params or {})
