# -*- coding: utf-8 -*-
"""
Target Densities - Gaussian mixture ground truth P와 base density Q_0

- make_ring / make_1d_mixture / make_random_gaussians(_2d): 실험 도메인
- log_density / sample_target: 정확한 평가와 ancestral sampling
- differential_entropy: quadrature 기반 엔트로피 oracle
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.integrate import trapezoid
from scipy.special import logsumexp

from app.exceptions import DimensionMismatchError, InvalidParameterError
from app.schemas.dataset import Dataset

logger = logging.getLogger(__name__)

LOG_2PI = math.log(2.0 * math.pi)


class MixtureComponent(BaseModel):
    """대각 공분산 Gaussian 성분"""

    model_config = ConfigDict(frozen=True)

    weight: float = Field(..., gt=0.0, le=1.0)
    mean: List[float] = Field(..., min_length=1)
    variance: List[float] = Field(..., min_length=1)

    @model_validator(mode="after")
    def _check(self) -> "MixtureComponent":
        if len(self.mean) != len(self.variance):
            raise ValueError("mean and variance must have the same length")
        if any(not math.isfinite(v) or v <= 0.0 for v in self.variance):
            raise ValueError("variances must be finite and strictly positive")
        if any(not math.isfinite(m) for m in self.mean):
            raise ValueError("means must be finite")
        return self


class TargetDensity(BaseModel):
    """Gaussian mixture P. JSON: {dim, components:[{weight, mean, variance}]}"""

    model_config = ConfigDict(frozen=True)

    dim: int = Field(..., ge=1)
    components: List[MixtureComponent] = Field(..., min_length=1)

    @model_validator(mode="after")
    def _check(self) -> "TargetDensity":
        if any(len(c.mean) != self.dim for c in self.components):
            raise ValueError(f"every component must have dimension {self.dim}")
        total = math.fsum(c.weight for c in self.components)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1 (got {total!r})")
        return self

    def arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(weights (K,), means (K, d), variances (K, d))"""
        weights = np.array([c.weight for c in self.components])
        means = np.array([c.mean for c in self.components], dtype=np.float64)
        variances = np.array([c.variance for c in self.components], dtype=np.float64)
        return weights, means, variances

    def log_prob(self, x) -> np.ndarray:
        return log_density(self, x)

    def sample(self, n: int, seed: int) -> Dataset:
        return sample_target(self, n, seed)


class BaseDensity(BaseModel):
    """표준 Gaussian Q_0 = N(0, I_d)"""

    model_config = ConfigDict(frozen=True)

    dim: int = Field(..., ge=1)

    def as_mixture(self) -> TargetDensity:
        return TargetDensity(
            dim=self.dim,
            components=[MixtureComponent(weight=1.0, mean=[0.0] * self.dim, variance=[1.0] * self.dim)],
        )

    def log_prob(self, x) -> np.ndarray:
        return log_density(self, x)

    def sample(self, n: int, seed: int) -> Dataset:
        return sample_target(self, n, seed)


Density = Union[TargetDensity, BaseDensity]


# ==================== 도메인 생성 ====================


def make_ring(n_components: int = 8, radius: float = 1.0, sigma2: float = 0.0025) -> TargetDensity:
    """
    원 위에 등간격으로 놓인 2D Gaussian ring

    Args:
        n_components: 성분 수 (각도 2πj/n)
        radius: 원의 반지름
        sigma2: 등방 분산

    Returns:
        TargetDensity: 균등 가중치 2D mixture
    """
    if n_components < 1:
        raise InvalidParameterError(f"n_components must be >= 1, got {n_components}")
    if not radius > 0.0:
        raise InvalidParameterError(f"radius must be positive, got {radius}")
    if not sigma2 > 0.0:
        raise InvalidParameterError(f"sigma2 must be positive, got {sigma2}")

    weight = 1.0 / n_components
    components = []
    for j in range(n_components):
        angle = 2.0 * math.pi * j / n_components
        components.append(
            MixtureComponent(
                weight=weight,
                mean=[radius * math.cos(angle), radius * math.sin(angle)],
                variance=[sigma2, sigma2],
            )
        )
    return _normalized(2, components)


def make_1d_mixture() -> TargetDensity:
    """(1/3)(N(0.3, 0.01) + N(0.5, 0.1) + N(0.7, 0.1)), 두 번째 인자는 분산"""
    weight = 1.0 / 3.0
    return _normalized(
        1,
        [
            MixtureComponent(weight=weight, mean=[0.3], variance=[0.01]),
            MixtureComponent(weight=weight, mean=[0.5], variance=[0.1]),
            MixtureComponent(weight=weight, mean=[0.7], variance=[0.1]),
        ],
    )


def make_random_gaussians(m: int, seed: int) -> TargetDensity:
    """평균이 [0,1]에서 균등하게 뽑힌 m개의 1D Gaussian (분산 0.01)"""
    if m < 1:
        raise InvalidParameterError(f"m must be >= 1, got {m}")
    rng = np.random.default_rng(seed)
    means = rng.uniform(0.0, 1.0, size=m)
    weight = 1.0 / m
    return _normalized(
        1,
        [MixtureComponent(weight=weight, mean=[float(mu)], variance=[0.01]) for mu in means],
    )


def make_random_gaussians_2d(m: int, seed: int) -> TargetDensity:
    """평균이 [0,1]^2에서 균등하게 뽑힌 m개의 2D 등방 Gaussian (분산 0.01)"""
    if m < 1:
        raise InvalidParameterError(f"m must be >= 1, got {m}")
    rng = np.random.default_rng(seed)
    means = rng.uniform(0.0, 1.0, size=(m, 2))
    weight = 1.0 / m
    return _normalized(
        2,
        [
            MixtureComponent(weight=weight, mean=[float(a), float(b)], variance=[0.01, 0.01])
            for a, b in means
        ],
    )


def _normalized(dim: int, components: List[MixtureComponent]) -> TargetDensity:
    # 1/m 가중치 합의 반올림 오차를 마지막 성분에 흡수
    total = math.fsum(c.weight for c in components)
    if components and total != 1.0:
        last = components[-1]
        fixed = 1.0 - math.fsum(c.weight for c in components[:-1])
        components = components[:-1] + [
            MixtureComponent(weight=fixed, mean=last.mean, variance=last.variance)
        ]
    return TargetDensity(dim=dim, components=components)


# ==================== 평가 / 샘플링 ====================


def as_points(x, dim: int) -> np.ndarray:
    """한 점, (n, d) 배열 또는 Dataset을 (n, dim) float64 배열로"""
    if isinstance(x, Dataset):
        if x.dim != dim:
            raise DimensionMismatchError(dim, x.dim)
        return x.points
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        # 1차원 입력: dim==1이면 n개의 점, 아니면 한 점
        arr = arr.reshape(-1, 1) if dim == 1 else arr.reshape(1, -1)
    if arr.shape[1] != dim:
        raise DimensionMismatchError(dim, arr.shape[1])
    return arr


def log_density(P: Density, x) -> np.ndarray:
    """
    혼합 밀도의 log pdf (max-shift log-sum-exp)

    Args:
        P: TargetDensity 또는 BaseDensity
        x: 한 점 (d,), 점 배열 (n, d), 또는 Dataset

    Returns:
        np.ndarray: (n,) log-density. 단일 점 입력도 길이 1 배열
    """
    mixture = P.as_mixture() if isinstance(P, BaseDensity) else P
    points = as_points(x, mixture.dim)
    weights, means, variances = mixture.arrays()

    # (n, K, d)
    diff = points[:, None, :] - means[None, :, :]
    log_norm = -0.5 * np.sum(LOG_2PI + np.log(variances), axis=1)  # (K,)
    quad = -0.5 * np.sum(diff * diff / variances[None, :, :], axis=2)  # (n, K)
    log_terms = np.log(weights)[None, :] + log_norm[None, :] + quad
    return logsumexp(log_terms, axis=1)


def sample_target(P: Density, n: int, seed: int) -> Dataset:
    """성분을 categorical로 뽑은 뒤 Gaussian 샘플 (seed에 대해 결정적)"""
    return sample_with_labels(P, n, seed)[0]


def sample_with_labels(P: Density, n: int, seed: int) -> Tuple[Dataset, np.ndarray]:
    """ancestral sampling: 점과 함께 각 점을 만든 성분 번호"""
    mixture = P.as_mixture() if isinstance(P, BaseDensity) else P
    if n < 0:
        raise InvalidParameterError(f"n must be >= 0, got {n}")
    if n == 0:
        return Dataset.empty(mixture.dim), np.zeros(0, dtype=np.int64)

    rng = np.random.default_rng(seed)
    weights, means, variances = mixture.arrays()
    labels = rng.choice(len(weights), size=n, p=weights)
    noise = rng.standard_normal((n, mixture.dim))
    points = means[labels] + np.sqrt(variances[labels]) * noise
    return Dataset(dim=mixture.dim, points=points), labels


# ==================== Quadrature oracle ====================


def bounding_box(P: Density, n_sigma: float = 6.0) -> Tuple[np.ndarray, np.ndarray]:
    """모든 성분의 ±n_sigma 표준편차를 덮는 box"""
    mixture = P.as_mixture() if isinstance(P, BaseDensity) else P
    _, means, variances = mixture.arrays()
    std = np.sqrt(variances)
    lower = np.min(means - n_sigma * std, axis=0)
    upper = np.max(means + n_sigma * std, axis=0)
    return lower, upper


def _grid(P: Density, n_grid: int, n_sigma: float) -> Tuple[List[np.ndarray], np.ndarray]:
    lower, upper = bounding_box(P, n_sigma)
    axes = [np.linspace(lo, hi, n_grid) for lo, hi in zip(lower, upper)]
    if len(axes) == 1:
        points = axes[0].reshape(-1, 1)
    elif len(axes) == 2:
        xx, yy = np.meshgrid(axes[0], axes[1], indexing="ij")
        points = np.column_stack([xx.ravel(), yy.ravel()])
    else:
        raise InvalidParameterError("quadrature is only available for d in {1, 2}")
    return axes, points


def integrate(P: Density, values: np.ndarray, axes: Sequence[np.ndarray]) -> float:
    """격자 위 값의 trapezoidal 적분"""
    if len(axes) == 1:
        return float(trapezoid(values, axes[0]))
    grid_values = values.reshape(len(axes[0]), len(axes[1]))
    return float(trapezoid(trapezoid(grid_values, axes[1], axis=1), axes[0]))


def total_mass(P: Density, n_grid: Optional[int] = None, n_sigma: float = 6.0) -> float:
    """±n_sigma box 위 trapezoidal 질량 (1D/2D)"""
    axes, points = _grid(P, _default_grid(P, n_grid), n_sigma)
    return integrate(P, np.exp(log_density(P, points)), axes)


def differential_entropy(P: Density, n_grid: Optional[int] = None, n_sigma: float = 8.0) -> float:
    """-∫ p log p (quadrature oracle, 1D/2D)"""
    axes, points = _grid(P, _default_grid(P, n_grid), n_sigma)
    logp = log_density(P, points)
    return -integrate(P, np.exp(logp) * logp, axes)


def _default_grid(P: Density, n_grid: Optional[int]) -> int:
    if n_grid is not None:
        return n_grid
    return 4001 if P.dim == 1 else 601
