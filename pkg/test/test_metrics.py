# -*- coding: utf-8 -*-
"""
평가 메트릭 테스트 - NLL, KL, coverage, 영역 질량, 격자
"""
import math

import numpy as np
import pytest

from app.booster.mbde import base_model, boost
from app.densities.targets import BaseDensity, MixtureComponent, TargetDensity, make_ring
from app.exceptions import InvalidParameterError
from app.metrics.evaluation import (
    kl_mc,
    log_density_grid,
    mean_and_stderr,
    metric_report,
    mode_coverage,
    nll,
    pool_estimates,
    region_mass,
    restricted_kl,
)
from app.schemas.boost import BoostConfig
from app.schemas.mcmc import McmcConfig
from app.schemas.region import Region
from app.schemas.report import Coverage
from app.schemas.train import TrainConfig


def _normal(mean: float = 0.0, dim: int = 1) -> TargetDensity:
    return TargetDensity(
        dim=dim,
        components=[MixtureComponent(weight=1.0, mean=[mean] * dim, variance=[1.0] * dim)],
    )


# ==================== NLL / KL ====================


def test_nll_of_the_base_density():
    P = _normal()
    x = P.sample(200_000, seed=0)
    estimate = nll(x, BaseDensity(dim=1))
    # ½·log(2π) + ½
    assert estimate.value == pytest.approx(0.5 * math.log(2.0 * math.pi) + 0.5, abs=0.01)
    assert 0.0 < estimate.stderr < 0.01


def test_kl_of_a_density_with_itself_is_zero():
    P = _normal()
    estimate = kl_mc(P, P, 2000, seed=0)
    assert estimate.value == 0.0
    assert estimate.stderr == 0.0


def test_kl_between_shifted_normals():
    # KL(N(1,1), N(0,1)) = ½
    estimate = kl_mc(_normal(1.0), BaseDensity(dim=1), 50_000, seed=1)
    assert estimate.value == pytest.approx(0.5, abs=0.03)


def test_kl_requires_enough_samples():
    with pytest.raises(InvalidParameterError):
        kl_mc(_normal(), _normal(), 999, seed=0)


def test_restricted_kl_over_the_whole_space_is_the_kl():
    P, Q = _normal(1.0), BaseDensity(dim=1)
    everything = Region(lower=[-100.0], upper=[100.0])
    nowhere = Region(lower=[50.0], upper=[51.0])

    assert restricted_kl(P, Q, everything, 5000, seed=2).value == pytest.approx(kl_mc(P, Q, 5000, seed=2).value, rel=1e-12)
    assert restricted_kl(P, Q, nowhere, 5000, seed=2) == (0.0, 0.0)


def test_restricted_kl_is_additive_over_a_split():
    P, Q = _normal(1.0), BaseDensity(dim=1)
    left = Region(lower=[-100.0], upper=[0.5])
    right = Region(lower=[0.5], upper=[100.0])
    whole = kl_mc(P, Q, 5000, seed=3).value

    parts = restricted_kl(P, Q, left, 5000, seed=3).value + restricted_kl(P, Q, right, 5000, seed=3).value
    assert parts == pytest.approx(whole, rel=1e-12, abs=1e-14)


def test_restricted_kl_is_additive_in_two_dimensions():
    ring = make_ring()
    Q = BaseDensity(dim=2)
    west = Region(lower=[-100.0, -100.0], upper=[0.1, 100.0])
    east = Region(lower=[0.1, -100.0], upper=[100.0, 100.0])

    parts = restricted_kl(ring, Q, west, 4000, seed=5).value + restricted_kl(ring, Q, east, 4000, seed=5).value
    assert parts == pytest.approx(kl_mc(ring, Q, 4000, seed=5).value, rel=1e-12)


# ==================== 추정치 합치기 ====================


def test_pooled_estimate_matches_the_concatenated_sample():
    values = np.random.default_rng(3).exponential(size=1000)
    chunks = [values[:100], values[100:450], values[450:]]

    pooled = pool_estimates([mean_and_stderr(c) for c in chunks], [len(c) for c in chunks])
    direct = mean_and_stderr(values)

    assert pooled.value == pytest.approx(direct.value, rel=1e-12)
    assert pooled.stderr == pytest.approx(direct.stderr, rel=1e-10)


def test_pool_estimates_needs_matching_counts():
    with pytest.raises(InvalidParameterError):
        pool_estimates([mean_and_stderr(np.ones(3))], [3, 4])


# ==================== Coverage / 영역 질량 ====================


def test_coverage_of_the_exact_model():
    P = _normal()
    coverage = mode_coverage(P, BaseDensity(dim=1), level=0.95, n=100_000, seed=0)
    assert coverage.value == pytest.approx(0.95, abs=0.01)
    # N(0,1)의 95% HDR 경계 ±1.96
    assert coverage.log_threshold == pytest.approx(-0.5 * math.log(2.0 * math.pi) - 0.5 * 1.96 ** 2, abs=0.05)


def test_coverage_misses_a_far_away_target():
    coverage = mode_coverage(_normal(8.0), BaseDensity(dim=1), n=10_000, seed=0)
    assert coverage.value < 0.01


def test_default_ring_lies_inside_the_base_high_density_region():
    # Q_0의 95% HDR은 반지름 2.45 원판이라 반지름 1 ring 전체를 덮는다
    coverage = mode_coverage(make_ring(), BaseDensity(dim=2), level=0.95, n=10_000, seed=0)
    assert coverage.value == 1.0


@pytest.mark.slow
def test_boosting_lifts_coverage_of_a_mode_outside_the_base_region():
    P = TargetDensity(dim=1, components=[MixtureComponent(weight=1.0, mean=[2.2], variance=[0.01])])
    cfg = BoostConfig(
        T=3, eps=5.0, n_train=1000, n_mc=20_000,
        mcmc=McmcConfig(proposal_sigma=1.0, burn_in=500, thinning=5, n_chains=4, seed=0),
        train=TrainConfig(epochs=200, seed=0), seed=0,
    )
    Q = boost(P, cfg)
    mcmc = McmcConfig(proposal_sigma=1.0, burn_in=1000, thinning=5, n_chains=4, seed=1)

    baseline = mode_coverage(P, base_model(1, eps=5.0), n=10_000, seed=0)
    boosted = mode_coverage(P, Q, n=10_000, seed=0, mcmc=mcmc)

    assert baseline.value < 0.05
    assert boosted.value >= baseline.value + 0.05


@pytest.mark.parametrize("level,n", [(0.0, 10_000), (1.0, 10_000), (0.95, 9_999)])
def test_coverage_argument_validation(level, n):
    with pytest.raises(InvalidParameterError):
        mode_coverage(_normal(), _normal(), level=level, n=n)


def test_region_mass_of_one_sigma_box():
    estimate = region_mass(BaseDensity(dim=1), Region(lower=[-1.0], upper=[1.0]), 100_000, seed=0)
    assert estimate.value == pytest.approx(math.erf(1.0 / math.sqrt(2.0)), abs=0.01)
    assert estimate.stderr > 0.0


def test_region_mass_dimension_mismatch():
    with pytest.raises(InvalidParameterError):
        region_mass(BaseDensity(dim=2), Region(lower=[0.0], upper=[1.0]), 100, seed=0)


# ==================== 격자 / 리포트 ====================


def test_log_density_grid_shapes():
    points, values = log_density_grid(BaseDensity(dim=1), _normal())
    assert points.shape == (1024, 1)
    assert values.shape == (1024,)

    ring_points, ring_values = log_density_grid(BaseDensity(dim=2), make_ring())
    assert ring_points.shape == (256 * 256, 2)
    assert np.all(np.isfinite(ring_values))


def test_log_density_grid_is_limited_to_two_dimensions():
    P = _normal(dim=3)
    with pytest.raises(InvalidParameterError):
        log_density_grid(P, P)


def test_metric_report_from_coverage_has_no_stderr():
    report = metric_report("mode_coverage", Coverage(value=0.9, log_threshold=-2.0), n=10_000, seed=1)
    assert report.value == 0.9
    assert report.stderr is None
