# -*- coding: utf-8 -*-
"""
Booster 테스트 - θ-schedule, 부스팅 루프, log-partition, privacy certificate, 파생 모델
"""
import math

import numpy as np
import pytest

from app.booster.mbde import (
    MollifiedDensity,
    base_model,
    boost,
    certificate_points,
    estimate_log_partition,
    privacy_certificate,
    reschedule,
    sample_model,
    truncate,
)
from app.booster.schedule import FOUR_LOG2, ThetaSchedule, theta_schedule, theta_sum_log_gap
from app.config.experiment_config import ExperimentConfig
from app.densities.targets import BaseDensity, MixtureComponent, TargetDensity, make_1d_mixture, make_ring
from app.exceptions import InvalidParameterError
from app.learner.network import LOG2, Classifier
from app.metrics.evaluation import kl_mc, nll
from app.schemas.dataset import Dataset
from app.schemas.train import TrainConfig, WlaReport


def _normal(mean: float = 0.0, variance: float = 1.0) -> TargetDensity:
    return TargetDensity(dim=1, components=[MixtureComponent(weight=1.0, mean=[mean], variance=[variance])])


def _constant_classifier(bias: float) -> Classifier:
    """c(x) = log 2 · tanh(bias / 2) (모든 x에서 상수)"""
    return Classifier(weights=[np.zeros((1, 1))], biases=[np.array([bias])])


def _hand_built(eps: float, classifiers, thetas=None, phi_hat: float = 0.0) -> MollifiedDensity:
    schedule = theta_schedule(eps, len(classifiers)) if thetas is None else thetas
    return MollifiedDensity(
        base=BaseDensity(dim=1),
        thetas=schedule,
        classifiers=list(classifiers),
        phi_hat=phi_hat,
        eps=eps,
        wla_history=[WlaReport.from_gammas(0.5, 0.5, LOG2) for _ in classifiers],
    )


# ==================== θ-schedule ====================


def test_theta_values():
    r = 1.0 / (1.0 + FOUR_LOG2)
    schedule = theta_schedule(1.0, 3)
    assert schedule.values == pytest.approx([r, r ** 2, r ** 3], rel=1e-15)
    assert schedule.ratio == pytest.approx(r)
    assert theta_schedule(1.0, 0).values == []


@pytest.mark.parametrize("eps", [0.01, 0.1, 1.0, 10.0, 100.0])
def test_theta_sum_strictly_below_bound(eps):
    bound = eps / FOUR_LOG2
    for T in (1, 3, 10, 100):
        # gap = bound·r^T 가 float 해상도보다 큰 경우만 직접 합으로 비교
        if T * math.log(theta_schedule(eps, 1).ratio) < math.log(1e-10):
            continue
        assert math.fsum(theta_schedule(eps, T).values) < bound
    for T in (1, 100, 10_000):
        assert math.isfinite(theta_sum_log_gap(eps, T))
        assert theta_sum_log_gap(eps, T) < math.log(bound)


def test_partial_sums_match_closed_form():
    schedule = theta_schedule(2.0, 6)
    r = schedule.ratio
    expected = [(r - r ** (t + 1)) / (1.0 - r) for t in range(1, 7)]
    np.testing.assert_allclose(schedule.partial_sums(), expected, rtol=1e-12)


@pytest.mark.parametrize("eps,T", [(0.0, 3), (-1.0, 3), (float("inf"), 3), (1.0, -1)])
def test_theta_schedule_rejects_bad_input(eps, T):
    with pytest.raises(InvalidParameterError):
        theta_schedule(eps, T)


def test_schedule_validation():
    with pytest.raises(ValueError):
        ThetaSchedule(eps=1.0, values=[0.1, 0.2])
    with pytest.raises(ValueError):
        ThetaSchedule(eps=1.0, values=[1.0])


# ==================== log-partition / density ====================


def test_base_model_is_the_standard_normal():
    Q0 = base_model(1, eps=1.0)
    x = np.array([[0.0], [1.5]])
    np.testing.assert_allclose(Q0.log_prob(x), BaseDensity(dim=1).log_prob(x))
    assert estimate_log_partition(Q0, 1000, seed=0) == (0.0, 0.0)


def test_constant_classifier_partition_is_exact():
    bias = 1.3
    Q = _hand_built(1.0, [_constant_classifier(bias)])
    phi = estimate_log_partition(Q, 1000, seed=0)

    expected = Q.thetas.values[0] * LOG2 * math.tanh(bias / 2.0)
    assert phi.value == pytest.approx(expected, abs=1e-14)
    assert phi.stderr == pytest.approx(0.0, abs=1e-12)


def test_log_partition_requires_enough_samples():
    Q = _hand_built(1.0, [_constant_classifier(0.5)])
    with pytest.raises(InvalidParameterError):
        estimate_log_partition(Q, 99, seed=0)


def test_statistic_is_theta_weighted_sum():
    c1, c2 = _constant_classifier(1.0), _constant_classifier(-2.0)
    Q = _hand_built(2.0, [c1, c2])
    x = np.zeros((4, 1))
    expected = Q.thetas.values[0] * c1(x) + Q.thetas.values[1] * c2(x)
    np.testing.assert_allclose(Q.statistic(x), expected, rtol=1e-15)


def test_model_requires_one_theta_per_classifier():
    with pytest.raises(ValueError):
        MollifiedDensity(base=BaseDensity(dim=1), thetas=theta_schedule(1.0, 2), classifiers=[], eps=1.0)


# ==================== privacy certificate ====================


def test_certificate_fails_for_out_of_band_thetas():
    # c(x) = log 2 · tanh(50x), θ = 10·r  →  max |⟨θ,c⟩| ≈ 1.8 > ε/2
    sharp = Classifier(weights=[np.array([[100.0]])], biases=[np.array([0.0])])
    r = theta_schedule(1.0, 1).values[0]
    thetas = ThetaSchedule.model_construct(eps=1.0, values=[10.0 * r])
    Q = _hand_built(1.0, [sharp], thetas=thetas)
    points = Dataset(dim=1, points=np.linspace(-2.0, 2.0, 401).reshape(-1, 1))

    cert = privacy_certificate(Q, points)

    assert not cert.passed
    assert cert.max_abs > 0.5


def test_certificate_needs_points():
    Q = _hand_built(1.0, [_constant_classifier(0.5)])
    with pytest.raises(InvalidParameterError):
        privacy_certificate(Q, Dataset.empty(1))


def test_certificate_points_mix_samples_and_grid():
    Q = base_model(2, eps=1.0)
    points = certificate_points(Q, 100, seed=0, n_grid=11)
    assert points.points.shape == (100 + 121, 2)


# ==================== 부스팅 ====================


@pytest.mark.parametrize("eps", [0.1, 1.0, 5.0])
def test_boosted_model_passes_the_certificate(small_boost, eps):
    Q = boost(make_1d_mixture(), small_boost(eps=eps, T=2))
    points = certificate_points(Q, 5000, seed=1)

    cert = privacy_certificate(Q, points)

    assert Q.T == 2
    assert len(Q.wla_history) == 2
    assert cert.passed
    assert cert.max_abs <= eps / 2.0
    assert abs(Q.phi_hat) <= eps / 4.0


def test_boost_is_deterministic(small_boost):
    cfg = small_boost(eps=1.0, T=2, seed=3)
    a = boost(make_1d_mixture(), cfg)
    b = boost(make_1d_mixture(), cfg)
    assert a.to_record() == b.to_record()


def test_boost_with_zero_rounds_is_the_base(small_boost):
    Q = boost(make_1d_mixture(), small_boost(T=0))
    assert Q.T == 0
    assert Q.phi_hat == 0.0


def test_boost_fixed_dataset_mode(small_boost):
    P = make_1d_mixture()
    data = P.sample(400, seed=9)
    Q = boost(P, small_boost(T=1, data_mode="fixed"), data=data)
    assert Q.T == 1

    with pytest.raises(InvalidParameterError):
        boost(P, small_boost(T=1), data=make_ring().sample(10, seed=0))


def test_boosting_moves_mass_towards_the_target(small_boost):
    P = _normal(mean=1.5, variance=0.25)
    Q = boost(P, small_boost(eps=5.0, T=2, train=TrainConfig(epochs=200)))
    Q0 = base_model(1, eps=5.0)
    x = P.sample(5000, seed=4)

    # 타깃 샘플 위 평균 log-likelihood가 Q_0보다 좋아진다
    assert float(np.mean(Q.log_prob(x))) > float(np.mean(Q0.log_prob(x)))


# ==================== 파생 모델 / 샘플링 ====================


def test_truncate_and_reschedule(small_boost):
    Q = boost(make_1d_mixture(), small_boost(eps=1.0, T=2))

    head = truncate(Q, 1, 2000, seed=0)
    assert head.T == 1
    assert head.classifiers[0] is Q.classifiers[0]
    assert truncate(Q, 0, 2000, seed=0).phi_hat == 0.0
    with pytest.raises(InvalidParameterError):
        truncate(Q, 3, 2000, seed=0)

    moved = reschedule(Q, 0.5, 2000, seed=0)
    assert moved.eps == 0.5
    assert moved.thetas.values == theta_schedule(0.5, 2).values


def test_sample_model_releases_into_the_ledger(small_boost, fast_mcmc):
    from app.sampler.ledger import PrivacyLedger

    Q = boost(make_1d_mixture(), small_boost(eps=1.0, T=1))
    ledger = PrivacyLedger(eps_per_sample=Q.eps)

    samples, diagnostics = sample_model(Q, 200, fast_mcmc, seed=0, ledger=ledger)

    assert len(samples) == 200
    assert ledger.released == 200
    assert diagnostics.acceptance_rate > 0.01


def test_sample_base_model_is_exact():
    Q0 = base_model(1, eps=1.0)
    samples, diagnostics = sample_model(Q0, 10, mcmc=None, seed=5)
    np.testing.assert_array_equal(samples.points, BaseDensity(dim=1).sample(10, seed=5).points)
    assert diagnostics.chain_count == 0


def test_rescheduling_to_larger_eps_flattens_less(small_boost):
    Q = boost(make_1d_mixture(), small_boost(eps=1.0, T=2))
    points = np.linspace(-4.0, 4.0, 801).reshape(-1, 1)
    base = Q.base.log_prob(points)

    gaps = []
    for eps in (0.1, 1.0, 5.0):
        moved = reschedule(Q, eps, 5000, seed=0)
        gaps.append(float(np.max(np.abs(moved.log_prob(points) - base))))
        assert gaps[-1] <= eps / 2.0

    assert gaps == sorted(gaps)


# ==================== 도메인 추세 ====================


def _desk_config(**overrides) -> ExperimentConfig:
    values = dict(T=3, n_train=1000, n_mc=20_000, burn_in=500, thinning=5, proposal_sigma=0.5)
    values.update(overrides)
    return ExperimentConfig(**values)


@pytest.mark.slow
def test_boosting_the_ring_lowers_the_kl():
    ring = make_ring()
    Q = boost(ring, _desk_config(domain="ring").boost_config(1.0, seed=0))
    Q0 = base_model(2, eps=1.0)

    after = kl_mc(ring, Q, 20_000, seed=11)
    before = kl_mc(ring, Q0, 20_000, seed=11)
    assert Q.T == 3
    assert after.value < before.value


@pytest.mark.slow
def test_mean_nll_improves_with_eps_on_the_mixture():
    P = make_1d_mixture()
    config = _desk_config(domain="mix1d")
    eps_sweep = [0.1, 0.25, 0.5, 1.0, 2.0, 5.0]
    seeds = [0, 1, 2, 3]

    means = []
    for eps in eps_sweep:
        values = []
        for seed in seeds:
            held_out = P.sample(20_000, seed=100 + seed)
            values.append(nll(held_out, boost(P, config.boost_config(eps, seed))).value)
        means.append(float(np.mean(values)))

    inversions = sum(1 for a, b in zip(means, means[1:]) if b > a)
    assert inversions <= 1
    assert means[-1] < means[0]
