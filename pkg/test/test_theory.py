# -*- coding: utf-8 -*-
"""
이론 검사 테스트 - 닫힌 형태 bound와 학습된 모델 위 수치 검사
"""
import math

import numpy as np
import pytest

from app.booster.mbde import base_model, boost
from app.config.experiment_config import ExperimentConfig
from app.densities.targets import make_1d_mixture, make_ring
from app.exceptions import InvalidParameterError, NoGuaranteeError, TheoryDomainError
from app.learner.network import Classifier
from app.theory.bounds import (
    barrier_bounds,
    gamma_fn,
    hoeffding_drop_bound,
    kl_drop_bound,
    mode_capture_threshold,
    mode_capture_threshold_appendix,
    required_mode_mass,
)
from app.theory.checks import (
    barrier_check,
    gamma_linear_claim_check,
    gamma_tangent_check,
    hoeffding_wla_check,
    kl_drop_check,
    kl_drop_identity,
    kl_transfer_check,
    mode_capture_check,
    theta_sum_check,
)
from app.schemas.dataset import Dataset
from app.schemas.region import Region
from app.schemas.train import WlaReport


@pytest.fixture
def boosted(small_boost):
    return boost(make_1d_mixture(), small_boost(eps=1.0, T=2))


# ==================== Γ ====================


def test_gamma_values():
    assert gamma_fn(1.0 / 3.0) == 0.0
    assert gamma_fn(1.0) == pytest.approx(math.log(2.0))
    assert gamma_fn(-1.0) == pytest.approx(math.log(0.5))


@pytest.mark.parametrize("z", [5.0 / 3.0, 2.0])
def test_gamma_pole(z):
    with pytest.raises(TheoryDomainError):
        gamma_fn(z)


def test_linear_claim_fails_but_tangent_holds():
    claim = gamma_linear_claim_check()
    tangent = gamma_tangent_check()

    assert not claim.passed
    assert not claim.exact
    assert claim.observed < 0.0
    assert tangent.passed
    assert tangent.exact


# ==================== KL drop bound ====================


def test_high_regime_drop_bound():
    report = WlaReport.from_gammas(0.5, 0.5, 0.6)
    bound = kl_drop_bound(report, theta_t=0.1)
    assert bound.regime == "high"
    assert bound.lambda_t == pytest.approx(0.6 * 0.5 + math.log(4.0 / 3.5))


def test_regime_boundary_is_high():
    report = WlaReport.from_gammas(0.2, 1.0 / 3.0, 0.5)
    assert kl_drop_bound(report, theta_t=0.1).regime == "high"


def test_low_regime_drop_bound():
    report = WlaReport.from_gammas(0.3, 0.2, 0.6)
    bound = kl_drop_bound(report, theta_t=0.1)
    assert bound.regime == "low"
    assert bound.lambda_t == pytest.approx(0.5 - 0.6 * 0.1 / 2.0)


def test_failed_round_has_no_guarantee():
    report = WlaReport.from_gammas(0.4, -0.1, 0.5)
    with pytest.raises(NoGuaranteeError):
        kl_drop_bound(report, theta_t=0.1)
    with pytest.raises(NoGuaranteeError):
        hoeffding_drop_bound(report, theta_t=0.1)


def test_hoeffding_drop_bound():
    report = WlaReport.from_gammas(0.3, 0.2, 0.6)
    assert hoeffding_drop_bound(report, 0.1) == pytest.approx(0.6 * 0.5 - 0.36 * 0.1 / 2.0)


# ==================== Barrier / mode capture ====================


def test_barrier_bounds():
    assert barrier_bounds(1.0, 0.5, 0.5, 0) == (0.5, 0.0)
    upper, lower = barrier_bounds(1.0, 0.5, 0.5, 10_000)
    assert upper == 0.5
    assert lower == pytest.approx(0.25)
    for T in (1, 5, 50):
        u, lo = barrier_bounds(2.0, 1.0, 1.0, T)
        assert lo < u
    with pytest.raises(InvalidParameterError):
        barrier_bounds(0.0, 0.5, 0.5, 1)


def test_mode_capture_threshold_decreases_in_alpha():
    values = [mode_capture_threshold(1.0, 0.6, 0.6, 5, a) for a in (0.0, 0.25, 0.5, 1.0)]
    assert values == sorted(values, reverse=True)
    appendix = [mode_capture_threshold_appendix(1.0, 0.6, 0.6, 5, a) for a in (0.0, 0.25, 0.5, 1.0)]
    assert appendix == sorted(appendix, reverse=True)


def test_mode_capture_threshold_in_T_depends_on_total_advantage():
    # γ_P + γ_Q ≥ 1 이면 T에 대해 비증가, < 1 이면 증가
    strong = [mode_capture_threshold(1.0, 0.6, 0.6, T, 0.5) for T in (1, 2, 5, 20)]
    weak = [mode_capture_threshold(1.0, 0.3, 0.3, T, 0.5) for T in (1, 2, 5, 20)]
    assert strong == sorted(strong, reverse=True)
    assert weak == sorted(weak)


def test_required_mass_is_the_larger_form():
    args = (1.0, 0.6, 0.6, 5, 0.5)
    assert required_mode_mass(*args) == max(mode_capture_threshold(*args), mode_capture_threshold_appendix(*args))
    with pytest.raises(InvalidParameterError):
        mode_capture_threshold(1.0, 0.6, 0.6, 0, 0.5)
    with pytest.raises(InvalidParameterError):
        mode_capture_threshold(1.0, 0.6, 0.6, 1, 1.5)


# ==================== θ-sum ====================


def test_theta_sum_check_direct_and_closed_form():
    small = theta_sum_check(1.0, 10)
    assert small.passed
    assert small.observed is not None and small.observed < small.bound

    huge = theta_sum_check(100.0, 10_000)
    assert huge.passed
    assert huge.observed is None
    assert huge.to_record()["pass"] is True


# ==================== 모델 위 검사 ====================


def test_hoeffding_lemma_holds_on_the_empirical_distribution():
    c = Classifier.initialize(dim=1, seed=2)
    q = Dataset.from_array(np.random.default_rng(0).standard_normal(2000))
    for theta in (0.05, 0.3, 1.0):
        check = hoeffding_wla_check(c, q, theta)
        assert check.passed, check.to_record()


def test_kl_drop_identity_is_exact(boosted):
    P = make_1d_mixture()
    for t in (1, 2):
        check = kl_drop_identity(P, boosted, t, n=2000, seed=0, n_mc=2000)
        assert check.passed, check.to_record()
    with pytest.raises(InvalidParameterError):
        kl_drop_identity(P, boosted, 3, n=100, seed=0)


def test_kl_drop_check_reports_every_round(boosted):
    rows = kl_drop_check(make_1d_mixture(), boosted, n=2000, seed=0, n_mc=2000)
    assert [r.round_index for r in rows] == [1, 2]
    for row, report in zip(rows, boosted.wla_history):
        assert row.regime == report.regime
        if report.regime == "failed":
            assert row.passed_stated is None
        else:
            assert row.lambda_hoeffding is not None


def test_barrier_check_on_the_base_model():
    report = barrier_check(make_1d_mixture(), base_model(1, eps=1.0), n=1000, seed=0)
    assert report.delta_observed == 0.0
    assert report.lower == 0.0
    assert report.passed


def test_barrier_check_on_a_boosted_model(boosted):
    report = barrier_check(make_1d_mixture(), boosted, n=5000, seed=0)
    assert report.upper == 0.5
    # Δ = E_P[⟨θ,c⟩] − φ̂ 는 |·| < ε/2 로 구성상 제한된다
    assert abs(report.delta_observed) < 0.5
    assert report.passed


def test_kl_transfer_between_models_with_the_same_eps(boosted, small_boost):
    twin = boost(make_1d_mixture(), small_boost(eps=1.0, T=2, seed=1))
    report = kl_transfer_check(make_1d_mixture(), boosted, twin, n=5000, seed=0)
    assert abs(report.difference) < 1.0
    assert report.passed

    with pytest.raises(InvalidParameterError):
        kl_transfer_check(make_1d_mixture(), boosted, base_model(1, eps=2.0), n=100, seed=0)


def test_mode_capture_without_rounds_is_not_applicable():
    report = mode_capture_check(
        make_1d_mixture(),
        base_model(1, eps=1.0),
        Region(lower=[-0.5], upper=[0.5]),
        alpha=0.5,
        n=2000,
        seed=0,
    )
    assert report.status == "not_applicable"
    assert math.isnan(report.required_mass)
    assert 0.0 <= report.mass_q <= 1.0


@pytest.mark.slow
def test_hoeffding_drop_holds_in_almost_every_round():
    config = ExperimentConfig(domain="mix1d", T=3, n_mc=20_000)
    P = make_1d_mixture()
    judged = passed = 0
    for eps in (0.5, 1.0, 2.0):
        for seed in (0, 1, 2):
            Q = boost(P, config.boost_config(eps, seed))
            for row in kl_drop_check(P, Q, n=20_000, seed=seed, n_mc=20_000):
                if row.passed_hoeffding is None:
                    continue
                judged += 1
                passed += int(row.passed_hoeffding)

    assert judged > 0
    assert passed >= 0.95 * judged


@pytest.mark.slow
def test_mode_capture_on_a_boosted_ring():
    ring = make_ring()
    config = ExperimentConfig(domain="ring", T=3, n_train=1000, n_mc=20_000, burn_in=500, thinning=5, proposal_sigma=0.5)
    Q = boost(ring, config.boost_config(5.0, seed=0))
    box = Region.around(ring.components[0].mean, 0.15)

    report = mode_capture_check(ring, Q, box, alpha=0.5, n=5000, seed=0, mcmc=config.mcmc_config(seed=1))

    assert report.status in ("pass", "not_applicable")
    assert report.conclusion_holds
    assert report.mass_p == pytest.approx(0.125, abs=0.02)
    assert report.restricted_kl_q0 > 0.0
    assert 0.0 <= report.mass_q <= 1.0
