# -*- coding: utf-8 -*-
"""
성질 기반 테스트 - 닫힌 형태 계산의 불변식을 무작위 입력으로 확인
"""
import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from app.booster.schedule import FOUR_LOG2, theta_schedule, theta_sum_log_gap
from app.densities.mollifier import FiniteGridDensity, mollify
from app.learner.network import LOG2, Classifier, classify
from app.theory.bounds import barrier_bounds, gamma_fn, mode_capture_threshold

EPS = st.floats(min_value=0.01, max_value=100.0, allow_nan=False, allow_infinity=False)
GAMMA = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False)
ALPHA = st.floats(min_value=0.0, max_value=1.0, allow_nan=False, allow_infinity=False)


# ==================== θ-schedule ====================


@given(eps=EPS, T=st.integers(min_value=1, max_value=200))
@settings(max_examples=300, deadline=None)
def test_theta_schedule_is_decreasing_and_summable(eps, T):
    values = theta_schedule(eps, T).values
    assert all(0.0 < v < 1.0 for v in values if v > 0.0)
    assert all(a >= b for a, b in zip(values, values[1:]))
    gap = theta_sum_log_gap(eps, T)
    assert math.isfinite(gap)
    assert gap < math.log(eps / FOUR_LOG2)


# ==================== Γ / bound ====================


@given(z=st.floats(min_value=-1.0, max_value=1.6, allow_nan=False))
@settings(max_examples=500)
def test_gamma_stays_above_its_tangent_at_one_third(z):
    assert gamma_fn(z) >= 0.75 * (z - 1.0 / 3.0) - 1e-12


@given(eps=EPS, gamma_p=GAMMA, gamma_q=GAMMA, T=st.integers(min_value=0, max_value=500))
@settings(max_examples=300)
def test_barrier_lower_never_exceeds_upper(eps, gamma_p, gamma_q, T):
    upper, lower = barrier_bounds(eps, gamma_p, gamma_q, T)
    assert upper == eps / 2.0
    assert lower <= upper


@given(eps=EPS, gamma_p=GAMMA, gamma_q=GAMMA, T=st.integers(min_value=1, max_value=100), a=ALPHA, b=ALPHA)
@settings(max_examples=300)
def test_mode_capture_threshold_non_increasing_in_alpha(eps, gamma_p, gamma_q, T, a, b):
    lo, hi = min(a, b), max(a, b)
    first = mode_capture_threshold(eps, gamma_p, gamma_q, T, lo)
    second = mode_capture_threshold(eps, gamma_p, gamma_q, T, hi)
    assert second <= first * (1.0 + 1e-12)


# ==================== 분류기 / mollifier ====================


@given(seed=st.integers(min_value=0, max_value=10_000), x=st.floats(min_value=-1e3, max_value=1e3, allow_nan=False))
@settings(max_examples=200, deadline=None)
def test_initialized_classifier_output_is_bounded(seed, x):
    c = Classifier.initialize(dim=1, seed=seed)
    assert abs(float(classify(c, np.array([[x]]))[0])) < LOG2


@given(
    values=st.lists(st.floats(min_value=0.01, max_value=10.0, allow_nan=False), min_size=2, max_size=50),
    eps=st.floats(min_value=0.01, max_value=10.0, allow_nan=False),
)
@settings(max_examples=300, deadline=None)
def test_mollified_grid_lies_in_the_band(values, eps):
    f = FiniteGridDensity.normalized(np.array(values), [0.0], [1.0])
    g = mollify(f, eps)
    assert g.values.max() <= math.exp(eps / 2.0) * (1.0 + 1e-9)
    assert g.values.min() >= math.exp(-eps / 2.0) * (1.0 - 1e-9)
    assert abs(g.mass() - 1.0) <= 1e-9
