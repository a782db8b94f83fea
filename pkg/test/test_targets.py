# -*- coding: utf-8 -*-
"""
Target density 테스트 - 도메인 생성, log density, 샘플링, quadrature oracle
"""
import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.densities.targets import (
    BaseDensity,
    MixtureComponent,
    TargetDensity,
    differential_entropy,
    log_density,
    make_1d_mixture,
    make_random_gaussians,
    make_random_gaussians_2d,
    make_ring,
    sample_target,
    sample_with_labels,
    total_mass,
)
from app.exceptions import DimensionMismatchError, InvalidParameterError
from app.schemas.dataset import Dataset


# ==================== 도메인 ====================


def test_ring_has_equal_weight_modes_on_the_circle():
    ring = make_ring()
    weights, means, variances = ring.arrays()

    assert ring.dim == 2
    assert len(ring.components) == 8
    assert math.fsum(weights) == 1.0
    np.testing.assert_allclose(np.linalg.norm(means, axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(variances, 0.0025)


@pytest.mark.parametrize("kwargs", [{"radius": 0.0}, {"sigma2": -1.0}, {"n_components": 0}])
def test_ring_rejects_bad_parameters(kwargs):
    with pytest.raises(InvalidParameterError):
        make_ring(**kwargs)


def test_1d_mixture_components():
    P = make_1d_mixture()
    _, means, variances = P.arrays()
    assert means[:, 0].tolist() == [0.3, 0.5, 0.7]
    assert variances[:, 0].tolist() == [0.01, 0.1, 0.1]


def test_random_gaussians_are_seeded():
    a = make_random_gaussians(5, seed=3)
    b = make_random_gaussians(5, seed=3)
    c = make_random_gaussians(5, seed=4)

    assert a == b
    assert a != c
    _, means, _ = a.arrays()
    assert np.all((means >= 0.0) & (means <= 1.0))
    assert math.fsum(comp.weight for comp in a.components) == pytest.approx(1.0, abs=1e-15)


def test_random_gaussians_2d_shape():
    P = make_random_gaussians_2d(7, seed=1)
    assert P.dim == 2
    assert len(P.components) == 7
    with pytest.raises(InvalidParameterError):
        make_random_gaussians_2d(0, seed=1)


def test_weights_must_sum_to_one():
    with pytest.raises(ValidationError):
        TargetDensity(
            dim=1,
            components=[
                MixtureComponent(weight=0.5, mean=[0.0], variance=[1.0]),
                MixtureComponent(weight=0.4, mean=[1.0], variance=[1.0]),
            ],
        )


def test_nonpositive_variance_rejected():
    with pytest.raises(ValidationError):
        MixtureComponent(weight=1.0, mean=[0.0], variance=[0.0])


def test_target_json_record():
    ring = make_ring()
    assert TargetDensity.model_validate_json(ring.model_dump_json()) == ring


# ==================== 평가 ====================


def test_standard_normal_log_density():
    Q0 = BaseDensity(dim=1)
    values = log_density(Q0, np.array([[0.0], [1.0]]))
    assert values[0] == pytest.approx(-0.5 * math.log(2.0 * math.pi), abs=1e-14)
    assert values[1] == pytest.approx(-0.5 * math.log(2.0 * math.pi) - 0.5, abs=1e-14)


def test_log_density_accepts_single_point_and_dataset():
    ring = make_ring()
    single = log_density(ring, [1.0, 0.0])
    batch = log_density(ring, Dataset(dim=2, points=[[1.0, 0.0]]))
    assert single.shape == (1,)
    assert single[0] == batch[0]


def test_log_density_is_finite_far_from_modes():
    ring = make_ring()
    values = log_density(ring, np.array([[30.0, -30.0]]))
    assert np.isfinite(values[0])


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        log_density(make_ring(), np.zeros((3, 3)))


def test_mass_integrates_to_one():
    assert total_mass(make_1d_mixture()) == pytest.approx(1.0, abs=1e-6)
    assert total_mass(make_ring()) == pytest.approx(1.0, abs=1e-3)


def test_standard_normal_entropy_oracle():
    expected = 0.5 * math.log(2.0 * math.pi * math.e)
    assert differential_entropy(BaseDensity(dim=1)) == pytest.approx(expected, abs=1e-5)


# ==================== 샘플링 ====================


def test_sampling_is_deterministic_per_seed():
    P = make_1d_mixture()
    a = sample_target(P, 100, seed=11)
    b = sample_target(P, 100, seed=11)
    c = sample_target(P, 100, seed=12)

    np.testing.assert_array_equal(a.points, b.points)
    assert not np.array_equal(a.points, c.points)


def test_sample_mean_matches_mixture_mean():
    P = make_1d_mixture()
    samples = sample_target(P, 100_000, seed=0)
    assert float(np.mean(samples.points)) == pytest.approx(0.5, abs=0.01)


def test_ring_samples_pick_every_mode():
    ring = make_ring()
    samples, labels = sample_with_labels(ring, 8000, seed=2)
    counts = np.bincount(labels, minlength=8)

    assert samples.points.shape == (8000, 2)
    assert np.all(counts > 800)
    np.testing.assert_array_equal(samples.points, sample_target(ring, 8000, seed=2).points)


def test_zero_and_negative_sample_counts():
    assert len(sample_target(make_ring(), 0, seed=0)) == 0
    with pytest.raises(InvalidParameterError):
        sample_target(make_ring(), -1, seed=0)
