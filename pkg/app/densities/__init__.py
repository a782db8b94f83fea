from app.densities.mollifier import FiniteGridDensity, mollification_scale, mollifier_certificate, mollify
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
)

__all__ = [
    "BaseDensity",
    "FiniteGridDensity",
    "MixtureComponent",
    "TargetDensity",
    "differential_entropy",
    "log_density",
    "make_1d_mixture",
    "make_random_gaussians",
    "make_random_gaussians_2d",
    "make_ring",
    "mollification_scale",
    "mollifier_certificate",
    "mollify",
    "sample_target",
]
