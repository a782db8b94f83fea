from app.metrics.evaluation import (
    kl_from_samples,
    kl_mc,
    log_density_grid,
    mode_coverage,
    nll,
    pool_estimates,
    region_mass,
    restricted_kl,
)

__all__ = [
    "kl_from_samples",
    "kl_mc",
    "log_density_grid",
    "mode_coverage",
    "nll",
    "pool_estimates",
    "region_mass",
    "restricted_kl",
]
