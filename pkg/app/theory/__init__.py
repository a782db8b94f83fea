from app.theory.bounds import (
    barrier_bounds,
    gamma_fn,
    hoeffding_drop_bound,
    kl_drop_bound,
    mode_capture_threshold,
    mode_capture_threshold_appendix,
)
from app.theory.checks import (
    barrier_check,
    hoeffding_wla_check,
    kl_drop_check,
    kl_drop_identity,
    kl_transfer_check,
    mode_capture_check,
)

__all__ = [
    "barrier_bounds",
    "barrier_check",
    "gamma_fn",
    "hoeffding_drop_bound",
    "hoeffding_wla_check",
    "kl_drop_bound",
    "kl_drop_check",
    "kl_drop_identity",
    "kl_transfer_check",
    "mode_capture_check",
    "mode_capture_threshold",
    "mode_capture_threshold_appendix",
]
