from app.sampler.ledger import PrivacyLedger, budget_split
from app.sampler.mh import mh_sample
from app.sampler.privacy import histogram_privacy_check, postprocessing_ratio_check

__all__ = [
    "PrivacyLedger",
    "budget_split",
    "histogram_privacy_check",
    "mh_sample",
    "postprocessing_ratio_check",
]
