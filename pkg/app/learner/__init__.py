from app.learner.network import Classifier, bounded_output, classify
from app.learner.weak_learner import gradient_check, layer_gradient_errors, train_classifier, wla_advantages

__all__ = [
    "Classifier",
    "bounded_output",
    "classify",
    "gradient_check",
    "layer_gradient_errors",
    "train_classifier",
    "wla_advantages",
]
