# -*- coding: utf-8 -*-
"""
Bounded-output MLP - 라운드별 sufficient statistic c_t : X → (−log 2, log 2)

구조: [d, 25, 25, 25, 1], hidden tanh, output sigmoid. c = log 2 · (2σ(z) − 1) = log 2 · tanh(z/2).
"""
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.densities.targets import as_points
from app.exceptions import InvalidParameterError
from app.schemas.train import ClassifierRecord

LOG2 = math.log(2.0)
HIDDEN_WIDTHS = (25, 25, 25)
C_STAR_FLOOR = 1e-12

# tanh(15) < 1 in float64, so |c| < log 2 strictly
LOGIT_CLIP = 30.0

Params = Tuple[List[np.ndarray], List[np.ndarray]]


def architecture(dim: int, hidden: Sequence[int] = HIDDEN_WIDTHS) -> List[int]:
    return [dim, *hidden, 1]


def glorot_init(widths: Sequence[int], rng: np.random.Generator) -> Params:
    """uniform ±sqrt(6/(fan_in+fan_out)) weights, zero biases"""
    weights, biases = [], []
    for fan_in, fan_out in zip(widths[:-1], widths[1:]):
        limit = math.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return weights, biases


def forward(weights: Sequence[np.ndarray], biases: Sequence[np.ndarray], x: np.ndarray) -> Tuple[List[np.ndarray], np.ndarray]:
    """
    Returns:
        (activations, z): activations[0] = x, activations[k] = 각 hidden layer의 tanh 출력, z = (n,) logit
    """
    activations = [x]
    h = x
    for w, b in zip(weights[:-1], biases[:-1]):
        h = np.tanh(h @ w + b)
        activations.append(h)
    z = (h @ weights[-1] + biases[-1])[:, 0]
    return activations, z


def backward(weights: Sequence[np.ndarray], activations: Sequence[np.ndarray], dz: np.ndarray) -> Params:
    """dL/dz (n,)로부터 모든 layer의 (dW, db)"""
    grad_w: List[np.ndarray] = [np.empty(0)] * len(weights)
    grad_b: List[np.ndarray] = [np.empty(0)] * len(weights)

    delta = dz[:, None]
    for k in range(len(weights) - 1, -1, -1):
        grad_w[k] = activations[k].T @ delta
        grad_b[k] = delta.sum(axis=0)
        if k > 0:
            # tanh' = 1 − h²
            delta = (delta @ weights[k].T) * (1.0 - activations[k] ** 2)
    return grad_w, grad_b


def bce_loss(z: np.ndarray, y: np.ndarray) -> float:
    """mean binary cross-entropy, softplus(z) − y·z"""
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


def loss_and_grad(weights: Sequence[np.ndarray], biases: Sequence[np.ndarray], x: np.ndarray, y: np.ndarray) -> Tuple[float, List[np.ndarray], List[np.ndarray]]:
    activations, z = forward(weights, biases, x)
    loss = bce_loss(z, y)
    # d/dz softplus(z) − y z = σ(z) − y
    dz = (_sigmoid(z) - y) / len(y)
    grad_w, grad_b = backward(weights, activations, dz)
    return loss, grad_w, grad_b


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def bounded_output(sigma) -> np.ndarray:
    """sigmoid 출력 σ ∈ (0,1)을 c = log 2 · (2σ − 1)로"""
    return LOG2 * (2.0 * np.asarray(sigma, dtype=np.float64) - 1.0)


class Classifier:
    """
    학습된 분류기 (불변)

    Attributes:
        widths: layer 폭 [d, 25, 25, 25, 1]
        weights: layer별 (fan_in, fan_out) 행렬
        biases: layer별 (fan_out,) 벡터
        c_star: 학습 데이터 위에서 측정한 sup |c|, (0, log 2]
    """

    def __init__(self, weights: Sequence[np.ndarray], biases: Sequence[np.ndarray], c_star: float = LOG2):
        if len(weights) != len(biases) or not weights:
            raise InvalidParameterError("weights and biases must be non-empty and have one entry per layer")
        self.weights: Tuple[np.ndarray, ...] = tuple(_frozen(w) for w in weights)
        self.biases: Tuple[np.ndarray, ...] = tuple(_frozen(b) for b in biases)
        for arr in self.weights + self.biases:
            if not np.all(np.isfinite(arr)):
                raise InvalidParameterError("classifier parameters must be finite")
        if not 0.0 < c_star <= LOG2:
            raise InvalidParameterError(f"c_star must be in (0, log 2], got {c_star}")
        self.c_star = float(c_star)
        self.widths = [self.weights[0].shape[0]] + [w.shape[1] for w in self.weights]

    @property
    def dim(self) -> int:
        return self.widths[0]

    def logits(self, x) -> np.ndarray:
        points = as_points(x, self.dim)
        _, z = forward(self.weights, self.biases, points)
        return z

    def __call__(self, x) -> np.ndarray:
        return classify(self, x)

    def with_c_star(self, c_star: float) -> "Classifier":
        return Classifier(self.weights, self.biases, c_star)

    def to_record(self) -> ClassifierRecord:
        return ClassifierRecord(
            widths=list(self.widths),
            weights=[w.tolist() for w in self.weights],
            biases=[b.tolist() for b in self.biases],
            c_star=self.c_star,
        )

    @classmethod
    def from_record(cls, record: ClassifierRecord) -> "Classifier":
        return cls(
            weights=[np.asarray(w, dtype=np.float64).reshape(len(w), -1) for w in record.weights],
            biases=[np.asarray(b, dtype=np.float64) for b in record.biases],
            c_star=record.c_star,
        )

    @classmethod
    def initialize(cls, dim: int, seed: int, hidden: Optional[Sequence[int]] = None) -> "Classifier":
        widths = architecture(dim, HIDDEN_WIDTHS if hidden is None else hidden)
        weights, biases = glorot_init(widths, np.random.default_rng(seed))
        return cls(weights, biases)

    def __repr__(self) -> str:
        return f"Classifier(widths={self.widths}, c_star={self.c_star:.6g})"


def classify(c: Classifier, x) -> np.ndarray:
    """
    c(x) = log 2 · (2σ(z) − 1) ∈ (−log 2, log 2)

    Returns:
        np.ndarray: (n,) 값. 한 점 입력도 길이 1 배열
    """
    z = np.clip(c.logits(x), -LOGIT_CLIP, LOGIT_CLIP)
    return LOG2 * np.tanh(0.5 * z)


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=np.float64, copy=True)
    out.setflags(write=False)
    return out
