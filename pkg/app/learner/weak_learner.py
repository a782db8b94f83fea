# -*- coding: utf-8 -*-
"""
Weak Learner - P-샘플(라벨 1)과 Q-샘플(라벨 0)을 구분하는 분류기 학습과 WLA 측정

- train_classifier: BCE + Nesterov momentum, seed에 대해 결정적
- wla_advantages: γ_P = E_P[c]/c*, γ_Q = E_Q[−c]/c*
- gradient_check / layer_gradient_errors: backprop의 central finite difference 검증
"""
import logging
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.exceptions import DegenerateClassifierError, DimensionMismatchError, InvalidParameterError, TrainingError
from app.learner.network import (
    C_STAR_FLOOR,
    Classifier,
    architecture,
    bce_loss,
    classify,
    forward,
    glorot_init,
    loss_and_grad,
)
from app.learner.optimizer import NesterovMomentum
from app.schemas.dataset import Dataset
from app.schemas.train import TrainConfig, WlaReport

logger = logging.getLogger(__name__)

GradientFn = Callable[
    [Sequence[np.ndarray], Sequence[np.ndarray], np.ndarray, np.ndarray],
    Tuple[float, List[np.ndarray], List[np.ndarray]],
]

FD_STEP = 1e-5
PARAMS_PER_LAYER = 20


def _labelled(p_samples: Dataset, q_samples: Dataset) -> Tuple[np.ndarray, np.ndarray]:
    if len(p_samples) == 0 or len(q_samples) == 0:
        raise InvalidParameterError("p_samples and q_samples must be non-empty")
    if p_samples.dim != q_samples.dim:
        raise DimensionMismatchError(p_samples.dim, q_samples.dim)
    x = np.vstack([p_samples.points, q_samples.points])
    y = np.concatenate([np.ones(len(p_samples)), np.zeros(len(q_samples))])
    return x, y


def train_classifier(
    p_samples: Dataset,
    q_samples: Dataset,
    cfg: TrainConfig,
    round_index: Optional[int] = None,
) -> Classifier:
    """
    P/Q 구분 분류기 학습

    Args:
        p_samples: 라벨 1
        q_samples: 라벨 0
        cfg: 학습 설정 (batch_size 0이면 full-batch)
        round_index: 부스팅 라운드 (에러 메시지용)

    Returns:
        Classifier: c_star는 학습 데이터 전체 위의 max |c| (하한 1e-12)

    Raises:
        TrainingError: loss가 NaN/inf가 된 epoch
    """
    x, y = _labelled(p_samples, q_samples)
    n = len(y)
    rng = np.random.default_rng(cfg.seed)
    weights, biases = glorot_init(architecture(x.shape[1]), rng)
    n_layers = len(weights)
    params: List[np.ndarray] = list(weights) + list(biases)

    optimizer = NesterovMomentum(learning_rate=cfg.learning_rate, momentum=cfg.momentum)
    batch = n if cfg.batch_size == 0 or cfg.batch_size >= n else cfg.batch_size

    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(n) if batch < n else np.arange(n)
        for start in range(0, n, batch):
            idx = order[start:start + batch]
            ahead = optimizer.lookahead(params)
            loss, grad_w, grad_b = loss_and_grad(ahead[:n_layers], ahead[n_layers:], x[idx], y[idx])
            if not np.isfinite(loss):
                raise TrainingError("classifier loss diverged", epoch=epoch, round_index=round_index)
            optimizer.apply_gradients(params, grad_w + grad_b)

        if epoch == 1 or epoch % 100 == 0 or epoch == cfg.epochs:
            logger.debug(f"epoch {epoch}/{cfg.epochs} loss={loss:.6f}")

    if not all(np.all(np.isfinite(p)) for p in params):
        raise TrainingError("classifier parameters became non-finite", epoch=cfg.epochs, round_index=round_index)

    classifier = Classifier(params[:n_layers], params[n_layers:])
    c_star = max(float(np.max(np.abs(classify(classifier, x)))), C_STAR_FLOOR)
    return classifier.with_c_star(c_star)


def classifier_loss(c: Classifier, p_samples: Dataset, q_samples: Dataset) -> float:
    """현재 파라미터의 BCE loss"""
    x, y = _labelled(p_samples, q_samples)
    _, z = forward(c.weights, c.biases, x)
    return bce_loss(z, y)


def wla_advantages(
    c: Union[Classifier, Callable[[np.ndarray], np.ndarray]],
    p_samples: Dataset,
    q_samples: Dataset,
) -> WlaReport:
    """
    Weak learning advantage 측정

    c_star는 두 데이터셋 합집합 위의 max |c| (하한 1e-12)

    Raises:
        DegenerateClassifierError: 모든 평가 점에서 c ≡ 0
    """
    if len(p_samples) == 0 or len(q_samples) == 0:
        raise InvalidParameterError("p_samples and q_samples must be non-empty")
    c_p = np.asarray(c(p_samples.points), dtype=np.float64)
    c_q = np.asarray(c(q_samples.points), dtype=np.float64)

    sup = max(float(np.max(np.abs(c_p))), float(np.max(np.abs(c_q))))
    if sup == 0.0:
        raise DegenerateClassifierError("classifier output is identically zero on the evaluation points")
    c_star = max(sup, C_STAR_FLOOR)

    gamma_p = float(np.clip(np.mean(c_p) / c_star, -1.0, 1.0))
    gamma_q = float(np.clip(-np.mean(c_q) / c_star, -1.0, 1.0))
    return WlaReport.from_gammas(gamma_p, gamma_q, c_star)


# ==================== Gradient check ====================


def layer_gradient_errors(
    c: Classifier,
    batch: Dataset,
    labels: Sequence[int],
    gradient_fn: Optional[GradientFn] = None,
    seed: int = 0,
    per_layer: int = PARAMS_PER_LAYER,
    step: float = FD_STEP,
) -> List[float]:
    """
    layer별 analytic vs central-difference gradient의 최대 상대오차

    layer마다 weight/bias 중 최대 per_layer개를 무작위로 골라 비교한다.
    상대오차 = |a − n| / max(|a| + |n|, 1e-6)
    """
    if len(batch) == 0:
        raise InvalidParameterError("batch must be non-empty")
    y = np.asarray(labels, dtype=np.float64)
    if y.shape != (len(batch),):
        raise InvalidParameterError("labels must have one entry per batch point")
    x = batch.points
    weights = [np.array(w) for w in c.weights]
    biases = [np.array(b) for b in c.biases]

    grad_fn = gradient_fn or loss_and_grad
    _, grad_w, grad_b = grad_fn(weights, biases, x, y)

    rng = np.random.default_rng(seed)
    errors = []
    for k in range(len(weights)):
        # 한 layer의 파라미터: weight 원소 뒤에 bias 원소
        n_w = weights[k].size
        total = n_w + biases[k].size
        chosen = rng.choice(total, size=min(per_layer, total), replace=False)

        worst = 0.0
        for flat in chosen:
            target, analytic_grad = (weights, grad_w) if flat < n_w else (biases, grad_b)
            pos = np.unravel_index(flat if flat < n_w else flat - n_w, target[k].shape)
            original = target[k][pos]

            target[k][pos] = original + step
            loss_plus = bce_loss(forward(weights, biases, x)[1], y)
            target[k][pos] = original - step
            loss_minus = bce_loss(forward(weights, biases, x)[1], y)
            target[k][pos] = original

            numeric = (loss_plus - loss_minus) / (2.0 * step)
            analytic = float(analytic_grad[k][pos])
            rel = abs(analytic - numeric) / max(abs(analytic) + abs(numeric), 1e-6)
            worst = max(worst, rel)
        errors.append(worst)
    return errors


def gradient_check(
    c: Classifier,
    batch: Dataset,
    labels: Sequence[int],
    gradient_fn: Optional[GradientFn] = None,
    seed: int = 0,
) -> float:
    """모든 layer에 걸친 최대 상대오차"""
    return max(layer_gradient_errors(c, batch, labels, gradient_fn=gradient_fn, seed=seed))
