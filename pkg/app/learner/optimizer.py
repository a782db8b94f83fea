# -*- coding: utf-8 -*-
"""Nesterov accelerated gradient (look-ahead form)"""
from typing import List, Sequence

import numpy as np


class NesterovMomentum:
    """
    v ← μ·v − η·∇L(θ + μ·v),  θ ← θ + v

    파라미터 리스트(layer별 배열)를 제자리에서 갱신한다.
    """

    def __init__(self, learning_rate: float = 0.01, momentum: float = 0.9):
        self.learning_rate = learning_rate
        self.momentum = momentum
        self.velocities: List[np.ndarray] = []

    def lookahead(self, params: Sequence[np.ndarray]) -> List[np.ndarray]:
        """gradient를 평가할 위치 θ + μ·v"""
        if not self.velocities:
            self.velocities = [np.zeros_like(p) for p in params]
        return [p + self.momentum * v for p, v in zip(params, self.velocities)]

    def apply_gradients(self, params: List[np.ndarray], grads: Sequence[np.ndarray]) -> None:
        """lookahead 위치에서 계산한 grads로 params와 velocity 갱신"""
        if not self.velocities:
            self.velocities = [np.zeros_like(p) for p in params]
        for idx, (grad, velocity) in enumerate(zip(grads, self.velocities)):
            new_velocity = self.momentum * velocity - self.learning_rate * grad
            params[idx] = params[idx] + new_velocity
            self.velocities[idx] = new_velocity
