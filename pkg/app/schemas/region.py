"""Region Schema - 축 정렬 box B ⊆ X"""
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class Region(BaseModel):
    """축 정렬 box (lower < upper, 축마다)"""

    model_config = ConfigDict(frozen=True)

    lower: List[float] = Field(..., min_length=1)
    upper: List[float] = Field(..., min_length=1)

    @model_validator(mode="after")
    def _check_corners(self) -> "Region":
        if len(self.lower) != len(self.upper):
            raise ValueError("lower and upper must have the same dimension")
        if any(lo >= hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError("lower must be strictly below upper on every axis")
        return self

    @property
    def dim(self) -> int:
        return len(self.lower)

    def contains(self, points: np.ndarray) -> np.ndarray:
        """(n, d) 점들의 포함 여부 (닫힌 box)"""
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        lower = np.asarray(self.lower)
        upper = np.asarray(self.upper)
        return np.all((pts >= lower) & (pts <= upper), axis=1)

    @classmethod
    def around(cls, center: List[float], half_width: float) -> "Region":
        return cls(
            lower=[c - half_width for c in center],
            upper=[c + half_width for c in center],
        )
