"""Dataset Schema - (n, d) 점 집합"""
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class Dataset(BaseModel):
    """
    d차원 점들의 불변 집합

    points는 (n, dim) float64 배열이며 읽기 전용으로 고정된다. 비어 있어도 된다.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dim: int = Field(..., ge=1, description="점의 차원")
    points: np.ndarray = Field(..., description="(n, dim) 좌표 배열")

    @model_validator(mode="before")
    @classmethod
    def _coerce_points(cls, data: Any) -> Any:
        if isinstance(data, dict) and "points" in data:
            dim = data.get("dim")
            arr = np.asarray(data["points"], dtype=np.float64)
            if dim is not None and arr.size == 0:
                arr = arr.reshape(0, int(dim))
            elif arr.ndim == 1 and dim is not None:
                arr = arr.reshape(-1, int(dim))
            arr = np.array(arr, dtype=np.float64, copy=True)
            arr.setflags(write=False)
            data = {**data, "points": arr}
        return data

    @model_validator(mode="after")
    def _check_shape(self) -> "Dataset":
        if self.points.ndim != 2 or self.points.shape[1] != self.dim:
            raise ValueError(
                f"points must have shape (n, {self.dim}), got {self.points.shape}"
            )
        if not np.all(np.isfinite(self.points)):
            raise ValueError("all coordinates must be finite")
        return self

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @property
    def n(self) -> int:
        return len(self)

    @classmethod
    def empty(cls, dim: int) -> "Dataset":
        return cls(dim=dim, points=np.zeros((0, dim)))

    @classmethod
    def from_array(cls, points: Any) -> "Dataset":
        """(n, d) 또는 (n,) 배열로부터 생성 (1차원 배열은 d=1)"""
        arr = np.asarray(points, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        return cls(dim=arr.shape[1], points=arr)

    def concat(self, other: "Dataset") -> "Dataset":
        if other.dim != self.dim:
            raise ValueError(f"cannot concatenate dim {self.dim} with dim {other.dim}")
        return Dataset(dim=self.dim, points=np.vstack([self.points, other.points]))
