# -*- coding: utf-8 -*-
"""
Dataset CSV 저장소

형식: 헤더 `x0[,x1]`, 한 행에 한 점, 값은 %.17g (float64 왕복 보존)
"""
import csv
import io
import logging
from pathlib import Path

import numpy as np

from app.exceptions import InvalidParameterError
from app.repository.atomic import PathLike, atomic_write_text, format_number
from app.schemas.dataset import Dataset

logger = logging.getLogger(__name__)


class DatasetRepository:
    """출력 디렉토리에 묶인 Dataset CSV 저장소"""

    def __init__(self, base_dir: PathLike = "."):
        self.base_dir = Path(base_dir)

    def _resolve(self, path: PathLike) -> Path:
        path = Path(path)
        return path if path.is_absolute() else self.base_dir / path

    def save(self, dataset: Dataset, path: PathLike) -> Path:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow([f"x{i}" for i in range(dataset.dim)])
        for row in dataset.points:
            writer.writerow([format_number(v) for v in row])
        target = atomic_write_text(self._resolve(path), buffer.getvalue())
        logger.info(f"Saved {len(dataset)} points to {target}")
        return target

    def load(self, path: PathLike) -> Dataset:
        target = self._resolve(path)
        with open(target, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        if not rows:
            raise InvalidParameterError(f"{target}: missing header")
        header = rows[0]
        if header != [f"x{i}" for i in range(len(header))] or not header:
            raise InvalidParameterError(f"{target}: header must be x0[,x1,...], got {header}")
        dim = len(header)
        body = [r for r in rows[1:] if r]
        if not body:
            return Dataset.empty(dim)
        points = np.array([[float(v) for v in r] for r in body], dtype=np.float64)
        return Dataset(dim=dim, points=points)
