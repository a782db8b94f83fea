# -*- coding: utf-8 -*-
"""
리포트 저장소 - JSON 리포트와 CSV 테이블 (모두 원자적 쓰기)
"""
import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Iterable, List, Sequence

import numpy as np
from pydantic import BaseModel

from app.repository.atomic import PathLike, atomic_write_text, format_number

logger = logging.getLogger(__name__)


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="json", by_alias=True)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    return obj


class ReportRepository:
    """메트릭/이론/manifest JSON과 WLA·sweep·격자 CSV"""

    def __init__(self, base_dir: PathLike = "."):
        self.base_dir = Path(base_dir)

    def _resolve(self, path: PathLike) -> Path:
        path = Path(path)
        return path if path.is_absolute() else self.base_dir / path

    def write_json(self, obj: Any, path: PathLike) -> Path:
        text = json.dumps(_jsonable(obj), indent=2, sort_keys=False) + "\n"
        return atomic_write_text(self._resolve(path), text)

    def read_json(self, path: PathLike) -> Any:
        return json.loads(self._resolve(path).read_text(encoding="utf-8"))

    def write_csv(self, header: Sequence[str], rows: Iterable[Sequence[Any]], path: PathLike) -> Path:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(list(header))
        count = 0
        for row in rows:
            writer.writerow(["" if v is None else v if isinstance(v, str) else format_number(v) for v in row])
            count += 1
        target = atomic_write_text(self._resolve(path), buffer.getvalue())
        logger.debug(f"Wrote {count} rows to {target}")
        return target

    def write_models_csv(self, models: Sequence[BaseModel], path: PathLike) -> Path:
        """같은 타입 pydantic 레코드 목록을 필드 순서대로 CSV로"""
        if not models:
            raise ValueError("need at least one record to infer the CSV header")
        header: List[str] = list(type(models[0]).model_fields)
        rows = [[getattr(m, name) for name in header] for m in models]
        return self.write_csv(header, rows, path)

    def write_grid(self, points: np.ndarray, log_q: np.ndarray, path: PathLike) -> Path:
        """x[,y],logq 열의 밀도 격자"""
        header = ["x", "y"][: points.shape[1]] + ["logq"]
        rows = (list(p) + [v] for p, v in zip(points.tolist(), log_q.tolist()))
        return self.write_csv(header, rows, path)
