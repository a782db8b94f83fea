# -*- coding: utf-8 -*-
"""
모델 JSON 저장소

같은 모델은 항상 같은 바이트로 저장되고 (타임스탬프 없음), float은 repr로 왕복 보존된다.
"""
import logging
from pathlib import Path

from app.booster.mbde import MollifiedDensity
from app.densities.targets import TargetDensity
from app.repository.atomic import PathLike, atomic_write_text
from app.schemas.boost import ModelRecord

logger = logging.getLogger(__name__)


class ModelRepository:
    """MollifiedDensity / TargetDensity JSON 저장소"""

    def __init__(self, base_dir: PathLike = "."):
        self.base_dir = Path(base_dir)

    def _resolve(self, path: PathLike) -> Path:
        path = Path(path)
        return path if path.is_absolute() else self.base_dir / path

    def save(self, model: MollifiedDensity, path: PathLike) -> Path:
        target = atomic_write_text(self._resolve(path), model.to_record().model_dump_json(indent=2) + "\n")
        logger.info(f"Model written to {target} (eps={model.eps}, T={model.T})")
        return target

    def load(self, path: PathLike) -> MollifiedDensity:
        text = self._resolve(path).read_text(encoding="utf-8")
        return MollifiedDensity.from_record(ModelRecord.model_validate_json(text))

    def save_target(self, target_density: TargetDensity, path: PathLike) -> Path:
        return atomic_write_text(self._resolve(path), target_density.model_dump_json(indent=2) + "\n")

    def load_target(self, path: PathLike) -> TargetDensity:
        return TargetDensity.model_validate_json(self._resolve(path).read_text(encoding="utf-8"))
