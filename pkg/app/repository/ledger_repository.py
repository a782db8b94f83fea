"""Privacy ledger JSON 저장소 {eps_per_sample, released, spent}"""
import logging
from pathlib import Path
from typing import Optional

from app.repository.atomic import PathLike, atomic_write_text
from app.sampler.ledger import PrivacyLedger

logger = logging.getLogger(__name__)


class LedgerRepository:
    def __init__(self, base_dir: PathLike = "."):
        self.base_dir = Path(base_dir)

    def _resolve(self, path: PathLike) -> Path:
        path = Path(path)
        return path if path.is_absolute() else self.base_dir / path

    def load(self, path: PathLike) -> Optional[PrivacyLedger]:
        """없으면 None"""
        target = self._resolve(path)
        if not target.exists():
            return None
        return PrivacyLedger.model_validate_json(target.read_text(encoding="utf-8"))

    def save(self, ledger: PrivacyLedger, path: PathLike) -> Path:
        target = atomic_write_text(self._resolve(path), ledger.model_dump_json(indent=2) + "\n")
        logger.info(f"Ledger written to {target} (released={ledger.released}, spent={ledger.spent!r})")
        return target
