from app.repository.dataset_repository import DatasetRepository
from app.repository.ledger_repository import LedgerRepository
from app.repository.model_repository import ModelRepository
from app.repository.report_repository import ReportRepository

__all__ = ["DatasetRepository", "LedgerRepository", "ModelRepository", "ReportRepository"]
