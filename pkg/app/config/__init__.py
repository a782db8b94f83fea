"""
Config module - 런타임 설정, 실험 설정, 로깅, 시드 파생
"""
from app.config.experiment_config import ExperimentConfig, load_experiment_config, parse_experiment_config
from app.config.logging_config import setup_logging
from app.config.seeds import derive_seed
from app.config.settings import Settings, get_settings, reset_settings

__all__ = [
    "ExperimentConfig",
    "Settings",
    "derive_seed",
    "get_settings",
    "load_experiment_config",
    "parse_experiment_config",
    "reset_settings",
    "setup_logging",
]
