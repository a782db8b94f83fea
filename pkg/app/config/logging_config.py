# -*- coding: utf-8 -*-
"""
Logging Configuration
"""
import logging

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

_configured = False


def setup_logging(level: str = "INFO") -> bool:
    """
    루트 로거 설정 (프로세스당 한 번)

    Args:
        level: 로그 레벨 이름 (DEBUG, INFO, WARNING ...)

    Returns:
        bool: 이번 호출에서 설정했으면 True
    """
    global _configured
    numeric_level = getattr(logging, level.upper(), None)
    if not isinstance(numeric_level, int):
        numeric_level = logging.INFO

    if _configured:
        logging.getLogger().setLevel(numeric_level)
        return False

    logging.basicConfig(level=numeric_level, format=LOG_FORMAT)
    _configured = True
    logging.getLogger(__name__).debug(f"Logging configured at level {level}")
    return True
