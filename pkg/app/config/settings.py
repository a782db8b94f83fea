# -*- coding: utf-8 -*-
"""
Runtime Settings - 환경변수(.env 포함) 기반 전역 설정

환경변수:
- MBDE_THREADS: sweep 셀 동시 실행 worker 수 (기본 1)
- MBDE_LOG_LEVEL: 로그 레벨 (기본 INFO)
- MBDE_OUTPUT_DIR: 기본 출력 디렉토리
- MBDE_FULL_SCALE: true면 전체 규모 기본값 사용
"""
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """프로세스 전역 설정"""

    model_config = SettingsConfigDict(
        env_prefix="MBDE_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    threads: int = Field(default=1, ge=1, description="동시 실행 worker 수")
    log_level: str = Field(default="INFO", description="로그 레벨")
    output_dir: str = Field(default="outputs", description="기본 출력 디렉토리")
    full_scale: bool = Field(default=False, description="전체 규모 기본값 사용 여부")


# 전역 설정 인스턴스
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Settings 싱글톤 반환"""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """캐시된 설정 제거 (테스트용)"""
    global _settings
    _settings = None
