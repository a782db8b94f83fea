# -*- coding: utf-8 -*-
"""
공용 fixture - 빠른 학습/MCMC 설정과 작은 실험 설정
"""
import os
import sys

# 프로젝트 루트를 path에 추가
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from app.config.settings import reset_settings
from app.schemas.boost import BoostConfig
from app.schemas.mcmc import McmcConfig
from app.schemas.train import TrainConfig

SMALL_CONFIG_TEXT = """\
# tiny sweep for CLI tests
domain = normal1d
eps = 1.0
T = 1
n_train = 200
n_eval = 1000
n_mc = 2000
repeats = 2
epochs = 20
burn_in = 100
thinning = 2
n_chains = 4
proposal_sigma = 1.0
"""


@pytest.fixture
def fast_train() -> TrainConfig:
    return TrainConfig(epochs=30, seed=0)


@pytest.fixture
def fast_mcmc() -> McmcConfig:
    return McmcConfig(proposal_sigma=1.0, burn_in=200, thinning=2, n_chains=4, seed=0)


@pytest.fixture
def small_boost(fast_train, fast_mcmc):
    """eps와 T만 바꿔 쓰는 작은 부스팅 설정"""

    def _make(eps: float = 1.0, T: int = 2, seed: int = 0, **overrides) -> BoostConfig:
        values = dict(T=T, eps=eps, n_train=300, n_mc=5000, mcmc=fast_mcmc, train=fast_train, seed=seed)
        values.update(overrides)
        return BoostConfig(**values)

    return _make


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "experiment.ini"
    path.write_text(SMALL_CONFIG_TEXT, encoding="utf-8")
    return path


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """테스트마다 MBDE_* 환경변수와 캐시된 Settings 초기화"""
    for key in list(os.environ):
        if key.startswith("MBDE_"):
            monkeypatch.delenv(key, raising=False)
    reset_settings()
    yield
    reset_settings()
