# -*- coding: utf-8 -*-
"""
Random-walk Metropolis-Hastings

n_chains개의 짧은 chain을 한꺼번에 (vectorized) 진행하고, burn-in과 thinning 후 round-robin으로 모은다.
i번째 출력 점은 chain (i mod n_chains)의 (i div n_chains)번째 샘플이다.
"""
import logging
import math
from typing import Callable, List, Optional, Tuple

import numpy as np

from app.exceptions import InvalidParameterError, SamplerError
from app.sampler.ledger import PrivacyLedger
from app.schemas.dataset import Dataset
from app.schemas.mcmc import McmcConfig, MhDiagnostics

logger = logging.getLogger(__name__)

LogDensityFn = Callable[[np.ndarray], np.ndarray]

LOW_ACCEPTANCE = 0.01
MAX_INIT_TRIES = 100


def chain_generators(cfg: McmcConfig) -> List[np.random.Generator]:
    """chain별 독립 난수 생성기 (seed에서 결정적으로 파생)"""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(cfg.seed).spawn(cfg.n_chains)]


def _initial_states(log_q: LogDensityFn, dim: int, rngs: List[np.random.Generator]) -> Tuple[np.ndarray, np.ndarray]:
    """chain마다 log_q가 유한한 첫 표준 Gaussian draw"""
    candidates = np.stack([rng.standard_normal((MAX_INIT_TRIES, dim)) for rng in rngs])  # (C, tries, d)
    values = np.asarray(log_q(candidates.reshape(-1, dim)), dtype=np.float64).reshape(len(rngs), MAX_INIT_TRIES)
    finite = np.isfinite(values)
    if not np.all(finite.any(axis=1)):
        raise SamplerError(f"log density is non-finite at all {MAX_INIT_TRIES} initial draws of some chain")
    first = finite.argmax(axis=1)
    rows = np.arange(len(rngs))
    return candidates[rows, first].copy(), values[rows, first].copy()


def mh_sample(
    log_q: LogDensityFn,
    dim: int,
    n: int,
    cfg: McmcConfig,
    ledger: Optional[PrivacyLedger] = None,
) -> Tuple[Dataset, MhDiagnostics]:
    """
    log_q (비정규화 가능)에서 n개 샘플

    Args:
        log_q: (m, d) 점 → (m,) log density
        dim: 차원
        n: 샘플 수
        cfg: proposal_sigma, burn_in, thinning, n_chains, seed
        ledger: 있으면 released += n

    Returns:
        (Dataset, MhDiagnostics): acceptance < 1%면 diagnostics.warning이 채워진다

    Raises:
        SamplerError: 초기 draw 전체에서 log_q가 유한하지 않은 chain이 있는 경우
    """
    if n < 0:
        raise InvalidParameterError(f"n must be >= 0, got {n}")
    if dim < 1:
        raise InvalidParameterError(f"dim must be >= 1, got {dim}")
    if n == 0:
        return Dataset.empty(dim), MhDiagnostics(acceptance_rate=0.0, chain_count=0, steps_total=0)

    n_chains = cfg.n_chains
    per_chain = math.ceil(n / n_chains)
    n_steps = cfg.burn_in + cfg.thinning * per_chain

    rngs = chain_generators(cfg)
    states, current = _initial_states(log_q, dim, rngs)

    # proposal noise와 uniform을 chain별 스트림에서 미리 뽑아 스케줄링과 무관하게 고정
    noise = np.stack([rng.standard_normal((n_steps, dim)) for rng in rngs], axis=1)  # (steps, C, d)
    log_u = np.log(np.stack([rng.uniform(size=n_steps) for rng in rngs], axis=1))  # (steps, C)

    kept = np.empty((per_chain, n_chains, dim))
    accepted = 0
    kept_idx = 0
    for step in range(n_steps):
        proposal = states + cfg.proposal_sigma * noise[step]
        proposed = np.asarray(log_q(proposal), dtype=np.float64)
        with np.errstate(invalid="ignore"):
            accept = np.isfinite(proposed) & (log_u[step] < proposed - current)
        states[accept] = proposal[accept]
        current[accept] = proposed[accept]
        accepted += int(accept.sum())

        if step >= cfg.burn_in and (step - cfg.burn_in + 1) % cfg.thinning == 0:
            kept[kept_idx] = states
            kept_idx += 1

    # (per_chain, C, d) → round-robin 순서
    points = kept.reshape(per_chain * n_chains, dim)[:n]

    steps_total = n_steps * n_chains
    rate = accepted / steps_total
    warning = None
    if rate < LOW_ACCEPTANCE:
        warning = f"acceptance rate {rate:.4f} below {LOW_ACCEPTANCE}"
        logger.warning(f"MH {warning} (proposal_sigma={cfg.proposal_sigma})")

    if ledger is not None:
        ledger.release(n)

    diagnostics = MhDiagnostics(
        acceptance_rate=rate,
        chain_count=n_chains,
        steps_total=steps_total,
        warning=warning,
    )
    return Dataset(dim=dim, points=points), diagnostics
