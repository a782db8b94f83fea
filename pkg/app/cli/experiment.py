# -*- coding: utf-8 -*-
"""
ε × repeat sweep 실행기

셀마다 파생 시드로 모델을 학습/평가하고 셀 JSON을 원자적으로 쓴다. 셀은 ThreadPoolExecutor로 동시에 돌고,
sweep.csv / summary.csv 집계는 제출 순서대로 단일 스레드에서 한다. 각 repeat에는 T = 0 (Q_0) 기준 행이 붙는다.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.booster.mbde import MollifiedDensity, base_model, boost
from app.cli.commands import MANIFEST_FILE, make_target
from app.config.experiment_config import ExperimentConfig
from app.config.seeds import derive_seed
from app.config.settings import get_settings
from app.densities.targets import TargetDensity, sample_target
from app.metrics.evaluation import MIN_COVERAGE_SAMPLES, kl_from_samples, mode_coverage, nll
from app.repository import ReportRepository
from app.schemas.report import SweepRow

logger = logging.getLogger(__name__)

SWEEP_FILE = "sweep.csv"
SUMMARY_FILE = "summary.csv"
CELL_DIR = "cells"
BASELINE_EPS = 0.0
SUMMARY_COLUMNS = [
    "m", "eps", "T", "runs",
    "nll_mean", "nll_std", "coverage_mean", "coverage_std", "kl_mean", "kl_std",
]


@dataclass(frozen=True)
class Cell:
    """sweep 한 칸 (eps = 0이면 Q_0 기준선)"""

    eps: float
    seed: int
    m: Optional[int] = None

    @property
    def is_baseline(self) -> bool:
        return self.eps == BASELINE_EPS

    @property
    def name(self) -> str:
        prefix = f"m{self.m}_" if self.m is not None else ""
        kind = "baseline" if self.is_baseline else f"eps{self.eps:g}"
        return f"{prefix}{kind}_seed{self.seed}.json"


def sweep_cells(config: ExperimentConfig) -> List[Cell]:
    """(m) × repeat × ([기준선] + ε sweep) 순서의 셀 목록"""
    ms: List[Optional[int]] = list(config.m) if config.domain == "random1d" else [None]
    cells = []
    for m in ms:
        for seed in config.repeat_seeds():
            cells.append(Cell(eps=BASELINE_EPS, seed=seed, m=m))
            cells.extend(Cell(eps=eps, seed=seed, m=m) for eps in config.eps)
    return cells


def evaluate_model(P: TargetDensity, model: MollifiedDensity, config: ExperimentConfig, seed: int) -> Dict[str, float]:
    held_out = sample_target(P, config.n_eval, derive_seed(seed, "eval", "p"))
    nll_est = nll(held_out, model)
    kl_est = kl_from_samples(P, model, held_out)
    coverage = mode_coverage(
        P,
        model,
        level=config.coverage_level,
        n=max(config.n_eval, MIN_COVERAGE_SAMPLES),
        seed=derive_seed(seed, "eval", "coverage"),
        mcmc=config.mcmc_config(),
    )
    return {
        "nll": nll_est.value,
        "nll_stderr": nll_est.stderr,
        "coverage": coverage.value,
        "kl": kl_est.value,
        "kl_stderr": kl_est.stderr,
    }


def run_cell(cell: Cell, config: ExperimentConfig, repo: ReportRepository) -> SweepRow:
    """셀 하나 학습 + 평가 후 cells/<name> 기록"""
    P = make_target(config, cell.seed, cell.m)
    if cell.is_baseline:
        # Q_0은 데이터와 무관하고 ε에 의존하지 않는다
        model = base_model(P.dim, min(config.eps), cell.seed)
    else:
        model = boost(P, config.boost_config(cell.eps, cell.seed))

    row = SweepRow(eps=cell.eps, T=model.T, seed=cell.seed, m=cell.m, **evaluate_model(P, model, config, cell.seed))
    repo.write_json(row, Path(CELL_DIR) / cell.name)
    logger.info(f"Cell done: {cell.name} nll={row.nll:.6f} coverage={row.coverage:.4f}")
    return row


def summarize(rows: List[SweepRow]) -> List[list]:
    """(m, eps, T)별 mean / std (ddof=1, run이 하나면 0)"""
    groups: Dict[Tuple[Optional[int], float, int], List[SweepRow]] = {}
    for row in rows:
        groups.setdefault((row.m, row.eps, row.T), []).append(row)

    table = []
    for (m, eps, T), members in groups.items():
        line: list = [m, eps, T, len(members)]
        for metric in ("nll", "coverage", "kl"):
            values = np.array([getattr(r, metric) for r in members])
            std = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
            line.extend([float(np.mean(values)), std])
        table.append(line)
    return table


def cmd_experiment(config: ExperimentConfig, out_dir: Path) -> Tuple[Path, Path]:
    """
    전체 sweep 실행

    Returns:
        (sweep.csv 경로, summary.csv 경로)
    """
    settings = get_settings()
    repo = ReportRepository(out_dir)
    cells = sweep_cells(config)
    logger.info(f"Experiment: domain={config.domain} cells={len(cells)} threads={settings.threads}")

    repo.write_json(
        {
            "command": "experiment",
            "config": config.model_dump(mode="json"),
            "cells": [c.name for c in cells],
        },
        MANIFEST_FILE,
    )

    with ThreadPoolExecutor(max_workers=settings.threads) as executor:
        futures = [executor.submit(run_cell, cell, config, repo) for cell in cells]
        rows = [f.result() for f in futures]

    sweep_path = repo.write_models_csv(rows, SWEEP_FILE)
    summary_path = repo.write_csv(SUMMARY_COLUMNS, summarize(rows), SUMMARY_FILE)
    return sweep_path, summary_path
