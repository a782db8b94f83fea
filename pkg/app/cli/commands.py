# -*- coding: utf-8 -*-
"""
CLI 명령 구현 - train / sample / eval / certify / theory

모든 명령은 입력을 수정하지 않고 출력 디렉토리 아래에만 쓴다. manifest에는 해석된 설정과 시드만 담고
타임스탬프를 넣지 않으므로 같은 manifest로 다시 실행하면 같은 산출물이 나온다.
"""
import logging
import math
from pathlib import Path
from typing import List, Optional, Tuple

from app.booster.mbde import (
    MollifiedDensity,
    boost,
    certificate_points,
    privacy_certificate,
    sample_model,
    truncate,
)
from app.config.experiment_config import ExperimentConfig
from app.config.seeds import derive_seed
from app.densities.targets import (
    MixtureComponent,
    TargetDensity,
    make_1d_mixture,
    make_random_gaussians,
    make_random_gaussians_2d,
    make_ring,
    sample_target,
)
from app.exceptions import InvalidParameterError
from app.metrics.evaluation import (
    MIN_COVERAGE_SAMPLES,
    kl_from_samples,
    log_density_grid,
    metric_report,
    mode_coverage,
    nll,
)
from app.repository import DatasetRepository, LedgerRepository, ModelRepository, ReportRepository
from app.sampler.ledger import PrivacyLedger
from app.schemas.region import Region
from app.schemas.report import Certificate, TheoryCheck, TheoryReport
from app.theory.bounds import barrier_bounds, gamma_fn, mode_capture_threshold
from app.theory.checks import (
    barrier_check,
    certificate_check,
    gamma_linear_claim_check,
    gamma_tangent_check,
    hoeffding_wla_check,
    kl_drop_check,
    kl_drop_identity,
    kl_transfer_check,
    log_partition_range_check,
    mode_capture_check,
    theta_sum_check,
)

logger = logging.getLogger(__name__)

MODEL_FILE = "model.json"
TARGET_FILE = "target.json"
MANIFEST_FILE = "manifest.json"
WLA_FILE = "wla_history.csv"
SAMPLES_FILE = "samples.csv"
LEDGER_FILE = "ledger.json"
METRICS_JSON = "metrics.json"
METRICS_CSV = "metrics.csv"
GRID_FILE = "grid.csv"
CERTIFICATE_FILE = "certificate.json"
THEORY_FILE = "theory.json"

THEORY_LONG_T = 10_000
RING_MODE_HALF_WIDTH = 0.15


def make_target(config: ExperimentConfig, seed: int, m: Optional[int] = None) -> TargetDensity:
    """
    설정의 domain에 해당하는 타깃 P

    random 도메인은 seed에서 파생한 시드로 평균을 뽑는다. 성분 수는 m이 주어지면 m (random1d sweep),
    아니면 target_m.
    """
    if config.domain == "ring":
        return make_ring(radius=config.ring_radius)
    if config.domain == "mix1d":
        return make_1d_mixture()
    if config.domain == "normal1d":
        return TargetDensity(dim=1, components=[MixtureComponent(weight=1.0, mean=[0.0], variance=[1.0])])
    count = config.target_m if m is None else m
    if config.domain == "random1d":
        return make_random_gaussians(count, derive_seed(seed, "target"))
    return make_random_gaussians_2d(count, derive_seed(seed, "target"))


def _manifest(command: str, config: ExperimentConfig, **extra) -> dict:
    return {"command": command, "config": config.model_dump(mode="json"), **extra}


# ==================== train ====================


def cmd_train(config: ExperimentConfig, out_dir: Path, eps: Optional[float] = None) -> Tuple[Path, Certificate]:
    """
    모델 학습 후 model.json, target.json, manifest.json, wla_history.csv 기록

    Returns:
        (모델 파일 경로, 학습 직후 privacy certificate)
    """
    eps = config.eps[0] if eps is None else eps
    P = make_target(config, config.seed)
    boost_cfg = config.boost_config(eps, config.seed)
    logger.info(f"Training: domain={config.domain} eps={eps} T={boost_cfg.T} seed={config.seed}")

    model = boost(P, boost_cfg)

    reports = ReportRepository(out_dir)
    models = ModelRepository(out_dir)
    model_path = models.save(model, MODEL_FILE)
    models.save_target(P, TARGET_FILE)
    rows = [
        [t, r.gamma_p, r.gamma_q, r.c_star, r.regime, theta]
        for t, (r, theta) in enumerate(zip(model.wla_history, model.thetas.values), start=1)
    ]
    reports.write_csv(["round", "gamma_p", "gamma_q", "c_star", "regime", "theta"], rows, WLA_FILE)
    reports.write_json(
        _manifest(
            "train",
            config,
            eps=eps,
            seed=config.seed,
            boost=boost_cfg.model_dump(mode="json"),
            target=P.model_dump(mode="json"),
            artifacts={"model": MODEL_FILE, "target": TARGET_FILE, "wla_history": WLA_FILE},
        ),
        MANIFEST_FILE,
    )

    cert = _certify(model, config, config.seed)
    if not cert.passed:
        logger.error(f"Trained model fails the privacy certificate (max_abs={cert.max_abs:.6g})")
    return model_path, cert


def load_trained_target(model_path: Path, config: ExperimentConfig) -> TargetDensity:
    """모델 옆의 target.json이 있으면 학습 때의 P, 없으면 설정으로 다시 만든다"""
    target_path = Path(model_path).parent / TARGET_FILE
    if target_path.exists():
        return ModelRepository().load_target(target_path)
    return make_target(config, config.seed)


# ==================== sample ====================


def cmd_sample(
    model_path: Path,
    k: int,
    out_dir: Path,
    config: ExperimentConfig,
    eps_total: Optional[float] = None,
    seed: int = 0,
    ledger_path: Optional[Path] = None,
) -> Tuple[Path, Path]:
    """
    모델에서 k개 샘플을 공개하고 ledger 갱신

    Raises:
        BudgetExceededError: eps_total이 주어졌고 k개를 더 공개하면 초과하는 경우
    """
    if k < 0:
        raise InvalidParameterError(f"k must be >= 0, got {k}")
    model = ModelRepository().load(model_path)
    ledgers = LedgerRepository(out_dir)
    ledger_file = ledger_path or Path(LEDGER_FILE)

    ledger = ledgers.load(ledger_file) or PrivacyLedger(eps_per_sample=model.eps)
    if ledger.eps_per_sample != model.eps:
        raise InvalidParameterError(
            f"ledger tracks eps_per_sample={ledger.eps_per_sample} but the model has eps={model.eps}"
        )
    if eps_total is not None:
        ledger.check(k, eps_total)

    # 공개마다 다른 스트림: 지금까지 공개한 수를 시드 키로 쓴다
    release_seed = derive_seed(seed, "release", ledger.released)
    samples, diagnostics = sample_model(model, k, config.mcmc_config(), release_seed, ledger=ledger)
    if diagnostics.warning:
        logger.warning(f"Sampler diagnostics: {diagnostics.warning}")

    samples_path = DatasetRepository(out_dir).save(samples, SAMPLES_FILE)
    saved_ledger = ledgers.save(ledger, ledger_file)
    return samples_path, saved_ledger


# ==================== eval ====================


def cmd_eval(model_path: Path, config: ExperimentConfig, out_dir: Path, seed: Optional[int] = None) -> List[Path]:
    """NLL, KL, mode coverage와 log-density 격자 기록"""
    seed = config.seed if seed is None else seed
    model = ModelRepository().load(model_path)
    P = load_trained_target(model_path, config)
    if P.dim != model.dim:
        raise InvalidParameterError(f"model dimension {model.dim} differs from the {config.domain} domain")

    n = config.n_eval
    held_out = sample_target(P, n, derive_seed(seed, "eval", "p"))
    nll_est = nll(held_out, model)
    kl_est = kl_from_samples(P, model, held_out)
    n_cov = max(n, MIN_COVERAGE_SAMPLES)
    coverage = mode_coverage(
        P, model, level=config.coverage_level, n=n_cov, seed=derive_seed(seed, "eval", "coverage"),
        mcmc=config.mcmc_config(),
    )
    params = {"model": str(model_path), "eps": model.eps, "T": model.T, "domain": config.domain}
    reports = [
        metric_report("nll", nll_est, n, seed, params),
        metric_report("kl", kl_est, n, seed, params),
        metric_report(
            "mode_coverage", coverage, n_cov, seed,
            {**params, "level": config.coverage_level, "log_threshold": coverage.log_threshold},
        ),
    ]
    logger.info(
        f"Eval: nll={nll_est.value:.6f}±{nll_est.stderr:.2g} kl={kl_est.value:.6f} coverage={coverage.value:.4f}"
    )

    repo = ReportRepository(out_dir)
    points, log_q = log_density_grid(model, P)
    return [
        repo.write_json(reports, METRICS_JSON),
        repo.write_csv(
            ["metric", "value", "stderr", "n", "seed"],
            [[r.metric, r.value, r.stderr, r.n, r.seed] for r in reports],
            METRICS_CSV,
        ),
        repo.write_grid(points, log_q, GRID_FILE),
    ]


# ==================== certify ====================


def _certify(model: MollifiedDensity, config: ExperimentConfig, seed: int) -> Certificate:
    return privacy_certificate(model, certificate_points(model, config.n_eval, derive_seed(seed, "certify")))


def cmd_certify(model_path: Path, config: ExperimentConfig, out_dir: Path, seed: Optional[int] = None) -> Tuple[Certificate, Path]:
    """Q_0 샘플 + 격자 위 privacy certificate"""
    seed = config.seed if seed is None else seed
    model = ModelRepository().load(model_path)
    cert = _certify(model, config, seed)
    record = {
        "model": str(model_path),
        "eps": model.eps,
        "T": model.T,
        "max_abs": cert.max_abs,
        "bound": model.eps / 2.0 + 3.0 * model.phi_stderr,
        "pass": cert.passed,
        "n_eval": config.n_eval,
        "seed": seed,
    }
    path = ReportRepository(out_dir).write_json(record, CERTIFICATE_FILE)
    level = logging.INFO if cert.passed else logging.ERROR
    logger.log(level, f"Certificate {'passed' if cert.passed else 'FAILED'}: max_abs={cert.max_abs:.6g}")
    return cert, path


# ==================== theory ====================


def _closed_form_checks() -> List[TheoryCheck]:
    checks = [
        TheoryCheck(check="gamma_at_one_third", bound=0.0, observed=gamma_fn(1.0 / 3.0),
                    passed=abs(gamma_fn(1.0 / 3.0)) <= 1e-12),
        TheoryCheck(check="gamma_at_one", bound=math.log(2.0), observed=gamma_fn(1.0),
                    passed=abs(gamma_fn(1.0) - math.log(2.0)) <= 1e-12),
        gamma_tangent_check(),
        gamma_linear_claim_check(),
    ]

    grid = [(e, g, T) for e in (0.1, 0.5, 1.0, 2.0, 5.0) for g in (0.0, 0.25, 0.5, 0.75, 1.0) for T in (0, 1, 3, 10)]
    worst = max(lo - up for up, lo in (barrier_bounds(e, g, g, T) for e, g, T in grid))
    checks.append(TheoryCheck(check="barrier_lower_below_upper", inputs={"grid_size": len(grid)},
                              bound=0.0, observed=worst, passed=worst <= 0.0))

    alphas = [i / 10.0 for i in range(11)]
    monotone = all(
        mode_capture_threshold(e, 0.6, 0.5, 3, a1) >= mode_capture_threshold(e, 0.6, 0.5, 3, a2)
        for e in (0.5, 1.0, 5.0) for a1, a2 in zip(alphas, alphas[1:])
    )
    checks.append(TheoryCheck(check="mode_capture_threshold_monotone_alpha", passed=monotone))
    return checks


def _model_checks(P: TargetDensity, model: MollifiedDensity, config: ExperimentConfig, seed: int) -> List[TheoryCheck]:
    n = max(config.n_eval, 1000)
    n_mc = config.n_mc
    checks = [
        certificate_check(model, certificate_points(model, config.n_eval, derive_seed(seed, "certify"))),
        log_partition_range_check(model, n_mc, derive_seed(seed, "phi-range")).model_copy(update={"exact": False}),
    ]

    mcmc = config.mcmc_config()
    for t in range(1, model.T + 1):
        previous = truncate(model, t - 1, n_mc, derive_seed(seed, "phi"))
        q_samples, _ = sample_model(previous, config.n_train, mcmc, derive_seed(seed, t, "hoeffding"))
        check = hoeffding_wla_check(model.classifiers[t - 1], q_samples, model.thetas.values[t - 1])
        checks.append(check.model_copy(update={"inputs": {**check.inputs, "eps": model.eps, "round": t}}))
        identity = kl_drop_identity(P, model, t, n, seed, n_mc=n_mc)
        checks.append(identity.model_copy(update={"inputs": {**identity.inputs, "eps": model.eps}}))

    for row in kl_drop_check(P, model, n, seed, n_mc=n_mc):
        if row.passed_stated is None:
            continue
        common = {"eps": model.eps, "round": row.round_index, "regime": row.regime}
        checks.append(TheoryCheck(
            check="kl_drop_stated", inputs={**common, "lambda": row.lambda_stated},
            bound=row.kl_prev - row.theta_t * row.lambda_stated, observed=row.kl_curr, stderr=row.stderr,
            passed=row.passed_stated, exact=False,
        ))
        checks.append(TheoryCheck(
            check="kl_drop_hoeffding", inputs={**common, "lambda": row.lambda_hoeffding},
            bound=row.kl_prev - row.theta_t * row.lambda_hoeffding, observed=row.kl_curr, stderr=row.stderr,
            passed=row.passed_hoeffding, exact=False,
        ))

    barrier = barrier_check(P, model, n, seed)
    checks.append(TheoryCheck(
        check="barrier", inputs={"eps": model.eps, "T": model.T, "lower": barrier.lower},
        bound=barrier.upper, observed=barrier.delta_observed, stderr=barrier.stderr,
        passed=barrier.passed, exact=False,
    ))
    return checks


def _mode_capture_checks(P: TargetDensity, model: MollifiedDensity, config: ExperimentConfig, seed: int) -> List[TheoryCheck]:
    checks = []
    n = max(config.n_eval, 1000)
    for j, component in enumerate(P.components):
        box = Region.around(component.mean, RING_MODE_HALF_WIDTH)
        report = mode_capture_check(P, model, box, 0.5, n, derive_seed(seed, "mode", j), config.mcmc_config())
        checks.append(TheoryCheck(
            check="mode_capture",
            inputs={"eps": model.eps, "mode": j, "status": report.status, "reason": report.reason,
                    "required_mass": report.required_mass, "mass_p": report.mass_p},
            bound=report.conclusion_rhs, observed=report.mass_q, stderr=report.mass_q_stderr,
            passed=report.status != "fail", exact=False,
        ))
    return checks


def cmd_theory(config: ExperimentConfig, out_dir: Path, model_path: Optional[Path] = None) -> Tuple[TheoryReport, Path]:
    """ε sweep 전체에 대한 이론 검사 리포트"""
    seed = config.seed
    checks: List[TheoryCheck] = _closed_form_checks()
    P = make_target(config, seed)

    for eps in config.eps:
        checks.append(theta_sum_check(eps, config.T))
        checks.append(theta_sum_check(eps, THEORY_LONG_T))

        model = boost(P, config.boost_config(eps, seed))
        checks.extend(_model_checks(P, model, config, seed))

        twin = boost(P, config.boost_config(eps, seed + 1))
        transfer = kl_transfer_check(P, model, twin, max(config.n_eval, 1000), seed)
        checks.append(TheoryCheck(
            check="kl_transfer", inputs={"eps": eps, "kl_a": transfer.kl_a, "kl_b": transfer.kl_b},
            bound=eps, observed=abs(transfer.difference), stderr=transfer.stderr,
            passed=transfer.passed, exact=False,
        ))
        logger.info(f"Theory checks done for eps={eps}")

    if config.domain == "ring" and config.T >= 1:
        eps = max(config.eps)
        checks.extend(_mode_capture_checks(P, boost(P, config.boost_config(eps, seed)), config, seed))

    if model_path is not None:
        supplied = ModelRepository().load(model_path)
        points = certificate_points(supplied, config.n_eval, derive_seed(seed, "certify"))
        checks.append(certificate_check(supplied, points, label="model_certificate"))

    report = TheoryReport(checks=checks)
    path = ReportRepository(out_dir).write_json([c.to_record() for c in report.checks], THEORY_FILE)
    for failure in report.exact_failures:
        logger.error(f"Exact check failed: {failure.check} observed={failure.observed} bound={failure.bound}")
    return report, path
