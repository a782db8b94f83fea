# -*- coding: utf-8 -*-
"""
mbde 명령행 진입점

    mbde [--log-level LEVEL] <train|sample|eval|certify|theory|experiment> [options]

종료 코드: 0 성공, 1 기타 MBDE 오류, 2 설정/파라미터 오류, 3 예산 초과, 4 인증/이론 검사 실패
"""
import argparse
import logging
from pathlib import Path
from typing import List, Optional

from app.cli.commands import cmd_certify, cmd_eval, cmd_sample, cmd_theory, cmd_train
from app.cli.experiment import cmd_experiment
from app.config.experiment_config import ExperimentConfig, load_experiment_config
from app.config.logging_config import setup_logging
from app.config.settings import get_settings
from app.exceptions import BudgetExceededError, ConfigError, InvalidParameterError, MbdeError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_CHECK_FAILED = 4


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="INI 스타일 실험 설정 파일")
    parser.add_argument("--seed", type=int, help="기준 시드 (설정 파일 값을 덮어씀)")
    parser.add_argument("--out", type=str, help="출력 디렉토리")
    parser.add_argument(
        "--paper-scale", "--full-scale", dest="full_scale", action="store_true", help="n_train=10000, epochs=750, n_eval=100000")
    parser.add_argument("--domain", choices=["ring", "mix1d", "random1d", "random2d", "normal1d"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mbde", description="Mollified boosted density estimation")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING, ERROR (기본: MBDE_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="모델 학습")
    _common(train)
    train.add_argument("--eps", type=float, help="프라이버시 파라미터 (기본: 설정의 첫 eps)")

    sample = sub.add_parser("sample", help="모델에서 샘플 공개")
    _common(sample)
    sample.add_argument("--model", type=Path, required=True)
    sample.add_argument("-k", "--k", type=int, required=True, help="공개할 샘플 수")
    sample.add_argument("--eps-total", type=float, help="총 예산 (초과 시 거부)")
    sample.add_argument("--ledger", type=Path, help="ledger 파일 (기본: <out>/ledger.json)")

    evaluate = sub.add_parser("eval", help="NLL / KL / mode coverage / 밀도 격자")
    _common(evaluate)
    evaluate.add_argument("--model", type=Path, required=True)

    certify = sub.add_parser("certify", help="privacy certificate")
    _common(certify)
    certify.add_argument("--model", type=Path, required=True)

    theory = sub.add_parser("theory", help="이론 검사 리포트")
    _common(theory)
    theory.add_argument("--model", type=Path, help="추가로 인증할 모델")

    experiment = sub.add_parser("experiment", help="ε × repeat sweep")
    _common(experiment)
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """설정 파일 → 환경(full_scale, output_dir) → CLI 플래그 순으로 덮어쓴다"""
    settings = get_settings()
    config = load_experiment_config(args.config)
    out = args.out or (config.out if "out" in config.model_fields_set else settings.output_dir)
    config = config.with_overrides(seed=args.seed, domain=args.domain, out=out)
    if args.full_scale or settings.full_scale:
        config = config.full_scaled()
    return config


def _dispatch(args: argparse.Namespace, config: ExperimentConfig) -> int:
    out = Path(config.out)
    if args.command == "train":
        path, cert = cmd_train(config, out, eps=args.eps)
        logger.info(f"Model written to {path}")
        if not cert.passed:
            return EXIT_CHECK_FAILED
    elif args.command == "sample":
        samples, ledger = cmd_sample(args.model, args.k, out, config, args.eps_total, config.seed, args.ledger)
        logger.info(f"Samples written to {samples}, ledger to {ledger}")
    elif args.command == "eval":
        for path in cmd_eval(args.model, config, out):
            logger.info(f"Wrote {path}")
    elif args.command == "certify":
        cert, _ = cmd_certify(args.model, config, out)
        if not cert.passed:
            return EXIT_CHECK_FAILED
    elif args.command == "theory":
        report, path = cmd_theory(config, out, args.model)
        logger.info(f"Theory report written to {path} ({len(report.checks)} checks)")
        if report.exact_failures:
            return EXIT_CHECK_FAILED
    elif args.command == "experiment":
        sweep, summary = cmd_experiment(config, out)
        logger.info(f"Sweep written to {sweep}, summary to {summary}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level or get_settings().log_level)

    try:
        config = resolve_config(args)
        return _dispatch(args, config)
    except (ConfigError, InvalidParameterError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_CONFIG
    except BudgetExceededError as e:
        logger.error(f"{args.command}: refused, required {e.required!r} > available {e.available!r}")
        return EXIT_BUDGET
    except MbdeError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_ERROR
    except OSError as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_ERROR
