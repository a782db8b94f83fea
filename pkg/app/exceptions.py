# -*- coding: utf-8 -*-
"""
MBDE 예외 정의

모든 도메인 예외는 MbdeError를 상속하고, 의미상 가까운 내장 예외(ValueError, RuntimeError)도 함께 상속한다.
CLI는 이 계층을 보고 종료 코드를 결정한다.
"""
from typing import Optional


class MbdeError(Exception):
    """MBDE 최상위 예외"""


class InvalidParameterError(MbdeError, ValueError):
    """잘못된 파라미터 (음수 분산, eps <= 0 등)"""


class DimensionMismatchError(InvalidParameterError):
    """점/데이터셋 차원이 밀도의 차원과 다름"""

    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"Dimension mismatch: expected {expected}, got {actual}")


class MollifierError(InvalidParameterError):
    """mollify 입력 지지집합의 측도가 1이 아님"""


class TrainingError(MbdeError, RuntimeError):
    """분류기 학습 발산 (loss가 NaN/inf)"""

    def __init__(self, message: str, epoch: int, round_index: Optional[int] = None):
        self.epoch = epoch
        self.round_index = round_index
        prefix = f"[round {round_index}] " if round_index is not None else ""
        super().__init__(f"{prefix}{message} (epoch {epoch})")


class DegenerateClassifierError(MbdeError, ValueError):
    """평가 지점 전체에서 분류기 출력이 0"""


class SamplerError(MbdeError, RuntimeError):
    """MH 샘플러 실패"""


class SamplerDiagnosticsError(SamplerError):
    """부스팅 중 MH acceptance rate가 허용치 미만"""

    def __init__(self, acceptance_rate: float, round_index: Optional[int] = None):
        self.acceptance_rate = acceptance_rate
        self.round_index = round_index
        super().__init__(
            f"MH acceptance rate {acceptance_rate:.4f} below 0.01"
            + (f" in round {round_index}" if round_index is not None else "")
        )


class NoGuaranteeError(MbdeError, ValueError):
    """WLA가 깨진 라운드에는 KL 감소 보장이 없음"""


class TheoryDomainError(InvalidParameterError):
    """이론 함수의 정의역 밖 입력"""


class BudgetExceededError(MbdeError):
    """프라이버시 예산 초과"""

    def __init__(self, required: float, available: float):
        self.required = required
        self.available = available
        super().__init__(
            f"Privacy budget exceeded: required {required!r}, available {available!r}"
        )


class ConfigError(MbdeError, ValueError):
    """설정 파일 파싱/검증 실패"""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        location = ""
        if field is not None:
            location += f"field '{field}'"
        if line is not None:
            location += f" (line {line})" if location else f"line {line}"
        super().__init__(f"{location}: {message}" if location else message)
