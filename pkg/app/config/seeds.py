"""
시드 파생 - 하나의 기준 시드에서 용도별 독립 스트림

같은 (seed, keys)는 항상 같은 정수 시드를 돌려주므로, 실행 순서나 스레드 수와 무관하게 결과가 재현된다.
"""
import zlib
from typing import Union

import numpy as np

Key = Union[int, str]


def _key_entropy(key: Key) -> int:
    if isinstance(key, str):
        return zlib.crc32(key.encode("utf-8"))
    if key < 0:
        raise ValueError(f"seed keys must be nonnegative, got {key}")
    return key


def derive_seed(seed: int, *keys: Key) -> int:
    """(seed, keys...) → 32-bit 정수 시드"""
    entropy = [seed, *(_key_entropy(k) for k in keys)]
    return int(np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint32)[0])
