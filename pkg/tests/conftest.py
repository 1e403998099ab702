"""
共通フィクスチャ
"""
import numpy as np
import pytest

from src.survival.io import write_records
from src.survival.kaplan_meier import ingest

# 手計算できる3点サンプル: Ŝ = 1, 2/3, 2/3, 0
HAND_RECORDS = [(1.0, True), (2.0, False), (3.0, True)]


def normal_records(seed: int, n: int, censored: bool = True, loc: float = 0.0):
    """
    N(loc, 1) 寿命と N(loc, 1) 打ち切りから観測を生成

    Args:
        seed: 乱数シード
        n: サンプルサイズ
        censored: 打ち切りの有無
        loc: 位置

    Returns:
        (time, event) のリスト
    """
    rng = np.random.default_rng(seed)
    lifetimes = rng.normal(loc, 1.0, size=n)
    if not censored:
        return [(float(t), True) for t in lifetimes]
    censor_times = rng.normal(loc, 1.0, size=n)
    return [
        (float(min(t, c)), bool(t <= c)) for t, c in zip(lifetimes, censor_times)
    ]


def exponential_records(seed: int, n: int):
    """指数(平均1)寿命と指数(平均4)打ち切り"""
    rng = np.random.default_rng(seed)
    lifetimes = rng.exponential(1.0, size=n)
    censor_times = rng.exponential(4.0, size=n)
    return [
        (float(min(t, c)), bool(t <= c)) for t, c in zip(lifetimes, censor_times)
    ]


@pytest.fixture
def hand_sample():
    return ingest(HAND_RECORDS)


@pytest.fixture
def uncensored_sample():
    return ingest(normal_records(seed=1, n=200, censored=False))


@pytest.fixture
def censored_sample():
    return ingest(normal_records(seed=2, n=200))


@pytest.fixture
def exponential_sample():
    return ingest(exponential_records(seed=3, n=300))


@pytest.fixture
def censored_csv(tmp_path):
    path = tmp_path / "data.csv"
    write_records(normal_records(seed=4, n=80), path)
    return path


@pytest.fixture
def exponential_csv(tmp_path):
    path = tmp_path / "exp.csv"
    write_records(exponential_records(seed=5, n=150), path)
    return path
