"""
汎用ヘルパー関数
"""
from typing import Sequence

import numpy as np

from config.settings import SIMULATION_SETTINGS


def scale_mse(mse: float, scale: float = SIMULATION_SETTINGS["mse_scale"]) -> float:
    """
    MSEを報告用の単位（10^3倍）に変換

    Args:
        mse: 平均二乗誤差
        scale: 倍率

    Returns:
        拡大済みMSE
    """
    return float(mse) * scale


def weighted_percentile(
    values: Sequence[float], weights: Sequence[float], q: float
) -> float:
    """
    重み付きパーセンタイルを計算（重みの累積分布の逆関数）

    Args:
        values: 昇順の値
        weights: 非負の重み
        q: パーセント（0〜100）

    Returns:
        パーセンタイル値
    """
    values = np.asarray(values, dtype=float)
    cumulative = np.cumsum(np.asarray(weights, dtype=float))
    total = cumulative[-1]
    idx = int(np.searchsorted(cumulative, total * q / 100.0, side="left"))
    return float(values[min(idx, len(values) - 1)])


def weighted_std(values: Sequence[float], weights: Sequence[float]) -> float:
    """
    重み付き標準偏差

    Args:
        values: 値
        weights: 合計1の重み

    Returns:
        標準偏差
    """
    values = np.asarray(values, dtype=float)
    weights = np.asarray(weights, dtype=float)
    mean = np.sum(weights * values)
    return float(np.sqrt(np.sum(weights * (values - mean) ** 2)))
