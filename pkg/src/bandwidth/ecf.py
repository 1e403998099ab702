"""
経験特性関数による帯域幅選択

φ̂(t) = Σ s_j e^{itX_j} が閾値 C√(log₁₀n / n) を下回り続ける最小の t* を探し、ĥ = 1/t* とする。
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from config.settings import BANDWIDTH_SETTINGS
from src.survival.kaplan_meier import CensoredSample
from src.utils.errors import BandwidthError
from src.utils.helpers import weighted_std

logger = logging.getLogger(__name__)

# 位相行列1チャンクあたりの最大要素数
_CHUNK_ELEMENTS = 2_000_000


def default_window(n: int) -> float:
    """
    ε_n = max(1, √log₁₀n)（非減少で発散し o(log n)）

    Args:
        n: サンプルサイズ

    Returns:
        窓幅
    """
    return max(1.0, math.sqrt(math.log10(n)))


@dataclass(frozen=True)
class BandwidthConfig:
    """
    帯域幅選択の設定

    t_step を省略すると t_step = t_step_factor / σ̂（σ̂ は s_j 重み付き標準偏差）とし、
    窓幅 ε_n も 1/σ̂ 単位で測る。t_step を明示した場合 ε_n は t の絶対単位。
    """

    C: float = BANDWIDTH_SETTINGS["C"]
    window_rule: Callable[[int], float] = field(default=default_window)
    t_step: Optional[float] = None
    t_max: Optional[float] = None
    grid_points: int = BANDWIDTH_SETTINGS["grid_points"]
    t_step_factor: float = BANDWIDTH_SETTINGS["t_step_factor"]
    flat_top_radius: float = 0.0

    def __post_init__(self):
        if not self.C > 0:
            raise BandwidthError("threshold constant C must be positive")
        if self.t_step is not None and not self.t_step > 0:
            raise BandwidthError("t_step must be positive")
        if self.t_max is not None and self.t_step is not None and not self.t_max > self.t_step:
            raise BandwidthError("t_max must exceed t_step")
        if self.grid_points < 2:
            raise BandwidthError("grid_points must be at least 2")
        if self.flat_top_radius < 0:
            raise BandwidthError("flat_top_radius must be nonnegative")


@dataclass(frozen=True)
class EcfCurve:
    """|φ̂(t)| のグリッドと選択結果"""

    t_grid: np.ndarray
    magnitude: np.ndarray
    threshold: float
    t_star: float
    bandwidth: float
    window: float
    ceiling_hit: bool = False

    def summary(self) -> dict:
        """
        JSON要約を作成

        Returns:
            t_star, bandwidth, ceiling_hit を含む辞書
        """
        return {
            "t_star": self.t_star,
            "bandwidth": self.bandwidth,
            "threshold": self.threshold,
            "ceiling_hit": self.ceiling_hit,
        }


def ecf(sample: CensoredSample, t):
    """
    経験特性関数 φ̂(t) = Σ s_j e^{itX_j}

    Args:
        sample: CensoredSample
        t: 周波数（スカラーまたは配列）

    Returns:
        複素数値
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    values = np.empty(t_arr.shape, dtype=complex)
    rows = max(1, _CHUNK_ELEMENTS // max(sample.n, 1))
    for start in range(0, len(t_arr), rows):
        phase = np.outer(t_arr[start : start + rows], sample.times)
        real = (np.cos(phase) * sample.weights).sum(axis=1)
        imag = (np.sin(phase) * sample.weights).sum(axis=1)
        values[start : start + rows] = real + 1j * imag
    if np.ndim(t) == 0:
        return complex(values[0])
    return values


def ecf_magnitude(sample: CensoredSample, t_grid: np.ndarray) -> np.ndarray:
    """
    |φ̂(t)| をグリッド上で評価

    Args:
        sample: CensoredSample
        t_grid: 周波数グリッド

    Returns:
        絶対値の配列
    """
    return np.abs(ecf(sample, np.asarray(t_grid, dtype=float)))


def ecf_threshold(n: int, C: float = BANDWIDTH_SETTINGS["C"]) -> float:
    """
    閾値 C√(log₁₀n / n)

    Args:
        n: サンプルサイズ
        C: 閾値定数

    Returns:
        閾値
    """
    return C * math.sqrt(math.log10(n) / n)


def find_t_star(
    t_grid: np.ndarray, magnitude: np.ndarray, threshold: float, window: float
) -> Tuple[float, bool]:
    """
    (t*, t* + window] のすべてのグリッド点で magnitude < threshold となる最小のグリッド値 t*

    窓に含まれる点が無い場合は直後の1点で判定する。

    Args:
        t_grid: 昇順のグリッド（先頭は0）
        magnitude: 各点の |φ̂|
        threshold: 閾値
        window: 窓幅 ε

    Returns:
        (t*, 探索上限に達したか)
    """
    t_grid = np.asarray(t_grid, dtype=float)
    below = np.asarray(magnitude, dtype=float) < threshold
    last = len(t_grid) - 1
    counts = np.concatenate([[0], np.cumsum(below)])

    ends = np.searchsorted(t_grid, t_grid + window * (1.0 + 1e-12), side="right") - 1
    k = np.arange(len(t_grid))
    ends = np.maximum(ends, k + 1)
    inside = (t_grid + window <= t_grid[-1] * (1.0 + 1e-12)) & (ends <= last)
    ends = np.minimum(ends, last)
    satisfied = inside & (counts[ends + 1] - counts[k + 1] == ends - k)

    hits = np.flatnonzero(satisfied)
    if len(hits) == 0:
        logger.warning("探索上限 t_max=%.6g に達しました", t_grid[-1])
        return float(t_grid[-1]), True

    t_star = float(t_grid[hits[0]])
    if t_star <= 0.0:
        # t = 0 直後から閾値を下回る。1刻み分を下限とする
        t_star = float(t_grid[1])
    return t_star, False


def _grid_for(sample: CensoredSample, config: BandwidthConfig) -> Tuple[np.ndarray, float]:
    sigma = weighted_std(sample.times, sample.weights)
    if config.t_step is None:
        if sigma <= 0.0:
            logger.warning("重み付き標準偏差が0のため σ̂=1 とします")
            sigma = 1.0
        t_step = config.t_step_factor / sigma
        unit = 1.0 / sigma
    else:
        t_step = config.t_step
        unit = 1.0

    t_max = config.t_max if config.t_max is not None else config.grid_points * t_step
    count = int(round(t_max / t_step))
    t_grid = t_step * np.arange(count + 1, dtype=float)
    return t_grid, config.window_rule(sample.n) * unit


def select_bandwidth(
    sample: CensoredSample, config: Optional[BandwidthConfig] = None
) -> Tuple[float, float, EcfCurve]:
    """
    経験特性関数から t* と ĥ を選ぶ

    Args:
        sample: CensoredSample（n ≥ 2）
        config: 帯域幅設定

    Returns:
        (t*, ĥ, EcfCurve)
    """
    config = config or BandwidthConfig()
    if sample.n < 2:
        raise BandwidthError("bandwidth selection needs n >= 2")

    t_grid, window = _grid_for(sample, config)
    magnitude = ecf_magnitude(sample, t_grid)
    threshold = ecf_threshold(sample.n, config.C)

    t_star, ceiling_hit = find_t_star(t_grid, magnitude, threshold, window)
    bandwidth = (1.0 + config.flat_top_radius) / t_star

    logger.debug("t*=%.6g, ĥ=%.6g (n=%d, 閾値=%.4g)", t_star, bandwidth, sample.n, threshold)
    curve = EcfCurve(
        t_grid=t_grid,
        magnitude=magnitude,
        threshold=threshold,
        t_star=t_star,
        bandwidth=bandwidth,
        window=window,
        ceiling_hit=ceiling_hit,
    )
    return t_star, bandwidth, curve


def pilot_bandwidth(sample: CensoredSample, config: Optional[BandwidthConfig] = None) -> float:
    """
    パイロット推定（f̂, f̂₂）用の帯域幅。select_bandwidth の ĥ と同じ

    Args:
        sample: CensoredSample
        config: 帯域幅設定

    Returns:
        ĥ
    """
    return select_bandwidth(sample, config)[1]
