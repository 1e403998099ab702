"""
カプラン・マイヤー（積極限）推定

観測 (Z_i, Δ_i) を時刻順に並べ替え、生存関数 Ŝ とそのジャンプ高 s_j を計算する。
同時刻の観測はイベントを打ち切りより前に置く。
最大の観測値は δ_n に関わらず Ŝ(X_n) をジャンプとして持つため、Σ s_j = 1 となる。
"""
import math
from dataclasses import dataclass
from typing import Iterable, Tuple, Union

import numpy as np

from src.utils.errors import SampleError

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class CensoredObservation:
    """打ち切りを含む1件の観測"""

    time: float
    event: bool

    def __post_init__(self):
        if not math.isfinite(float(self.time)):
            raise SampleError("invalid observation")


@dataclass(frozen=True)
class CensoredSample:
    """時刻順に並べた観測とKMジャンプ高"""

    times: np.ndarray
    events: np.ndarray
    weights: np.ndarray

    @property
    def n(self) -> int:
        return len(self.times)

    @property
    def censoring_fraction(self) -> float:
        return float(1.0 - np.mean(self.events))

    @property
    def is_uncensored(self) -> bool:
        return bool(np.all(self.events))

    def records(self) -> list:
        """
        (time, event) のリストに戻す

        Returns:
            観測のリスト
        """
        return [(float(t), bool(d)) for t, d in zip(self.times, self.events)]


@dataclass(frozen=True)
class SurvivalCurve:
    """
    区分定数の生存関数

    levels[k] は区間 (X_k, X_{k+1}]（0始まり、X_0 = -∞）上の値で levels[0] = 1。
    X_n より右では 0。
    """

    knots: np.ndarray
    levels: np.ndarray


def _sort_order(times: np.ndarray, events: np.ndarray) -> np.ndarray:
    # 主キー: 時刻、副キー: イベントが先
    return np.lexsort((~events, times))


def ingest(records: Iterable[Tuple[float, bool]]) -> CensoredSample:
    """
    観測を取り込み、並べ替えてKM重みを計算

    Args:
        records: (time, event) の列

    Returns:
        CensoredSample
    """
    observations = [CensoredObservation(float(t), bool(d)) for t, d in records]
    if not observations:
        raise SampleError("empty sample")

    times = np.array([o.time for o in observations], dtype=float)
    events = np.array([o.event for o in observations], dtype=bool)

    order = _sort_order(times, events)
    times = times[order]
    events = events[order]

    weights = km_weights(times, events)
    for arr in (times, events, weights):
        arr.setflags(write=False)
    return CensoredSample(times=times, events=events, weights=weights)


def _survival_levels(events: np.ndarray) -> np.ndarray:
    """
    各 X_j における Ŝ(X_j) = Π_{i<j} ((n-i)/(n-i+1))^{δ_i}

    Args:
        events: 並べ替え済みのイベント指標

    Returns:
        長さ n の配列（先頭は1）
    """
    n = len(events)
    j = np.arange(1, n + 1, dtype=float)
    factors = np.where(events, (n - j) / (n - j + 1), 1.0)
    levels = np.empty(n, dtype=float)
    levels[0] = 1.0
    levels[1:] = np.cumprod(factors[:-1])
    return levels


def km_weights(times: np.ndarray, events: np.ndarray) -> np.ndarray:
    """
    KMのジャンプ高 s_1..s_n を計算

    Args:
        times: 昇順の観測時刻
        events: 対応するイベント指標

    Returns:
        ジャンプ高の配列
    """
    events = np.asarray(events, dtype=bool)
    if len(events) != len(times):
        raise SampleError("times and events differ in length")
    n = len(events)
    levels = _survival_levels(events)
    j = np.arange(1, n + 1, dtype=float)
    # s_j = Ŝ(X_j) * (1 - 因子_j)。打ち切りなら厳密に0
    weights = np.where(events, levels / (n - j + 1), 0.0)
    weights[-1] = levels[-1]
    return weights


def survival_curve(sample: CensoredSample) -> SurvivalCurve:
    """
    サンプルからKM生存曲線を作成

    Args:
        sample: CensoredSample

    Returns:
        SurvivalCurve
    """
    return SurvivalCurve(knots=sample.times, levels=_survival_levels(sample.events))


def survival_eval(curve: SurvivalCurve, t: ArrayLike) -> ArrayLike:
    """
    区分定義どおりに Ŝ(t) を評価

    Args:
        curve: SurvivalCurve
        t: 評価点（スカラーまたは配列）

    Returns:
        生存確率
    """
    k = np.searchsorted(curve.knots, np.asarray(t, dtype=float), side="left")
    values = np.append(curve.levels, 0.0)[k]
    if np.ndim(t) == 0:
        return float(values)
    return values


def flip_indicators(sample: CensoredSample) -> CensoredSample:
    """
    打ち切り指標を反転したサンプル（打ち切り分布用）

    Args:
        sample: CensoredSample

    Returns:
        指標反転後の CensoredSample
    """
    return ingest((t, not d) for t, d in sample.records())


def censoring_km(sample: CensoredSample) -> SurvivalCurve:
    """
    打ち切り分布の生存関数 1-Ĝ を推定

    Args:
        sample: CensoredSample

    Returns:
        1-Ĝ の SurvivalCurve
    """
    return survival_curve(flip_indicators(sample))
