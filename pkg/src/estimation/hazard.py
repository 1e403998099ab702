"""
平滑化生存関数とハザード推定

Ĥ(x) = f̂(x) / max(Ŝ̃(x), ε_S)。Ŝ̃ はKM階段関数をガウス重みで局所定数平滑化したもの。
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import norm
from sklearn.isotonic import IsotonicRegression

from config.settings import HAZARD_SETTINGS
from src.bandwidth.ecf import select_bandwidth
from src.estimation.density import default_grid, density
from src.estimation.grid import HAZARD, REFLECTED, SURVIVAL_SMOOTHED, EstimateGrid
from src.kernels.base_kernel import BaseKernel
from src.survival.kaplan_meier import CensoredSample
from src.utils.errors import EstimationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HazardConfig:
    """ハザード推定の設定"""

    survival_bandwidth: Optional[float] = None
    survival_floor: float = HAZARD_SETTINGS["survival_floor"]

    def __post_init__(self):
        if not 0.0 < self.survival_floor < 0.5:
            raise EstimationError("survival_floor must lie in (0, 0.5)")
        if self.survival_bandwidth is not None and not self.survival_bandwidth > 0:
            raise EstimationError("invalid bandwidth")


def _smoothing_bandwidth(sample: CensoredSample, config: HazardConfig) -> float:
    if config.survival_bandwidth is not None:
        return float(config.survival_bandwidth)
    # 既定は ECF で選んだ ĥ
    return select_bandwidth(sample)[1]


def smoothed_survival(
    sample: CensoredSample,
    config: Optional[HazardConfig] = None,
    x_grid: Optional[np.ndarray] = None,
    reflected: bool = False,
) -> EstimateGrid:
    """
    KM階段関数のガウス局所定数平滑化 Ŝ̃

    Ŝ(u) = 1 - Σ s_j 1[u > X_j] を正規核で畳み込むと Ŝ̃(x) = Σ s_j Φ((X_j - x)/b)。
    reflected=True なら分布関数を 0 について奇関数拡張してから平滑化し、Ŝ̃(0) = 1 となる。

    Args:
        sample: CensoredSample
        config: ハザード設定（survival_bandwidth を使用）
        x_grid: 昇順の評価点
        reflected: 0 を境界とする補正の有無

    Returns:
        [0, 1] 値で非増加の EstimateGrid
    """
    config = config or HazardConfig()
    b = _smoothing_bandwidth(sample, config)
    if x_grid is None:
        x_grid = default_grid(sample, b, nonnegative=reflected)
    x = np.asarray(x_grid, dtype=float)

    u = (x[:, None] - sample.times[None, :]) / b
    if reflected:
        v = (-x[:, None] - sample.times[None, :]) / b
        cdf = (sample.weights * (norm.cdf(u) - norm.cdf(v))).sum(axis=1)
        values = 1.0 - cdf
    else:
        values = (sample.weights * norm.cdf(-u)).sum(axis=1)
    values = np.clip(values, 0.0, 1.0)

    if len(x) > 1:
        values = IsotonicRegression(increasing=False, y_min=0.0, y_max=1.0).fit_transform(
            x, values
        )

    return EstimateGrid(
        x=x,
        value=values,
        bandwidth=b,
        kind=SURVIVAL_SMOOTHED,
        corrections=frozenset([REFLECTED]) if reflected else frozenset(),
    )


def hazard_ratio(
    density_values: np.ndarray, survival_values: np.ndarray, survival_floor: float
) -> np.ndarray:
    """
    f̂ / max(Ŝ̃, ε_S)

    Args:
        density_values: 密度推定値
        survival_values: 平滑化生存関数の値
        survival_floor: 分母の下限

    Returns:
        ハザード推定値
    """
    denominator = np.maximum(np.asarray(survival_values, dtype=float), survival_floor)
    return np.asarray(density_values, dtype=float) / denominator


def hazard(
    sample: CensoredSample,
    kernel: BaseKernel,
    h: float,
    config: Optional[HazardConfig] = None,
    x_grid: Optional[np.ndarray] = None,
    reflected: bool = False,
) -> EstimateGrid:
    """
    ハザード関数 Ĥ(x) = f̂(x) / max(Ŝ̃(x), ε_S)

    Args:
        sample: CensoredSample
        kernel: 密度推定用カーネル
        h: 密度の帯域幅
        config: ハザード設定（survival_bandwidth 省略時は h を使う）
        x_grid: 評価点
        reflected: 密度と生存関数の両方に 0 での反射補正を適用

    Returns:
        EstimateGrid
    """
    config = config or HazardConfig()
    if config.survival_bandwidth is None:
        config = HazardConfig(survival_bandwidth=h, survival_floor=config.survival_floor)

    f_grid = density(sample, kernel, h, x_grid, reflected=reflected)
    s_grid = smoothed_survival(sample, config, f_grid.x, reflected=reflected)

    clamped = int(np.sum(s_grid.value < config.survival_floor))
    if clamped:
        logger.debug("%d 点で生存関数を下限 %.3g に切り上げました", clamped, config.survival_floor)

    return f_grid.with_values(
        hazard_ratio(f_grid.value, s_grid.value, config.survival_floor),
        kind=HAZARD,
    )
