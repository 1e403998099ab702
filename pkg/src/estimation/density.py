"""
カーネル密度推定量と導関数推定量

f̂(x)   = (1/h) Σ s_j K((x - X_j)/h)
f̂_p(x) = (1/h^{p+1}) Σ s_j K^{(p)}((x - X_j)/h)
"""
import logging
from typing import Optional

import numpy as np

from config.settings import ESTIMATION_SETTINGS
from src.estimation.corrections import reflect
from src.estimation.grid import EstimateGrid, derivative_kind
from src.estimation.summation import check_bandwidth, kernel_sum
from src.kernels.base_kernel import BaseKernel
from src.survival.kaplan_meier import CensoredSample
from src.utils.errors import EstimationError

logger = logging.getLogger(__name__)


def default_grid(
    sample: CensoredSample,
    h: float,
    count: int = ESTIMATION_SETTINGS["grid_count"],
    padding: float = ESTIMATION_SETTINGS["grid_padding"],
    nonnegative: bool = False,
) -> np.ndarray:
    """
    既定の評価グリッド [X_1 - 3h, X_n + 3h]

    Args:
        sample: CensoredSample
        h: 帯域幅
        count: 点数
        padding: 両端の余白（h単位）
        nonnegative: True なら左端を0で打ち切る

    Returns:
        等間隔グリッド
    """
    lo = sample.times[0] - padding * h
    hi = sample.times[-1] + padding * h
    if nonnegative:
        lo = max(lo, 0.0)
        hi = max(hi, lo + padding * h)
    return np.linspace(lo, hi, count)


def _evaluate(
    sample: CensoredSample,
    kernel: BaseKernel,
    h: float,
    x_grid: Optional[np.ndarray],
    p: int,
    reflected: bool,
) -> EstimateGrid:
    h = check_bandwidth(h)
    if x_grid is None:
        x_grid = default_grid(sample, h, nonnegative=reflected)
    x_grid = np.asarray(x_grid, dtype=float)

    if reflected:
        if sample.times[0] < 0:
            logger.warning("負の観測値がありますが、0 での反射補正を適用します")
        positive = x_grid[x_grid >= 0]
        if len(positive) == 0:
            raise EstimationError("reflection needs evaluation points x >= 0")
        x_eval = np.unique(np.concatenate([-positive, positive]))
    else:
        x_eval = x_grid

    grid = EstimateGrid(
        x=x_eval,
        value=kernel_sum(sample, kernel, h, x_eval, p),
        bandwidth=h,
        kind=derivative_kind(p),
        kernel=kernel.describe(),
    )
    if reflected:
        grid = reflect(grid)
    return grid


def density(
    sample: CensoredSample,
    kernel: BaseKernel,
    h: float,
    x_grid: Optional[np.ndarray] = None,
    reflected: bool = False,
) -> EstimateGrid:
    """
    密度推定量 f̂ を評価

    負の値はそのまま残す（切り捨ては truncate_renormalize で行う）。

    Args:
        sample: CensoredSample
        kernel: カーネル
        h: 帯域幅（正）
        x_grid: 評価点（省略時は既定グリッド）
        reflected: True なら x ≥ 0 上で f̂(x) + f̂(-x) を返す

    Returns:
        EstimateGrid
    """
    return _evaluate(sample, kernel, h, x_grid, 0, reflected)


def density_derivative(
    sample: CensoredSample,
    kernel: BaseKernel,
    h: float,
    p: int,
    x_grid: Optional[np.ndarray] = None,
    reflected: bool = False,
) -> EstimateGrid:
    """
    p階導関数の推定量 f̂_p を評価

    Args:
        sample: CensoredSample
        kernel: カーネル
        h: 帯域幅（密度と同じ ĥ を使う）
        p: 階数（1 または 2）
        x_grid: 評価点
        reflected: 反射補正の有無

    Returns:
        EstimateGrid
    """
    if p not in (1, 2):
        raise EstimationError("derivative order not implemented")
    return _evaluate(sample, kernel, h, x_grid, p, reflected)
