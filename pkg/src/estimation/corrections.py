"""
推定後の補正（境界の反射、負値の切り捨てと再正規化）
"""
from typing import Optional

import numpy as np

from src.estimation.grid import (
    DENSITY,
    REFLECTED,
    TRUNCATED_RENORMALIZED,
    EstimateGrid,
    grid_mass,
)
from src.estimation.summation import density_mass
from src.kernels.base_kernel import BaseKernel
from src.survival.kaplan_meier import CensoredSample
from src.utils.errors import EstimationError


def reflect(grid: EstimateGrid) -> EstimateGrid:
    """
    0 での反射: x ≥ 0 上の値を f̂(x) + f̂(-x) に置き換える

    p階導関数のグリッドでは f̂(x) + f̂(-x) の導関数、すなわち
    value(x) + (-1)^p value(-x) を返す。-x がグリッドに無い場合は線形補間。

    Args:
        grid: 密度または導関数のグリッド（x の範囲が 0 について対称）

    Returns:
        x ≥ 0 上の EstimateGrid
    """
    p = grid.derivative_order
    if p is None:
        raise EstimationError("reflection applies to density")
    if REFLECTED in grid.corrections:
        raise EstimationError("estimate is already reflected")

    keep = grid.x >= 0
    x = grid.x[keep]
    if len(x) == 0 or -x[-1] < grid.x[0] - 1e-9 * max(1.0, abs(grid.x[0])):
        raise EstimationError("evaluation grid is not symmetric about 0")

    mirrored = np.interp(-x, grid.x, grid.value)
    value = grid.value[keep] + (-1) ** p * mirrored
    return grid.with_values(value, x=x, flags=[REFLECTED])


def truncate_renormalize(
    grid: EstimateGrid,
    sample: Optional[CensoredSample] = None,
    kernel: Optional[BaseKernel] = None,
) -> EstimateGrid:
    """
    負値を0に切り捨て、切り捨て後の質量で割って積分1に戻す

    sample と kernel を渡すと、質量は評価グリッドではなくデータ範囲を
    padding·h だけ広げたグリッド上で計算する（評価グリッドが台を覆わなくてもよい）。
    省略時は評価グリッド上のシンプソン則を使う。

    Args:
        grid: 密度グリッド
        sample: 推定に使ったサンプル
        kernel: 推定に使ったカーネル

    Returns:
        非負で質量1の EstimateGrid
    """
    if grid.kind != DENSITY:
        raise EstimationError("truncation applies to density")
    if TRUNCATED_RENORMALIZED in grid.corrections:
        return grid
    if (sample is None) != (kernel is None):
        raise EstimationError("sample and kernel must be given together")

    clipped = np.clip(grid.value, 0.0, None)
    if sample is None:
        mass = grid_mass(grid.x, clipped)
    else:
        mass = density_mass(
            sample,
            kernel,
            grid.bandwidth,
            clip_negative=True,
            reflected=REFLECTED in grid.corrections,
        )
    if not mass > 0:
        raise EstimationError("degenerate estimate")
    return grid.with_values(clipped / mass, flags=[TRUNCATED_RENORMALIZED])
