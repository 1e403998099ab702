"""
KM重み付きカーネル和と、データ範囲を広げたグリッド上の質量
"""
import math

import numpy as np

from config.settings import ESTIMATION_SETTINGS
from src.estimation.grid import grid_mass
from src.kernels.base_kernel import BaseKernel
from src.survival.kaplan_meier import CensoredSample
from src.utils.errors import EstimationError

_CHUNK_ELEMENTS = 2_000_000


def check_bandwidth(h: float) -> float:
    h = float(h)
    if not (h > 0 and math.isfinite(h)):
        raise EstimationError("invalid bandwidth")
    return h


def kernel_sum(
    sample: CensoredSample,
    kernel: BaseKernel,
    h: float,
    x_grid: np.ndarray,
    p: int = 0,
) -> np.ndarray:
    """
    (1/h^{p+1}) Σ s_j K^{(p)}((x - X_j)/h) を各点で計算

    各点の和は重み0の原子を除いた固定順で取る。

    Args:
        sample: CensoredSample
        kernel: カーネル
        h: 帯域幅
        x_grid: 評価点
        p: 導関数の階数（0 は密度）

    Returns:
        推定値の配列
    """
    h = check_bandwidth(h)
    x_grid = np.asarray(x_grid, dtype=float)
    active = sample.weights > 0
    atoms = sample.times[active]
    weights = sample.weights[active]

    values = np.empty(len(x_grid), dtype=float)
    rows = max(1, _CHUNK_ELEMENTS // max(len(atoms), 1))
    for start in range(0, len(x_grid), rows):
        u = (x_grid[start : start + rows, None] - atoms[None, :]) / h
        values[start : start + rows] = (kernel.derivative(u, p) * weights).sum(axis=1)
    return values / h ** (p + 1)


def density_mass(
    sample: CensoredSample,
    kernel: BaseKernel,
    h: float,
    padding: float = ESTIMATION_SETTINGS["mass_padding"],
    step: float = ESTIMATION_SETTINGS["mass_step"],
    clip_negative: bool = False,
    reflected: bool = False,
) -> float:
    """
    ∫f̂ を拡張グリッド上のシンプソン則で計算

    グリッドは [X_1 - padding·h, X_n + padding·h]。reflected=True なら
    [0, max|X_j| + padding·h] 上で f̂(x) + f̂(-x) を積分する。

    Args:
        sample: CensoredSample
        kernel: カーネル
        h: 帯域幅
        padding: データ範囲の外側に取る幅（h単位）
        step: 刻み（h単位）
        clip_negative: True なら負値を0に切り捨ててから積分
        reflected: 0 での反射補正後の推定量を積分

    Returns:
        質量
    """
    h = check_bandwidth(h)
    if reflected:
        lo = 0.0
        hi = max(abs(sample.times[0]), abs(sample.times[-1])) + padding * h
    else:
        lo = sample.times[0] - padding * h
        hi = sample.times[-1] + padding * h
    count = int(math.ceil((hi - lo) / (step * h))) + 1
    # シンプソン則は奇数点で厳密
    count += 1 - count % 2
    x = np.linspace(lo, hi, count)

    values = kernel_sum(sample, kernel, h, x)
    if reflected:
        values = values + kernel_sum(sample, kernel, h, -x)
    if clip_negative:
        values = np.clip(values, 0.0, None)
    return grid_mass(x, values)
