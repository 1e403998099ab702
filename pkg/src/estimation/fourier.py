"""
周波数領域での密度評価

(1/2π)∫φ(t)κ(th)e^{-itx}dt を求積で計算する。φ に経験特性関数を入れれば f̂ と一致し、
母集団の特性関数を入れれば E f̂(x) になる。
"""
import math
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad_vec

from src.bandwidth.ecf import ecf
from src.kernels.base_kernel import BaseKernel
from src.survival.kaplan_meier import CensoredSample
from src.utils.errors import EstimationError

CharacteristicFunction = Callable[[float], complex]


def frequency_domain_density(
    cf: CharacteristicFunction,
    kernel: BaseKernel,
    h: float,
    x_grid: np.ndarray,
    cf_support: Optional[float] = None,
    epsabs: float = 1e-13,
    epsrel: float = 1e-12,
) -> np.ndarray:
    """
    (1/π)∫_0^T Re[φ(t)e^{-itx}] κ(th) dt を各 x で計算（φ(-t) = conj φ(t) を利用）

    Args:
        cf: 特性関数 φ（スカラー t を受け取る）
        kernel: カーネル（κ がコンパクト台なら積分は有限区間で厳密）
        h: 帯域幅
        x_grid: 評価点
        cf_support: φ(t) = 0 となる |t| の下限（既知なら積分区間を縮める）
        epsabs: 絶対許容誤差
        epsrel: 相対許容誤差

    Returns:
        各 x での値
    """
    if not h > 0:
        raise EstimationError("invalid bandwidth")
    x_grid = np.asarray(x_grid, dtype=float)

    upper = kernel.fourier_support / h
    if cf_support is not None:
        upper = min(upper, cf_support)
    # κ(th) の折れ点と φ の台の端で区間を分割
    breaks = [k / h for k in kernel.fourier_kinks if k / h < upper]
    if cf_support is not None and cf_support < upper:
        breaks.append(cf_support)
    edges = sorted(set([0.0] + breaks + [upper]))

    def integrand(t: float) -> np.ndarray:
        return np.real(cf(t) * np.exp(-1j * t * x_grid)) * kernel.fourier(t * h)

    total = np.zeros_like(x_grid)
    for a, b in zip(edges[:-1], edges[1:]):
        if math.isinf(b):
            value, _ = quad_vec(integrand, a, np.inf, epsabs=epsabs, epsrel=epsrel)
        else:
            value, _ = quad_vec(integrand, a, b, epsabs=epsabs, epsrel=epsrel, limit=2000)
        total = total + value
    return total / math.pi


def fourier_density(
    sample: CensoredSample, kernel: BaseKernel, h: float, x_grid: np.ndarray
) -> np.ndarray:
    """
    経験特性関数を使った f̂ の周波数領域表現

    Args:
        sample: CensoredSample
        kernel: カーネル
        h: 帯域幅
        x_grid: 評価点

    Returns:
        各 x での f̂
    """
    return frequency_domain_density(lambda t: ecf(sample, t), kernel, h, x_grid)
