"""
台形フラットトップ（無限次）カーネル

κ(t) = 1 (|t| ≤ 1), (1 + c - c|t|)^+ (それ以外)
K(x) = (1/2π)∫κ(t)e^{-itx}dt = c (cos x - cos bx) / (π x²),  b = 1 + 1/c
"""
import math
from typing import Tuple

import numpy as np

from config.settings import KERNEL_SETTINGS
from src.kernels.base_kernel import BaseKernel
from src.utils.errors import KernelError

# テイラー展開の次数: K は x^6 まで、K'' は x^4 まで
_SERIES_TERMS = 4


def _check_c(c: float) -> float:
    c = float(c)
    if not c > 0 or not math.isfinite(c):
        raise KernelError("kernel parameter c must be positive")
    return c


def kappa(t, c: float = KERNEL_SETTINGS["c"]):
    """
    台形 κ(t) を評価

    Args:
        t: 周波数（スカラーまたは配列）
        c: 傾きパラメータ

    Returns:
        [0, 1] の値
    """
    c = _check_c(c)
    values = np.clip(1.0 + c - c * np.abs(np.asarray(t, dtype=float)), 0.0, 1.0)
    if np.ndim(t) == 0:
        return float(values)
    return values


def fourier_moment(k: int, c: float) -> float:
    """
    (1/π)∫_0^b t^k κ(t) dt の閉形式

    κ = c[(b-|t|)^+ - (1-|t|)^+] と ∫_0^a (a-t)t^k dt = a^{k+2}/((k+1)(k+2)) による。

    Args:
        k: 次数
        c: 傾きパラメータ

    Returns:
        モーメント値
    """
    b = 1.0 + 1.0 / c
    return c * (b ** (k + 2) - 1.0) / (math.pi * (k + 1) * (k + 2))


def _series(x: np.ndarray, p: int, c: float) -> np.ndarray:
    # K(x) = Σ_k (-1)^k m_{2k} x^{2k}/(2k)! を p 回微分
    total = np.zeros_like(x)
    for k in range(_SERIES_TERMS):
        power = 2 * k - p
        if power < 0:
            continue
        coef = (-1) ** k * fourier_moment(2 * k, c) / math.factorial(power)
        total = total + coef * x**power
    return total


def _closed_form(x: np.ndarray, p: int, c: float) -> np.ndarray:
    b = 1.0 + 1.0 / c
    numer = np.cos(x) - np.cos(b * x)
    if p == 0:
        return c * numer / (math.pi * x**2)
    d1 = -np.sin(x) + b * np.sin(b * x)
    if p == 1:
        return c * (d1 / x**2 - 2.0 * numer / x**3) / math.pi
    d2 = -np.cos(x) + b**2 * np.cos(b * x)
    return c * (d2 / x**2 - 4.0 * d1 / x**3 + 6.0 * numer / x**4) / math.pi


def _threshold_for(p: int, threshold: float) -> float:
    if p == 0:
        return threshold
    return max(threshold, KERNEL_SETTINGS["derivative_taylor_thresholds"][p])


def _evaluate(x, p: int, c: float, threshold: float):
    x_arr = np.asarray(x, dtype=float)
    threshold = _threshold_for(p, threshold)
    small = np.abs(x_arr) < threshold
    # 0 除算を避けるため小さい点は 1 で置き換えてから選択
    safe = np.where(small, 1.0, x_arr)
    values = np.where(small, _series(x_arr, p, c), _closed_form(safe, p, c))
    if np.ndim(x) == 0:
        return float(values)
    return values


def kernel_value(x, c: float = KERNEL_SETTINGS["c"]):
    """
    K(x) を評価

    Args:
        x: 評価点
        c: 傾きパラメータ

    Returns:
        カーネル値
    """
    return _evaluate(x, 0, _check_c(c), KERNEL_SETTINGS["taylor_threshold"])


def kernel_derivative(x, p: int, c: float = KERNEL_SETTINGS["c"]):
    """
    K^{(p)}(x) を評価（p は 1 または 2）

    Args:
        x: 評価点
        p: 導関数の階数
        c: 傾きパラメータ

    Returns:
        導関数の値
    """
    if p not in (1, 2):
        raise KernelError("derivative order not implemented")
    return _evaluate(x, p, _check_c(c), KERNEL_SETTINGS["taylor_threshold"])


class FlatTopKernel(BaseKernel):
    """台形フラットトップカーネル"""

    def __init__(
        self,
        c: float = KERNEL_SETTINGS["c"],
        taylor_threshold: float = KERNEL_SETTINGS["taylor_threshold"],
    ):
        """
        初期化

        Args:
            c: 傾きパラメータ（正）
            taylor_threshold: テイラー展開に切り替える |x|
        """
        self.c = _check_c(c)
        self.taylor_threshold = float(taylor_threshold)

    def __repr__(self) -> str:
        return f"FlatTopKernel(c={self.c})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FlatTopKernel) and other.c == self.c

    def __hash__(self) -> int:
        return hash(("flat_top", self.c))

    def get_kernel_name(self) -> str:
        return "flat_top"

    @property
    def support_edge(self) -> float:
        return 1.0 + 1.0 / self.c

    @property
    def fourier_support(self) -> float:
        return self.support_edge

    @property
    def fourier_kinks(self) -> Tuple[float, ...]:
        return (1.0, self.support_edge)

    @property
    def second_moment(self) -> float:
        # κ''(0) = 0
        return 0.0

    @property
    def roughness(self) -> float:
        # パーセバル: (1/2π)∫κ² = (1/2π)(2 + 2/(3c))
        return (2.0 + 2.0 / (3.0 * self.c)) / (2.0 * math.pi)

    def value(self, x):
        return _evaluate(x, 0, self.c, self.taylor_threshold)

    def _derivative(self, x, p: int):
        return _evaluate(x, p, self.c, self.taylor_threshold)

    def fourier(self, t):
        return kappa(t, self.c)

    def derivative_at_zero(self, p: int) -> float:
        """
        K^{(p)}(0) = (1/2π)∫(-it)^p κ(t)dt

        Args:
            p: 導関数の階数

        Returns:
            原点での値（奇数階は0）
        """
        if p % 2 == 1:
            return 0.0
        return (-1) ** (p // 2) * fourier_moment(p, self.c)

    def describe(self) -> dict:
        return {"kernel": self.get_kernel_name(), "kernel_c": self.c}
