"""
ガウス（2次）比較カーネル Λ
"""
import math
from typing import Tuple

import numpy as np
from scipy.stats import norm

from src.kernels.base_kernel import BaseKernel


def gaussian_kernel_constants() -> Tuple[float, float]:
    """
    標準正規カーネルの定数

    Returns:
        (R = ∫Λ², μ₂ = ∫x²Λ)
    """
    return 1.0 / (2.0 * math.sqrt(math.pi)), 1.0


class GaussianKernel(BaseKernel):
    """標準正規密度カーネル"""

    def __repr__(self) -> str:
        return "GaussianKernel()"

    def __eq__(self, other) -> bool:
        return isinstance(other, GaussianKernel)

    def __hash__(self) -> int:
        return hash("gaussian")

    def get_kernel_name(self) -> str:
        return "gaussian"

    @property
    def fourier_support(self) -> float:
        return math.inf

    @property
    def second_moment(self) -> float:
        return gaussian_kernel_constants()[1]

    @property
    def roughness(self) -> float:
        return gaussian_kernel_constants()[0]

    def value(self, x):
        return norm.pdf(x)

    def _derivative(self, x, p: int):
        density = norm.pdf(x)
        if p == 1:
            return -x * density
        return (x * x - 1.0) * density

    def fourier(self, t):
        return np.exp(-0.5 * np.asarray(t, dtype=float) ** 2)
