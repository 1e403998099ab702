"""
カーネル基底クラス
"""
from abc import ABC, abstractmethod
from typing import Tuple

import numpy as np

from src.utils.errors import KernelError

SUPPORTED_DERIVATIVES = (0, 1, 2)


class BaseKernel(ABC):
    """偶関数で積分1のカーネルの基底クラス"""

    @abstractmethod
    def get_kernel_name(self) -> str:
        """
        カーネル名を取得

        Returns:
            カーネル名
        """
        pass

    @abstractmethod
    def value(self, x: np.ndarray) -> np.ndarray:
        """
        K(x) を評価

        Args:
            x: 評価点

        Returns:
            カーネル値
        """
        pass

    @abstractmethod
    def _derivative(self, x: np.ndarray, p: int) -> np.ndarray:
        pass

    @abstractmethod
    def fourier(self, t: np.ndarray) -> np.ndarray:
        """
        フーリエ側の関数 κ(t)（K(x) = (1/2π)∫κ(t)e^{-itx}dt）

        Args:
            t: 周波数

        Returns:
            κ(t)
        """
        pass

    @property
    @abstractmethod
    def fourier_support(self) -> float:
        """κ(t) = 0 となる |t| の下限（コンパクトでなければ inf）"""
        pass

    @property
    def fourier_kinks(self) -> Tuple[float, ...]:
        """κ が滑らかでない正の t（求積の分割点）"""
        return ()

    @property
    @abstractmethod
    def second_moment(self) -> float:
        """μ₂ = ∫x²K(x)dx"""
        pass

    @property
    @abstractmethod
    def roughness(self) -> float:
        """R = ∫K(x)²dx"""
        pass

    def derivative(self, x: np.ndarray, p: int) -> np.ndarray:
        """
        p階導関数 K^{(p)}(x) を評価

        Args:
            x: 評価点
            p: 導関数の階数（0, 1, 2）

        Returns:
            導関数の値
        """
        if p not in SUPPORTED_DERIVATIVES:
            raise KernelError("derivative order not implemented")
        x = np.asarray(x, dtype=float)
        if p == 0:
            return self.value(x)
        return self._derivative(x, p)

    def describe(self) -> dict:
        """
        メタデータ用の辞書を作成

        Returns:
            カーネル情報
        """
        return {"kernel": self.get_kernel_name()}
