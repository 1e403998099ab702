"""
推定結果グリッド
"""
from dataclasses import dataclass, field, replace
from typing import FrozenSet, Iterable, Optional

import numpy as np
import pandas as pd
from scipy.integrate import simpson

from src.utils.errors import EstimationError

DENSITY = "density"
HAZARD = "hazard"
SURVIVAL_SMOOTHED = "survival-smoothed"

REFLECTED = "reflected"
TRUNCATED_RENORMALIZED = "truncated_renormalized"


def derivative_kind(p: int) -> str:
    return DENSITY if p == 0 else f"derivative-{p}"


@dataclass(frozen=True)
class EstimateGrid:
    """評価点と推定値"""

    x: np.ndarray
    value: np.ndarray
    bandwidth: float
    kind: str = DENSITY
    corrections: FrozenSet[str] = field(default_factory=frozenset)
    kernel: dict = field(default_factory=dict)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        value = np.asarray(self.value, dtype=float)
        if x.shape != value.shape or x.ndim != 1:
            raise EstimationError("grid and values must be one-dimensional of equal length")
        if len(x) > 1 and not np.all(np.diff(x) > 0):
            raise EstimationError("evaluation grid must be strictly ascending")
        if not np.all(np.isfinite(value)):
            raise EstimationError("estimate is not finite on the grid")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "corrections", frozenset(self.corrections))

    @property
    def derivative_order(self) -> Optional[int]:
        """密度なら0、導関数なら階数、それ以外は None"""
        if self.kind == DENSITY:
            return 0
        if self.kind.startswith("derivative-"):
            return int(self.kind.split("-")[1])
        return None

    def with_values(
        self,
        value: np.ndarray,
        x: Optional[np.ndarray] = None,
        flags: Iterable[str] = (),
        kind: Optional[str] = None,
    ):
        """
        値（と評価点）を差し替えた新しいグリッド

        Args:
            value: 新しい値
            x: 新しい評価点（省略時はそのまま）
            flags: 追加する補正フラグ
            kind: 新しい種類（省略時はそのまま）

        Returns:
            EstimateGrid
        """
        return replace(
            self,
            x=self.x if x is None else x,
            value=value,
            kind=self.kind if kind is None else kind,
            corrections=self.corrections | set(flags),
        )

    def mass(self) -> float:
        """
        合成シンプソン則による ∫value

        Returns:
            積分値
        """
        return grid_mass(self.x, self.value)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"x": self.x, "value": self.value})

    def metadata(self) -> dict:
        """
        JSONサイドカー用のメタデータ

        Returns:
            bandwidth, kind, corrections とカーネル情報
        """
        meta = {
            "bandwidth": self.bandwidth,
            "kind": self.kind,
            "corrections": {
                REFLECTED: REFLECTED in self.corrections,
                TRUNCATED_RENORMALIZED: TRUNCATED_RENORMALIZED in self.corrections,
            },
        }
        meta.update(self.kernel)
        return meta


def grid_mass(x: np.ndarray, y: np.ndarray) -> float:
    """
    合成シンプソン則

    Args:
        x: 昇順の評価点
        y: 値

    Returns:
        積分値
    """
    if len(x) < 2:
        raise EstimationError("at least two grid points are needed for quadrature")
    return float(simpson(np.asarray(y, dtype=float), x=np.asarray(x, dtype=float)))
