"""
2次カーネル用のプラグイン帯域幅

f, f'' をフラットトップのパイロット推定 f̂, f̂₂ で、1-G を打ち切り分布のKMで置き換えて
h_MSE / h_MISE の公式を評価する。パイロットは反射補正なしの内点用。
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from config.settings import KERNEL_SETTINGS, PLUGIN_SETTINGS
from src.bandwidth.ecf import BandwidthConfig, pilot_bandwidth
from src.estimation.density import density, density_derivative
from src.estimation.grid import grid_mass
from src.kernels.flat_top import FlatTopKernel
from src.kernels.gaussian import gaussian_kernel_constants
from src.survival.kaplan_meier import CensoredSample, censoring_km, survival_eval
from src.utils.errors import PluginError
from src.utils.helpers import weighted_percentile

logger = logging.getLogger(__name__)

MSE = "mse"
MISE = "mise"

_GAUSSIAN_R, _GAUSSIAN_MU2 = gaussian_kernel_constants()


@dataclass(frozen=True)
class PluginConfig:
    """プラグイン帯域幅の設定"""

    mode: str = MISE
    x: Optional[float] = None
    lo: Optional[float] = None
    hi: Optional[float] = None
    roughness: float = _GAUSSIAN_R
    second_moment: float = _GAUSSIAN_MU2
    kernel_c: float = KERNEL_SETTINGS["c"]
    pilot_h: Optional[float] = None
    bandwidth_config: BandwidthConfig = field(default_factory=BandwidthConfig)
    simpson_points: int = PLUGIN_SETTINGS["simpson_points"]

    def __post_init__(self):
        if self.mode not in (MSE, MISE):
            raise PluginError(f"unknown plug-in mode '{self.mode}'")
        if self.mode == MSE and (self.x is None or not math.isfinite(self.x)):
            raise PluginError("pointwise plug-in needs a finite x")
        if self.mode == MISE and self.lo is not None and self.hi is not None:
            if not self.lo < self.hi:
                raise PluginError("weight interval needs lo < hi")
        if not (self.roughness > 0 and self.second_moment > 0):
            raise PluginError("comparator kernel constants must be positive")
        if self.pilot_h is not None and not self.pilot_h > 0:
            raise PluginError("invalid pilot bandwidth")


@dataclass(frozen=True)
class PluginResult:
    """プラグイン帯域幅の結果"""

    bandwidth: float
    pilot_bandwidth: float
    mode: str
    diagnostics: dict

    def summary(self) -> dict:
        return {
            "mode": self.mode,
            "bandwidth": self.bandwidth,
            "pilot_bandwidth": self.pilot_bandwidth,
            "diagnostics": self.diagnostics,
        }


def mse_bandwidth_formula(
    f: float,
    survival_c: float,
    f2: float,
    n: float,
    roughness: float = _GAUSSIAN_R,
    second_moment: float = _GAUSSIAN_MU2,
) -> float:
    """
    h_MSE = ((f/(1-G))·R / (f''·μ₂)²)^{1/5} n^{-1/5}

    Args:
        f: 密度値
        survival_c: 打ち切り分布の生存関数値 1-G(x)
        f2: 2階導関数値
        n: サンプルサイズ
        roughness: R = ∫Λ²
        second_moment: μ₂ = ∫x²Λ

    Returns:
        帯域幅
    """
    if f2 == 0:
        raise PluginError("flat second derivative; pointwise plug-in undefined")
    if not survival_c > 0:
        raise PluginError("no risk mass at x")
    if not f > 0:
        raise PluginError("nonpositive pilot density at x")
    ratio = (f / survival_c) * roughness / (f2 * second_moment) ** 2
    return ratio ** 0.2 * n ** (-0.2)


def mise_bandwidth_formula(
    risk_integral: float,
    curvature_integral: float,
    n: float,
    roughness: float = _GAUSSIAN_R,
    second_moment: float = _GAUSSIAN_MU2,
) -> float:
    """
    h_MISE = (∫f/(1-G)ω · R / (∫(f'')²ω · μ₂²))^{1/5} n^{-1/5}

    Args:
        risk_integral: ∫ f/(1-G) ω
        curvature_integral: ∫ (f'')² ω
        n: サンプルサイズ
        roughness: R
        second_moment: μ₂

    Returns:
        帯域幅
    """
    if not curvature_integral > 0:
        raise PluginError("flat pilot curvature")
    if not risk_integral > 0:
        raise PluginError("nonpositive pilot density on weight interval")
    ratio = risk_integral * roughness / (curvature_integral * second_moment**2)
    return ratio ** 0.2 * n ** (-0.2)


def mise_from_pilots(
    x: np.ndarray,
    f_values: np.ndarray,
    f2_values: np.ndarray,
    survival_values: np.ndarray,
    n: float,
    roughness: float = _GAUSSIAN_R,
    second_moment: float = _GAUSSIAN_MU2,
) -> tuple:
    """
    ω 区間上のパイロット曲線から h_MISE を計算

    Args:
        x: ω 区間上の等間隔グリッド
        f_values: f̂ の値（負値は0とみなす）
        f2_values: f̂₂ の値
        survival_values: 1-Ĝ の値
        n: サンプルサイズ
        roughness: R
        second_moment: μ₂

    Returns:
        (帯域幅, ∫f/(1-G)ω, ∫(f'')²ω)
    """
    survival_values = np.asarray(survival_values, dtype=float)
    if np.any(survival_values <= 0):
        raise PluginError("no risk mass on weight interval")
    risk = grid_mass(x, np.clip(f_values, 0.0, None) / survival_values)
    curvature = grid_mass(x, np.asarray(f2_values, dtype=float) ** 2)
    bandwidth = mise_bandwidth_formula(risk, curvature, n, roughness, second_moment)
    return bandwidth, risk, curvature


def _pilot(sample: CensoredSample, config: PluginConfig) -> float:
    if config.pilot_h is not None:
        return float(config.pilot_h)
    return pilot_bandwidth(sample, config.bandwidth_config)


def h_mse(
    sample: CensoredSample, config: PluginConfig, n: Optional[float] = None
) -> PluginResult:
    """
    点 x での MSE 最適帯域幅の推定 ĥ_MSE

    Args:
        sample: CensoredSample
        config: mode="mse" のプラグイン設定
        n: 公式に使うサンプルサイズ（省略時は sample.n）

    Returns:
        PluginResult
    """
    n = sample.n if n is None else n
    x = float(config.x)
    kernel = FlatTopKernel(config.kernel_c)
    h0 = _pilot(sample, config)

    f = float(density(sample, kernel, h0, [x]).value[0])
    f2 = float(density_derivative(sample, kernel, h0, 2, [x]).value[0])
    survival_c = float(survival_eval(censoring_km(sample), x))

    bandwidth = mse_bandwidth_formula(
        f, survival_c, f2, n, config.roughness, config.second_moment
    )
    logger.info("ĥ_MSE(x=%.4g) = %.6g（パイロット ĥ=%.4g）", x, bandwidth, h0)
    return PluginResult(
        bandwidth=bandwidth,
        pilot_bandwidth=h0,
        mode=MSE,
        diagnostics={"x": x, "f": f, "f2": f2, "censoring_survival": survival_c},
    )


def default_weight_interval(sample: CensoredSample) -> tuple:
    """
    ω の既定区間: s_j 重み付きの 5〜95 パーセンタイル

    Args:
        sample: CensoredSample

    Returns:
        (lo, hi)
    """
    lo = weighted_percentile(
        sample.times, sample.weights, PLUGIN_SETTINGS["weight_lower_percentile"]
    )
    hi = weighted_percentile(
        sample.times, sample.weights, PLUGIN_SETTINGS["weight_upper_percentile"]
    )
    return lo, hi


def h_mise(
    sample: CensoredSample, config: PluginConfig, n: Optional[float] = None
) -> PluginResult:
    """
    ω 重み付き MISE 最適帯域幅の推定 ĥ_MISE

    Args:
        sample: CensoredSample
        config: mode="mise" のプラグイン設定（lo/hi 省略時は既定区間）
        n: 公式に使うサンプルサイズ

    Returns:
        PluginResult
    """
    n = sample.n if n is None else n
    if config.lo is None or config.hi is None:
        lo, hi = default_weight_interval(sample)
    else:
        lo, hi = float(config.lo), float(config.hi)
    if not lo < hi:
        raise PluginError("weight interval needs lo < hi")
    if hi < sample.times[0] or lo > sample.times[-1]:
        raise PluginError("weight interval does not overlap the data")

    kernel = FlatTopKernel(config.kernel_c)
    h0 = _pilot(sample, config)
    x = np.linspace(lo, hi, config.simpson_points)

    f_values = density(sample, kernel, h0, x).value
    f2_values = density_derivative(sample, kernel, h0, 2, x).value
    survival_values = survival_eval(censoring_km(sample), x)

    bandwidth, risk, curvature = mise_from_pilots(
        x, f_values, f2_values, survival_values, n, config.roughness, config.second_moment
    )
    logger.info("ĥ_MISE[%.4g, %.4g] = %.6g（パイロット ĥ=%.4g）", lo, hi, bandwidth, h0)
    return PluginResult(
        bandwidth=bandwidth,
        pilot_bandwidth=h0,
        mode=MISE,
        diagnostics={
            "lo": lo,
            "hi": hi,
            "risk_integral": risk,
            "curvature_integral": curvature,
        },
    )


def plugin_bandwidth(
    sample: CensoredSample, config: PluginConfig, n: Optional[float] = None
) -> PluginResult:
    """
    設定のモードに応じて h_mse / h_mise を呼ぶ

    Args:
        sample: CensoredSample
        config: プラグイン設定
        n: サンプルサイズ

    Returns:
        PluginResult
    """
    if config.mode == MSE:
        return h_mse(sample, config, n)
    return h_mise(sample, config, n)
