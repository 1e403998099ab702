"""
モンテカルロ実行とMSE集計
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, List, Optional, Tuple

import numpy as np

from src.bandwidth.ecf import BandwidthConfig, select_bandwidth
from src.estimation.density import density
from src.estimation.hazard import hazard
from src.kernels.flat_top import FlatTopKernel
from src.kernels.gaussian import GaussianKernel
from src.simulation.designs import DENSITY_TARGET, SimDesign
from src.survival.kaplan_meier import CensoredSample, ingest
from src.utils.errors import CensoredDensityError, EstimationError
from src.utils.helpers import scale_mse

logger = logging.getLogger(__name__)

# (サンプル, 評価点) -> (推定値, 使用した帯域幅)
Estimator = Callable[[CensoredSample, np.ndarray], Tuple[np.ndarray, float]]


@dataclass(frozen=True)
class PointResult:
    """1評価点の集計"""

    x: float
    truth: float
    mean: float
    bias: float
    variance: float
    mse: float


@dataclass(frozen=True)
class MseReport:
    """シミュレーション結果"""

    design: dict
    points: List[PointResult]
    grid_mse: float
    grid_mean: float
    censoring_fraction: float
    mean_bandwidth: float
    successes: int
    failures: int
    elapsed_seconds: float

    def point_mse(self, x: float) -> float:
        """
        評価点 x の MSE を取得

        Args:
            x: 評価点

        Returns:
            MSE
        """
        for point in self.points:
            if np.isclose(point.x, x):
                return point.mse
        raise KeyError(x)

    def to_dict(self) -> dict:
        return {
            "design": self.design,
            "points": [
                {
                    "x": p.x,
                    "truth": p.truth,
                    "mean": p.mean,
                    "bias": p.bias,
                    "variance": p.variance,
                    "mse": p.mse,
                    "mse_x1000": scale_mse(p.mse),
                }
                for p in self.points
            ],
            "grid_mse": self.grid_mse,
            "grid_mse_x1000": scale_mse(self.grid_mse),
            "grid_mean": self.grid_mean,
            "censoring_fraction": self.censoring_fraction,
            "mean_bandwidth": self.mean_bandwidth,
            "successes": self.successes,
            "failures": self.failures,
        }


def rep_generator(seed: int, rep_index: int) -> np.random.Generator:
    """
    (seed, rep_index) から独立な乱数ストリームを作る

    Args:
        seed: 設計のシード
        rep_index: 反復番号

    Returns:
        numpy Generator
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(rep_index)]))


def generate(design: SimDesign, rep_index: int) -> List[Tuple[float, bool]]:
    """
    1反復分の打ち切りデータを生成

    Args:
        design: SimDesign
        rep_index: 反復番号

    Returns:
        (Z_i, Δ_i) のリスト
    """
    rng = rep_generator(design.seed, rep_index)
    lifetimes = design.lifetime.frozen().rvs(size=design.n, random_state=rng)
    if design.censoring is None:
        return [(float(t), True) for t in lifetimes]
    censor_times = design.censoring.frozen().rvs(size=design.n, random_state=rng)
    observed = np.minimum(lifetimes, censor_times)
    events = lifetimes <= censor_times
    return [(float(t), bool(d)) for t, d in zip(observed, events)]


def true_curve(design: SimDesign, x):
    """
    真の密度またはハザード

    Args:
        design: SimDesign
        x: 評価点

    Returns:
        真値
    """
    dist = design.lifetime.frozen()
    x = np.asarray(x, dtype=float)
    if design.target == DENSITY_TARGET:
        values = dist.pdf(x)
    else:
        values = dist.pdf(x) / dist.sf(x)
    if values.ndim == 0:
        return float(values)
    return values


def design_estimator(design: SimDesign) -> Estimator:
    """
    設計の推定量指定から推定関数を作る

    Args:
        design: SimDesign

    Returns:
        推定関数
    """
    return partial(_estimate, design)


def _estimate(design: SimDesign, sample: CensoredSample, x: np.ndarray):
    spec = design.estimator
    if spec.kernel == "flat_top":
        kernel = FlatTopKernel(spec.c)
    else:
        kernel = GaussianKernel()

    if spec.is_auto:
        h = select_bandwidth(sample, BandwidthConfig(C=spec.C))[1]
    else:
        h = float(spec.bandwidth)

    if design.target == DENSITY_TARGET:
        grid = density(sample, kernel, h, x, reflected=spec.reflect)
    else:
        grid = hazard(sample, kernel, h, x_grid=x, reflected=spec.reflect)
    return grid.value, h


def _run_replication(design: SimDesign, estimator: Estimator, x: np.ndarray, rep_index: int):
    sample = ingest(generate(design, rep_index))
    try:
        values, h = estimator(sample, x)
    except CensoredDensityError as e:
        logger.debug("反復 %d が失敗しました: %s", rep_index, e)
        return None
    return np.asarray(values, dtype=float), float(h), sample.censoring_fraction


def run(design: SimDesign, estimator: Optional[Estimator] = None) -> MseReport:
    """
    設計どおりに反復し、各点と格子平均のMSEを集計

    Args:
        design: SimDesign
        estimator: 推定関数（省略時は設計の推定量）

    Returns:
        MseReport
    """
    start = time.time()
    estimator = estimator or design_estimator(design)
    points = np.asarray(design.eval_points, dtype=float)
    grid = design.grid
    x = np.unique(np.concatenate([points, grid]))
    point_idx = np.searchsorted(x, points)
    grid_idx = np.searchsorted(x, grid)

    task = partial(_run_replication, design, estimator, x)
    logger.info("シミュレーション開始: %s (n=%d, reps=%d)", design.name, design.n, design.reps)
    if design.workers > 1:
        with ProcessPoolExecutor(max_workers=design.workers) as executor:
            results = list(executor.map(task, range(design.reps), chunksize=16))
    else:
        results = [task(i) for i in range(design.reps)]

    # rep_index 順に集計
    successful = [r for r in results if r is not None]
    failures = len(results) - len(successful)
    if not successful:
        raise EstimationError("all replications failed")

    estimates = np.stack([r[0] for r in successful])
    truth = true_curve(design, x)
    mean = estimates.mean(axis=0)
    variance = estimates.var(axis=0)
    mse = ((estimates - truth) ** 2).mean(axis=0)

    report = MseReport(
        design=design.to_dict(),
        points=[
            PointResult(
                x=float(x[i]),
                truth=float(truth[i]),
                mean=float(mean[i]),
                bias=float(mean[i] - truth[i]),
                variance=float(variance[i]),
                mse=float(mse[i]),
            )
            for i in point_idx
        ],
        grid_mse=float(mse[grid_idx].mean()),
        grid_mean=float(mean[grid_idx].mean()),
        censoring_fraction=float(np.mean([r[2] for r in successful])),
        mean_bandwidth=float(np.mean([r[1] for r in successful])),
        successes=len(successful),
        failures=failures,
        elapsed_seconds=time.time() - start,
    )
    if failures:
        logger.warning("%d / %d 回の反復で推定に失敗しました", failures, design.reps)
    logger.info("シミュレーション完了: 格子平均MSE=%.4g (%.1f 秒)", report.grid_mse, report.elapsed_seconds)
    return report
