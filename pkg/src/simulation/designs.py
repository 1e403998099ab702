"""
シミュレーション設計（寿命分布・打ち切り分布・推定量・評価点）
"""
import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
from scipy import stats

from config.settings import BANDWIDTH_SETTINGS, KERNEL_SETTINGS, SIMULATION_SETTINGS
from src.utils.errors import DesignError

DENSITY_TARGET = "density"
HAZARD_TARGET = "hazard"

# 分布名 -> (必須パラメータ, scipy の凍結分布を作る関数)
_DISTRIBUTIONS = {
    "normal": (("mean", "sd"), lambda p: stats.norm(loc=p["mean"], scale=p["sd"])),
    "lognormal": (
        ("meanlog", "sdlog"),
        lambda p: stats.lognorm(s=p["sdlog"], scale=math.exp(p["meanlog"])),
    ),
    "exponential": (("mean",), lambda p: stats.expon(scale=p["mean"])),
}


@dataclass(frozen=True)
class DistributionSpec:
    """寿命または打ち切りの分布指定"""

    name: str
    params: Tuple[Tuple[str, float], ...] = ()

    def __post_init__(self):
        if self.name not in _DISTRIBUTIONS:
            raise DesignError(f"unknown distribution '{self.name}'")
        required, _ = _DISTRIBUTIONS[self.name]
        given = dict(self.params)
        missing = [key for key in required if key not in given]
        if missing:
            raise DesignError(f"distribution '{self.name}' needs {', '.join(missing)}")

    @classmethod
    def from_dict(cls, data: dict) -> "DistributionSpec":
        data = dict(data)
        name = data.pop("name", None)
        if name is None:
            raise DesignError("distribution needs a name")
        return cls(name=name, params=tuple(sorted((k, float(v)) for k, v in data.items())))

    def to_dict(self) -> dict:
        return {"name": self.name, **dict(self.params)}

    def frozen(self):
        """
        scipy.stats の凍結分布を作成

        Returns:
            凍結分布
        """
        return _DISTRIBUTIONS[self.name][1](dict(self.params))


@dataclass(frozen=True)
class EstimatorSpec:
    """推定量の指定"""

    kernel: str = "flat_top"
    bandwidth: Union[str, float] = "auto"
    c: float = KERNEL_SETTINGS["c"]
    C: float = BANDWIDTH_SETTINGS["C"]
    reflect: bool = False

    def __post_init__(self):
        if self.kernel not in ("flat_top", "gaussian"):
            raise DesignError(f"unknown kernel '{self.kernel}'")
        if self.bandwidth == "auto":
            if self.kernel != "flat_top":
                raise DesignError("automatic bandwidth is defined for the flat-top kernel only")
        elif not (isinstance(self.bandwidth, (int, float)) and self.bandwidth > 0):
            raise DesignError("fixed bandwidth must be a positive number")

    @property
    def is_auto(self) -> bool:
        return self.bandwidth == "auto"


@dataclass(frozen=True)
class SimDesign:
    """モンテカルロ設計"""

    name: str
    lifetime: DistributionSpec
    censoring: Optional[DistributionSpec]
    n: int
    reps: int = SIMULATION_SETTINGS["reps"]
    seed: int = SIMULATION_SETTINGS["seed"]
    eval_points: Tuple[float, ...] = ()
    eval_grid: Tuple[float, float, int] = (-2.0, 2.0, 41)
    estimator: EstimatorSpec = field(default_factory=EstimatorSpec)
    target: str = DENSITY_TARGET
    workers: int = SIMULATION_SETTINGS["workers"]

    def __post_init__(self):
        if self.reps < 1:
            raise DesignError("reps must be at least 1")
        if self.n < 2:
            raise DesignError("n must be at least 2")
        lo, hi, count = self.eval_grid
        if int(count) < 2 or not lo < hi:
            raise DesignError("eval_grid needs lo < hi and count >= 2")
        if self.target not in (DENSITY_TARGET, HAZARD_TARGET):
            raise DesignError(f"unknown target '{self.target}'")
        if self.estimator.reflect and (lo < 0 or any(x < 0 for x in self.eval_points)):
            raise DesignError("reflected estimators are evaluated on x >= 0 only")
        if self.workers < 1:
            raise DesignError("workers must be at least 1")
        if not 0 <= int(self.seed) < 2**64:
            raise DesignError("seed must be a 64-bit unsigned integer")

    @property
    def grid(self) -> np.ndarray:
        lo, hi, count = self.eval_grid
        return np.linspace(lo, hi, int(count))

    def with_overrides(self, **changes) -> "SimDesign":
        """
        一部のフィールドを上書きした設計

        Args:
            changes: 上書きするフィールド（None は無視）

        Returns:
            SimDesign
        """
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    @classmethod
    def from_dict(cls, data: dict) -> "SimDesign":
        """
        JSON辞書から設計を作成

        Args:
            data: SimDesign のフィールドを持つ辞書

        Returns:
            SimDesign
        """
        try:
            censoring = data.get("censoring", "none")
            estimator = dict(data.get("estimator", {}))
            return cls(
                name=data.get("name", "design"),
                lifetime=DistributionSpec.from_dict(data["lifetime"]),
                censoring=None if censoring in (None, "none") else DistributionSpec.from_dict(censoring),
                n=int(data["n"]),
                reps=int(data.get("reps", SIMULATION_SETTINGS["reps"])),
                seed=int(data.get("seed", SIMULATION_SETTINGS["seed"])),
                eval_points=tuple(float(x) for x in data.get("eval_points", [])),
                eval_grid=tuple(data.get("eval_grid", (-2.0, 2.0, 41))),
                estimator=EstimatorSpec(**estimator),
                target=data.get("target", DENSITY_TARGET),
                workers=int(data.get("workers", SIMULATION_SETTINGS["workers"])),
            )
        except KeyError as e:
            raise DesignError(f"design is missing field {e}")
        except TypeError as e:
            raise DesignError(f"malformed design: {e}")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lifetime": self.lifetime.to_dict(),
            "censoring": "none" if self.censoring is None else self.censoring.to_dict(),
            "n": self.n,
            "reps": self.reps,
            "seed": self.seed,
            "eval_points": list(self.eval_points),
            "eval_grid": list(self.eval_grid),
            "estimator": asdict(self.estimator),
            "target": self.target,
            "workers": self.workers,
        }


def load_design(path: Path) -> SimDesign:
    """
    JSONファイルから設計を読み込む

    Args:
        path: 設計ファイル

    Returns:
        SimDesign
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"design file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise DesignError(f"line {e.lineno}: malformed design json: {e.msg}")
    return SimDesign.from_dict(data)
