"""
シミュレーション設計と実行のテスト
"""
import json
import math
from dataclasses import replace

import numpy as np
import pytest

from config.settings import DESIGNS_DIR
from src.simulation.designs import (
    DistributionSpec,
    EstimatorSpec,
    SimDesign,
    load_design,
)
from src.simulation.runner import generate, run, true_curve
from src.utils.errors import DesignError, EstimationError

NORMAL = DistributionSpec.from_dict({"name": "normal", "mean": 0, "sd": 1})


def small_design(**changes) -> SimDesign:
    design = SimDesign(
        name="small",
        lifetime=NORMAL,
        censoring=NORMAL,
        n=40,
        reps=6,
        seed=123,
        eval_points=(0.0, 1.0),
        eval_grid=(-2.0, 2.0, 21),
    )
    return design.with_overrides(**changes)


class TestDesigns:
    """設計の読み込みと検証"""

    @pytest.mark.parametrize("path", sorted(DESIGNS_DIR.glob("*.json")), ids=lambda p: p.stem)
    def test_bundled_designs_load(self, path):
        design = load_design(path)
        assert design.name == path.stem
        assert SimDesign.from_dict(design.to_dict()) == design

    def test_unknown_distribution(self):
        with pytest.raises(DesignError, match="unknown distribution 'weibull'"):
            DistributionSpec.from_dict({"name": "weibull", "shape": 2})

    def test_missing_parameter(self):
        with pytest.raises(DesignError, match="needs sd"):
            DistributionSpec.from_dict({"name": "normal", "mean": 0})

    def test_gaussian_needs_fixed_bandwidth(self):
        with pytest.raises(DesignError, match="flat-top kernel only"):
            EstimatorSpec(kernel="gaussian", bandwidth="auto")

    def test_reflection_needs_nonnegative_grid(self):
        with pytest.raises(DesignError, match="x >= 0"):
            small_design(estimator=EstimatorSpec(reflect=True))

    def test_missing_field(self):
        with pytest.raises(DesignError, match="missing field"):
            SimDesign.from_dict({"lifetime": {"name": "normal", "mean": 0, "sd": 1}})

    def test_malformed_json_names_line(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{\n  "name": "bad",\n  "n": ,\n}\n', encoding="utf-8")
        with pytest.raises(DesignError, match="line 3"):
            load_design(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_design(tmp_path / "missing.json")

    def test_overrides_ignore_none(self):
        design = small_design()
        assert design.with_overrides(seed=None, reps=9).reps == 9
        assert design.with_overrides(seed=None).seed == 123


class TestGenerate:
    """打ち切りデータの生成"""

    def test_deterministic(self):
        design = small_design()
        assert generate(design, 3) == generate(design, 3)
        assert generate(design, 3) != generate(design, 4)

    def test_no_censoring(self):
        data = generate(replace(small_design(), censoring=None), 0)
        assert all(event for _, event in data)

    def test_normal_censoring_fraction(self):
        data = generate(small_design(n=10000), 0)
        fraction = 1.0 - np.mean([event for _, event in data])
        assert fraction == pytest.approx(0.5, abs=0.02)


class TestTrueCurve:
    """真の密度とハザード"""

    def test_normal_density(self):
        assert true_curve(small_design(), 0.0) == pytest.approx(1 / math.sqrt(2 * math.pi))

    def test_exponential_hazard(self):
        design = load_design(DESIGNS_DIR / "hazard_exponential.json")
        np.testing.assert_allclose(true_curve(design, np.array([0.0, 0.7, 1.5])), 1.0)

    def test_lognormal_density(self):
        lognormal = DistributionSpec.from_dict({"name": "lognormal", "meanlog": 0, "sdlog": 0.5})
        design = replace(small_design(), lifetime=lognormal, censoring=None)
        assert true_curve(design, 1.0) == pytest.approx(1 / (0.5 * math.sqrt(2 * math.pi)))


class TestRun:
    """MSE の集計"""

    def test_truth_stub_has_zero_error(self):
        design = small_design(reps=1)
        report = run(design, estimator=lambda sample, x: (true_curve(design, x), 1.0))
        assert report.grid_mse == 0.0
        assert all(point.mse == 0.0 for point in report.points)
        assert report.point_mse(1.0) == 0.0

    def test_deterministic_report(self):
        assert run(small_design()).to_dict() == run(small_design()).to_dict()

    def test_worker_count_does_not_change_report(self):
        serial = run(small_design()).to_dict()
        parallel = run(small_design(workers=2)).to_dict()
        serial["design"].pop("workers")
        parallel["design"].pop("workers")
        assert parallel == serial

    def test_report_fields(self):
        report = run(small_design())
        data = report.to_dict()
        assert data["successes"] == 6
        assert data["failures"] == 0
        assert data["grid_mse_x1000"] == pytest.approx(1e3 * data["grid_mse"])
        assert [p["x"] for p in data["points"]] == [0.0, 1.0]
        assert "elapsed_seconds" not in data
        assert 0.0 < data["censoring_fraction"] < 1.0
        assert data["mean_bandwidth"] > 0
        json.dumps(data)

    def test_failures_are_counted(self):
        def fragile(sample, x):
            if sample.times[0] < -2.5:
                raise EstimationError("stub failure")
            return np.zeros(len(x)), 1.0

        report = run(small_design(reps=20), estimator=fragile)
        assert report.successes + report.failures == 20
        assert report.failures > 0

    def test_all_failures(self):
        def broken(sample, x):
            raise EstimationError("stub failure")

        with pytest.raises(EstimationError, match="all replications failed"):
            run(small_design(), estimator=broken)

    def test_gaussian_comparator(self):
        design = small_design(estimator=EstimatorSpec(kernel="gaussian", bandwidth=0.3))
        report = run(design)
        assert report.mean_bandwidth == pytest.approx(0.3)
        assert report.failures == 0


@pytest.mark.slow
class TestAcceptance:
    """既定設計での MSE の再現"""

    def test_uncensored_flat_top_auto(self):
        report = run(load_design(DESIGNS_DIR / "uncensored_flat_top_auto.json"))
        assert report.failures == 0
        assert 1.2 <= 1e3 * report.point_mse(0.0) <= 4.8

    def test_censored_flat_top_fixed(self):
        design = load_design(DESIGNS_DIR / "censored_flat_top_fixed.json").with_overrides(reps=1000)
        report = run(design)
        assert report.censoring_fraction == pytest.approx(0.5, abs=0.02)
        assert 0.24 <= 1e3 * report.point_mse(0.0) <= 0.94

    def test_censored_flat_top_auto(self):
        design = load_design(DESIGNS_DIR / "censored_flat_top_auto.json").with_overrides(reps=1000)
        report = run(design)
        assert 0.321 <= 1e3 * report.point_mse(0.0) <= 1.284

    def test_constant_hazard(self):
        design = load_design(DESIGNS_DIR / "hazard_exponential.json")
        large = run(design)
        small = run(design.with_overrides(n=100))
        assert large.grid_mean == pytest.approx(1.0, abs=0.15)
        assert large.grid_mse < small.grid_mse

    def test_mse_decreases_with_n(self):
        design = load_design(DESIGNS_DIR / "censored_flat_top_auto.json").with_overrides(reps=200)
        assert run(design).grid_mse < run(design.with_overrides(n=50)).grid_mse

    @pytest.mark.parametrize(
        "name, small_n, large_n, reps",
        [
            ("uncensored_flat_top_auto", 50, 500, 300),
            ("hazard_normal", 100, 1000, 100),
            ("hazard_lognormal", 100, 1000, 100),
        ],
    )
    def test_grid_mse_decreases_with_n(self, name, small_n, large_n, reps):
        design = load_design(DESIGNS_DIR / f"{name}.json").with_overrides(reps=reps)
        small = run(design.with_overrides(n=small_n))
        large = run(design.with_overrides(n=large_n))
        assert large.grid_mse < small.grid_mse
