"""
経験特性関数と帯域幅選択のテスト
"""
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.bandwidth.ecf import (
    BandwidthConfig,
    default_window,
    ecf,
    ecf_magnitude,
    ecf_threshold,
    find_t_star,
    pilot_bandwidth,
    select_bandwidth,
)
from src.survival.kaplan_meier import ingest
from src.utils.errors import BandwidthError
from tests.conftest import normal_records


class TestEcf:
    """φ̂(t) = Σ s_j e^{itX_j}"""

    def test_origin(self, censored_sample):
        value = ecf(censored_sample, 0.0)
        assert value.real == pytest.approx(1.0, abs=1e-12)
        assert value.imag == 0.0

    def test_single_atom_at_zero(self):
        sample = ingest([(0.0, True)])
        assert_allclose(ecf(sample, np.linspace(-10.0, 10.0, 21)), 1.0)

    def test_two_symmetric_atoms(self):
        sample = ingest([(-1.0, True), (1.0, True)])
        t = np.linspace(0.0, 10.0, 41)
        values = ecf(sample, t)
        assert_allclose(values.real, np.cos(t), atol=1e-15)
        assert_allclose(values.imag, 0.0, atol=1e-15)

    def test_conjugate_symmetry(self, censored_sample):
        t = np.linspace(0.1, 5.0, 30)
        assert_allclose(ecf(censored_sample, -t), np.conj(ecf(censored_sample, t)), atol=1e-14)

    def test_magnitude_bounded(self, censored_sample):
        _, _, curve = select_bandwidth(censored_sample)
        assert np.all(curve.magnitude <= 1.0 + 1e-12)
        assert_allclose(curve.magnitude, ecf_magnitude(censored_sample, curve.t_grid))


class TestThresholdAndWindow:
    """閾値 C√(log₁₀n/n) と窓幅 ε_n"""

    def test_threshold(self):
        assert ecf_threshold(100, 2.0) == pytest.approx(2.0 * math.sqrt(0.02))

    def test_window(self):
        assert default_window(10) == 1.0
        assert default_window(10000) == pytest.approx(2.0)
        assert default_window(2) == 1.0

    def test_config_validation(self):
        with pytest.raises(BandwidthError):
            BandwidthConfig(C=0.0)
        with pytest.raises(BandwidthError):
            BandwidthConfig(t_step=-1.0)
        with pytest.raises(BandwidthError):
            BandwidthConfig(flat_top_radius=-0.5)


class TestFindTStar:
    """閾値を下回り続ける最小の t*"""

    def test_exponential_decay(self):
        step = 1e-4
        t = step * np.arange(50001)
        t_star, ceiling_hit = find_t_star(t, np.exp(-t), 0.5, window=1e-9)
        assert not ceiling_hit
        assert t_star == pytest.approx(math.log(2), abs=step)
        assert 1.0 / t_star == pytest.approx(1.4427, abs=1e-3)

    def test_vanishes_after_two(self):
        t = 0.01 * np.arange(1001)
        magnitude = np.where(t > 2.0, 0.0, 0.8)
        t_star, ceiling_hit = find_t_star(t, magnitude, 0.1, window=1.0)
        assert not ceiling_hit
        assert t_star == pytest.approx(2.0)

    def test_window_requires_sustained_crossing(self):
        t = 0.1 * np.arange(101)
        magnitude = np.full(len(t), 0.05)
        # t = 1.3 で一度だけ閾値を超える
        magnitude[t <= 1.0] = 0.9
        magnitude[13] = 0.9
        t_star, _ = find_t_star(t, magnitude, 0.1, window=0.5)
        assert t_star == pytest.approx(1.3)

    def test_ceiling_hit(self):
        t = 0.1 * np.arange(11)
        t_star, ceiling_hit = find_t_star(t, np.ones(len(t)), 0.5, window=0.2)
        assert ceiling_hit
        assert t_star == pytest.approx(1.0)

    def test_immediate_crossing_uses_one_step(self):
        t = 0.1 * np.arange(11)
        t_star, ceiling_hit = find_t_star(t, np.zeros(len(t)), 0.5, window=0.2)
        assert not ceiling_hit
        assert t_star == pytest.approx(0.1)


class TestSelectBandwidth:
    """ĥ = 1/t*"""

    def test_needs_two_observations(self):
        with pytest.raises(BandwidthError, match="n >= 2"):
            select_bandwidth(ingest([(1.0, True)]))

    def test_bandwidth_is_reciprocal(self, censored_sample):
        t_star, h, curve = select_bandwidth(censored_sample)
        assert h == pytest.approx(1.0 / t_star)
        assert curve.t_star == t_star
        assert curve.summary()["bandwidth"] == h
        assert len(curve.t_grid) == 401

    def test_flat_top_radius(self, censored_sample):
        t_star, h, _ = select_bandwidth(censored_sample, BandwidthConfig(flat_top_radius=0.5))
        assert h == pytest.approx(1.5 / t_star)

    def test_shift_invariance(self):
        records = normal_records(seed=21, n=300)
        base = select_bandwidth(ingest(records))
        shifted = select_bandwidth(ingest([(t + 5.0, d) for t, d in records]))
        assert shifted[0] == pytest.approx(base[0], rel=1e-9)
        assert shifted[1] == pytest.approx(base[1], rel=1e-9)

    @pytest.mark.parametrize("scale", [0.5, 3.0])
    def test_scale_equivariance(self, scale):
        records = normal_records(seed=22, n=300)
        t_star, h, _ = select_bandwidth(ingest(records))
        scaled_t, scaled_h, curve = select_bandwidth(ingest([(t * scale, d) for t, d in records]))
        step = curve.t_grid[1]
        assert abs(scaled_t - t_star / scale) <= step * (1 + 1e-9)
        assert scaled_h == pytest.approx(scale * h, rel=1.01 * step * scaled_h)

    def test_pilot_is_alias(self, censored_sample):
        assert pilot_bandwidth(censored_sample) == select_bandwidth(censored_sample)[1]

    def test_permutation_invariance(self):
        records = normal_records(seed=23, n=120)
        shuffled = [records[i] for i in np.random.default_rng(1).permutation(120)]
        assert pilot_bandwidth(ingest(records)) == pilot_bandwidth(ingest(shuffled))

    def test_explicit_grid(self, censored_sample):
        config = BandwidthConfig(t_step=0.05, t_max=20.0)
        t_star, _, curve = select_bandwidth(censored_sample, config)
        assert curve.t_grid[1] == pytest.approx(0.05)
        assert curve.t_grid[-1] == pytest.approx(20.0)
        assert t_star in curve.t_grid


@pytest.mark.slow
class TestBandwidthMonteCarlo:
    """N(0,1) データでの帯域幅の挙動"""

    def _selected(self, n, reps=200, seed=100):
        results = []
        for rep in range(reps):
            rng = np.random.default_rng([seed, n, rep])
            sample = ingest((float(x), True) for x in rng.normal(size=n))
            results.append(select_bandwidth(sample)[:2])
        return np.array(results)

    def test_bandwidth_shrinks_with_n(self):
        small = self._selected(100)
        large = self._selected(10000)
        assert np.median(large[:, 1]) < np.median(small[:, 1])

        # 母集団の特性関数 e^{-t²/2} が閾値と交わる点
        crossing = math.sqrt(2.0 * math.log(1.0 / ecf_threshold(10000, 2.0)))
        assert np.median(large[:, 0]) == pytest.approx(crossing, rel=0.1)
