"""
フラットトップカーネルとガウス比較カーネルのテスト
"""
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad
from scipy.stats import norm

from src.estimation.fourier import frequency_domain_density
from src.kernels.flat_top import (
    FlatTopKernel,
    fourier_moment,
    kappa,
    kernel_derivative,
    kernel_value,
)
from src.kernels.gaussian import GaussianKernel, gaussian_kernel_constants
from src.utils.errors import KernelError

# 8π の倍数で切ると c = 4 の裾の主要項 sin(x), sin(1.25x) が消える
WINDOW = 160 * math.pi


class TestKappa:
    """台形 κ"""

    def test_flat_region(self):
        assert kappa(0.5, 4) == 1.0
        assert kappa(-1.0, 4) == 1.0

    def test_support_edge(self):
        assert kappa(1.25, 4) == 0.0
        assert kappa(3.0, 4) == 0.0

    def test_flank_midpoint(self):
        assert kappa(1.125, 4) == pytest.approx(0.5)

    def test_continuity(self):
        t = np.linspace(-2.0, 2.0, 100001)
        jumps = np.abs(np.diff(kappa(t, 4)))
        assert jumps.max() <= 4 * (t[1] - t[0]) * (1 + 1e-9)

    def test_invalid_c(self):
        with pytest.raises(KernelError):
            kappa(0.5, 0.0)


class TestKernelValue:
    """K(x) の閉形式とテイラー展開"""

    def test_value_at_zero(self):
        assert kernel_value(0.0, 4) == pytest.approx(2.25 / (2 * math.pi), abs=1e-12)

    def test_value_at_zero_matches_inversion(self):
        integral, _ = quad(lambda t: kappa(t, 4), 0.0, 1.25, points=[1.0], epsabs=1e-13)
        assert kernel_value(0.0, 4) == pytest.approx(integral / math.pi, abs=1e-10)

    def test_even(self):
        x = np.random.default_rng(0).uniform(-30.0, 30.0, size=200)
        assert_allclose(kernel_value(x), kernel_value(-x), rtol=1e-14, atol=1e-16)

    def test_series_joins_closed_form(self):
        inside = kernel_value(0.999e-3)
        outside = kernel_value(1.001e-3)
        assert inside == pytest.approx(outside, abs=1e-9)

    def test_scalar_and_array(self):
        assert isinstance(kernel_value(0.3), float)
        assert kernel_value(np.array([0.3])).shape == (1,)

    def test_unit_mass(self):
        half, _ = quad(kernel_value, 0.0, WINDOW, limit=5000, epsabs=1e-12)
        assert 2 * half == pytest.approx(1.0, abs=1e-6)

    def test_second_moment_vanishes(self):
        half, _ = quad(lambda x: x * x * kernel_value(x), 0.0, WINDOW, limit=5000, epsabs=1e-11)
        assert 2 * half == pytest.approx(0.0, abs=1e-6)

    @pytest.mark.parametrize("h", [0.3, 0.7, 1.5])
    def test_dual_path_identity(self, h):
        kernel = FlatTopKernel(4.0)
        x = np.linspace(-6.0, 6.0, 25)
        spatial = kernel.value(x / h) / h
        frequency = frequency_domain_density(lambda t: 1.0, kernel, h, x)
        assert_allclose(frequency, spatial, atol=1e-8)


class TestKernelDerivative:
    """K', K''"""

    def test_first_derivative_at_zero(self):
        assert kernel_derivative(0.0, 1, 4) == 0.0

    def test_first_derivative_is_odd(self):
        x = np.random.default_rng(1).uniform(0.0, 20.0, size=100)
        assert_allclose(kernel_derivative(-x, 1), -kernel_derivative(x, 1), rtol=1e-13, atol=1e-16)

    def test_first_derivative_finite_difference(self):
        x, step = np.array([0.3, 0.7, 2.0, 5.5]), 1e-5
        fd = (kernel_value(x + step) - kernel_value(x - step)) / (2 * step)
        assert_allclose(kernel_derivative(x, 1), fd, atol=1e-8)

    def test_second_derivative_finite_difference(self):
        x, step = 0.7, 1e-4
        fd = (kernel_value(x + step) - 2 * kernel_value(x) + kernel_value(x - step)) / step**2
        assert kernel_derivative(x, 2, 4) == pytest.approx(fd, abs=1e-5)

    def test_second_derivative_at_zero(self):
        kernel = FlatTopKernel(4.0)
        expected = -fourier_moment(2, 4.0)
        assert kernel_derivative(0.0, 2, 4) == pytest.approx(expected, rel=1e-14)
        assert kernel.derivative_at_zero(2) == pytest.approx(expected, rel=1e-14)
        assert kernel.derivative_at_zero(1) == 0.0

    @pytest.mark.parametrize("x", [0.5e-3, 0.99e-3, 1.01e-3, 0.0199, 0.0201, 0.0499, 0.0501, 0.2])
    def test_matches_fourier_inversion_across_series_switch(self, x):
        # K'(x) = -(1/π)∫ t κ(t) sin(tx) dt,  K''(x) = -(1/π)∫ t² κ(t) cos(tx) dt
        first, _ = quad(
            lambda t: t * kappa(t, 4) * math.sin(t * x), 0.0, 1.25, points=[1.0], epsabs=1e-14
        )
        second, _ = quad(
            lambda t: t * t * kappa(t, 4) * math.cos(t * x), 0.0, 1.25, points=[1.0], epsabs=1e-14
        )
        assert kernel_derivative(x, 1, 4) == pytest.approx(-first / math.pi, abs=1e-9)
        assert kernel_derivative(x, 2, 4) == pytest.approx(-second / math.pi, abs=1e-9)

    @pytest.mark.parametrize("p", [3, 4, -1])
    def test_unsupported_order(self, p):
        with pytest.raises(KernelError, match="derivative order not implemented"):
            kernel_derivative(0.5, p)
        with pytest.raises(KernelError, match="derivative order not implemented"):
            FlatTopKernel().derivative(np.array([0.5]), p)


class TestFlatTopKernel:
    """カーネルオブジェクトの定数"""

    def test_roughness_matches_parseval(self):
        kernel = FlatTopKernel(4.0)
        integral, _ = quad(lambda t: kappa(t, 4) ** 2, 0.0, 1.25, points=[1.0])
        assert kernel.roughness == pytest.approx(integral / math.pi, rel=1e-10)

    def test_constants(self):
        kernel = FlatTopKernel(4.0)
        assert kernel.second_moment == 0.0
        assert kernel.fourier_support == 1.25
        assert kernel.fourier_kinks == (1.0, 1.25)
        assert kernel.describe() == {"kernel": "flat_top", "kernel_c": 4.0}

    def test_equality(self):
        assert FlatTopKernel(4.0) == FlatTopKernel(4.0)
        assert FlatTopKernel(4.0) != FlatTopKernel(2.0)


class TestGaussianKernel:
    """比較用ガウスカーネル"""

    def test_constants(self):
        roughness, second_moment = gaussian_kernel_constants()
        assert roughness == pytest.approx(0.2820948, abs=1e-7)
        assert second_moment == 1.0

    def test_constants_by_quadrature(self):
        roughness, second_moment = gaussian_kernel_constants()
        mass, _ = quad(norm.pdf, -np.inf, np.inf)
        square, _ = quad(lambda x: norm.pdf(x) ** 2, -np.inf, np.inf)
        moment, _ = quad(lambda x: x * x * norm.pdf(x), -np.inf, np.inf)
        assert mass == pytest.approx(1.0, abs=1e-10)
        assert square == pytest.approx(roughness, abs=1e-10)
        assert moment == pytest.approx(second_moment, abs=1e-10)

    def test_derivatives(self):
        kernel = GaussianKernel()
        x, step = np.linspace(-3.0, 3.0, 13), 1e-5
        fd1 = (kernel.value(x + step) - kernel.value(x - step)) / (2 * step)
        fd2 = (kernel.value(x + step) - 2 * kernel.value(x) + kernel.value(x - step)) / step**2
        assert_allclose(kernel.derivative(x, 1), fd1, atol=1e-8)
        assert_allclose(kernel.derivative(x, 2), fd2, atol=1e-4)

    def test_fourier(self):
        assert GaussianKernel().fourier(0.0) == 1.0
        assert GaussianKernel().fourier_support == math.inf
