from src.kernels.base_kernel import BaseKernel
from src.kernels.flat_top import FlatTopKernel, kappa, kernel_derivative, kernel_value
from src.kernels.gaussian import GaussianKernel, gaussian_kernel_constants

__all__ = [
    "BaseKernel",
    "FlatTopKernel",
    "GaussianKernel",
    "gaussian_kernel_constants",
    "kappa",
    "kernel_derivative",
    "kernel_value",
]
