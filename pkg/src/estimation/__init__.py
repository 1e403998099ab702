from src.estimation.corrections import reflect, truncate_renormalize
from src.estimation.density import default_grid, density, density_derivative
from src.estimation.fourier import fourier_density, frequency_domain_density
from src.estimation.grid import EstimateGrid, grid_mass
from src.estimation.hazard import HazardConfig, hazard, hazard_ratio, smoothed_survival
from src.estimation.summation import density_mass, kernel_sum

__all__ = [
    "EstimateGrid",
    "HazardConfig",
    "default_grid",
    "density",
    "density_derivative",
    "density_mass",
    "fourier_density",
    "frequency_domain_density",
    "grid_mass",
    "hazard",
    "hazard_ratio",
    "kernel_sum",
    "reflect",
    "smoothed_survival",
    "truncate_renormalize",
]
