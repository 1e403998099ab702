from src.simulation.designs import DistributionSpec, EstimatorSpec, SimDesign, load_design
from src.simulation.runner import MseReport, generate, run, true_curve

__all__ = [
    "DistributionSpec",
    "EstimatorSpec",
    "MseReport",
    "SimDesign",
    "generate",
    "load_design",
    "run",
    "true_curve",
]
