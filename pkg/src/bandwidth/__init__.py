from src.bandwidth.ecf import (
    BandwidthConfig,
    EcfCurve,
    default_window,
    ecf,
    ecf_magnitude,
    ecf_threshold,
    find_t_star,
    pilot_bandwidth,
    select_bandwidth,
)

__all__ = [
    "BandwidthConfig",
    "EcfCurve",
    "default_window",
    "ecf",
    "ecf_magnitude",
    "ecf_threshold",
    "find_t_star",
    "pilot_bandwidth",
    "select_bandwidth",
]
