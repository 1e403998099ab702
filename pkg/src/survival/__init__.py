from src.survival.kaplan_meier import (
    CensoredObservation,
    CensoredSample,
    SurvivalCurve,
    censoring_km,
    flip_indicators,
    ingest,
    km_weights,
    survival_curve,
    survival_eval,
)

__all__ = [
    "CensoredObservation",
    "CensoredSample",
    "SurvivalCurve",
    "censoring_km",
    "flip_indicators",
    "ingest",
    "km_weights",
    "survival_curve",
    "survival_eval",
]
