from src.models.curves import (
    BadReduction,
    Curve,
    CurveModP,
    FrobData,
    reduce,
    trace_at,
    trace_of_frobenius,
)
from src.models.schemas import (
    ExperimentConfig,
    ImageVerdict,
    Mod2Image,
    Reason,
    SieveProblem,
)

__all__ = [
    "BadReduction",
    "Curve",
    "CurveModP",
    "FrobData",
    "reduce",
    "trace_at",
    "trace_of_frobenius",
    "ExperimentConfig",
    "ImageVerdict",
    "Mod2Image",
    "Reason",
    "SieveProblem",
]
