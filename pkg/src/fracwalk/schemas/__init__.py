"""Pydantic schemas for fracwalk."""

from fracwalk.schemas.laws import JumpKind, JumpLaw, WaitingKind, WaitingLaw
from fracwalk.schemas.manifest import CheckResult, RunManifest
from fracwalk.schemas.params import (
    FracDiffProblem,
    Regime,
    StabilityParams,
    SubordinationPair,
    VarianceResult,
    classify_regime,
)
from fracwalk.schemas.process import (
    CtrwConfig,
    EmpiricalField,
    GapRow,
    RenewalPath,
    ScaleState,
    ThinningConfig,
    VarianceEstimate,
    scale_ratio,
)

__all__ = [
    "WaitingLaw",
    "JumpLaw",
    "WaitingKind",
    "JumpKind",
    # Problem descriptions
    "StabilityParams",
    "FracDiffProblem",
    "SubordinationPair",
    "VarianceResult",
    "Regime",
    "classify_regime",
    # Paths and estimates
    "RenewalPath",
    "ThinningConfig",
    "ScaleState",
    "CtrwConfig",
    "EmpiricalField",
    "VarianceEstimate",
    "GapRow",
    "scale_ratio",
    # Artifacts
    "RunManifest",
    "CheckResult",
]
