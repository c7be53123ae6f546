"""Exponent pairs and problem descriptions of the fractional diffusion."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

Regime = Literal["normal", "time_fractional", "space_fractional", "general"]


def classify_regime(alpha: float, beta: float) -> Regime:
    """Label an exponent pair: Gaussian, subdiffusive, Lévy flight, or mixed."""
    if alpha == 2.0 and beta == 1.0:
        return "normal"
    if alpha == 2.0:
        return "time_fractional"
    if beta == 1.0:
        return "space_fractional"
    return "general"


class StabilityParams(BaseModel):
    """Spatial exponent alpha in (0, 2] and temporal exponent beta in (0, 1]."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(gt=0.0, le=2.0)
    beta: float = Field(gt=0.0, le=1.0)

    @property
    def regime(self) -> Regime:
        return classify_regime(self.alpha, self.beta)


class FracDiffProblem(BaseModel):
    """The space-time fractional Cauchy problem at evolution time t."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(gt=0.0, le=2.0)
    beta: float = Field(gt=0.0, le=1.0)
    t: float = Field(gt=0.0)

    @property
    def regime(self) -> Regime:
        return classify_regime(self.alpha, self.beta)

    @property
    def params(self) -> StabilityParams:
        return StabilityParams(alpha=self.alpha, beta=self.beta)


class SubordinationPair(BaseModel):
    """One point of the parametric representation t = t(t_*), x = y(t_*)."""

    model_config = ConfigDict(frozen=True)

    operational_time: float = Field(ge=0.0)
    physical_time: float = Field(ge=0.0)
    position: float


class VarianceResult(BaseModel):
    """Analytic variance of the fractional diffusion: a number or the infinite flag."""

    model_config = ConfigDict(frozen=True)

    value: float = float("inf")
    infinite: bool = False

    @model_validator(mode="after")
    def _check_flag(self) -> "VarianceResult":
        if self.infinite != (self.value == float("inf")):
            raise ValueError("infinite flag must match an infinite value")
        return self
