"""Records of renewal paths, walk configurations and Monte Carlo estimates."""

from __future__ import annotations

import math
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

from fracwalk.errors import DomainError
from fracwalk.schemas.laws import JumpLaw, WaitingLaw

WELL_SCALED_TOL = 1e-9
RATIO_TOL = 1e-12


def scale_ratio(waiting: WaitingLaw, jump: JumpLaw, h: float, tau: float) -> float:
    """r(h, tau) = mu h^alpha / (lambda tau^beta)."""
    return jump.mu_scale * h**jump.alpha / (waiting.lambda_scale * tau**waiting.beta)


class ScaleState(BaseModel):
    """Space scale h, time scale tau and respeeding factor a of a walk."""

    model_config = ConfigDict(frozen=True)

    h: float = Field(default=1.0, gt=0.0)
    tau: float = Field(default=1.0, gt=0.0)
    a: float = Field(default=1.0, gt=0.0)
    ratio: Optional[float] = None

    @classmethod
    def for_laws(
        cls, waiting: WaitingLaw, jump: JumpLaw, h: float = 1.0, tau: float = 1.0, a: float = 1.0
    ) -> "ScaleState":
        """Scale state with the ratio computed from the laws; no ratio for drift jumps."""
        ratio = scale_ratio(waiting, jump, h, tau) if jump.symmetric else None
        return cls(h=h, tau=tau, a=a, ratio=ratio)

    @classmethod
    def well_scaled_for(
        cls, waiting: WaitingLaw, jump: JumpLaw, h: float, a: float = 1.0
    ) -> "ScaleState":
        """Pick tau = ((mu / lambda) h^alpha)^(1/beta) so the ratio is one."""
        tau = (jump.mu_scale / waiting.lambda_scale * h**jump.alpha) ** (1.0 / waiting.beta)
        return cls.for_laws(waiting, jump, h=h, tau=tau, a=a)

    @computed_field
    @property
    def q(self) -> Optional[float]:
        """Keep probability realizing the respeeding on paths; None when a > 1."""
        return self.a if self.a <= 1.0 else None

    @property
    def well_scaled(self) -> bool:
        return self.ratio is not None and abs(self.ratio - 1.0) < WELL_SCALED_TOL


class ThinningConfig(BaseModel):
    """Keep probability q and time rescale tau of a thinning.

    ``scaled`` ties the two through q = lambda tau^beta.
    """

    model_config = ConfigDict(frozen=True)

    q: float = Field(gt=0.0, le=1.0)
    tau: float = Field(default=1.0, gt=0.0)
    relation: Literal["free", "scaled"] = "free"
    lambda_scale: Optional[float] = Field(default=None, gt=0.0)
    beta: Optional[float] = Field(default=None, gt=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_relation(self) -> "ThinningConfig":
        if self.relation == "scaled":
            if self.lambda_scale is None or self.beta is None:
                raise ValueError("scaled thinning needs lambda_scale and beta")
            if abs(self.q - self.lambda_scale * self.tau**self.beta) > RATIO_TOL:
                raise ValueError("scaled thinning requires q = lambda tau^beta")
        return self

    @classmethod
    def scaled(cls, law: WaitingLaw, tau: float) -> "ThinningConfig":
        """The thinning tied to ``law`` by q = lambda tau^beta.

        Raises:
            DomainError: if the implied q exceeds one
        """
        q = law.lambda_scale * tau**law.beta
        if q > 1.0:
            raise DomainError(f"tau={tau} gives q={q:.4g} > 1 for this law")
        return cls(q=q, tau=tau, relation="scaled", lambda_scale=law.lambda_scale, beta=law.beta)


class RenewalPath(BaseModel):
    """Event times 0 < t_1 < t_2 < ... <= horizon of one renewal path.

    ``overhang`` is the first event beyond the horizon, kept so a path can be continued
    without bias. ``thinned_by`` lists the thinnings applied since simulation; the waiting
    times then follow the thinned, rescaled version of ``law``.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    event_times: np.ndarray
    law: WaitingLaw
    horizon: float = Field(ge=0.0)
    overhang: Optional[float] = None
    thinned_by: List[ThinningConfig] = Field(default_factory=list)

    @field_validator("event_times", mode="before")
    @classmethod
    def _as_array(cls, v) -> np.ndarray:
        return np.asarray(v, dtype=float)

    @model_validator(mode="after")
    def _check_times(self) -> "RenewalPath":
        times = self.event_times
        if times.ndim != 1:
            raise ValueError("event_times must be one-dimensional")
        if times.size:
            if times[0] <= 0.0 or np.any(np.diff(times) <= 0.0):
                raise ValueError("event times must be positive and strictly increasing")
            if times[-1] > self.horizon:
                raise ValueError("event times must not exceed the horizon")
        if self.overhang is not None and not self.overhang > self.horizon:
            raise ValueError("overhang must lie beyond the horizon")
        return self

    @property
    def n_events(self) -> int:
        return int(self.event_times.size)

    def waiting_times(self) -> np.ndarray:
        """Inter-event times T_k = t_k - t_(k-1) with t_0 = 0."""
        return np.diff(self.event_times, prepend=0.0)


class CtrwConfig(BaseModel):
    """Laws, scales, path count and observation times of a walk simulation."""

    model_config = ConfigDict(frozen=True)

    waiting: WaitingLaw
    jump: JumpLaw
    scale: ScaleState = Field(default_factory=ScaleState)
    n_paths: int = Field(default=1000, ge=1)
    observation_times: List[float] = Field(default_factory=lambda: [1.0])

    @field_validator("observation_times")
    @classmethod
    def _check_times(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("observation_times must not be empty")
        if v[0] < 0.0 or any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("observation_times must be nonnegative and strictly increasing")
        return v

    @model_validator(mode="after")
    def _check_scale(self) -> "CtrwConfig":
        if self.scale.ratio is not None and self.jump.symmetric:
            expected = scale_ratio(self.waiting, self.jump, self.scale.h, self.scale.tau)
            if abs(expected - self.scale.ratio) > RATIO_TOL * max(1.0, abs(expected)):
                raise ValueError(
                    f"stored scale ratio {self.scale.ratio} does not match {expected}"
                )
        return self


FieldKind = Literal["density_histogram", "char_function"]


class EmpiricalField(BaseModel):
    """A Monte Carlo estimate of a density (histogram) or characteristic function.

    For histograms ``grid`` holds the bin edges and ``coverage`` the fraction of samples
    inside them; values are normalized over the covered samples. For characteristic
    functions ``grid`` holds the wavenumbers.
    """

    model_config = ConfigDict(frozen=True)

    kind: FieldKind
    grid: List[float]
    values: List[float]
    stderr: List[float] = Field(default_factory=list)
    n_samples: int = Field(ge=1)
    t: float = Field(ge=0.0)
    coverage: float = Field(default=1.0, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_values(self) -> "EmpiricalField":
        if self.kind == "density_histogram":
            if len(self.grid) != len(self.values) + 1:
                raise ValueError("a histogram needs one more edge than values")
            if any(v < 0.0 for v in self.values):
                raise ValueError("histogram values must be nonnegative")
            widths = np.diff(self.grid)
            mass = float(np.dot(self.values, widths))
            if self.coverage > 0.0 and abs(mass - 1.0) > 1e-12:
                raise ValueError(f"histogram integrates to {mass}, not 1")
        else:
            if len(self.grid) != len(self.values):
                raise ValueError("one value per wavenumber")
            for k, v in zip(self.grid, self.values):
                if k == 0.0 and v != 1.0:
                    raise ValueError("characteristic function must be 1 at zero")
        return self

    @property
    def centers(self) -> np.ndarray:
        edges = np.asarray(self.grid)
        return 0.5 * (edges[:-1] + edges[1:]) if self.kind == "density_histogram" else edges


class VarianceEstimate(BaseModel):
    """Empirical second moment at one time, or the reason it is not reported."""

    model_config = ConfigDict(frozen=True)

    t: float = Field(ge=0.0)
    value: Optional[float] = None
    stderr: Optional[float] = None
    converged: bool = True
    reason: Optional[str] = None
    analytic: Optional[float] = None

    @model_validator(mode="after")
    def _check_value(self) -> "VarianceEstimate":
        if self.converged and self.value is None:
            raise ValueError("a converged estimate needs a value")
        if not self.converged and self.reason is None:
            raise ValueError("a non-convergent estimate needs a reason")
        return self

    @property
    def z_score(self) -> Optional[float]:
        if self.value is None or self.analytic is None or not self.stderr:
            return None
        return (self.value - self.analytic) / self.stderr


class GapRow(BaseModel):
    """Deviation from a limit transform at one step of a scale sequence."""

    model_config = ConfigDict(frozen=True)

    scale: float
    deviation: float = Field(ge=0.0)
    q: Optional[float] = None
    s: Optional[float] = None
    kappa: Optional[float] = None

    @field_validator("deviation")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("deviation must be finite")
        return v
