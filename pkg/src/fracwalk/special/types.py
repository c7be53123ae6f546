"""Parameter and result records of the special-function evaluators."""

from __future__ import annotations

from typing import Literal, Union

from pydantic import BaseModel, ConfigDict, Field

EvalMethod = Literal["series", "integral", "asymptotic"]


class MLParams(BaseModel):
    """Order and second parameter of the two-parameter Mittag-Leffler function."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(gt=0.0)
    beta_second: float = Field(default=1.0, gt=0.0)


class EvalResult(BaseModel):
    """A special-function value with the error bound recorded by its evaluator."""

    model_config = ConfigDict(frozen=True)

    value: Union[float, complex]
    abs_error_bound: float = Field(ge=0.0)
    method_used: EvalMethod

    def __float__(self) -> float:
        return float(self.value.real) if isinstance(self.value, complex) else float(self.value)
