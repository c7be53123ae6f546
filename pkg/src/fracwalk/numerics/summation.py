"""Series summation: compensated double precision and an mpmath fallback."""

from __future__ import annotations

import math
from typing import Callable, Tuple, Union

import mpmath as mp
import numpy as np

from fracwalk.errors import ConvergenceError

EPS = float(np.finfo(float).eps)
# per-term rounding of exp/gammaln evaluations, in units of EPS
ROUNDING_FACTOR = 32.0

Number = Union[float, complex]


def compensated_sum(terms: np.ndarray) -> Tuple[Number, float]:
    """Sum ``terms`` with ``math.fsum`` and estimate the rounding error.

    Returns:
        Tuple of (sum, rounding error estimate)
    """
    magnitude = float(np.sum(np.abs(terms)))
    if np.iscomplexobj(terms):
        value: Number = complex(math.fsum(terms.real), math.fsum(terms.imag))
    else:
        value = math.fsum(terms)
    return value, ROUNDING_FACTOR * EPS * magnitude


def digits_for(log10_peak: float, target_digits: int) -> int:
    """Working digits so a series whose largest term is 10**log10_peak keeps
    ``target_digits`` correct digits after cancellation."""
    return int(target_digits + max(0.0, log10_peak) + 10)


def mp_series(
    term: Callable[[int], mp.mpc],
    *,
    dps: int,
    min_terms: int,
    max_terms: int,
    what: str = "series",
) -> Tuple[mp.mpc, float]:
    """Sum ``term(n)`` for n = 0, 1, ... at ``dps`` digits.

    Summation stops after ``min_terms`` once two consecutive terms fall below
    10**(-dps) times the running magnitude.

    Returns:
        Tuple of (sum, error estimate from the last term and the working precision)

    Raises:
        ConvergenceError: if ``max_terms`` is reached first
    """
    with mp.workdps(dps):
        total = mp.mpf(0)
        magnitude = mp.mpf(0)
        small = 0
        threshold = mp.mpf(10) ** (-dps)
        for n in range(max_terms):
            value = term(n)
            total += value
            magnitude += abs(value)
            if n >= min_terms and abs(value) <= threshold * max(magnitude, 1):
                small += 1
                if small == 2:
                    bound = abs(value) + threshold * magnitude
                    return total, float(bound)
            else:
                small = 0
    raise ConvergenceError(f"{what}: no convergence within {max_terms} terms at {dps} digits")
