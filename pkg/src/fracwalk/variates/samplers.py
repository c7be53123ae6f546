"""Samplers for the waiting-time, jump and stable laws.

All samplers are vectorized: ``size=None`` returns a float, otherwise an array.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq
from scipy.special import gamma

from fracwalk.errors import DomainError
from fracwalk.log import get_logger
from fracwalk.schemas.laws import JumpLaw, WaitingLaw
from fracwalk.special.mittag_leffler import ml_negative, ml_survival
from fracwalk.variates.rng import RngStream

logger = get_logger(__name__)


def _shape(values: np.ndarray, size):
    return float(values) if size is None else values


def sample_waiting(law: WaitingLaw, rng: RngStream, size=None):
    """Draw waiting times from ``law``; every draw is strictly positive."""
    if law.kind == "exponential":
        return _shape(rng.exponential(size) / law.rate, size)
    if law.kind == "mittag_leffler":
        return sample_mittag_leffler(law.beta, rng, size)
    u = rng.uniform(size)
    return _shape(law.theta * np.expm1(-np.log(u) / law.beta), size)


def sample_mittag_leffler(beta: float, rng: RngStream, size=None):
    """Mittag-Leffler waiting times with survival E_beta(-t^beta).

    Uses T = -log U * (sin(beta pi (1 - V)) / sin(beta pi V))^(1/beta), which is
    exponential at beta = 1.
    """
    if not 0.0 < beta <= 1.0:
        raise DomainError(f"Mittag-Leffler exponent must lie in (0, 1], got {beta}")
    e = rng.exponential(size)
    if beta == 1.0:
        return _shape(e, size)
    v = rng.uniform(size)
    ratio = np.sin(beta * math.pi * (1.0 - v)) / np.sin(beta * math.pi * v)
    return _shape(e * ratio ** (1.0 / beta), size)


class _InverseSurvivalTable:
    """Monotone interpolant of log y against log(-log Psi), y = t^beta.

    Outside the tabled range the survival is inverted through its small-time and
    power-law asymptotes.
    """

    def __init__(self, beta: float):
        self.beta = beta
        y = np.logspace(-8.0, 8.0, 1601)
        psi = ml_negative(beta, 1.0, y)
        g = np.log(-np.log(psi))
        self._interp = PchipInterpolator(g, np.log(y))
        self._g_min = g[0]
        self._g_max = g[-1]

    def __call__(self, u: np.ndarray) -> np.ndarray:
        g = np.log(-np.log(u))
        y = np.empty_like(u)
        low = g < self._g_min
        high = g > self._g_max
        mid = ~(low | high)
        y[mid] = np.exp(self._interp(g[mid]))
        y[low] = gamma(1.0 + self.beta) * -np.log(u[low])
        y[high] = 1.0 / (u[high] * gamma(1.0 - self.beta))
        return y ** (1.0 / self.beta)


@lru_cache(maxsize=16)
def _inverse_table(beta: float) -> _InverseSurvivalTable:
    return _InverseSurvivalTable(beta)


def sample_mittag_leffler_inversion(
    beta: float, rng: RngStream, size=None, refine: bool = False
):
    """Mittag-Leffler waiting times by inverting the survival at uniform levels.

    Args:
        beta: Exponent in (0, 1]
        rng: Random stream
        size: Output shape
        refine: Polish each draw by bracketed root finding on E_beta(-t^beta) = U
    """
    if not 0.0 < beta <= 1.0:
        raise DomainError(f"Mittag-Leffler exponent must lie in (0, 1], got {beta}")
    u = rng.uniform(size)
    flat = np.atleast_1d(u).ravel()
    if beta == 1.0:
        t = -np.log(flat)
    else:
        t = _inverse_table(beta)(flat)
        if refine:
            t = np.array([_refine(beta, float(ui), float(ti)) for ui, ti in zip(flat, t)])
    return float(t[0]) if size is None else t.reshape(np.shape(u))


def _refine(beta: float, u: float, guess: float) -> float:
    def gap(t: float) -> float:
        return ml_survival(beta, t) - u

    lo, hi = guess / 2.0, guess * 2.0
    while gap(lo) < 0.0:
        lo /= 2.0
    while gap(hi) > 0.0:
        hi *= 2.0
    return brentq(gap, lo, hi, xtol=1e-14 * guess, rtol=1e-12)


def sample_one_sided_stable(beta: float, rng: RngStream, size=None):
    """Positive stable variates with Laplace transform exp(-s^beta).

    Kanter's representation S = (A(U) / W)^((1-beta)/beta), U uniform on (0, pi) and
    W unit exponential.
    """
    if not 0.0 < beta < 1.0:
        raise DomainError(f"one-sided stable order must lie in (0, 1), got {beta}")
    u = math.pi * rng.uniform(size)
    w = rng.exponential(size)
    c = 1.0 / (1.0 - beta)
    log_a = (
        np.log(np.sin((1.0 - beta) * u))
        + beta * c * np.log(np.sin(beta * u))
        - c * np.log(np.sin(u))
    )
    return _shape(np.exp((log_a - np.log(w)) / (beta * c)), size)


def sample_sym_stable(alpha: float, rng: RngStream, size=None):
    """Symmetric stable variates with characteristic function exp(-|k|^alpha).

    alpha = 2 gives the Gaussian of variance 2, alpha = 1 the standard Cauchy law; the
    general case uses the Chambers-Mallows-Stuck transformation.
    """
    if not 0.0 < alpha <= 2.0:
        raise DomainError(f"stable exponent must lie in (0, 2], got {alpha}")
    if alpha == 2.0:
        return _shape(math.sqrt(2.0) * rng.normal(size), size)
    phi = math.pi * (rng.uniform(size) - 0.5)
    if alpha == 1.0:
        return _shape(np.tan(phi), size)
    w = rng.exponential(size)
    x = (
        np.sin(alpha * phi)
        / np.cos(phi) ** (1.0 / alpha)
        * (np.cos((1.0 - alpha) * phi) / w) ** ((1.0 - alpha) / alpha)
    )
    return _shape(x, size)


def sample_jump(law: JumpLaw, rng: RngStream, size=None):
    """Draw jumps from ``law``."""
    if law.kind == "two_point":
        return _shape(rng.signs(size), size)
    if law.kind == "gaussian":
        return _shape(law.sigma * rng.normal(size), size)
    if law.kind == "sym_pareto":
        signs = rng.signs(size)
        return _shape(signs * law.theta * rng.uniform(size) ** (-1.0 / law.alpha), size)
    if law.kind == "sym_stable":
        return sample_sym_stable(law.alpha, rng, size)
    return 1.0 if size is None else np.ones(size)


def empirical_laplace(samples: np.ndarray, s: float) -> Tuple[float, float]:
    """Mean of exp(-s X) and its standard error."""
    values = np.exp(-s * np.asarray(samples))
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(values.size))


def empirical_char(samples: np.ndarray, kappa: float) -> Tuple[float, float]:
    """Mean of cos(k X) and its standard error."""
    values = np.cos(kappa * np.asarray(samples))
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(values.size))


def ks_critical(n: int, m: Optional[int] = None, level: float = 0.01) -> float:
    """Asymptotic critical value of the one- or two-sample KS distance at ``level``."""
    c = math.sqrt(-0.5 * math.log(level / 2.0))
    if m is None:
        return c / math.sqrt(n)
    return c * math.sqrt((n + m) / (n * m))
