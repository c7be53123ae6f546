"""Stable densities: the one-sided law with Laplace transform exp(-s^beta) and the
symmetric law with Fourier transform exp(-r |k|^alpha)."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import gammaln

from fracwalk.errors import DomainError
from fracwalk.log import get_logger
from fracwalk.numerics import cosine_transform
from fracwalk.special.wright import _mwright, kanter_integral

logger = get_logger(__name__)

ONE_SIDED_METHODS = ("bridge", "integral")
TAIL_START = 40.0
TAIL_TERMS = 60


def one_sided_stable_density(beta: float, t: float, method: str = "bridge") -> float:
    """Density of the extremal positive stable law of order beta.

    Args:
        beta: Order in (0, 1)
        t: Point > 0
        method: ``bridge`` uses L(t) = beta t^(-1-beta) M_beta(t^-beta); ``integral``
            evaluates the Zolotarev-Kanter integral for L directly

    Raises:
        DomainError: for beta outside (0, 1), t <= 0 or an unknown method
    """
    if not 0.0 < beta < 1.0:
        raise DomainError(f"stable order must lie in (0, 1), got {beta}")
    if not t > 0:
        raise DomainError(f"one-sided stable density needs t > 0, got {t}")
    if method == "bridge":
        return beta * t ** (-1.0 - beta) * _mwright(beta, t ** (-beta), "auto")
    if method == "integral":
        c = 1.0 / (1.0 - beta)
        log_t = math.log(t)
        return beta * c / math.pi * kanter_integral(beta, -beta * c * log_t, -c * log_t)
    raise DomainError(f"unknown one-sided stable method {method!r}")


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha <= 2.0:
        raise DomainError(f"stable exponent must lie in (0, 2], got {alpha}")


def _standard_tail(alpha: float, y: np.ndarray) -> np.ndarray:
    """Inverse power expansion of the unit-scale density for large |y|.

    Convergent for alpha < 1 and asymptotic otherwise; summation stops at the smallest
    term.
    """
    y = np.asarray(y, dtype=float)
    total = np.zeros_like(y)
    previous = np.full_like(y, np.inf)
    active = np.ones(y.shape, dtype=bool)
    log_y = np.log(y)
    for k in range(1, TAIL_TERMS + 1):
        coeff = math.sin(math.pi * alpha * k / 2.0)
        mag = np.exp(gammaln(alpha * k + 1.0) - gammaln(k + 1.0) - (alpha * k + 1.0) * log_y)
        active &= mag < previous
        term = (-1.0) ** (k + 1) * coeff * mag
        total = np.where(active, total + term, total)
        previous = mag
        if not np.any(active & (mag > 1e-17 * np.abs(total))):
            break
    return total / math.pi


def _standard_density(alpha: float, y: float) -> float:
    """Unit-scale symmetric stable density at y >= 0 by cosine-transform inversion."""
    if y >= TAIL_START:
        return float(_standard_tail(alpha, np.array([y]))[0])
    value, _ = cosine_transform(
        lambda k: math.exp(-(k**alpha)), y, abs_tol=1e-13,
        what=f"stable density alpha={alpha}",
    )
    return value / math.pi


def symmetric_stable_density(alpha: float, x: float, r: float = 1.0) -> float:
    """Symmetric stable density f_alpha(x, r) with Fourier transform exp(-r |k|^alpha).

    alpha = 2 is the Gaussian of variance 2r and alpha = 1 the Cauchy law of scale r;
    other exponents invert the Fourier transform numerically.

    Raises:
        DomainError: for alpha outside (0, 2] or r <= 0
        QuadratureError: if the inversion does not converge
    """
    _check_alpha(alpha)
    if not r > 0:
        raise DomainError(f"stable scale must be positive, got r={r}")
    if alpha == 2.0:
        return math.exp(-x * x / (4.0 * r)) / math.sqrt(4.0 * math.pi * r)
    if alpha == 1.0:
        return r / (math.pi * (x * x + r * r))
    scale = r ** (1.0 / alpha)
    return _standard_density(alpha, abs(x) / scale) / scale


class StableDensityTable:
    """Vectorized f_alpha(x, r) from a spline of the unit-scale density.

    The spline covers |y| <= 40; the inverse power expansion takes over beyond.
    """

    NODES = 801

    def __init__(self, alpha: float):
        _check_alpha(alpha)
        self.alpha = alpha
        self._spline = None
        if alpha not in (1.0, 2.0):
            ys = np.linspace(0.0, TAIL_START, self.NODES)
            values = np.array([_standard_density(alpha, float(y)) for y in ys])
            self._spline = CubicSpline(ys, values, bc_type=((1, 0.0), "not-a-knot"))
            logger.debug("tabled symmetric stable density alpha=%g", alpha)

    def standard(self, y) -> np.ndarray:
        """Unit-scale density at |y|."""
        y = np.abs(np.asarray(y, dtype=float))
        if self.alpha == 2.0:
            return np.exp(-y * y / 4.0) / math.sqrt(4.0 * math.pi)
        if self.alpha == 1.0:
            return 1.0 / (math.pi * (1.0 + y * y))
        far = y > TAIL_START
        out = np.empty_like(y)
        out[~far] = self._spline(y[~far])
        if np.any(far):
            out[far] = _standard_tail(self.alpha, y[far])
        return np.maximum(out, 0.0)

    def __call__(self, x, r) -> np.ndarray:
        """f_alpha(x, r) broadcast over x and r > 0."""
        x, r = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(r, dtype=float))
        scale = r ** (1.0 / self.alpha)
        return self.standard(x / scale) / scale


@lru_cache(maxsize=16)
def stable_table(alpha: float) -> StableDensityTable:
    """Shared symmetric stable table, built once per exponent."""
    return StableDensityTable(alpha)
