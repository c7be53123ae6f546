"""The M-Wright function M_beta(z) and the Zolotarev-Kanter kernel it shares with the
one-sided stable density."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Optional, Tuple

import mpmath as mp
import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq
from scipy.special import gammaln, rgamma

from fracwalk.errors import ConvergenceError, DomainError
from fracwalk.log import get_logger
from fracwalk.numerics import compensated_sum, digits_for, integrate, mp_series

logger = get_logger(__name__)

Z_MAX = 50.0
TOLERANCE = 1e-12
MAX_DIGITS = 300
MAX_TERMS = 6000
TAIL_CUTOFF = 1e-13

METHODS = ("auto", "series", "sine_series", "integral")


def mwright(beta: float, z: float, method: str = "auto", z_max: float = Z_MAX) -> float:
    """Evaluate M_beta(z) = sum_n (-z)^n / (n! Gamma(1 - beta - beta n)) for z >= 0.

    Args:
        beta: Exponent in (0, 1)
        z: Argument in [0, z_max]
        method: ``series`` sums the series above; ``sine_series`` sums the reflected
            form (1/pi) sum_n (-z)^(n-1) Gamma(beta n) sin(pi beta n) / (n-1)!;
            ``integral`` uses the Zolotarev-Kanter integral; ``auto`` takes the series
            while it is cheap and the integral otherwise
        z_max: Largest admissible argument

    Raises:
        DomainError: for beta outside (0, 1), z < 0 or z > z_max
        ConvergenceError: if a series route cannot reach tolerance at the working
            precision
    """
    if not 0.0 < beta < 1.0:
        raise DomainError(f"M-Wright exponent must lie in (0, 1), got {beta}")
    if z < 0 or z > z_max:
        raise DomainError(f"M-Wright argument must lie in [0, {z_max}], got {z}")
    if method not in METHODS:
        raise DomainError(f"unknown M-Wright method {method!r}")
    return _mwright(beta, z, method)


def _mwright(beta: float, z: float, method: str) -> float:
    if z == 0.0:
        return float(rgamma(1.0 - beta))
    if method == "integral":
        return mwright_integral(beta, z)
    plan = _series_plan(beta, z)
    if method == "auto":
        if plan is None:
            return mwright_integral(beta, z)
        method = "series"
    if plan is None:
        raise ConvergenceError(
            f"M-Wright series at beta={beta}, z={z} needs more than {MAX_DIGITS} digits "
            f"or {MAX_TERMS} terms"
        )
    n_terms, peak10 = plan
    return _mwright_series(beta, z, n_terms, peak10, reflected=(method == "sine_series"))


def _series_plan(beta: float, z: float) -> Optional[Tuple[int, float]]:
    """Term count and log10 of the largest term, or None when too costly."""
    m = np.arange(MAX_TERMS, dtype=float)
    log_mag = m * math.log(z) + gammaln(beta * (m + 1.0)) - gammaln(m + 1.0)
    decreasing = np.diff(log_mag, prepend=np.inf) < 0
    below = np.nonzero((log_mag < math.log(TOLERANCE) - 20.0) & decreasing)[0]
    if below.size == 0:
        return None
    peak10 = float(log_mag[: below[0] + 1].max()) / math.log(10.0)
    if digits_for(peak10, 20) > MAX_DIGITS:
        return None
    return int(below[0]) + 2, peak10


def _mwright_series(beta: float, z: float, n_terms: int, peak10: float, reflected: bool) -> float:
    m = np.arange(n_terms, dtype=float)
    if not reflected and peak10 < 1.0:
        terms = (-1.0) ** m * np.exp(m * math.log(z) - gammaln(m + 1.0)) * rgamma(
            1.0 - beta - beta * m
        )
        value, rounding = compensated_sum(terms)
        if rounding <= TOLERANCE:
            return float(value)

    dps = digits_for(peak10, 20)
    with mp.workdps(dps):
        b = mp.mpf(beta)
        zm = mp.mpf(z)
        state = {"power": mp.mpf(1), "fact": mp.mpf(1)}

        def term(n: int):
            if n > 0:
                state["power"] *= -zm
                state["fact"] *= n
            if reflected:
                weight = mp.gamma(b * (n + 1)) * mp.sinpi(b * (n + 1)) / mp.pi
            else:
                weight = mp.rgamma(1 - b - b * n)
            return state["power"] * weight / state["fact"]

        total, _ = mp_series(
            term, dps=dps, min_terms=n_terms // 2, max_terms=2 * n_terms + 50,
            what=f"M-Wright series beta={beta} z={z}",
        )
        return float(total)


def _log_kanter(beta: float, u: float) -> float:
    """log A(u) with A(u) = sin((1-b)u) sin(bu)^(b/(1-b)) / sin(u)^(1/(1-b))."""
    c = 1.0 / (1.0 - beta)
    return (
        math.log(math.sin((1.0 - beta) * u))
        + beta * c * math.log(math.sin(beta * u))
        - c * math.log(math.sin(u))
    )


def kanter_integral(beta: float, log_lam: float, log_pref: float) -> float:
    """Integral over (0, pi) of exp(log_pref) A(u) exp(-lam A(u)), lam = exp(log_lam).

    Both the M-Wright function at large argument and the one-sided stable density
    reduce to this positive integrand; logs keep it finite for beta near one.
    """

    def integrand(u: float) -> float:
        log_a = _log_kanter(beta, u)
        arg = log_a + log_lam
        if arg > 700.0:
            return 0.0
        return math.exp(log_a + log_pref - math.exp(arg))

    # A increases from A(0+) to infinity; the integrand peaks where lam A(u) = 1
    points = []
    lo, hi = 1e-9, math.pi - 1e-9
    f_lo = _log_kanter(beta, lo) + log_lam
    f_hi = _log_kanter(beta, hi) + log_lam
    if f_lo < 0.0 < f_hi:
        u_peak = brentq(lambda u: _log_kanter(beta, u) + log_lam, lo, hi)
        points.append(u_peak)
    value, _ = integrate(
        integrand, 0.0, math.pi, points=points, abs_tol=1e-15, rel_tol=1e-11,
        what=f"Kanter integral beta={beta}",
    )
    return value


def mwright_integral(beta: float, z: float) -> float:
    """M_beta(z) for z > 0 from
    M(z) = z^(b/(1-b)) / (pi (1-b)) * int_0^pi A(u) exp(-A(u) z^(1/(1-b))) du."""
    c = 1.0 / (1.0 - beta)
    log_z = math.log(z)
    return kanter_integral(beta, c * log_z, beta * c * log_z) * c / math.pi


def mwright_cutoff(beta: float, level: float = TAIL_CUTOFF) -> float:
    """Argument beyond which M_beta stays below ``level``."""
    z = 1.0
    while z < Z_MAX and mwright_integral(beta, z) >= level:
        z *= 1.25
    return min(z, Z_MAX)


class WrightTable:
    """Cubic spline of M_beta on [0, z_cut], zero beyond z_cut."""

    NODES = 1201

    def __init__(self, beta: float):
        if not 0.0 < beta < 1.0:
            raise DomainError(f"M-Wright exponent must lie in (0, 1), got {beta}")
        self.beta = beta
        self.z_cut = mwright_cutoff(beta)
        zs = np.linspace(0.0, self.z_cut, self.NODES)
        values = np.array([_mwright(beta, float(z), "auto") for z in zs])
        self._spline = CubicSpline(zs, values)
        logger.debug("tabled M_%g on [0, %.3g]", beta, self.z_cut)

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        out = np.where(z <= self.z_cut, self._spline(np.clip(z, 0.0, self.z_cut)), 0.0)
        return np.maximum(out, 0.0)


@lru_cache(maxsize=16)
def wright_table(beta: float) -> WrightTable:
    """Shared M-Wright table, built once per exponent."""
    return WrightTable(beta)
