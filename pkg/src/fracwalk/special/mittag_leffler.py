"""Region-switching evaluation of the Mittag-Leffler functions E_a(z) and E_{a,b}(z).

Routes:

- |z| <= series_radius: Taylor series, compensated double precision with an mpmath
  fallback when cancellation eats the tolerance.
- real z = -x, 0 < a < 1, b < 1 + a: the real-axis integral representation
  (1/pi) int_0^inf e^{-p} p^{a-b} [p^a sin(b pi) + x sin((b-a) pi)]
  / (p^{2a} + 2 x p^a cos(a pi) + x^2) dp.
- real z <= -asymptotic_threshold, 0 < a < 1: the inverse power expansion.
- a >= 1 elsewhere: series in extended precision.
- 0 < a < 1 elsewhere: fixed Talbot inversion of s^{a-b} / (s^a - z) at t = 1 plus the
  residues of the principal-sheet poles s^a = z right of the contour.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache
from typing import List, Tuple, Union

import mpmath as mp
import numpy as np
from pydantic import ValidationError
from scipy.interpolate import CubicSpline
from scipy.special import gammaln, rgamma

from fracwalk.errors import DomainError
from fracwalk.log import get_logger
from fracwalk.numerics import (
    compensated_sum,
    digits_for,
    integrate,
    integrate_algebraic,
    invert_laplace,
    mp_series,
    outside_contour,
)
from fracwalk.special.types import EvalResult, MLParams

logger = get_logger(__name__)

Number = Union[float, complex]

SERIES_RADIUS = 5.0
ASYMPTOTIC_THRESHOLD = 1e5
Z_MAX_REAL = 700.0
Z_MAX_COMPLEX = 50.0
EXTENDED_DIGITS = 50
TOLERANCE = 1e-12
TALBOT_NODES = 48
ASYMPTOTIC_TERMS = 6
MAX_EXPONENT = 700.0


def ml_two(
    alpha: float,
    beta2: float,
    z: Number,
    *,
    series_radius: float = SERIES_RADIUS,
    asymptotic_threshold: float = ASYMPTOTIC_THRESHOLD,
    z_max_real: float = Z_MAX_REAL,
    z_max_complex: float = Z_MAX_COMPLEX,
    extended_digits: int = EXTENDED_DIGITS,
    tol: float = TOLERANCE,
    nodes: int = TALBOT_NODES,
) -> EvalResult:
    """Evaluate the two-parameter Mittag-Leffler function E_{alpha,beta2}(z).

    Args:
        alpha: Order > 0
        beta2: Second parameter > 0
        z: Real or complex argument
        series_radius: Largest |z| summed as a Taylor series in every case
        asymptotic_threshold: Negative real arguments below minus this value use the
            inverse power expansion (only for alpha < 1)
        z_max_real: Largest |z| on the real axis where the series is the only route
        z_max_complex: Largest |z| off the negative real axis
        extended_digits: Minimum working digits of the mpmath fallback
        tol: Target absolute error of the series route
        nodes: Talbot node count

    Returns:
        EvalResult; ``value`` is a float for real z and a complex otherwise.

    Raises:
        DomainError: for alpha <= 0, beta2 <= 0, or |z| beyond the admissible range
        OverflowError: if the function grows beyond double range
    """
    try:
        MLParams(alpha=alpha, beta_second=beta2)
    except ValidationError as e:
        raise DomainError(
            f"Mittag-Leffler parameters must be positive, got alpha={alpha}, beta2={beta2}"
        ) from e

    zc = complex(z)
    real = zc.imag == 0.0
    modulus = abs(zc)

    if alpha == 1.0 and beta2 == 1.0:
        if zc.real > MAX_EXPONENT:
            raise OverflowError(f"E_1({z}) exceeds double range")
        value: Number = math.exp(zc.real) if real else cmath.exp(zc)
        return EvalResult(value=value, abs_error_bound=2e-16 * abs(value), method_used="series")

    if modulus <= series_radius:
        return _series(alpha, beta2, zc, real, tol, extended_digits)

    if real and zc.real < 0:
        x = -zc.real
        if alpha < 1.0:
            if x >= asymptotic_threshold:
                return _asymptotic(alpha, beta2, x)
            if beta2 < 1.0 + alpha:
                return _integral_negative(alpha, beta2, x)
            return _contour(alpha, beta2, zc, real, nodes)
        if x > z_max_real:
            raise DomainError(f"|z|={x} exceeds the real-axis limit {z_max_real}")
        return _series(alpha, beta2, zc, real, tol, extended_digits)

    limit = z_max_real if (real and alpha >= 1.0) else z_max_complex
    if modulus > limit:
        raise DomainError(f"|z|={modulus} exceeds the admissible limit {limit}")
    _check_growth(alpha, zc)
    if alpha >= 1.0:
        return _series(alpha, beta2, zc, real, tol, extended_digits)
    return _contour(alpha, beta2, zc, real, nodes)


def ml_one(alpha: float, z: Number, **kwargs) -> EvalResult:
    """Evaluate the one-parameter Mittag-Leffler function E_alpha(z) = E_{alpha,1}(z)."""
    return ml_two(alpha, 1.0, z, **kwargs)


def ml_survival(beta: float, t: float) -> float:
    """Survival probability E_beta(-t^beta) of the Mittag-Leffler waiting time."""
    _check_exponent(beta, upper_open=False)
    if t < 0:
        raise DomainError(f"time must be nonnegative, got t={t}")
    if t == 0:
        return 1.0
    if beta == 1.0:
        return math.exp(-t)
    value = float(ml_two(beta, 1.0, -(t**beta)).value)
    return min(max(value, 0.0), 1.0)


def ml_density(beta: float, t: float, method: str = "series") -> float:
    """Mittag-Leffler waiting-time density t^(beta-1) E_{beta,beta}(-t^beta).

    Args:
        beta: Exponent in (0, 1)
        t: Time > 0
        method: ``series`` evaluates the function form; ``integral`` integrates the
            completely monotone representation against exp(-r t)
    """
    return float(ml_density_result(beta, t, method))


def ml_density_result(beta: float, t: float, method: str = "series", **kwargs) -> EvalResult:
    """The waiting-time density with the error bound of the route that produced it.

    Keyword arguments go to :func:`ml_two` on the series route.
    """
    _check_exponent(beta, upper_open=True)
    if not t > 0:
        raise DomainError(f"time must be positive, got t={t}")
    if method == "series":
        scale = t ** (beta - 1.0)
        inner = ml_two(beta, beta, -(t**beta), **kwargs)
        return EvalResult(
            value=scale * float(inner),
            abs_error_bound=scale * inner.abs_error_bound,
            method_used=inner.method_used,
        )
    if method == "integral":
        value, err = _density_integral(beta, t)
        return EvalResult(value=value, abs_error_bound=err, method_used="integral")
    raise DomainError(f"unknown density method {method!r}")


def ml_spectral_weight(beta: float, r: float) -> float:
    """Spectral weight K_beta(r) of the Mittag-Leffler law.

    Normalized so that the survival is int K(r) exp(-r t) dr and the density is
    int r K(r) exp(-r t) dr; r K(r) is the integrand of the printed integral
    representation of the density. K integrates to one over (0, inf).
    """
    _check_exponent(beta, upper_open=True)
    if not r > 0:
        raise DomainError(f"rate must be positive, got r={r}")
    rb = r**beta
    return (
        math.sin(beta * math.pi)
        * r ** (beta - 1.0)
        / (math.pi * (rb * rb + 2.0 * rb * math.cos(beta * math.pi) + 1.0))
    )


def _check_exponent(beta: float, upper_open: bool) -> None:
    ok = 0.0 < beta < 1.0 if upper_open else 0.0 < beta <= 1.0
    if not ok:
        bound = ")" if upper_open else "]"
        raise DomainError(f"exponent beta must lie in (0, 1{bound}, got {beta}")


def _check_growth(alpha: float, z: complex) -> None:
    lead = z ** (1.0 / alpha)
    if lead.real > MAX_EXPONENT:
        raise OverflowError(f"Mittag-Leffler growth exp({lead.real:.4g}) exceeds double range")


def _series_length(alpha: float, beta2: float, modulus: float, log_target: float) -> int:
    """Number of terms after which |z|^k / Gamma(a k + b) is below exp(log_target)
    and decreasing."""
    n = 32
    log_r = math.log(modulus)
    while True:
        k = np.array([n - 1, n], dtype=float)
        lm = k * log_r - gammaln(alpha * k + beta2)
        if lm[1] < log_target and lm[1] < lm[0]:
            return n + 1
        n *= 2
        if n > 1 << 22:
            raise OverflowError(f"series for |z|={modulus} does not terminate")


def _series(
    alpha: float, beta2: float, z: complex, real: bool, tol: float, extended_digits: int
) -> EvalResult:
    modulus = abs(z)
    if modulus == 0.0:
        return EvalResult(value=float(rgamma(beta2)), abs_error_bound=0.0, method_used="series")

    n = _series_length(alpha, beta2, modulus, math.log(tol) - 10.0)
    k = np.arange(n, dtype=float)
    log_mag = k * math.log(modulus) - gammaln(alpha * k + beta2)
    if real:
        signs = np.where(k % 2 == 1, -1.0, 1.0) if z.real < 0 else np.ones(n)
        terms = signs * np.exp(log_mag)
    else:
        terms = np.exp(log_mag + 1j * k * cmath.phase(z))
    value, rounding = compensated_sum(terms)
    bound = rounding + float(np.exp(log_mag[-1]))
    if bound <= tol:
        return EvalResult(value=value, abs_error_bound=bound, method_used="series")

    peak = float(log_mag.max()) / math.log(10.0)
    dps = digits_for(peak, max(extended_digits, int(-math.log10(tol)) + 5))
    logger.debug(
        "E_{%g,%g}(%s): double series bound %.3g, extended precision at %d digits",
        alpha, beta2, z, bound, dps,
    )
    return _series_extended(alpha, beta2, z, real, dps, n)


def _series_extended(
    alpha: float, beta2: float, z: complex, real: bool, dps: int, n_float: int
) -> EvalResult:
    with mp.workdps(dps):
        a = mp.mpf(alpha)
        b = mp.mpf(beta2)
        zm = mp.mpf(z.real) if real else mp.mpc(z)
        power = [mp.mpf(1)]

        def term(k: int):
            if k > 0:
                power[0] *= zm
            return power[0] * mp.rgamma(a * k + b)

        total, bound = mp_series(
            term, dps=dps, min_terms=n_float // 2, max_terms=4 * n_float + 100,
            what=f"E_{{{alpha},{beta2}}} series",
        )
        value: Number = float(total) if real else complex(total)
    return EvalResult(value=value, abs_error_bound=bound + 1e-17 * abs(value), method_used="series")


def _integral_negative(alpha: float, beta2: float, x: float) -> EvalResult:
    sin_b = math.sin(beta2 * math.pi)
    sin_ba = math.sin((beta2 - alpha) * math.pi)
    cos_a = math.cos(alpha * math.pi)
    expo = alpha - beta2

    def kernel(p: float) -> float:
        pa = p**alpha
        return math.exp(-p) * (pa * sin_b + x * sin_ba) / (pa * pa + 2.0 * x * pa * cos_a + x * x)

    what = f"E_{{{alpha},{beta2}}}(-{x}) integral"
    head, head_err = integrate_algebraic(kernel, 0.0, 1.0, expo, abs_tol=1e-15, what=what)
    peak = x ** (1.0 / alpha)
    points = [peak] if 1.0 < peak < 700.0 else None
    tail, tail_err = integrate(
        lambda p: p**expo * kernel(p), 1.0, np.inf, points=points, abs_tol=1e-15, what=what
    )
    value = (head + tail) / math.pi
    bound = (head_err + tail_err) / math.pi + 1e-15 * abs(value)
    return EvalResult(value=value, abs_error_bound=bound, method_used="integral")


def _asymptotic(alpha: float, beta2: float, x: float) -> EvalResult:
    terms = [
        (-1.0) ** (k + 1) * x ** (-k) * float(rgamma(beta2 - alpha * k))
        for k in range(1, ASYMPTOTIC_TERMS + 2)
    ]
    value = math.fsum(terms[:-1])
    bound = abs(terms[-1]) + x ** (-ASYMPTOTIC_TERMS - 1)
    return EvalResult(value=value, abs_error_bound=bound, method_used="asymptotic")


def _principal_poles(alpha: float, z: complex) -> List[complex]:
    """Solutions of s^alpha = z on the principal sheet |arg s| < pi."""
    radius = abs(z) ** (1.0 / alpha)
    arg = cmath.phase(z)
    poles = []
    j_max = int(alpha / 2.0) + 1
    for j in range(-j_max, j_max + 1):
        phase = (arg + 2.0 * math.pi * j) / alpha
        if abs(phase) < math.pi:
            poles.append(cmath.rect(radius, phase))
    return poles


def _contour(alpha: float, beta2: float, z: complex, real: bool, nodes: int) -> EvalResult:
    zm = mp.mpc(z)
    a = mp.mpf(alpha)
    b = mp.mpf(beta2)
    poles = _principal_poles(alpha, z)

    def transform(s):
        return mp.power(s, a - b) / (mp.power(s, a) - zm)

    def residues(m: int) -> List[complex]:
        return [
            (1.0 / alpha) * p ** (1.0 - beta2) * cmath.exp(p)
            for p in poles
            if outside_contour(p, 1.0, m)
        ]

    value, err = invert_laplace(
        transform, 1.0, nodes=nodes, tol=1e-9, residues=residues,
        what=f"E_{{{alpha},{beta2}}}({z}) contour",
    )
    result: Number = value.real if real else value
    return EvalResult(value=result, abs_error_bound=err, method_used="integral")


def _density_integral(beta: float, t: float) -> Tuple[float, float]:
    sin_b = math.sin(beta * math.pi)
    cos_b = math.cos(beta * math.pi)
    scale = t ** (-beta)

    # u = r t; the factor u^beta is split off near the origin
    def rest(u: float) -> float:
        rb = (u / t) ** beta
        return math.exp(-u) * scale * sin_b / (rb * rb + 2.0 * rb * cos_b + 1.0)

    edges = sorted({0.0, 1.0, t} if t != 1.0 else {0.0, 1.0})
    tol = {"abs_tol": 1e-15, "rel_tol": 1e-12, "what": f"Mittag-Leffler density integral at t={t}"}
    total, err = integrate_algebraic(rest, edges[0], edges[1], beta, **tol)
    for lo, hi in zip(edges[1:], [*edges[2:], np.inf]):
        piece, piece_err = integrate(lambda u: u**beta * rest(u), lo, hi, **tol)
        total += piece
        err += piece_err
    return total / (math.pi * t), err / (math.pi * t)


class MittagLefflerTable:
    """Interpolant of y -> E_{alpha,beta2}(-y) on y >= 0 for bulk evaluation.

    Only the completely monotone cases 0 < alpha < 1, alpha <= beta2 <= 1 are tabled;
    log E is splined against log y over 1e-8..1e8 with the series and the inverse power
    expansion outside.
    """

    LOG10_MIN = -8.0
    LOG10_MAX = 8.0
    PER_DECADE = 100

    def __init__(self, alpha: float, beta2: float):
        if not (0.0 < alpha < 1.0 and alpha <= beta2 <= 1.0):
            raise DomainError(f"no table for E_{{{alpha},{beta2}}}")
        self.alpha = alpha
        self.beta2 = beta2
        n = int((self.LOG10_MAX - self.LOG10_MIN) * self.PER_DECADE) + 1
        ys = np.logspace(self.LOG10_MIN, self.LOG10_MAX, n)
        values = np.array(
            [float(ml_two(alpha, beta2, -y, series_radius=1.0).value) for y in ys]
        )
        self._spline = CubicSpline(np.log(ys), np.log(values))
        self._y_min = ys[0]
        self._y_max = ys[-1]
        logger.debug("tabled E_{%g,%g}(-y) on %d nodes", alpha, beta2, n)

    def __call__(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        out = np.empty_like(y)
        low = y < self._y_min
        high = y > self._y_max
        mid = ~(low | high)
        a, b = self.alpha, self.beta2
        out[low] = rgamma(b) - y[low] * rgamma(a + b)
        out[mid] = np.exp(self._spline(np.log(y[mid])))
        if np.any(high):
            yh = y[high]
            acc = np.zeros_like(yh)
            for k in range(1, ASYMPTOTIC_TERMS + 1):
                acc += (-1.0) ** (k + 1) * yh ** (-k) * rgamma(b - a * k)
            out[high] = acc
        return out


@lru_cache(maxsize=32)
def ml_table(alpha: float, beta2: float = 1.0) -> MittagLefflerTable:
    """Shared table for E_{alpha,beta2}(-y); built once per parameter pair."""
    return MittagLefflerTable(alpha, beta2)


def ml_negative(alpha: float, beta2: float, y) -> np.ndarray:
    """Vectorized E_{alpha,beta2}(-y), y >= 0, for 0 < alpha <= 1.

    alpha = 1 with beta2 = 1 is the exponential; other supported cases go through the
    shared table.
    """
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise DomainError("ml_negative expects nonnegative y")
    if alpha == 1.0 and beta2 == 1.0:
        return np.exp(-y)
    return ml_table(alpha, beta2)(y)

