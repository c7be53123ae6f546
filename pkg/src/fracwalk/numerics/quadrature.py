"""Adaptive quadrature wrappers over scipy.integrate.quad."""

from __future__ import annotations

import math
import warnings
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from fracwalk.errors import QuadratureError
from fracwalk.log import get_logger

logger = get_logger(__name__)

ABS_TOL = 1e-10
REL_TOL = 1e-10


def _quad(
    func: Callable[[float], float],
    a: float,
    b: float,
    what: str,
    accept: float,
    **kwargs,
) -> Tuple[float, float]:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, err = quad(func, a, b, **kwargs)[:2]
    if not math.isfinite(value):
        raise QuadratureError(f"{what}: non-finite result on [{a}, {b}]")
    if caught:
        # quad warns on roundoff even when the estimate is usable
        if err > accept:
            raise QuadratureError(
                f"{what}: no convergence on [{a}, {b}] (error estimate {err:.3g}): "
                f"{caught[0].message}"
            )
        logger.debug("%s: accepted with warning, error %.3g", what, err)
    return value, err


def integrate(
    func: Callable[[float], float],
    a: float,
    b: float,
    *,
    points: Optional[Sequence[float]] = None,
    abs_tol: float = ABS_TOL,
    rel_tol: float = REL_TOL,
    limit: int = 200,
    accept: float = 1e-7,
    what: str = "integral",
) -> Tuple[float, float]:
    """Integrate ``func`` over [a, b], b possibly infinite.

    Breakpoints are honoured on infinite ranges too by splitting the interval, which
    plain ``quad`` refuses to do.

    Returns:
        Tuple of (value, absolute error estimate)

    Raises:
        QuadratureError: if a piece fails and its error estimate exceeds ``accept``
    """
    cuts = sorted(p for p in (points or ()) if a < p < b)
    edges = [a, *cuts, b]
    total, total_err = 0.0, 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        value, err = _quad(
            func, lo, hi, what, accept, epsabs=abs_tol, epsrel=rel_tol, limit=limit
        )
        total += value
        total_err += err
    return total, total_err


def integrate_algebraic(
    func: Callable[[float], float],
    a: float,
    b: float,
    exponent: float,
    *,
    abs_tol: float = ABS_TOL,
    rel_tol: float = REL_TOL,
    accept: float = 1e-7,
    what: str = "integral",
) -> Tuple[float, float]:
    """Integrate ``(u - a)**exponent * func(u)`` over the finite interval [a, b]."""
    return _quad(
        func,
        a,
        b,
        what,
        accept,
        weight="alg",
        wvar=(exponent, 0.0),
        epsabs=abs_tol,
        epsrel=rel_tol,
        limit=200,
    )


def cosine_transform(
    func: Callable[[float], float],
    x: float,
    *,
    zeros: int = 40,
    abs_tol: float = ABS_TOL,
    accept: float = 1e-7,
    what: str = "cosine transform",
) -> Tuple[float, float]:
    """Compute the integral of ``func(k) * cos(k x)`` over k in [0, inf).

    The leading part is split at the zeros of cos(k x); the remaining tail goes to
    QUADPACK's Fourier integrator.
    """
    x = abs(x)
    if x == 0.0:
        return integrate(func, 0.0, np.inf, abs_tol=abs_tol, accept=accept, what=what)

    zero_points = [(j + 0.5) * math.pi / x for j in range(zeros)]
    head, head_err = integrate(
        lambda k: func(k) * math.cos(k * x),
        0.0,
        zero_points[-1],
        points=zero_points[:-1],
        abs_tol=abs_tol,
        accept=accept,
        what=what,
    )
    tail, tail_err = fourier_tail(
        func, zero_points[-1], x, abs_tol=abs_tol, accept=accept, what=what
    )
    return head + tail, head_err + tail_err


def fourier_tail(
    func: Callable[[float], float],
    a: float,
    omega: float,
    *,
    abs_tol: float = ABS_TOL,
    accept: float = 1e-7,
    what: str = "Fourier integral",
) -> Tuple[float, float]:
    """Compute the integral of ``func(u) * cos(omega u)`` over [a, inf) with QUADPACK's
    Fourier integrator."""
    return _quad(
        func, a, np.inf, what, accept, weight="cos", wvar=omega, epsabs=abs_tol, limlst=100
    )
