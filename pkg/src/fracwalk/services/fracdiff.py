"""Solutions of the space-time fractional Cauchy problem.

The Fourier route inverts E_beta(-|k|^alpha t^beta); the subordination route integrates
the symmetric stable density against the drift solution t^-beta M_beta(r t^-beta). The
drift solution is also the Riemann-Liouville integral of order 1 - beta of the one-sided
stable density; that identity is not a separate code path here.
"""

from __future__ import annotations

import math
import warnings
from typing import List, Optional, Sequence, Tuple

import mpmath as mp
import numpy as np

from fracwalk.config import Config, get_config
from fracwalk.errors import DomainError, NegativityWarning, RangeError
from fracwalk.log import get_logger
from fracwalk.numerics import cosine_transform, integrate, invert_laplace
from fracwalk.schemas import (
    EmpiricalField,
    FracDiffProblem,
    GapRow,
    SubordinationPair,
    VarianceEstimate,
    VarianceResult,
)
from fracwalk.services.ctrw import empirical_density, variance_estimate
from fracwalk.special import (
    ml_negative,
    ml_one,
    mwright,
    one_sided_stable_density,
    stable_table,
    wright_table,
)
from fracwalk.special.wright import Z_MAX, mwright_integral
from fracwalk.variates import RngStream, run_batches, sample_one_sided_stable, sample_sym_stable

logger = get_logger(__name__)

QUAD_TOL = 1e-10
NEGATIVITY_TOL = 1e-8

ROUTES = ("fourier", "subordination", "mc")


def _decay(beta: float, y):
    """E_beta(-y) for y >= 0, vectorized."""
    y = np.asarray(y, dtype=float)
    if beta == 1.0:
        return np.exp(-y)
    return ml_negative(beta, 1.0, y)


def char_function(p: FracDiffProblem, kappa: float) -> float:
    """u(k, t) = E_beta(-|k|^alpha t^beta); exp(-|k|^alpha t) when beta = 1."""
    if kappa == 0.0:
        return 1.0
    y = abs(kappa) ** p.alpha * p.t**p.beta
    if p.beta == 1.0:
        return math.exp(-y)
    value = float(ml_one(p.beta, -y).value)
    return min(max(value, 0.0), 1.0)


def transform_residual(p: FracDiffProblem, kappa: float, s: float) -> float:
    """|s^beta u - s^(beta-1) + |k|^alpha u| for u = s^(beta-1) / (|k|^alpha + s^beta)."""
    if not s > 0:
        raise DomainError(f"Laplace variable must be positive, got {s}")
    u = s ** (p.beta - 1.0) / (abs(kappa) ** p.alpha + s**p.beta)
    return abs(s ** (p.beta - 1.0) * (s * u - 1.0) + abs(kappa) ** p.alpha * u)


def _check_negativity(values: np.ndarray, route: str) -> None:
    low = float(values.min()) if values.size else 0.0
    if low < -10.0 * NEGATIVITY_TOL:
        warnings.warn(
            f"{route} density dips to {low:.3g} below zero", NegativityWarning, stacklevel=3
        )
        logger.warning("%s density dips to %.3g", route, low)


def density_fourier(p: FracDiffProblem, x_grid: Sequence[float]) -> np.ndarray:
    """u(x, t) = (1/pi) int_0^inf cos(k x) E_beta(-k^alpha t^beta) dk.

    beta = 1 short-circuits to the symmetric stable density of scale t, which is the
    Gaussian for alpha = 2 and the Cauchy law for alpha = 1.

    Raises:
        QuadratureError: if an inversion does not converge
    """
    x = np.asarray(x_grid, dtype=float)
    if p.beta == 1.0:
        return stable_table(p.alpha)(x, p.t)
    tb = p.t**p.beta
    alpha, beta = p.alpha, p.beta

    def integrand(k: float) -> float:
        return float(_decay(beta, np.array([k**alpha * tb]))[0])

    values = np.empty_like(x)
    # the density is even; each |x| is inverted once
    cache = {}
    for i, xi in enumerate(np.abs(x)):
        if xi not in cache:
            value, _ = cosine_transform(
                integrand, float(xi), abs_tol=QUAD_TOL,
                what=f"Fourier density alpha={alpha} beta={beta} x={xi:g}",
            )
            cache[xi] = value / math.pi
        values[i] = cache[xi]
    _check_negativity(values, "Fourier")
    return values


def subordinator_density(beta: float, r: float, t: float) -> float:
    """Drift solution q0(r, t) = t^-beta M_beta(r t^-beta), a density in r >= 0.

    Arguments beyond the M-Wright series range go to its integral representation.
    """
    _check_subordinator(beta, r, t)
    z = r * t ** (-beta)
    m = mwright(beta, z) if z <= Z_MAX else mwright_integral(beta, z)
    return t ** (-beta) * m


def subordinator_density_stable_form(beta: float, r: float, t: float) -> float:
    """q0(r, t) = (t / beta) r^(-1-1/beta) L_beta(t r^(-1/beta)), r > 0.

    L_beta is evaluated by its own integral representation, independent of the M-Wright
    evaluator.
    """
    _check_subordinator(beta, r, t)
    if r == 0.0:
        raise DomainError("the stable form of the drift solution needs r > 0")
    return (
        t / beta * r ** (-1.0 - 1.0 / beta)
        * one_sided_stable_density(beta, t * r ** (-1.0 / beta), method="integral")
    )


def subordinator_char_function(beta: float, kappa: float, t: float) -> complex:
    """int_0^inf exp(i k r) q0(r, t) dr = E_beta(i k t^beta)."""
    _check_subordinator(beta, 0.0, t)
    return complex(ml_one(beta, 1j * kappa * t**beta).value)


def _check_subordinator(beta: float, r: float, t: float) -> None:
    if not 0.0 < beta < 1.0:
        raise DomainError(f"subordinator exponent must lie in (0, 1), got {beta}")
    if r < 0:
        raise DomainError(f"operational time must be nonnegative, got {r}")
    if not t > 0:
        raise DomainError(f"physical time must be positive, got {t}")


def density_subordination(p: FracDiffProblem, x_grid: Sequence[float]) -> np.ndarray:
    """u(x, t) = int_0^inf f_alpha(x, t^beta z) M_beta(z) dz.

    The substitution r = t^beta z puts the drift solution in its similarity variable;
    z is cut where M_beta drops below 1e-13. beta = 1 delegates to f_alpha(x, t).

    Raises:
        QuadratureError: if an integral does not converge
    """
    x = np.asarray(x_grid, dtype=float)
    stable = stable_table(p.alpha)
    if p.beta == 1.0:
        return stable(x, p.t)
    wright = wright_table(p.beta)
    tb = p.t**p.beta

    def integrand(z: float, xi: float) -> float:
        if z == 0.0:
            return 0.0
        return float(stable(np.array([xi]), tb * z)[0]) * float(wright(z))

    values = np.empty_like(x)
    cache = {}
    for i, xi in enumerate(np.abs(x)):
        if xi not in cache:
            # f_alpha(x, r) changes on the scale r ~ |x|^alpha
            knee = xi**p.alpha / tb
            points = [knee] if 0.0 < knee < wright.z_cut else None
            value, _ = integrate(
                lambda z, xi=float(xi): integrand(z, xi), 0.0, wright.z_cut,
                points=points, abs_tol=QUAD_TOL, rel_tol=1e-9, limit=400,
                what=f"subordination integral alpha={p.alpha} beta={p.beta} x={xi:g}",
            )
            cache[xi] = value
        values[i] = cache[xi]
    _check_negativity(values, "subordination")
    return values


def variance(p: FracDiffProblem) -> VarianceResult:
    """2 t^beta / Gamma(1 + beta) for alpha = 2; infinite for alpha < 2."""
    if p.alpha < 2.0:
        return VarianceResult(value=float("inf"), infinite=True)
    return VarianceResult(value=2.0 * p.t**p.beta / math.gamma(1.0 + p.beta))


def subordination_paths(
    p: FracDiffProblem, dt_star: float, n_steps: int, n_paths: int, rng: RngStream
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Grid paths of the physical time t(t_*) and the position y(t_*).

    Increments are dt_*^(1/beta) times one-sided stable variates and dt_*^(1/alpha) times
    symmetric stable variates. beta = 1 gives t = t_* exactly.

    Returns:
        (t_star of shape (n_steps + 1,), times and positions of shape
        (n_paths, n_steps + 1)); every path starts at the origin
    """
    if not dt_star > 0:
        raise DomainError(f"operational step must be positive, got {dt_star}")
    if n_steps < 1:
        raise DomainError(f"need at least one step, got {n_steps}")
    t_star = dt_star * np.arange(n_steps + 1)
    shape = (n_paths, n_steps)
    if p.beta == 1.0:
        times = np.broadcast_to(t_star, (n_paths, n_steps + 1)).copy()
    else:
        steps = dt_star ** (1.0 / p.beta) * sample_one_sided_stable(p.beta, rng, size=shape)
        times = np.concatenate([np.zeros((n_paths, 1)), np.cumsum(steps, axis=1)], axis=1)
    moves = dt_star ** (1.0 / p.alpha) * sample_sym_stable(p.alpha, rng, size=shape)
    positions = np.concatenate([np.zeros((n_paths, 1)), np.cumsum(moves, axis=1)], axis=1)
    return t_star, times, positions


def simulate_parametric_subordination(
    p: FracDiffProblem, dt_star: float, n_steps: int, rng: RngStream
) -> List[SubordinationPair]:
    """One path of the parametric representation t = t(t_*), x = y(t_*)."""
    t_star, times, positions = subordination_paths(p, dt_star, n_steps, 1, rng)
    return [
        SubordinationPair(operational_time=float(r), physical_time=float(t), position=float(x))
        for r, t, x in zip(t_star, times[0], positions[0])
    ]


def operational_time_at(times: np.ndarray, dt_star: float, t: float) -> np.ndarray:
    """t_*(t) = inf{t_* : t(t_*) > t} read off each grid path.

    Raises:
        RangeError: if some path never passes t
    """
    passed = times > t
    if not passed[:, -1].all():
        raise RangeError(f"{int((~passed[:, -1]).sum())} paths end before t={t}")
    return dt_star * np.argmax(passed, axis=1)


def sample_subordinated(
    p: FracDiffProblem, rng: RngStream, size: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Exact draws of (t_*(t), x(t)) at the problem's time.

    P(t_*(t) > r) = P(r^(1/beta) S < t) gives t_*(t) = (t / S)^beta for a one-sided stable
    S; the position is then t_*^(1/alpha) times a symmetric stable variate.
    """
    if p.beta == 1.0:
        r = np.full(size, p.t)
    else:
        r = (p.t / sample_one_sided_stable(p.beta, rng, size=size)) ** p.beta
    x = r ** (1.0 / p.alpha) * sample_sym_stable(p.alpha, rng, size=size)
    return r, x


def drift_solution_transform(beta: float, r: float, s: float) -> float:
    """Laplace transform in t of the drift solution, s^(beta-1) exp(-r s^beta); 0 for r < 0."""
    if not s > 0:
        raise DomainError(f"Laplace variable must be positive, got {s}")
    if r < 0:
        return 0.0
    return s ** (beta - 1.0) * math.exp(-r * s**beta)


def invert_drift_solution(beta: float, r: float, t: float, nodes: int = 48) -> float:
    """Invert s^(beta-1) exp(-r s^beta) at t on the Talbot contour.

    Raises:
        InversionError: if node doubling disagrees beyond 1e-9
    """
    if not 0.0 < beta < 1.0:
        raise DomainError(f"inversion needs beta in (0, 1), got {beta}")
    if r < 0:
        return 0.0
    b = mp.mpf(beta)
    rm = mp.mpf(r)

    def transform(s):
        return mp.power(s, b - 1) * mp.exp(-rm * mp.power(s, b))

    value, _ = invert_laplace(
        transform, t, nodes=nodes, tol=1e-9, what=f"drift solution beta={beta} r={r}"
    )
    return value.real


def fractional_poisson_drift_gap(
    beta: float, y: float, s: float, delta_seq: Sequence[float]
) -> List[GapRow]:
    """Gap between the delta-rescaled fractional Poisson law and the drift solution.

    In the Laplace variables (y for space, s for time) the rescaled counting law is
    s^(beta-1) / (s^beta + (1 - e^(-delta y)) / delta) and the limit is
    s^(beta-1) / (s^beta + y).
    """
    if any(b >= a for a, b in zip(delta_seq, delta_seq[1:])):
        raise DomainError("delta_seq must be strictly decreasing")
    limit = s ** (beta - 1.0) / (s**beta + y)
    rows = []
    for delta in delta_seq:
        rate = -math.expm1(-delta * y) / delta
        gap = abs(s ** (beta - 1.0) / (s**beta + rate) - limit)
        rows.append(GapRow(scale=delta, s=s, deviation=gap))
    return rows


def mwright_fourier_pair(beta: float, kappa: float) -> Tuple[float, float]:
    """(int_0^inf cos(k x) M_beta(x) dx, E_2beta(-k^2)), which agree."""
    table = wright_table(beta)
    value, _ = cosine_transform(
        lambda x: float(table(x)), kappa, abs_tol=1e-12, what=f"M-Wright cosine beta={beta}"
    )
    return value, float(ml_one(2.0 * beta, -(kappa**2)).value)


class FracDiffService:
    """Monte Carlo routes of the fractional diffusion, batched on the thread pool."""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or get_config()

    def sample(self, p: FracDiffProblem, n_paths: int, stream: RngStream) -> np.ndarray:
        """Positions x(t) of ``n_paths`` subordinated particles."""
        blocks = run_batches(
            lambda n, child: sample_subordinated(p, child, n)[1],
            n_paths,
            stream,
            threads=self.config.threads,
        )
        return np.concatenate(blocks)

    def density(
        self,
        p: FracDiffProblem,
        x_grid: Sequence[float],
        route: str = "fourier",
        n_paths: int = 100_000,
        stream: Optional[RngStream] = None,
    ) -> np.ndarray:
        """Density on ``x_grid`` by the chosen route.

        For ``mc`` the grid points are bin centers of equal width and the histogram is
        normalized over all samples.
        """
        if route == "fourier":
            return density_fourier(p, x_grid)
        if route == "subordination":
            return density_subordination(p, x_grid)
        if route == "mc":
            x = np.asarray(x_grid, dtype=float)
            if x.size < 2:
                raise DomainError("the mc route needs at least two grid points")
            width = x[1] - x[0]
            edges = np.concatenate([x - width / 2.0, [x[-1] + width / 2.0]])
            samples = self.sample(p, n_paths, stream or RngStream(self.config.seed))
            counts, _ = np.histogram(samples, bins=edges)
            return counts / (samples.size * width)
        raise DomainError(f"unknown density route {route!r}; use one of {ROUTES}")

    def histogram(
        self, p: FracDiffProblem, edges: Sequence[float], n_paths: int, stream: RngStream
    ) -> EmpiricalField:
        """Histogram of x(t) normalized over the samples inside ``edges``."""
        return empirical_density(self.sample(p, n_paths, stream), edges, p.t)

    def variance_scan(
        self, beta: float, times: Sequence[float], n_paths: int, stream: RngStream
    ) -> List[VarianceEstimate]:
        """Empirical second moments of the Gaussian-subordinated particle at each time."""
        out = []
        for i, t in enumerate(times):
            p = FracDiffProblem(alpha=2.0, beta=beta, t=t)
            x = self.sample(p, n_paths, stream.child(i))
            out.append(variance_estimate(x, t, 2.0, analytic=variance(p).value))
        return out
