"""Continuous-time random walks: transform algebra, series solution and simulation.

Respeeding by a factor a <= 1 is realized on paths as thinning with keep probability
q = a on top of the time rescale tau; the two constructions share the transform
a f(tau s) / (1 - (1 - a) f(tau s)). Respeeding with a > 1 only exists in the transform
domain.
"""

from __future__ import annotations

import math
from typing import List, Optional, Sequence, Tuple

import mpmath as mp
import numpy as np
from scipy.stats import binom, norm, poisson

from fracwalk.config import Config, get_config
from fracwalk.errors import DomainError, TruncationError
from fracwalk.log import get_logger
from fracwalk.numerics import invert_laplace
from fracwalk.schemas import (
    CtrwConfig,
    EmpiricalField,
    GapRow,
    JumpLaw,
    ScaleState,
    VarianceEstimate,
    WaitingLaw,
)
from fracwalk.services.renewal import MAX_EVENTS, counting_pmf, iter_event_chunks
from fracwalk.special.stable import stable_table
from fracwalk.variates import RngStream, run_batches, sample_jump

logger = get_logger(__name__)

SERIES_TAIL = 1e-6
SERIES_MAX_TERMS = 5000
MIN_CHAR_PATHS = 1000
VARIANCE_BATCHES = 10
VARIANCE_SPREAD = 5.0


def _respeed_parts(law: WaitingLaw, tau: float, a: float, s) -> Tuple[complex, complex]:
    """(f_(tau,a)(s), 1 - f_(tau,a)(s)) from the complement c = 1 - f(tau s)."""
    if not tau > 0:
        raise DomainError(f"time scale must be positive, got {tau}")
    if not a > 0:
        raise DomainError(f"respeeding factor must be positive, got {a}")
    c = law.laplace_complement(tau * s)
    f = 1.0 - c
    den = c + a * f
    return a * f / den, c / den


def respeed_transform(law: WaitingLaw, tau: float, a: float, s):
    """f_(tau,a)(s) = a f(tau s) / (1 - (1 - a) f(tau s)) of the rescaled, respeeded law."""
    return _respeed_parts(law, tau, a, s)[0]


def memory_transform(law: WaitingLaw, s):
    """Memory function H(s) = (1 - f(s)) / (s f(s)); f = 1 / (1 + s H) inverts it."""
    c = law.laplace_complement(s)
    return c / (s * (1.0 - c))


def montroll_weiss(cfg: CtrwConfig, kappa: float, s):
    """Fourier-Laplace transform of the walk density.

    [(1 - f(s)) / s] / (1 - w(h k) f(s)) with f the rescaled, respeeded waiting-time
    transform; the denominator is formed as (1 - f) + f (1 - w).
    """
    f, c = _respeed_parts(cfg.waiting, cfg.scale.tau, cfg.scale.a, s)
    wc = cfg.jump.fourier_complement(cfg.scale.h * kappa)[()]
    if wc == 0:
        return 1.0 / s
    return (c / s) / (c + f * wc)


def montroll_weiss_partial(cfg: CtrwConfig, kappa: float, s, n_terms: int):
    """Partial sum over n < n_terms of [(1 - f) / s] (w f)^n."""
    f, c = _respeed_parts(cfg.waiting, cfg.scale.tau, cfg.scale.a, s)
    ratio = cfg.jump.fourier(cfg.scale.h * kappa)[()] * f
    terms = ratio ** np.arange(n_terms)
    return (c / s) * terms.sum()


def kolmogorov_feller_residual(cfg: CtrwConfig, kappa: float, s) -> float:
    """|H(s) [s p - 1] - (w(h k) - 1) p| for the Montroll-Weiss transform p."""
    f, c = _respeed_parts(cfg.waiting, cfg.scale.tau, cfg.scale.a, s)
    memory = c / (s * f)
    p = montroll_weiss(cfg, kappa, s)
    wc = cfg.jump.fourier_complement(cfg.scale.h * kappa)[()]
    return float(abs(memory * (s * p - 1.0) + wc * p))


def limit_transform(alpha: float, beta: float, kappa: float, s):
    """s^(beta-1) / (|k|^alpha + s^beta), the Fourier-Laplace fractional diffusion."""
    return s ** (beta - 1.0) / (abs(kappa) ** alpha + s**beta)


def diffusion_limit_gap(
    cfg: CtrwConfig, kappa: float, s: float, h_seq: Sequence[float]
) -> List[GapRow]:
    """Gap between the well-scaled walk transform and the diffusion limit along h_seq.

    For each h the time scale is tau = ((mu / lambda) h^alpha)^(1/beta).
    """
    if any(b >= a for a, b in zip(h_seq, h_seq[1:])):
        raise DomainError("h_seq must be strictly decreasing")
    alpha, beta = cfg.jump.alpha, cfg.waiting.beta
    target = limit_transform(alpha, beta, kappa, s)
    rows = []
    for h in h_seq:
        scale = ScaleState.well_scaled_for(cfg.waiting, cfg.jump, h)
        scaled = cfg.model_copy(update={"scale": scale})
        gap = abs(montroll_weiss(scaled, kappa, s) - target)
        rows.append(GapRow(scale=h, s=s, kappa=kappa, deviation=float(gap)))
        logger.debug("h=%g tau=%.4g: transform gap %.3g", h, scale.tau, gap)
    return rows


def renewal_pmf(law: WaitingLaw, tau: float, a: float, t: float, n: int, nodes: int = 48) -> float:
    """P(N(t) = n) for the renewal process with waiting transform f_(tau,a).

    Exponential and Mittag-Leffler laws stay in their family (rate a m / tau, time scale
    tau / a^(1/beta)); other laws invert Psi_(tau,a)(s) f_(tau,a)(s)^n on the contour.
    """
    if t == 0.0:
        return 1.0 if n == 0 else 0.0
    if law.is_exponential:
        rate = law.rate if law.kind == "exponential" else 1.0
        return float(poisson.pmf(n, a * rate * t / tau))
    if law.kind == "mittag_leffler":
        return counting_pmf(law.beta, t * a ** (1.0 / law.beta) / tau, n)

    def transform(s):
        f = law.laplace_mp(tau * s)
        fa = a * f / (1 - (1 - a) * f)
        return (1 - fa) / s * mp.power(fa, n)

    value, _ = invert_laplace(transform, t, nodes=nodes, tol=1e-8, what=f"renewal pmf n={n}")
    return min(max(value.real, 0.0), 1.0)


def _renewal_weights(cfg: CtrwConfig, t: float, n_max: int, tail: float) -> np.ndarray:
    scale = cfg.scale
    weights: List[float] = []
    total = 0.0
    for n in range(n_max + 1):
        v = renewal_pmf(cfg.waiting, scale.tau, scale.a, t, n)
        weights.append(v)
        total += v
        if 1.0 - total < tail and (n == 0 or v < weights[-2]):
            return np.array(weights)
    raise TruncationError(
        f"series at t={t} drops mass {1.0 - total:.3g} after {n_max} terms (allowed {tail:g})"
    )


def series_solution(
    cfg: CtrwConfig,
    x_grid: Sequence[float],
    t: float,
    n_max: int = SERIES_MAX_TERMS,
    tail: float = SERIES_TAIL,
) -> np.ndarray:
    """p(x, t) = sum_n v_n(t) w_n(x), truncated once the dropped mass is below ``tail``.

    Lattice jumps (two_point, unit_drift) return probabilities of the sites x = k h, zero
    off the lattice. Continuous jumps return a density on the grid; the atom v_0(t) = Psi(t)
    of walkers that have not jumped is spread over the grid cell holding x = 0.

    Raises:
        TruncationError: if ``n_max`` terms leave more than ``tail`` mass
    """
    x = np.asarray(x_grid, dtype=float)
    v = _renewal_weights(cfg, t, n_max, tail) if t > 0 else np.array([1.0])
    h = cfg.scale.h
    jump = cfg.jump
    n = np.arange(v.size)

    if jump.lattice:
        k = np.rint(x / h)
        on_lattice = np.isclose(x, k * h, rtol=0.0, atol=1e-9 * h)
        out = np.zeros_like(x)
        for i in np.nonzero(on_lattice)[0]:
            if jump.kind == "unit_drift":
                site = int(k[i])
                out[i] = v[site] if 0 <= site < v.size else 0.0
            else:
                steps = (n + k[i]) / 2.0
                parity = (steps == np.floor(steps)) & (np.abs(k[i]) <= n)
                out[i] = float(np.sum(np.where(parity, v * binom.pmf(steps, n, 0.5), 0.0)))
        return out

    if jump.kind == "gaussian" or (jump.kind == "sym_stable" and jump.alpha == 2.0):
        sd = h * math.sqrt(jump.sigma2)
        terms = [v[j] * norm.pdf(x, scale=sd * math.sqrt(j)) for j in range(1, v.size)]
        jumped = np.sum(terms, axis=0) if terms else np.zeros_like(x)
    elif jump.kind == "sym_stable":
        table = stable_table(jump.alpha)
        terms = [v[j] * table(x, j * h**jump.alpha) for j in range(1, v.size)]
        jumped = np.sum(terms, axis=0) if terms else np.zeros_like(x)
    else:
        jumped = _lattice_fourier_density(jump, h, v, x)
    return jumped + _origin_atom(x, float(v[0]))


def _origin_atom(x: np.ndarray, mass: float) -> np.ndarray:
    """``mass`` spread over the grid cell that holds x = 0; zero if no cell does."""
    out = np.zeros_like(x)
    if x.size < 2:
        return out
    order = np.argsort(x)
    xs = x[order]
    j = int(np.argmin(np.abs(xs)))
    lo, hi = max(j - 1, 0), min(j + 1, xs.size - 1)
    width = (xs[hi] - xs[lo]) / (hi - lo)
    if width > 0 and abs(xs[j]) <= 0.5 * width:
        out[order[j]] = mass / width
    return out


def _lattice_fourier_density(
    jump: JumpLaw, h: float, v: np.ndarray, x: np.ndarray, per_jump_tail: float = 1e-6
) -> np.ndarray:
    """Density of sum_(n>=1) v_n w_n by powers of the DFT of binned jump masses."""
    scale = h * jump.theta
    extent = max(scale * per_jump_tail ** (-1.0 / jump.alpha), 2.0 * float(np.abs(x).max()))
    dx = scale / 16.0
    size = 1 << int(math.ceil(math.log2(2.0 * extent / dx)))
    if size > 1 << 22:
        size = 1 << 22
        dx = 2.0 * extent / size
    centers = (np.arange(size) - size // 2) * dx

    def cdf(y: np.ndarray) -> np.ndarray:
        tail = 0.5 * (np.maximum(np.abs(y), scale) / scale) ** (-jump.alpha)
        return np.where(y >= 0.0, 1.0 - tail, tail)

    masses = cdf(centers + dx / 2.0) - cdf(centers - dx / 2.0)
    spectrum = np.fft.fft(np.fft.ifftshift(masses))
    total = np.zeros_like(spectrum)
    power = np.ones_like(spectrum)
    for j in range(1, v.size):
        power = power * spectrum
        total += v[j] * power
    density = np.fft.fftshift(np.fft.ifft(total)).real / dx
    return np.interp(x, centers, density)


def respeed_keep_probability(a: float) -> float:
    """Keep probability realizing respeeding factor a on paths.

    Raises:
        DomainError: for a > 1, which has no thinning counterpart
    """
    if not 0.0 < a <= 1.0:
        raise DomainError(f"pathwise respeeding needs 0 < a <= 1, got {a}")
    return a


def walk_block(
    cfg: CtrwConfig, count: int, rng: RngStream, max_events: int = MAX_EVENTS
) -> np.ndarray:
    """Positions of ``count`` independent walks at the observation times.

    Paths start at 0, jump by h X_n at the rescaled event instants and are
    right-continuous. Returns an array of shape (count, len(observation_times)).
    """
    obs = np.asarray(cfg.observation_times, dtype=float)
    positions = np.zeros((count, obs.size))
    if obs[-1] == 0.0:
        return positions
    q = respeed_keep_probability(cfg.scale.a)
    h = cfg.scale.h
    offset = np.zeros(count)
    for rows, block in iter_event_chunks(
        cfg.waiting, obs[-1], count, rng, tau=cfg.scale.tau, max_events=max_events
    ):
        jumps = h * sample_jump(cfg.jump, rng, size=block.shape)
        if q < 1.0:
            jumps = jumps * rng.bernoulli(q, size=block.shape)
        path = offset[rows, None] + np.cumsum(jumps, axis=1)
        for j, t in enumerate(obs):
            reached = (block <= t).sum(axis=1)
            hit = reached > 0
            positions[rows[hit], j] = path[hit, reached[hit] - 1]
        offset[rows] = path[:, -1]
    return positions


def simulate_ctrw(
    cfg: CtrwConfig, rng: RngStream, threads: int = 1, max_events: int = MAX_EVENTS
) -> np.ndarray:
    """Positions of ``cfg.n_paths`` walks, shape (n_paths, len(observation_times)).

    Raises:
        BudgetError: if a path needs more than ``max_events`` events
        DomainError: for a respeeding factor a > 1
    """
    blocks = run_batches(
        lambda n, child: walk_block(cfg, n, child, max_events), cfg.n_paths, rng, threads
    )
    return np.vstack(blocks)


def empirical_char_function(
    positions: np.ndarray, kappa_grid: Sequence[float], t: float
) -> EmpiricalField:
    """Estimate of E cos(k x(t)) with the sample standard error per wavenumber.

    Raises:
        DomainError: for fewer than 1000 paths
    """
    x = np.asarray(positions, dtype=float)
    if x.size < MIN_CHAR_PATHS:
        raise DomainError(f"need at least {MIN_CHAR_PATHS} paths, got {x.size}")
    values, errors = [], []
    for k in kappa_grid:
        c = np.cos(k * x)
        values.append(float(c.mean()))
        errors.append(float(c.std(ddof=1) / math.sqrt(x.size)))
    return EmpiricalField(
        kind="char_function",
        grid=[float(k) for k in kappa_grid],
        values=values,
        stderr=errors,
        n_samples=x.size,
        t=t,
    )


def empirical_density(positions: np.ndarray, edges: Sequence[float], t: float) -> EmpiricalField:
    """Histogram density of the positions, normalized over the samples inside ``edges``."""
    x = np.asarray(positions, dtype=float)
    counts, edges = np.histogram(x, bins=np.asarray(edges, dtype=float))
    inside = int(counts.sum())
    widths = np.diff(edges)
    values = counts / (inside * widths) if inside else np.zeros_like(widths)
    return EmpiricalField(
        kind="density_histogram",
        grid=edges.tolist(),
        values=values.tolist(),
        n_samples=x.size,
        t=t,
        coverage=inside / x.size,
    )


def variance_estimate(
    positions: np.ndarray, t: float, alpha: float, analytic: Optional[float] = None
) -> VarianceEstimate:
    """Second moment of the positions with a heavy-tail diagnostic.

    Jumps with alpha < 2 have infinite variance and are reported as non-convergent. For
    the rest, the sample is split into batches; batch means of x^2 that spread by more
    than a factor five also flag non-convergence.
    """
    x2 = np.asarray(positions, dtype=float) ** 2
    if alpha < 2.0:
        return VarianceEstimate(
            t=t, converged=False, reason=f"heavy-tailed: infinite variance for alpha={alpha}"
        )
    batches = np.array_split(x2, VARIANCE_BATCHES)
    means = np.array([b.mean() for b in batches if b.size])
    value = float(x2.mean())
    stderr = float(x2.std(ddof=1) / math.sqrt(x2.size)) if x2.size > 1 else None
    low, high = float(means.min()), float(means.max())
    if low > 0.0 and high / low > VARIANCE_SPREAD:
        logger.warning("batch means of x^2 at t=%g spread by %.3g", t, high / low)
        return VarianceEstimate(
            t=t, converged=False, reason=f"non-convergent: batch means spread {high / low:.3g}x"
        )
    return VarianceEstimate(t=t, value=value, stderr=stderr, analytic=analytic)


def loglog_slope(times: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of log(values) against log(times)."""
    return float(np.polyfit(np.log(times), np.log(values), 1)[0])


class CtrwService:
    """Walk simulations on the configured thread pool and event budget."""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or get_config()

    def simulate(self, cfg: CtrwConfig, stream: RngStream) -> np.ndarray:
        logger.info(
            "simulating %d walks to t=%g (h=%g, tau=%.4g, a=%g)",
            cfg.n_paths, cfg.observation_times[-1], cfg.scale.h, cfg.scale.tau, cfg.scale.a,
        )
        return simulate_ctrw(cfg, stream, self.config.threads, self.config.max_events)

    def char_function(
        self, cfg: CtrwConfig, kappa_grid: Sequence[float], stream: RngStream
    ) -> List[EmpiricalField]:
        """Empirical characteristic function at every observation time."""
        positions = self.simulate(cfg, stream)
        return [
            empirical_char_function(positions[:, j], kappa_grid, t)
            for j, t in enumerate(cfg.observation_times)
        ]

    def variance_scan(self, cfg: CtrwConfig, stream: RngStream) -> List[VarianceEstimate]:
        """Variance estimates at every observation time, with the diffusion-limit value
        2 t^beta / Gamma(1 + beta) attached for Gaussian-type jumps."""
        positions = self.simulate(cfg, stream)
        beta = cfg.waiting.beta
        out = []
        for j, t in enumerate(cfg.observation_times):
            analytic = 2.0 * t**beta / math.gamma(1.0 + beta) if cfg.jump.alpha == 2.0 else None
            out.append(variance_estimate(positions[:, j], t, cfg.jump.alpha, analytic))
        return out
