"""Renewal processes: simulation, counting numbers, thinning and counting laws."""

from __future__ import annotations

import math
from functools import partial
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import mpmath as mp
import numpy as np
from scipy.interpolate import CubicSpline
from scipy.stats import poisson

from fracwalk.config import Config, get_config
from fracwalk.errors import BudgetError, DomainError, RangeError, TruncationError
from fracwalk.log import get_logger
from fracwalk.numerics import integrate_algebraic, invert_laplace
from fracwalk.schemas import GapRow, RenewalPath, ThinningConfig, WaitingLaw
from fracwalk.special.mittag_leffler import ml_negative, ml_survival
from fracwalk.variates import RngStream, run_batches, sample_waiting

logger = get_logger(__name__)

MAX_EVENTS = 10_000_000
CHUNK_ELEMENTS = 1 << 22
PMF_TAIL = 1e-6
PMF_MAX_K = 10_000


def simulate_renewal(
    law: WaitingLaw, horizon: float, rng: RngStream, max_events: int = MAX_EVENTS
) -> RenewalPath:
    """Simulate the event times of one renewal path on [0, horizon].

    Raises:
        DomainError: for a negative horizon
        BudgetError: if more than ``max_events`` events are needed
    """
    if horizon < 0:
        raise DomainError(f"horizon must be nonnegative, got {horizon}")
    chunks: List[np.ndarray] = []
    last = 0.0
    n_events = 0
    size = 64
    while True:
        times = last + np.cumsum(sample_waiting(law, rng, size=size))
        chunks.append(times)
        n_events += size
        last = float(times[-1])
        if last > horizon:
            break
        if n_events > max_events:
            raise BudgetError(f"renewal path needs more than {max_events} events")
        size = min(2 * size, 1 << 16)
    all_times = np.concatenate(chunks)
    n_kept = int(np.searchsorted(all_times, horizon, side="right"))
    return RenewalPath(
        event_times=all_times[:n_kept],
        law=law,
        horizon=horizon,
        overhang=float(all_times[n_kept]),
    )


def counting_number(path: RenewalPath, t: float) -> int:
    """N(t) = max{k : t_k <= t}, right-continuous with N(0) = 0.

    Raises:
        RangeError: if t lies outside [0, horizon]
    """
    if t < 0 or t > path.horizon:
        raise RangeError(f"t={t} outside the observed range [0, {path.horizon}]")
    return int(np.searchsorted(path.event_times, t, side="right"))


def thin_path(path: RenewalPath, cfg: ThinningConfig, rng: RngStream) -> RenewalPath:
    """Keep each event independently with probability q and rescale times by tau.

    The overhang is dropped, since the first event beyond the horizon may itself be
    deleted.
    """
    keep = rng.bernoulli(cfg.q, size=path.n_events)
    return RenewalPath(
        event_times=path.event_times[keep] * cfg.tau,
        law=path.law,
        horizon=path.horizon * cfg.tau,
        thinned_by=[*path.thinned_by, cfg],
    )


def thinned_laplace(law: WaitingLaw, q: float, tau: float, s):
    """Transform q f(tau s) / (1 - (1 - q) f(tau s)) of the thinned, rescaled law.

    Written as q f / (c + q f) with c = 1 - f(tau s), so no difference of nearly equal
    numbers is formed.

    Raises:
        DomainError: for q outside (0, 1] or tau <= 0
        QuadratureError: if the transform of the law needs quadrature and it fails
    """
    if not 0.0 < q <= 1.0:
        raise DomainError(f"keep probability must lie in (0, 1], got {q}")
    if not tau > 0:
        raise DomainError(f"time scale must be positive, got {tau}")
    c = law.laplace_complement(tau * s)
    f = 1.0 - c
    return q * f / (c + q * f)


def thinning_limit_curve(
    law: WaitingLaw, s_grid: Sequence[float], tau_seq: Sequence[float]
) -> List[GapRow]:
    """Sup over ``s_grid`` of |g_(q,tau)(s) - 1/(1 + s^beta)| with q = lambda tau^beta.

    Raises:
        DomainError: if ``tau_seq`` is not decreasing or some tau gives q > 1
    """
    if any(b >= a for a, b in zip(tau_seq, tau_seq[1:])):
        raise DomainError("tau_seq must be strictly decreasing")
    rows = []
    for tau in tau_seq:
        cfg = ThinningConfig.scaled(law, tau)
        gaps = [
            abs(thinned_laplace(law, cfg.q, tau, s) - 1.0 / (1.0 + s**law.beta)) for s in s_grid
        ]
        worst = int(np.argmax(gaps))
        rows.append(GapRow(scale=tau, q=cfg.q, s=s_grid[worst], deviation=gaps[worst]))
        logger.debug("thinning tau=%g q=%.4g: deviation %.3g", tau, cfg.q, gaps[worst])
    return rows


def _check_pmf_args(beta: float, t: float, k: int) -> None:
    if not 0.0 < beta <= 1.0:
        raise DomainError(f"exponent must lie in (0, 1], got {beta}")
    if not t > 0:
        raise DomainError(f"time must be positive, got {t}")
    if k < 0:
        raise DomainError(f"count must be nonnegative, got {k}")


def counting_pmf(beta: float, t: float, k: int, nodes: int = 48) -> float:
    """P(N(t) = k) for the Mittag-Leffler renewal process.

    Inverts s^(beta-1) / (1 + s^beta)^(k+1) on the Talbot contour; beta = 1 is the
    Poisson law and k = 0 the survival E_beta(-t^beta).

    Raises:
        InversionError: if node doubling disagrees beyond tolerance
    """
    _check_pmf_args(beta, t, k)
    if beta == 1.0:
        return float(poisson.pmf(k, t))
    if k == 0:
        return ml_survival(beta, t)
    b = mp.mpf(beta)

    def transform(s):
        sb = mp.power(s, b)
        return sb / (s * mp.power(1 + sb, k + 1))

    value, _ = invert_laplace(
        transform, t, nodes=nodes, tol=1e-9, what=f"counting pmf beta={beta} k={k}"
    )
    return min(max(value.real, 0.0), 1.0)


def counting_distribution(beta: float, t: float, tail: float = PMF_TAIL) -> np.ndarray:
    """P(N(t) = k) for k = 0, 1, ... until the remaining mass drops below ``tail``.

    Raises:
        TruncationError: if the mass is not exhausted within the term limit
    """
    probs: List[float] = []
    total = 0.0
    for k in range(PMF_MAX_K):
        p = counting_pmf(beta, t, k)
        probs.append(p)
        total += p
        # the pmf is eventually decreasing; stop past the mode once the mass is in
        if 1.0 - total < tail and (k == 0 or p < probs[-2]):
            return np.array(probs)
    raise TruncationError(f"counting law at t={t} keeps mass beyond k={PMF_MAX_K}")


def counting_pmf_convolution(beta: float, t: float, k: int, n_grid: int = 400) -> float:
    """P(N(t) = k) as the time-domain convolution phi^(*k) * Psi.

    Each convolution int_0^x phi(u) f(x - u) du is done by quadrature with the
    u^(beta-1) singularity of phi as an algebraic weight; intermediate convolutions are
    tabulated on ``n_grid`` points and splined.
    """
    _check_pmf_args(beta, t, k)

    def smooth_phi(u: float) -> float:
        return float(ml_negative(beta, beta, u**beta)) if u > 0 else 1.0 / math.gamma(beta)

    def convolve(f: Callable[[float], float], x: float) -> float:
        if x == 0.0:
            return 0.0
        value, _ = integrate_algebraic(
            lambda u: smooth_phi(u) * f(x - u), 0.0, x, beta - 1.0, abs_tol=1e-13,
            what=f"renewal convolution at x={x}",
        )
        return value

    current: Callable[[float], float] = partial(ml_survival, beta)
    if k == 0:
        return current(t)
    for _ in range(k - 1):
        grid = np.linspace(0.0, t, n_grid + 1)
        current = _scalar(CubicSpline(grid, [convolve(current, float(x)) for x in grid]))
    return convolve(current, t)


def _scalar(spline: CubicSpline) -> Callable[[float], float]:
    return lambda x: float(spline(x))


def iter_event_chunks(
    law: WaitingLaw,
    horizon: float,
    count: int,
    rng: RngStream,
    tau: float = 1.0,
    max_events: int = MAX_EVENTS,
) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Yield (rows, times) blocks of rescaled event times for ``count`` paths at once.

    ``times[i]`` continues path ``rows[i]`` where its previous block ended. A path
    leaves the iteration once an event passes ``horizon``.

    Raises:
        BudgetError: if a path needs more than ``max_events`` events
    """
    last = np.zeros(count)
    events = np.zeros(count, dtype=np.int64)
    rows = np.arange(count)
    width = 16
    while rows.size:
        w = tau * sample_waiting(law, rng, size=(rows.size, width))
        times = last[rows, None] + np.cumsum(w, axis=1)
        yield rows, times
        last[rows] = times[:, -1]
        events[rows] += width
        if events[rows].max() > max_events:
            raise BudgetError(f"a path needs more than {max_events} events before {horizon}")
        rows = rows[times[:, -1] <= horizon]
        if rows.size:
            width = min(2 * width, max(16, CHUNK_ELEMENTS // rows.size))


def count_block(
    law: WaitingLaw,
    times: Sequence[float],
    count: int,
    rng: RngStream,
    tau: float = 1.0,
    q: float = 1.0,
    max_events: int = MAX_EVENTS,
) -> np.ndarray:
    """Counting numbers N(t) at ``times`` for ``count`` paths, shape (count, len(times)).

    With q < 1 each event is kept with probability q, so the counts are those of the
    thinned process.
    """
    obs = np.asarray(times, dtype=float)
    counts = np.zeros((count, obs.size), dtype=np.int64)
    for rows, block in iter_event_chunks(law, obs[-1], count, rng, tau, max_events):
        weight = rng.bernoulli(q, size=block.shape) if q < 1.0 else None
        for j, t in enumerate(obs):
            hit = block <= t
            counts[rows, j] += (hit & weight).sum(axis=1) if weight is not None else hit.sum(1)
    return counts


class RenewalService:
    """Monte Carlo over many renewal paths, batched on the configured thread pool."""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or get_config()

    def counts(
        self,
        law: WaitingLaw,
        times: Sequence[float],
        n_paths: int,
        stream: RngStream,
        tau: float = 1.0,
        q: float = 1.0,
    ) -> np.ndarray:
        """Counting numbers at ``times`` for ``n_paths`` paths, one row per path."""
        blocks = run_batches(
            lambda n, child: count_block(
                law, times, n, child, tau=tau, q=q, max_events=self.config.max_events
            ),
            n_paths,
            stream,
            threads=self.config.threads,
        )
        return np.vstack(blocks)

    def empirical_pmf(
        self, law: WaitingLaw, t: float, n_paths: int, stream: RngStream
    ) -> np.ndarray:
        """Relative frequencies of N(t) = 0, 1, ..."""
        counts = self.counts(law, [t], n_paths, stream)[:, 0]
        return np.bincount(counts) / n_paths

    def mean_count(
        self, law: WaitingLaw, t: float, n_paths: int, stream: RngStream
    ) -> Tuple[float, float]:
        """Mean of N(t) and its standard error."""
        counts = self.counts(law, [t], n_paths, stream)[:, 0].astype(float)
        return float(counts.mean()), float(counts.std(ddof=1) / math.sqrt(n_paths))

    def simulate_paths(
        self, law: WaitingLaw, horizon: float, n_paths: int, stream: RngStream
    ) -> List[RenewalPath]:
        """Full event-time paths; path i uses ``stream.child(i)``."""
        return [
            simulate_renewal(law, horizon, stream.child(i), self.config.max_events)
            for i in range(n_paths)
        ]


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    """Total-variation distance between two pmfs on 0, 1, ..."""
    n = max(p.size, q.size)
    p = np.pad(p, (0, n - p.size))
    q = np.pad(q, (0, n - q.size))
    return 0.5 * float(np.abs(p - q).sum())
