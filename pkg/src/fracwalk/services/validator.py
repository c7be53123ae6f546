"""Named cross-route checks run by ``fracwalk validate``.

Each check returns a CheckResult. Quick checks are deterministic or use small samples;
the full suite adds the Monte Carlo checks at desk scale.
"""

from __future__ import annotations

import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath as mp
import numpy as np
from scipy.stats import poisson

from fracwalk.config import Config, get_config
from fracwalk.errors import DomainError, FracwalkError
from fracwalk.log import get_logger
from fracwalk.numerics import integrate, integrate_algebraic
from fracwalk.schemas import (
    CheckResult,
    CtrwConfig,
    FracDiffProblem,
    JumpLaw,
    ScaleState,
    WaitingLaw,
)
from fracwalk.services.ctrw import (
    CtrwService,
    diffusion_limit_gap,
    kolmogorov_feller_residual,
    loglog_slope,
    montroll_weiss,
    montroll_weiss_partial,
    respeed_transform,
)
from fracwalk.services.fracdiff import (
    FracDiffService,
    char_function,
    density_fourier,
    density_subordination,
    invert_drift_solution,
    mwright_fourier_pair,
    subordinator_density,
    subordinator_density_stable_form,
    transform_residual,
)
from fracwalk.services.renewal import (
    RenewalService,
    counting_distribution,
    thinning_limit_curve,
    total_variation,
)
from fracwalk.special import ml_density, ml_negative, ml_one, ml_survival, mwright
from fracwalk.variates import RngStream

logger = get_logger(__name__)

CheckFn = Callable[[RngStream, bool, Config], CheckResult]


def _result(name: str, worst: float, tolerance: float, detail: str = "") -> CheckResult:
    return CheckResult(
        name=name, passed=bool(worst <= tolerance), value=float(worst), tolerance=tolerance,
        detail=detail,
    )


def _ml_oracle(alpha: float, z: float) -> float:
    with mp.workdps(50):
        a, zm = mp.mpf(alpha), mp.mpf(z)
        return float(mp.nsum(lambda k: zm**k / mp.gamma(a * k + 1), [0, mp.inf]))


def check_ml_series(stream: RngStream, full: bool, config: Config) -> CheckResult:
    alphas = [0.25, 0.5, 0.75, 1.0]
    zs = np.linspace(-5.0, 2.0, 50 if full else 8)
    worst = max(
        abs(float(ml_one(a, float(z)).value) - _ml_oracle(a, float(z)))
        for a in alphas for z in zs
    )
    grid = np.linspace(0.0, 50.0, 101)
    worst_exp = max(abs(ml_survival(1.0, float(t)) - math.exp(-t)) for t in grid)
    return _result("ml-series-oracle", max(worst, worst_exp), 1e-10)


def check_laplace_pairs(stream: RngStream, full: bool, config: Config) -> CheckResult:
    worst = 0.0
    for beta in (0.25, 0.5, 0.75):
        law = WaitingLaw.mittag_leffler(beta)
        for s in (0.25, 1.0, 4.0):
            # t^(beta-1) is split off as an algebraic weight on [0, 1]
            head, _ = integrate_algebraic(
                lambda t: math.exp(-s * t) * float(ml_negative(beta, beta, t**beta)),
                0.0, 1.0, beta - 1.0, abs_tol=1e-12,
            )
            tail, _ = integrate(lambda t: math.exp(-s * t) * float(law.density(t)), 1.0, np.inf)
            surv, _ = integrate(lambda t: math.exp(-s * t) * float(law.survival(t)), 0.0, np.inf)
            sb = s**beta
            worst = max(
                worst, abs(head + tail - 1.0 / (1.0 + sb)), abs(surv - sb / (s * (1.0 + sb)))
            )
    return _result("laplace-pairs", worst, 1e-6)


def check_complete_monotonicity(stream: RngStream, full: bool, config: Config) -> CheckResult:
    ts = np.logspace(-3.0, 3.0, 61 if full else 25)
    violations = 0
    for beta in (0.25, 0.5, 0.75):
        for t in ts:
            h = 1e-2 * float(t)
            m2, m1, c, p1, p2 = (ml_density(beta, float(t) + k * h) for k in (-2, -1, 0, 1, 2))
            first = (p1 - m1) / (2.0 * h)
            second = (p1 - 2.0 * c + m1) / h**2
            third = (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h**3)
            # derivatives of orders 1..3 alternate as -, +, -
            violations += int(first >= 0.0) + int(second <= 0.0) + int(third >= 0.0)
    detail = f"{violations} sign violations on {ts.size} times x 3 exponents"
    return _result("ml-complete-monotonicity", violations, 0.0, detail)


def check_asymptotics(stream: RngStream, full: bool, config: Config) -> CheckResult:
    t = 1e8
    worst = 0.0
    for beta in (0.3, 0.5, 0.8):
        law = WaitingLaw.mittag_leffler(beta)
        surv = float(law.survival(t))
        dens = float(law.density(t))
        g = math.gamma(1.0 - beta)
        worst = max(
            worst,
            abs(surv / (t ** (-beta) / g) - 1.0),
            abs(dens / (beta * t ** (-beta - 1.0) / g) - 1.0),
        )
    return _result("ml-asymptotics", worst, 0.01)


def check_thinning(stream: RngStream, full: bool, config: Config) -> CheckResult:
    worst = 0.0
    detail = []
    for beta in (0.5, 0.75):
        rows = thinning_limit_curve(WaitingLaw.pareto(beta), [0.25, 1.0, 4.0], [1e-4, 1e-8])
        if rows[1].deviation >= rows[0].deviation:
            return CheckResult(name="thinning-universality", passed=False, detail="gap grew")
        worst = max(worst, rows[1].deviation)
        detail.append(f"beta={beta}: {rows[0].deviation:.3g} -> {rows[1].deviation:.3g}")
    return _result("thinning-universality", worst, 0.02, "; ".join(detail))


def check_respeed(stream: RngStream, full: bool, config: Config) -> CheckResult:
    invariance = 0.0
    universality = 0.0
    for beta in (0.5, 0.75):
        ml = WaitingLaw.mittag_leffler(beta)
        pareto = WaitingLaw.pareto(beta)
        for s in (0.25, 1.0, 4.0):
            limit = 1.0 / (1.0 + s**beta)
            for tau in (1e-1, 1e-2, 1e-4):
                invariance = max(invariance, abs(respeed_transform(ml, tau, tau**beta, s) - limit))
            a = pareto.lambda_scale * 1e-8**beta
            universality = max(universality, abs(respeed_transform(pareto, 1e-8, a, s) - limit))
    passed = invariance <= 1e-12 and universality <= 0.02
    return CheckResult(
        name="respeed-invariance", passed=passed, value=max(invariance, universality),
        detail=f"Mittag-Leffler {invariance:.3g}, Pareto {universality:.3g}",
    )


def _walk(waiting: WaitingLaw, jump: JumpLaw, h: float = 1.0, tau: float = 1.0) -> CtrwConfig:
    return CtrwConfig(waiting=waiting, jump=jump, scale=ScaleState.for_laws(waiting, jump, h, tau))


def check_montroll_weiss(stream: RngStream, full: bool, config: Config) -> CheckResult:
    worst = 0.0
    cfgs = [
        _walk(WaitingLaw.mittag_leffler(0.5), JumpLaw.gaussian()),
        _walk(WaitingLaw.exponential(), JumpLaw.two_point()),
        _walk(WaitingLaw.pareto(0.75), JumpLaw.sym_stable(1.5)),
    ]
    for cfg in cfgs:
        for s in (0.5, 1.0, 2.0):
            if montroll_weiss(cfg, 0.0, s) != 1.0 / s:
                return CheckResult(name="montroll-weiss-series", passed=False, detail="k=0")
            for kappa in (0.5, 1.0, 2.0):
                f = respeed_transform(cfg.waiting, 1.0, 1.0, s)
                ratio = abs(cfg.jump.fourier(kappa)[()] * f)
                if ratio > 0.9:
                    continue
                closed = montroll_weiss(cfg, kappa, s)
                partial = montroll_weiss_partial(cfg, kappa, s, 400)
                worst = max(worst, abs(closed - partial))
                worst = max(worst, kolmogorov_feller_residual(cfg, kappa, s))
    return _result("montroll-weiss-series", worst, 1e-8)


def check_diffusion_gap(stream: RngStream, full: bool, config: Config) -> CheckResult:
    pairs = [
        (WaitingLaw.mittag_leffler(0.5), JumpLaw.gaussian()),
        (WaitingLaw.pareto(0.75), JumpLaw.sym_pareto(1.5)),
    ]
    detail = []
    for waiting, jump in pairs:
        rows = diffusion_limit_gap(_walk(waiting, jump), 1.0, 1.0, [1e-1, 1e-2, 1e-3])
        gaps = [r.deviation for r in rows]
        detail.append(", ".join(f"{g:.3g}" for g in gaps))
        if not all(b < a for a, b in zip(gaps, gaps[1:])):
            return CheckResult(name="diffusion-limit-gap", passed=False, detail="; ".join(detail))
    return CheckResult(name="diffusion-limit-gap", passed=True, detail="; ".join(detail))


def check_subordinator(stream: RngStream, full: bool, config: Config) -> CheckResult:
    beta = 0.5
    norm_err = 0.0
    laplace_err = 0.0
    form_err = 0.0
    for t in (0.5, 1.0, 2.0):
        mass, _ = integrate(lambda r: subordinator_density(beta, r, t), 0.0, np.inf)
        norm_err = max(norm_err, abs(mass - 1.0))
        for y in (0.5, 1.0, 2.0):
            lt, _ = integrate(
                lambda r: math.exp(-y * r) * subordinator_density(beta, r, t), 0.0, np.inf
            )
            laplace_err = max(laplace_err, abs(lt - ml_survival(beta, y ** (1.0 / beta) * t)))
        for r in (0.3, 1.0, 2.5):
            form_err = max(
                form_err,
                abs(
                    subordinator_density(beta, r, t)
                    - subordinator_density_stable_form(beta, r, t)
                ),
            )
    inversion = abs(invert_drift_solution(beta, 1.0, 1.0) - math.exp(-0.25) / math.sqrt(math.pi))
    passed = norm_err <= 1e-6 and laplace_err <= 1e-6 and form_err <= 1e-8 and inversion <= 1e-6
    return CheckResult(
        name="subordinator-identities", passed=passed,
        value=max(norm_err, laplace_err, form_err, inversion),
        detail=f"mass {norm_err:.2g}, laplace {laplace_err:.2g}, forms {form_err:.2g}, "
        f"inversion {inversion:.2g}",
    )


def check_mwright_fourier(stream: RngStream, full: bool, config: Config) -> CheckResult:
    worst = 0.0
    for beta in (0.25, 0.5, 0.75):
        for kappa in (0.5, 1.0, 2.0):
            lhs, rhs = mwright_fourier_pair(beta, kappa)
            worst = max(worst, abs(lhs - rhs))
    return _result("mwright-fourier-pair", worst, 1e-6)


def check_routes(stream: RngStream, full: bool, config: Config) -> CheckResult:
    pairs: Sequence[Tuple[float, float]] = [(2.0, 0.5), (1.5, 0.75)]
    xs = np.linspace(0.25, 5.0, 20 if full else 6)
    worst = 0.0
    for alpha, beta in pairs:
        p = FracDiffProblem(alpha=alpha, beta=beta, t=1.0)
        gap = np.abs(density_fourier(p, xs) - density_subordination(p, xs))
        worst = max(worst, float(gap.max()))
    return _result("route-triangle-deterministic", worst, 1e-4)


def check_degeneracies(stream: RngStream, full: bool, config: Config) -> CheckResult:
    worst = 0.0
    xs = np.linspace(-4.0, 4.0, 17)
    for t in (0.5, 1.0, 2.0):
        gauss = np.exp(-(xs**2) / (4.0 * t)) / math.sqrt(4.0 * math.pi * t)
        cauchy = (t / math.pi) / (xs**2 + t**2)
        normal = density_fourier(FracDiffProblem(alpha=2.0, beta=1.0, t=t), xs)
        flight = density_fourier(FracDiffProblem(alpha=1.0, beta=1.0, t=t), xs)
        pmf = counting_distribution(1.0, t)
        worst = max(
            worst,
            float(np.abs(normal - gauss).max()),
            float(np.abs(flight - cauchy).max()),
            float(np.abs(pmf - poisson.pmf(np.arange(pmf.size), t)).max()),
            abs(ml_survival(1.0, t) - math.exp(-t)),
        )
    return _result("degeneracies", worst, 1e-8)


def check_transform_residual(stream: RngStream, full: bool, config: Config) -> CheckResult:
    worst = max(
        transform_residual(FracDiffProblem(alpha=a, beta=b, t=1.0), k, s)
        for a, b in ((2.0, 0.5), (1.5, 0.75), (1.0, 0.9))
        for k in (0.5, 1.0, 2.0)
        for s in (0.5, 1.0, 2.0)
    )
    return _result("transform-residual", worst, 1e-12)


def check_fractional_poisson(stream: RngStream, full: bool, config: Config) -> CheckResult:
    n_paths = 100_000 if full else 20_000
    tolerance = 0.01 if full else 0.02
    service = RenewalService(config)
    worst = 0.0
    for i, (beta, t) in enumerate([(0.5, 1.0), (0.5, 5.0), (0.9, 1.0), (0.9, 5.0)]):
        exact = counting_distribution(beta, t)
        empirical = service.empirical_pmf(
            WaitingLaw.mittag_leffler(beta), t, n_paths, stream.child(i)
        )
        worst = max(worst, total_variation(exact, empirical))
    return _result("fractional-poisson-pmf", worst, tolerance, f"{n_paths} paths")


def check_variance(stream: RngStream, full: bool, config: Config) -> CheckResult:
    n_paths = 100_000 if full else 10_000
    service = CtrwService(config)
    detail = []
    worst_z = 0.0
    worst_slope = 0.0
    for i, beta in enumerate((0.5, 0.8)):
        waiting, jump = WaitingLaw.mittag_leffler(beta), JumpLaw.gaussian()
        cfg = CtrwConfig(
            waiting=waiting, jump=jump, scale=ScaleState.well_scaled_for(waiting, jump, 0.1),
            n_paths=n_paths, observation_times=[1.0, 4.0],
        )
        estimates = service.variance_scan(cfg, stream.child(i))
        for e in estimates:
            worst_z = max(worst_z, abs(e.z_score or 0.0))
        slope = loglog_slope([e.t for e in estimates], [e.value for e in estimates])
        worst_slope = max(worst_slope, abs(slope - beta))
        detail.append(f"beta={beta}: slope {slope:.3f}")
    passed = worst_z <= 3.0 and worst_slope <= 0.05
    return CheckResult(
        name="subdiffusive-variance", passed=passed, value=worst_z, tolerance=3.0,
        detail="; ".join(detail),
    )


def check_char_limit(stream: RngStream, full: bool, config: Config) -> CheckResult:
    n_paths = 100_000 if full else 10_000
    service = CtrwService(config)
    kappas = [0.5, 1.0, 2.0]
    worst = 0.0
    cases = [
        (WaitingLaw.mittag_leffler(0.5), JumpLaw.gaussian(), 0.05),
        (WaitingLaw.mittag_leffler(0.75), JumpLaw.sym_stable(1.5), 0.01),
    ]
    for i, (waiting, jump, h) in enumerate(cases):
        cfg = CtrwConfig(
            waiting=waiting, jump=jump, scale=ScaleState.well_scaled_for(waiting, jump, h),
            n_paths=n_paths, observation_times=[1.0],
        )
        field = service.char_function(cfg, kappas, stream.child(i))[0]
        p = FracDiffProblem(alpha=jump.alpha, beta=waiting.beta, t=1.0)
        for k, v, se in zip(field.grid, field.values, field.stderr):
            worst = max(worst, abs(v - char_function(p, k)) / se)
    return _result("char-function-limit", worst, 3.0, f"{n_paths} paths, max z-score")


def check_route_mc(stream: RngStream, full: bool, config: Config) -> CheckResult:
    n_paths = 100_000 if full else 20_000
    service = FracDiffService(config)
    edges = np.linspace(-5.0, 5.0, 41)
    centers = 0.5 * (edges[:-1] + edges[1:])
    worst = 0.0
    for i, (alpha, beta) in enumerate([(2.0, 0.5), (1.5, 0.75)]):
        p = FracDiffProblem(alpha=alpha, beta=beta, t=1.0)
        x = service.sample(p, n_paths, stream.child(i))
        counts, _ = np.histogram(x, bins=edges)
        empirical = counts / x.size
        # bin masses by the midpoint rule on the Fourier density
        model = density_fourier(p, centers) * np.diff(edges)
        worst = max(worst, 0.5 * float(np.abs(empirical - model).sum()))
    return _result("route-triangle-mc", worst, 0.02, f"{n_paths} paths")


def check_mwright_closed_form(stream: RngStream, full: bool, config: Config) -> CheckResult:
    worst = max(
        abs(mwright(0.5, z) - math.exp(-z * z / 4.0) / math.sqrt(math.pi))
        for z in np.linspace(0.0, 10.0, 21)
    )
    return _result("mwright-closed-form", worst, 1e-12)


CHECKS: Dict[str, Tuple[CheckFn, bool]] = {
    "ml-series-oracle": (check_ml_series, True),
    "laplace-pairs": (check_laplace_pairs, True),
    "ml-asymptotics": (check_asymptotics, True),
    "mwright-closed-form": (check_mwright_closed_form, True),
    "thinning-universality": (check_thinning, True),
    "respeed-invariance": (check_respeed, True),
    "montroll-weiss-series": (check_montroll_weiss, True),
    "diffusion-limit-gap": (check_diffusion_gap, True),
    "transform-residual": (check_transform_residual, True),
    "subordinator-identities": (check_subordinator, True),
    "mwright-fourier-pair": (check_mwright_fourier, True),
    "degeneracies": (check_degeneracies, True),
    "route-triangle-deterministic": (check_routes, True),
    "fractional-poisson-pmf": (check_fractional_poisson, False),
    "subdiffusive-variance": (check_variance, False),
    "char-function-limit": (check_char_limit, False),
    "route-triangle-mc": (check_route_mc, False),
    "ml-complete-monotonicity": (check_complete_monotonicity, True),
}


class ValidatorService:
    """Runs named checks and collects their results."""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or get_config()

    def select(self, quick: bool = False, only: Optional[Sequence[str]] = None) -> List[str]:
        """Names to run: ``only`` if given, else the quick subset or everything.

        Raises:
            DomainError: for an unknown check name
        """
        if only:
            unknown = [name for name in only if name not in CHECKS]
            if unknown:
                raise DomainError(f"unknown check(s): {', '.join(unknown)}")
            return list(only)
        return [name for name, (_, is_quick) in CHECKS.items() if is_quick or not quick]

    def run(
        self, seed: int, quick: bool = False, only: Optional[Sequence[str]] = None
    ) -> List[CheckResult]:
        """Run the selected checks; check i draws from stream (seed, i).

        Numerical failures inside a check are reported as a failed check.
        """
        results = []
        ids = {name: i for i, name in enumerate(CHECKS)}
        for name in self.select(quick, only):
            fn, _ = CHECKS[name]
            stream = RngStream(seed, ids[name])
            try:
                result = fn(stream, not quick, self.config)
            except (FracwalkError, OverflowError) as e:
                logger.warning("check %s raised %s", name, e)
                result = CheckResult(
                    name=name, passed=False, error=True, detail=f"{type(e).__name__}: {e}"
                )
            logger.info("%s: %s", name, "pass" if result.passed else "FAIL")
            results.append(result)
        return results
