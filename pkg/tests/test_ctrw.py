import math

import numpy as np
import pytest
from scipy.integrate import trapezoid
from scipy.special import erfcx, i0, i1

from fracwalk.config import get_config
from fracwalk.errors import DomainError, TruncationError
from fracwalk.schemas import CtrwConfig, JumpLaw, ScaleState, WaitingLaw
from fracwalk.services import CtrwService
from fracwalk.services.ctrw import (
    diffusion_limit_gap,
    empirical_char_function,
    empirical_density,
    kolmogorov_feller_residual,
    limit_transform,
    loglog_slope,
    memory_transform,
    montroll_weiss,
    montroll_weiss_partial,
    renewal_pmf,
    respeed_keep_probability,
    respeed_transform,
    series_solution,
    simulate_ctrw,
    variance_estimate,
)
from fracwalk.services.renewal import counting_pmf
from fracwalk.variates import RngStream


def walk(waiting, jump, h=1.0, tau=1.0, a=1.0, **kwargs):
    scale = ScaleState.for_laws(waiting, jump, h=h, tau=tau, a=a)
    return CtrwConfig(waiting=waiting, jump=jump, scale=scale, **kwargs)


def well_scaled(beta, h, **kwargs):
    w, j = WaitingLaw.mittag_leffler(beta), JumpLaw.gaussian()
    return CtrwConfig(waiting=w, jump=j, scale=ScaleState.well_scaled_for(w, j, h), **kwargs)


def test_transform_at_zero_wavenumber_is_exact():
    cfg = walk(WaitingLaw.pareto(0.5), JumpLaw.sym_pareto(1.5), h=0.3, tau=0.2, a=0.7)
    assert montroll_weiss(cfg, 0.0, 0.7) == 1.0 / 0.7


def test_partial_sums_converge():
    cfg = walk(WaitingLaw.mittag_leffler(0.5), JumpLaw.two_point())
    full = montroll_weiss(cfg, 1.0, 1.0)
    assert abs(montroll_weiss_partial(cfg, 1.0, 1.0, 400) - full) < 1e-12
    assert abs(montroll_weiss_partial(cfg, 1.0, 1.0, 2) - full) > 1e-3


@pytest.mark.parametrize(
    "waiting,jump",
    [
        (WaitingLaw.mittag_leffler(0.5), JumpLaw.gaussian()),
        (WaitingLaw.pareto(0.7), JumpLaw.sym_pareto(1.2)),
        (WaitingLaw.exponential(2.0), JumpLaw.two_point()),
    ],
)
def test_kolmogorov_feller_form(waiting, jump):
    cfg = walk(waiting, jump, h=0.5, tau=0.3, a=0.5)
    for kappa in (0.1, 1.0, 5.0):
        for s in (0.2, 3.0):
            assert kolmogorov_feller_residual(cfg, kappa, s) < 1e-12


def test_mittag_leffler_respeed_invariance():
    law = WaitingLaw.mittag_leffler(0.6)
    for tau, a in ((0.1, 0.3), (2.0, 1.0), (1e-3, 4.0)):
        s = 0.8
        expected = 1.0 / (1.0 + tau**0.6 * s**0.6 / a)
        assert respeed_transform(law, tau, a, s) == pytest.approx(expected, rel=1e-13)


def test_memory_function_of_mittag_leffler_law():
    law = WaitingLaw.mittag_leffler(0.4)
    assert memory_transform(law, 2.0) == pytest.approx(2.0**-0.6, rel=1e-13)


def test_respeed_domain():
    assert respeed_keep_probability(0.25) == 0.25
    with pytest.raises(DomainError):
        respeed_keep_probability(1.5)
    with pytest.raises(DomainError):
        respeed_transform(WaitingLaw.exponential(), 1.0, 0.0, 1.0)


def test_diffusion_limit_gap_closes():
    cfg = CtrwConfig(waiting=WaitingLaw.mittag_leffler(0.5), jump=JumpLaw.gaussian())
    rows = diffusion_limit_gap(cfg, 1.0, 1.0, [1.0, 0.3, 0.1, 0.03])
    gaps = [r.deviation for r in rows]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-3
    assert limit_transform(2.0, 0.5, 1.0, 1.0) == 0.5
    with pytest.raises(DomainError):
        diffusion_limit_gap(cfg, 1.0, 1.0, [0.1, 0.3])


def test_renewal_pmf_routes():
    assert renewal_pmf(WaitingLaw.exponential(), 1.0, 1.0, 0.0, 0) == 1.0
    assert renewal_pmf(WaitingLaw.exponential(), 1.0, 1.0, 0.0, 2) == 0.0
    pareto = WaitingLaw.pareto(0.5)
    assert renewal_pmf(pareto, 1.0, 1.0, 1.0, 0) == pytest.approx(2.0**-0.5, rel=1e-7)
    ml = WaitingLaw.mittag_leffler(0.5)
    assert renewal_pmf(ml, 0.5, 1.0, 1.0, 3) == pytest.approx(
        counting_pmf(0.5, 2.0, 3), rel=1e-12
    )


def test_series_solution_simple_random_walk():
    cfg = walk(WaitingLaw.exponential(), JumpLaw.two_point())
    p = series_solution(cfg, [0.0, 1.0, -1.0, 0.5], 1.0)
    assert p[0] == pytest.approx(math.exp(-1.0) * i0(1.0), abs=2e-6)
    assert p[1] == pytest.approx(math.exp(-1.0) * i1(1.0), abs=2e-6)
    assert p[2] == pytest.approx(p[1])
    assert p[3] == 0.0


def test_series_solution_drift_is_counting_law():
    cfg = CtrwConfig(waiting=WaitingLaw.mittag_leffler(0.7), jump=JumpLaw.unit_drift())
    p = series_solution(cfg, [0.0, 1.0, 2.0, 3.0, -1.0], 1.0)
    expected = [counting_pmf(0.7, 1.0, k) for k in range(4)]
    np.testing.assert_allclose(p[:4], expected, rtol=1e-12)
    assert p[4] == 0.0


def test_series_solution_gaussian_mass():
    cfg = walk(WaitingLaw.exponential(), JumpLaw.gaussian())
    x = np.linspace(-15.0, 15.0, 3001)
    p = series_solution(cfg, x, 1.0)
    assert trapezoid(p, x) == pytest.approx(1.0, abs=2e-6)
    # walkers still at rest sit in the origin cell
    rest = math.exp(-1.0) / (x[1] - x[0])
    assert p[1500] - rest == pytest.approx(p[1499], rel=1e-3)


def test_series_solution_starts_at_origin():
    cfg = well_scaled(0.5, 0.1)
    x = np.linspace(-1.0, 1.0, 201)
    p = series_solution(cfg, x, 0.0)
    assert trapezoid(p, x) == pytest.approx(1.0, rel=1e-12)
    assert np.count_nonzero(p) == 1
    assert p[100] == pytest.approx(1.0 / (x[1] - x[0]))
    assert not series_solution(cfg, [0.5, 1.0, 1.5], 0.0).any()


def test_series_solution_truncation():
    cfg = walk(WaitingLaw.exponential(), JumpLaw.two_point())
    with pytest.raises(TruncationError):
        series_solution(cfg, [0.0], 5.0, n_max=2)


def test_simple_random_walk_variance(stream):
    cfg = walk(WaitingLaw.exponential(), JumpLaw.two_point(), n_paths=20_000,
               observation_times=[0.0, 1.0, 3.0])
    x = simulate_ctrw(cfg, stream)
    assert x.shape == (20_000, 3)
    assert np.all(x[:, 0] == 0.0)
    for j, t in ((1, 1.0), (2, 3.0)):
        x2 = x[:, j] ** 2
        assert abs(x2.mean() - t) < 5.0 * x2.std() / math.sqrt(x2.size)


def test_simulation_is_reproducible():
    cfg = walk(WaitingLaw.mittag_leffler(0.5), JumpLaw.sym_stable(1.5), n_paths=500)
    a = simulate_ctrw(cfg, RngStream(5), threads=1)
    b = simulate_ctrw(cfg, RngStream(5), threads=3)
    np.testing.assert_array_equal(a, b)


def test_pathwise_respeed_needs_a_at_most_one(stream):
    cfg = walk(WaitingLaw.exponential(), JumpLaw.two_point(), a=2.0, n_paths=10)
    with pytest.raises(DomainError):
        simulate_ctrw(cfg, stream)


def test_well_scaled_char_function(stream):
    h = 0.1
    cfg = well_scaled(0.5, h, n_paths=5000, observation_times=[1.0])
    field = CtrwService(get_config()).char_function(cfg, [0.0, 1.0], stream)[0]
    assert field.values[0] == 1.0
    # exact at finite h: E_beta(-t^beta (2 / h^2)(1 - exp(-h^2 k^2 / 2)))
    y = 2.0 / h**2 * -math.expm1(-(h**2) / 2.0)
    assert abs(field.values[1] - erfcx(y)) < 4.0 * field.stderr[1]


def test_well_scaled_variance_is_exact(stream):
    cfg = well_scaled(0.5, 0.1, n_paths=5000, observation_times=[0.5, 1.0])
    for est in CtrwService(get_config()).variance_scan(cfg, stream):
        assert est.converged
        assert est.analytic == pytest.approx(2.0 * est.t**0.5 / math.gamma(1.5))
        assert abs(est.z_score) < 5.0


def test_estimators():
    x = RngStream(2).normal(2000)
    with pytest.raises(DomainError):
        empirical_char_function(x[:999], [1.0], 1.0)
    hist = empirical_density(x, np.linspace(-1.0, 1.0, 11), 1.0)
    assert 0.0 < hist.coverage < 1.0
    assert len(hist.centers) == 10
    heavy = variance_estimate(x, 1.0, alpha=1.5)
    assert not heavy.converged
    assert "heavy-tailed" in heavy.reason
    assert variance_estimate(x, 1.0, alpha=2.0).converged
    assert loglog_slope([1.0, 2.0, 4.0], [1.0, 2.0**0.5, 2.0]) == pytest.approx(0.5)
