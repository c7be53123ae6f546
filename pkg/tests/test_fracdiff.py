import math

import numpy as np
import pytest
from scipy.special import erfcx, wofz

from fracwalk.config import get_config
from fracwalk.errors import DomainError, RangeError
from fracwalk.schemas import FracDiffProblem
from fracwalk.services import FracDiffService
from fracwalk.services.fracdiff import (
    char_function,
    density_fourier,
    density_subordination,
    drift_solution_transform,
    fractional_poisson_drift_gap,
    invert_drift_solution,
    mwright_fourier_pair,
    operational_time_at,
    sample_subordinated,
    simulate_parametric_subordination,
    subordination_paths,
    subordinator_char_function,
    subordinator_density,
    subordinator_density_stable_form,
    transform_residual,
    variance,
)
from fracwalk.special import mwright
from fracwalk.variates import RngStream

XS = [0.5, 1.0, 2.5]


@pytest.fixture
def service():
    return FracDiffService(get_config())


def test_char_function():
    assert char_function(FracDiffProblem(alpha=1.5, beta=0.5, t=2.0), 0.0) == 1.0
    assert char_function(FracDiffProblem(alpha=2.0, beta=1.0, t=2.0), 1.0) == pytest.approx(
        math.exp(-2.0)
    )
    # E_{1/2}(-k^2 t^(1/2)) at k = t = 1
    assert char_function(FracDiffProblem(alpha=2.0, beta=0.5, t=1.0), 1.0) == pytest.approx(
        erfcx(1.0), rel=1e-10
    )


def test_transform_residual_vanishes():
    p = FracDiffProblem(alpha=1.3, beta=0.6, t=1.0)
    for kappa in (0.0, 0.5, 4.0):
        for s in (0.1, 1.0, 10.0):
            assert transform_residual(p, kappa, s) < 1e-13
    with pytest.raises(DomainError):
        transform_residual(p, 1.0, 0.0)


def test_gaussian_and_cauchy_limits():
    x = np.array([-2.0, 0.0, 1.5])
    gauss = density_fourier(FracDiffProblem(alpha=2.0, beta=1.0, t=0.5), x)
    np.testing.assert_allclose(gauss, np.exp(-x * x / 2.0) / math.sqrt(2.0 * math.pi))
    cauchy = density_fourier(FracDiffProblem(alpha=1.0, beta=1.0, t=2.0), x)
    np.testing.assert_allclose(cauchy, 2.0 / (math.pi * (x * x + 4.0)))


def test_time_fractional_density_is_mwright():
    # alpha = 2: u(x, 1) = M_{beta/2}(|x|) / 2
    p = FracDiffProblem(alpha=2.0, beta=0.5, t=1.0)
    u = density_fourier(p, XS)
    expected = [0.5 * mwright(0.25, x) for x in XS]
    np.testing.assert_allclose(u, expected, rtol=1e-6)


@pytest.mark.parametrize("alpha,beta", [(2.0, 0.5), (1.5, 0.75)])
def test_routes_agree(alpha, beta):
    p = FracDiffProblem(alpha=alpha, beta=beta, t=1.0)
    np.testing.assert_allclose(density_subordination(p, XS), density_fourier(p, XS), atol=1e-4)


def test_density_is_even():
    p = FracDiffProblem(alpha=1.5, beta=0.75, t=1.0)
    u = density_fourier(p, [-1.0, 1.0])
    assert u[0] == u[1]


def test_drift_solution_identities():
    expected = math.exp(-0.25) / math.sqrt(math.pi)
    assert subordinator_density(0.5, 1.0, 1.0) == pytest.approx(expected, rel=1e-10)
    assert subordinator_density_stable_form(0.5, 1.0, 1.0) == pytest.approx(expected, rel=1e-8)
    assert invert_drift_solution(0.5, 1.0, 1.0) == pytest.approx(expected, rel=1e-8)
    assert invert_drift_solution(0.5, -1.0, 1.0) == 0.0


@pytest.mark.parametrize("beta,r,t", [(0.3, 0.4, 2.0), (0.7, 2.0, 0.5), (0.5, 8.0, 1.0)])
def test_drift_solution_routes_agree(beta, r, t):
    direct = subordinator_density(beta, r, t)
    assert subordinator_density_stable_form(beta, r, t) == pytest.approx(direct, rel=1e-6)


def test_drift_solution_domain():
    with pytest.raises(DomainError):
        subordinator_density(1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        subordinator_density(0.5, -1.0, 1.0)
    with pytest.raises(DomainError):
        subordinator_density_stable_form(0.5, 0.0, 1.0)


def test_drift_solution_transform():
    assert drift_solution_transform(0.5, 1.0, 1.0) == pytest.approx(math.exp(-1.0))
    assert drift_solution_transform(0.5, -0.5, 1.0) == 0.0


def test_subordinator_char_function():
    # E_{1/2}(i y) = w(y)
    value = subordinator_char_function(0.5, 1.5, 1.0)
    assert value == pytest.approx(complex(wofz(1.5)), rel=1e-10)


def test_fractional_poisson_gap_closes():
    rows = fractional_poisson_drift_gap(0.6, 1.0, 1.0, [1.0, 0.1, 0.01, 0.001])
    gaps = [r.deviation for r in rows]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-3


@pytest.mark.parametrize("beta", [0.25, 0.5])
def test_mwright_fourier_pair(beta):
    lhs, rhs = mwright_fourier_pair(beta, 1.0)
    assert lhs == pytest.approx(rhs, abs=1e-6)


def test_variance():
    assert variance(FracDiffProblem(alpha=2.0, beta=1.0, t=3.0)).value == pytest.approx(6.0)
    assert variance(FracDiffProblem(alpha=2.0, beta=0.5, t=1.0)).value == pytest.approx(
        2.0 / math.gamma(1.5)
    )
    heavy = variance(FracDiffProblem(alpha=1.5, beta=0.5, t=1.0))
    assert heavy.infinite
    assert heavy.value == float("inf")


def test_parametric_paths(stream):
    p = FracDiffProblem(alpha=1.5, beta=0.6, t=1.0)
    t_star, times, positions = subordination_paths(p, 0.01, 200, 4, stream)
    assert t_star.shape == (201,)
    assert times.shape == positions.shape == (4, 201)
    assert np.all(times[:, 0] == 0.0)
    assert np.all(np.diff(times, axis=1) > 0.0)

    pairs = simulate_parametric_subordination(p, 0.01, 50, RngStream(9))
    assert len(pairs) == 51
    assert pairs[0].physical_time == 0.0

    normal = FracDiffProblem(alpha=2.0, beta=1.0, t=1.0)
    _, times, _ = subordination_paths(normal, 0.1, 10, 2, stream)
    np.testing.assert_allclose(times[0], 0.1 * np.arange(11))


def test_operational_time_needs_covering_paths():
    times = np.array([[0.0, 0.5, 1.5], [0.0, 0.2, 0.4]])
    with pytest.raises(RangeError):
        operational_time_at(times, 0.1, 1.0)
    np.testing.assert_allclose(operational_time_at(times[:1], 0.1, 1.0), [0.2])


def test_operational_time_mean(stream):
    # E t_*(t) = t^beta / Gamma(1 + beta)
    p = FracDiffProblem(alpha=2.0, beta=0.6, t=2.0)
    r, _ = sample_subordinated(p, stream, 50_000)
    expected = 2.0**0.6 / math.gamma(1.6)
    assert abs(r.mean() - expected) < 5.0 * r.std() / math.sqrt(r.size)


def test_subordinated_variance(service, stream):
    est = service.variance_scan(0.5, [1.0, 4.0], 50_000, stream)
    for e in est:
        assert e.converged
        assert abs(e.z_score) < 5.0


def test_monte_carlo_route(service, stream):
    p = FracDiffProblem(alpha=2.0, beta=0.5, t=1.0)
    x = np.linspace(-3.0, 3.0, 31)
    mc = service.density(p, x, route="mc", n_paths=100_000, stream=stream)
    exact = density_fourier(p, x)
    assert np.max(np.abs(mc - exact)) < 0.04


def test_histogram_and_unknown_route(service, stream):
    p = FracDiffProblem(alpha=1.5, beta=1.0, t=1.0)
    field = service.histogram(p, np.linspace(-5.0, 5.0, 21), 10_000, stream)
    assert 0.8 < field.coverage < 1.0
    with pytest.raises(DomainError):
        service.density(p, [0.0, 1.0], route="spectral")
