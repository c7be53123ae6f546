import math

import numpy as np
import pytest
from scipy.integrate import trapezoid
from scipy.special import airy, gamma

from fracwalk.errors import DomainError
from fracwalk.special import (
    mwright,
    mwright_integral,
    one_sided_stable_density,
    stable_table,
    symmetric_stable_density,
    wright_table,
)


def half_gaussian(z):
    return math.exp(-z * z / 4.0) / math.sqrt(math.pi)


@pytest.mark.parametrize("method", ["series", "sine_series", "auto"])
@pytest.mark.parametrize("z", [0.0, 0.5, 2.0, 6.0])
def test_half_order_is_gaussian(method, z):
    assert mwright(0.5, z, method=method) == pytest.approx(half_gaussian(z), rel=1e-9)


@pytest.mark.parametrize("z", [0.5, 2.0, 6.0])
def test_integral_route_half_order(z):
    assert mwright(0.5, z, method="integral") == pytest.approx(half_gaussian(z), rel=1e-8)


@pytest.mark.parametrize("z", [0.2, 1.0, 3.0])
def test_third_order_is_airy(z):
    c = 3.0 ** (1.0 / 3.0)
    expected = c * c * airy(z / c)[0]
    assert mwright(1.0 / 3.0, z) == pytest.approx(expected, rel=1e-9)


def test_mwright_is_a_density():
    table = wright_table(0.4)
    zs = np.linspace(0.0, table.z_cut, 20001)
    mass = trapezoid(table(zs), zs)
    assert mass == pytest.approx(1.0, abs=1e-6)


def test_far_tail_underflows_to_zero():
    assert 0.0 <= mwright_integral(0.5, 60.0) < 1e-100


def test_mwright_domain():
    with pytest.raises(DomainError):
        mwright(1.0, 1.0)
    with pytest.raises(DomainError):
        mwright(0.5, -0.1)
    with pytest.raises(DomainError):
        mwright(0.5, 51.0)
    with pytest.raises(DomainError):
        mwright(0.5, 1.0, method="other")


@pytest.mark.parametrize("method", ["bridge", "integral"])
@pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
def test_one_sided_half_order_is_levy(method, t):
    expected = t**-1.5 * math.exp(-1.0 / (4.0 * t)) / (2.0 * math.sqrt(math.pi))
    assert one_sided_stable_density(0.5, t, method=method) == pytest.approx(expected, rel=1e-8)


def test_symmetric_closed_forms():
    assert symmetric_stable_density(2.0, 1.0, 0.5) == pytest.approx(
        math.exp(-0.5) / math.sqrt(2.0 * math.pi)
    )
    assert symmetric_stable_density(1.0, 2.0, 1.0) == pytest.approx(1.0 / (5.0 * math.pi))


def test_symmetric_stable_at_origin():
    alpha = 1.5
    assert symmetric_stable_density(alpha, 0.0) == pytest.approx(
        gamma(1.0 + 1.0 / alpha) / math.pi, rel=1e-9
    )


def test_stable_table_matches_direct():
    table = stable_table(1.5)
    xs = np.array([0.0, 0.3, 2.0, 7.5, 60.0])
    direct = np.array([symmetric_stable_density(1.5, x, 2.0) for x in xs])
    np.testing.assert_allclose(table(xs, 2.0), direct, rtol=1e-6)


def test_stable_exponent_checked():
    with pytest.raises(DomainError):
        symmetric_stable_density(2.5, 0.0)
    with pytest.raises(DomainError):
        one_sided_stable_density(0.5, 0.0)
