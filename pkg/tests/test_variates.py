import math

import numpy as np
import pytest
from scipy.stats import ks_2samp, kstest

from fracwalk.errors import DomainError
from fracwalk.schemas import JumpLaw, WaitingLaw
from fracwalk.special import ml_negative
from fracwalk.variates import (
    RngStream,
    empirical_char,
    empirical_laplace,
    ks_critical,
    run_batches,
    sample_jump,
    sample_mittag_leffler,
    sample_mittag_leffler_inversion,
    sample_one_sided_stable,
    sample_sym_stable,
    sample_waiting,
)

N = 20_000


def test_streams_are_reproducible():
    a = RngStream(7, 3).uniform(5)
    b = RngStream(7, 3).uniform(5)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, RngStream(7, 4).uniform(5))
    assert not np.array_equal(a, RngStream(7, 3).child(0).uniform(5))


def test_uniforms_stay_open():
    u = RngStream(1).uniform(100_000)
    assert u.min() > 0.0
    assert u.max() < 1.0


def test_seed_range_is_checked():
    with pytest.raises(DomainError):
        RngStream(-1)
    with pytest.raises(DomainError):
        RngStream(0, 2**64)


def test_batches_do_not_depend_on_threads(stream):
    def draw(n, child):
        return child.normal(n)

    one = np.concatenate(run_batches(draw, 25_000, stream, threads=1, batch_size=4000))
    four = np.concatenate(run_batches(draw, 25_000, stream, threads=4, batch_size=4000))
    np.testing.assert_array_equal(one, four)


@pytest.mark.parametrize("beta", [0.5, 0.8])
def test_mittag_leffler_transform(stream, beta):
    samples = sample_mittag_leffler(beta, stream, size=N)
    mean, err = empirical_laplace(samples, 1.0)
    assert abs(mean - 0.5) < 4.0 * err


def test_mittag_leffler_beta_one_is_exponential(stream):
    samples = sample_mittag_leffler(1.0, stream, size=N)
    assert kstest(samples, "expon").pvalue > 1e-3


@pytest.mark.parametrize("beta", [0.4, 0.7])
def test_inversion_sampler_matches_survival(stream, beta):
    samples = sample_mittag_leffler_inversion(beta, stream, size=5000)

    def cdf(t):
        return 1.0 - ml_negative(beta, 1.0, np.asarray(t) ** beta)

    assert kstest(samples, cdf).pvalue > 1e-3


def test_refined_inversion_is_close_to_table():
    a = sample_mittag_leffler_inversion(0.6, RngStream(3), size=20)
    b = sample_mittag_leffler_inversion(0.6, RngStream(3), size=20, refine=True)
    np.testing.assert_allclose(a, b, rtol=1e-4)


def test_samplers_agree_in_two_sample_distance():
    a = sample_mittag_leffler(0.6, RngStream(11, 0), size=5000)
    b = sample_mittag_leffler_inversion(0.6, RngStream(11, 1), size=4000)
    assert ks_2samp(a, b).statistic < ks_critical(5000, 4000, level=1e-4)


def test_ks_critical_matches_tabulated_values():
    assert ks_critical(10_000) == pytest.approx(0.0163, abs=1e-4)
    assert ks_critical(100, 100, level=0.05) == pytest.approx(1.358 * math.sqrt(0.02), rel=1e-3)


def test_one_sided_stable_transform(stream):
    samples = sample_one_sided_stable(0.6, stream, size=N)
    assert samples.min() > 0.0
    mean, err = empirical_laplace(samples, 1.0)
    assert abs(mean - math.exp(-1.0)) < 4.0 * err


@pytest.mark.parametrize("alpha", [0.7, 1.0, 1.5, 2.0])
def test_symmetric_stable_char(stream, alpha):
    samples = sample_sym_stable(alpha, stream, size=N)
    mean, err = empirical_char(samples, 1.0)
    assert abs(mean - math.exp(-1.0)) < 4.0 * err


def test_pareto_waiting_survival(stream):
    law = WaitingLaw.pareto(0.5, theta=2.0)
    samples = sample_waiting(law, stream, size=N)
    p = np.mean(samples > 2.0)
    expected = 2.0**-0.5
    assert abs(p - expected) < 4.0 * math.sqrt(expected * (1 - expected) / N)


def test_jump_samplers(stream):
    assert set(np.unique(sample_jump(JumpLaw.two_point(), stream, size=1000))) == {-1.0, 1.0}
    assert np.all(sample_jump(JumpLaw.unit_drift(), stream, size=10) == 1.0)
    pareto = sample_jump(JumpLaw.sym_pareto(1.5, theta=0.5), stream, size=1000)
    assert np.abs(pareto).min() >= 0.5
    assert isinstance(sample_jump(JumpLaw.gaussian(), stream), float)


def test_sampler_domains(stream):
    with pytest.raises(DomainError):
        sample_mittag_leffler(1.2, stream)
    with pytest.raises(DomainError):
        sample_one_sided_stable(1.0, stream)
    with pytest.raises(DomainError):
        sample_sym_stable(2.5, stream)
