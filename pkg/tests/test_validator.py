import pytest

from fracwalk.config import get_config
from fracwalk.errors import DomainError, InversionError
from fracwalk.services import ValidatorService
from fracwalk.services import validator


@pytest.fixture
def service():
    return ValidatorService(get_config())


def test_selection(service):
    everything = service.select()
    quick = service.select(quick=True)
    assert everything == list(validator.CHECKS)
    assert set(quick) < set(everything)
    assert "fractional-poisson-pmf" not in quick
    assert service.select(only=["degeneracies"]) == ["degeneracies"]
    with pytest.raises(DomainError, match="no-such"):
        service.select(only=["no-such"])


@pytest.mark.parametrize(
    "name",
    [
        "respeed-invariance",
        "thinning-universality",
        "transform-residual",
        "montroll-weiss-series",
        "degeneracies",
        "ml-asymptotics",
        "mwright-closed-form",
        "ml-complete-monotonicity",
        "laplace-pairs",
    ],
)
def test_fast_checks_pass(service, name):
    (result,) = service.run(seed=0, quick=True, only=[name])
    assert result.passed, result.detail
    assert not result.error


def test_numerical_failure_becomes_failed_result(service, monkeypatch):
    def broken(stream, full, config):
        raise InversionError("contour disagreement")

    monkeypatch.setitem(validator.CHECKS, "degeneracies", (broken, True))
    (result,) = service.run(seed=0, only=["degeneracies"])
    assert not result.passed
    assert result.error
    assert "InversionError" in result.detail


@pytest.mark.slow
def test_quick_suite_passes(service):
    results = service.run(seed=0, quick=True)
    failed = [(r.name, r.detail) for r in results if not r.passed]
    assert not failed
