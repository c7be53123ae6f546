"""Waiting-time and jump laws with their transforms and tail constants."""

from __future__ import annotations

import math
from typing import Literal, Optional

import mpmath as mp
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.special import erfc, gamma, gammaincc

from fracwalk.errors import DomainError
from fracwalk.numerics import fourier_tail, integrate, integrate_algebraic
from fracwalk.special.mittag_leffler import ml_negative

WaitingKind = Literal["exponential", "mittag_leffler", "pareto"]
JumpKind = Literal["two_point", "gaussian", "sym_pareto", "sym_stable", "unit_drift"]

# beyond this x = theta s the incomplete-gamma form goes through mpmath
_GAMMA_SWITCH = 500.0


class WaitingLaw(BaseModel):
    """Law of the iid waiting times between renewal events.

    ``exponential`` has rate ``rate``; ``mittag_leffler`` has survival E_beta(-t^beta);
    ``pareto`` has survival (1 + t/theta)^(-beta).
    """

    model_config = ConfigDict(frozen=True)

    kind: WaitingKind
    beta: float = Field(default=1.0, gt=0.0, le=1.0)
    rate: float = Field(default=1.0, gt=0.0)
    theta: float = Field(default=1.0, gt=0.0)

    @model_validator(mode="after")
    def _check_kind(self) -> "WaitingLaw":
        if self.kind == "exponential" and self.beta != 1.0:
            raise ValueError("exponential waiting times have beta = 1")
        if self.kind == "pareto" and not self.beta < 1.0:
            raise ValueError("pareto waiting times need beta < 1")
        return self

    @classmethod
    def exponential(cls, rate: float = 1.0) -> "WaitingLaw":
        return cls(kind="exponential", rate=rate)

    @classmethod
    def mittag_leffler(cls, beta: float) -> "WaitingLaw":
        return cls(kind="mittag_leffler", beta=beta)

    @classmethod
    def pareto(cls, beta: float, theta: float = 1.0) -> "WaitingLaw":
        return cls(kind="pareto", beta=beta, theta=theta)

    @property
    def is_exponential(self) -> bool:
        """Exponential in law, including the Mittag-Leffler case beta = 1."""
        return self.kind == "exponential" or (self.kind == "mittag_leffler" and self.beta == 1.0)

    @property
    def tail_c(self) -> Optional[float]:
        """c in Psi(t) ~ (c / beta) t^-beta; only defined for power tails."""
        if self.kind == "pareto":
            return self.beta * self.theta**self.beta
        return None

    @property
    def lambda_scale(self) -> float:
        """lambda in 1 - f(s) ~ lambda s^beta as s -> 0."""
        if self.kind == "exponential":
            return 1.0 / self.rate
        if self.kind == "mittag_leffler":
            return 1.0
        return self.tail_c * math.pi / (gamma(self.beta + 1.0) * math.sin(self.beta * math.pi))

    def survival(self, t) -> np.ndarray:
        """Psi(t) = P(T > t)."""
        t = np.asarray(t, dtype=float)
        tp = np.maximum(t, 0.0)
        if self.kind == "exponential":
            return np.exp(-self.rate * tp)
        if self.kind == "mittag_leffler":
            return ml_negative(self.beta, 1.0, tp**self.beta)
        return (1.0 + tp / self.theta) ** (-self.beta)

    def cdf(self, t) -> np.ndarray:
        return 1.0 - self.survival(t)

    def density(self, t) -> np.ndarray:
        """phi(t) for t > 0."""
        t = np.asarray(t, dtype=float)
        if self.kind == "exponential":
            return self.rate * np.exp(-self.rate * t)
        if self.kind == "mittag_leffler":
            if self.beta == 1.0:
                return np.exp(-t)
            return t ** (self.beta - 1.0) * ml_negative(self.beta, self.beta, t**self.beta)
        return self.beta / self.theta * (1.0 + t / self.theta) ** (-self.beta - 1.0)

    def laplace(self, s, method: str = "analytic"):
        """Laplace transform f(s) of the density; s real or complex with Re s > 0."""
        return 1.0 - self.laplace_complement(s, method=method)

    def laplace_complement(self, s, method: str = "analytic"):
        """1 - f(s), computed without cancellation for small s.

        Args:
            s: Transform variable, real or complex, Re s > 0
            method: ``analytic`` uses closed forms and, for the Pareto law, the upper
                incomplete gamma function; ``quadrature`` integrates
                s int_0^inf exp(-s t) Psi(t) dt (real s only)

        Raises:
            DomainError: for s outside the right half plane
            QuadratureError: if the quadrature route fails
        """
        if isinstance(s, complex):
            if not s.real > 0:
                raise DomainError(f"Laplace variable needs a positive real part, got {s}")
        else:
            s = float(s)
            if not s > 0:
                raise DomainError(f"Laplace variable must be positive, got {s}")

        if self.kind == "exponential":
            return s / (self.rate + s)
        if self.kind == "mittag_leffler":
            sb = s**self.beta
            return sb / (1.0 + sb)
        if method == "quadrature":
            if isinstance(s, complex):
                raise DomainError("quadrature route takes real s only")
            return self._pareto_complement_quad(s)
        if method != "analytic":
            raise DomainError(f"unknown transform method {method!r}")
        return self._pareto_complement(s)

    def _pareto_complement(self, s):
        """x^beta e^x Gamma(1 - beta, x) with x = theta s."""
        x = self.theta * s
        a = 1.0 - self.beta
        if isinstance(x, float) and x <= _GAMMA_SWITCH:
            return x**self.beta * math.exp(x) * gammaincc(a, x) * gamma(a)
        with mp.workdps(30):
            xm = mp.mpc(x) if isinstance(x, complex) else mp.mpf(x)
            value = mp.power(xm, self.beta) * mp.exp(xm) * mp.gammainc(a, xm)
        return complex(value) if isinstance(x, complex) else float(value)

    def _pareto_complement_quad(self, s: float) -> float:
        # u = s t turns s int e^{-st} Psi dt into int e^{-u} (x / (x + u))^beta du
        x = self.theta * s
        b = self.beta

        def head(u: float) -> float:
            return math.exp(-u) * x**b / (x + u) ** b

        value, _ = integrate(
            head, 0.0, np.inf, points=[x, 1.0], abs_tol=1e-14, rel_tol=1e-12,
            what=f"pareto transform at s={s}",
        )
        return value

    def laplace_mp(self, s):
        """f(s) at an mpmath point, for contour inversion."""
        if self.kind == "exponential":
            return self.rate / (self.rate + s)
        if self.kind == "mittag_leffler":
            return 1 / (1 + mp.power(s, self.beta))
        return 1 - self._pareto_complement_mp(s)

    def survival_laplace_mp(self, s):
        """Laplace transform of the survival, (1 - f(s)) / s, at an mpmath point."""
        if self.kind == "exponential":
            return 1 / (self.rate + s)
        if self.kind == "mittag_leffler":
            sb = mp.power(s, self.beta)
            return sb / (s * (1 + sb))
        return self._pareto_complement_mp(s) / s

    def _pareto_complement_mp(self, s):
        x = self.theta * s
        return mp.power(x, self.beta) * mp.exp(x) * mp.gammainc(1 - mp.mpf(self.beta), x)


class JumpLaw(BaseModel):
    """Law of the iid jumps of the walk.

    ``two_point`` is +-1 with equal probability; ``gaussian`` has standard deviation
    ``sigma``; ``sym_pareto`` is S theta U^(-1/alpha) with a fair sign S; ``sym_stable``
    has characteristic function exp(-|k|^alpha); ``unit_drift`` always jumps by +1.
    """

    model_config = ConfigDict(frozen=True)

    kind: JumpKind
    alpha: float = Field(default=2.0, gt=0.0, le=2.0)
    sigma: float = Field(default=1.0, gt=0.0)
    theta: float = Field(default=1.0, gt=0.0)

    @model_validator(mode="after")
    def _check_kind(self) -> "JumpLaw":
        if self.kind in ("two_point", "gaussian", "unit_drift") and self.alpha != 2.0:
            raise ValueError(f"{self.kind} jumps have finite variance, alpha = 2")
        if self.kind == "sym_pareto" and not self.alpha < 2.0:
            raise ValueError("sym_pareto jumps need alpha < 2")
        return self

    @classmethod
    def two_point(cls) -> "JumpLaw":
        return cls(kind="two_point")

    @classmethod
    def gaussian(cls, sigma: float = 1.0) -> "JumpLaw":
        return cls(kind="gaussian", sigma=sigma)

    @classmethod
    def sym_pareto(cls, alpha: float, theta: float = 1.0) -> "JumpLaw":
        return cls(kind="sym_pareto", alpha=alpha, theta=theta)

    @classmethod
    def sym_stable(cls, alpha: float) -> "JumpLaw":
        return cls(kind="sym_stable", alpha=alpha)

    @classmethod
    def unit_drift(cls) -> "JumpLaw":
        return cls(kind="unit_drift")

    @property
    def symmetric(self) -> bool:
        return self.kind != "unit_drift"

    @property
    def lattice(self) -> bool:
        """Whether every jump is an integer."""
        return self.kind in ("two_point", "unit_drift")

    @property
    def sigma2(self) -> Optional[float]:
        """Second moment, for the finite-variance laws."""
        if self.kind == "two_point":
            return 1.0
        if self.kind == "gaussian":
            return self.sigma**2
        if self.kind == "sym_stable" and self.alpha == 2.0:
            return 2.0
        return None

    @property
    def tail_b(self) -> Optional[float]:
        """b in P(X > x) ~ (b / alpha) x^-alpha, counted per side."""
        if self.kind == "sym_pareto":
            return self.alpha * self.theta**self.alpha / 2.0
        if self.kind == "sym_stable" and self.alpha < 2.0:
            return gamma(self.alpha + 1.0) * math.sin(math.pi * self.alpha / 2.0) / math.pi
        return None

    @property
    def mu_scale(self) -> float:
        """mu in 1 - w(k) ~ mu |k|^alpha as k -> 0.

        Raises:
            DomainError: for the one-sided unit drift
        """
        if self.kind == "unit_drift":
            raise DomainError("unit drift jumps have no symmetric scale")
        if self.sigma2 is not None:
            return self.sigma2 / 2.0
        a = self.alpha
        return self.tail_b * math.pi / (gamma(a + 1.0) * math.sin(math.pi * a / 2.0))

    def tail_probability(self, x) -> np.ndarray:
        """P(|X| > x) for x >= 0, where a closed form exists."""
        x = np.asarray(x, dtype=float)
        if self.kind == "sym_pareto":
            ratio = np.maximum(x, self.theta) / self.theta
            return np.where(x < self.theta, 1.0, ratio**-self.alpha)
        if self.kind == "gaussian":
            return erfc(x / (self.sigma * math.sqrt(2.0)))
        if self.kind == "two_point":
            return np.where(x < 1.0, 1.0, 0.0)
        raise DomainError(f"no closed-form tail for {self.kind} jumps")

    def fourier(self, kappa):
        """Characteristic function w(k) = E exp(i k X); real for symmetric laws."""
        kappa = np.asarray(kappa, dtype=float)
        if self.kind == "unit_drift":
            return np.exp(1j * kappa)
        return 1.0 - self.fourier_complement(kappa)

    def fourier_complement(self, kappa):
        """1 - w(k), computed without cancellation for small k."""
        kappa = np.asarray(kappa, dtype=float)
        if self.kind == "two_point":
            return 2.0 * np.sin(kappa / 2.0) ** 2
        if self.kind == "gaussian":
            return -np.expm1(-0.5 * (self.sigma * kappa) ** 2)
        if self.kind == "sym_stable":
            return -np.expm1(-np.abs(kappa) ** self.alpha)
        if self.kind == "unit_drift":
            return -np.expm1(1j * kappa)
        flat = np.abs(kappa).ravel() * self.theta
        out = np.array([_pareto_fourier_complement(self.alpha, float(y)) for y in flat])
        return out.reshape(kappa.shape)


def _pareto_fourier_complement(alpha: float, y: float) -> float:
    """1 - E cos(y V) for V with survival v^-alpha on [1, inf)."""
    if y == 0.0:
        return 0.0
    what = f"pareto characteristic function at y={y}"
    if y <= 1.0:
        full = math.pi / (2.0 * gamma(alpha) * math.sin(math.pi * alpha / 2.0))

        # (1 - cos u) u^(-alpha-1) = [2 sin^2(u/2) / u^2] u^(1-alpha)
        def smooth(u: float) -> float:
            if u == 0.0:
                return 0.5
            half = math.sin(u / 2.0)
            return 2.0 * half * half / (u * u)

        head, _ = integrate_algebraic(smooth, 0.0, y, 1.0 - alpha, abs_tol=1e-15, what=what)
        return y**alpha * (full - alpha * head)

    tail, _ = fourier_tail(lambda u: u ** (-alpha - 1.0), y, 1.0, abs_tol=1e-14, what=what)
    return 1.0 - alpha * y**alpha * tail
