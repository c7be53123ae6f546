"""Numerical Laplace inversion on the fixed Talbot contour.

The contour s(theta) = r * theta * (cot(theta) + i), r = 2M / (5t), is evaluated in
extended precision with mpmath. Every inversion is done twice, with M and 2M nodes,
and the difference serves as the error estimate.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence, Tuple

import mpmath as mp

from fracwalk.errors import InversionError
from fracwalk.log import get_logger

logger = get_logger(__name__)

Transform = Callable[[mp.mpc], mp.mpc]


def talbot_radius(t: float, nodes: int) -> float:
    """Real-axis crossing of the contour used for time ``t``."""
    return 2.0 * nodes / (5.0 * t)


def outside_contour(pole: complex, t: float, nodes: int) -> bool:
    """Whether ``pole`` lies between the Talbot contour and the Bromwich line.

    Residues at such poles are not picked up by the contour and must be added by the
    caller.
    """
    r = talbot_radius(t, nodes)
    theta = pole.imag / r
    if abs(theta) >= float(mp.pi):
        return True
    if theta == 0.0:
        return pole.real > r
    return pole.real > r * theta * float(mp.cot(theta))


def talbot(transform: Transform, t: float, nodes: int) -> mp.mpc:
    """Fixed Talbot inversion of ``transform`` at time ``t`` with ``nodes`` nodes."""
    with mp.workdps(max(30, nodes)):
        t_mp = mp.mpf(t)
        r = mp.mpf(2 * nodes) / (5 * t_mp)
        total = mp.mpf(0.5) * transform(mp.mpc(r)) * mp.exp(r * t_mp)
        for k in range(1, nodes):
            theta = k * mp.pi / nodes
            cot = mp.cot(theta)
            s = r * theta * mp.mpc(cot, 1)
            sigma = theta + (theta * cot - 1) * cot
            total += mp.exp(t_mp * s) * transform(s) * mp.mpc(1, sigma)
        return r / nodes * total


def invert_laplace(
    transform: Transform,
    t: float,
    *,
    nodes: int = 48,
    tol: float = 1e-8,
    residues: Optional[Callable[[int], Sequence[complex]]] = None,
    what: str = "Laplace inversion",
) -> Tuple[complex, float]:
    """Invert ``transform`` at ``t`` with a node-doubling error estimate.

    Args:
        transform: Laplace transform, evaluated at mpmath complex points
        t: Time > 0
        nodes: Base node count M; the reported value uses 2M
        tol: Admissible estimate, relative to max(1, |value|)
        residues: Maps a node count to the residue contributions of the poles lying
            right of that contour; they are added to the matching evaluation

    Returns:
        Tuple of (value, error estimate). The value is complex; real-valued callers
        take ``.real``.

    Raises:
        InversionError: if the two node counts disagree by more than ``tol``
    """
    if t <= 0:
        raise InversionError(f"{what}: time must be positive, got {t}")

    def extra(m: int) -> complex:
        return complex(sum(residues(m))) if residues is not None else 0.0

    coarse = complex(talbot(transform, t, nodes)) + extra(nodes)
    fine = complex(talbot(transform, t, 2 * nodes)) + extra(2 * nodes)
    err = abs(fine - coarse)
    logger.debug("%s at t=%g: %s (doubling estimate %.3g)", what, t, fine, err)
    if err > tol * max(1.0, abs(fine)):
        raise InversionError(
            f"{what} at t={t}: node doubling disagrees by {err:.3g} (tolerance {tol:.1g})"
        )
    return fine, err
