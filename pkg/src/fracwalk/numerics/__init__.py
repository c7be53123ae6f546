"""Numerical kernels: series summation, adaptive quadrature, Laplace inversion."""

from fracwalk.numerics.laplace import invert_laplace, outside_contour, talbot
from fracwalk.numerics.quadrature import (
    cosine_transform,
    fourier_tail,
    integrate,
    integrate_algebraic,
)
from fracwalk.numerics.summation import compensated_sum, digits_for, mp_series

__all__ = [
    "compensated_sum",
    "cosine_transform",
    "digits_for",
    "fourier_tail",
    "integrate",
    "integrate_algebraic",
    "invert_laplace",
    "mp_series",
    "outside_contour",
    "talbot",
]
