"""Random streams and samplers."""

from fracwalk.variates.pool import run_batches
from fracwalk.variates.rng import RngStream
from fracwalk.variates.samplers import (
    empirical_char,
    empirical_laplace,
    ks_critical,
    sample_jump,
    sample_mittag_leffler,
    sample_mittag_leffler_inversion,
    sample_one_sided_stable,
    sample_sym_stable,
    sample_waiting,
)

__all__ = [
    "RngStream",
    "run_batches",
    "sample_waiting",
    "sample_jump",
    "sample_mittag_leffler",
    "sample_mittag_leffler_inversion",
    "sample_one_sided_stable",
    "sample_sym_stable",
    "empirical_char",
    "empirical_laplace",
    "ks_critical",
]
