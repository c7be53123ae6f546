"""Special functions: Mittag-Leffler family, M-Wright, stable densities."""

from fracwalk.special.mittag_leffler import (
    MittagLefflerTable,
    ml_density,
    ml_density_result,
    ml_negative,
    ml_one,
    ml_spectral_weight,
    ml_survival,
    ml_table,
    ml_two,
)
from fracwalk.special.stable import (
    StableDensityTable,
    one_sided_stable_density,
    stable_table,
    symmetric_stable_density,
)
from fracwalk.special.types import EvalResult, MLParams
from fracwalk.special.wright import WrightTable, mwright, mwright_integral, wright_table

__all__ = [
    "EvalResult",
    "MLParams",
    "MittagLefflerTable",
    "StableDensityTable",
    "WrightTable",
    "ml_density",
    "ml_density_result",
    "ml_negative",
    "ml_one",
    "ml_spectral_weight",
    "ml_survival",
    "ml_table",
    "ml_two",
    "mwright",
    "mwright_integral",
    "one_sided_stable_density",
    "stable_table",
    "symmetric_stable_density",
    "wright_table",
]
