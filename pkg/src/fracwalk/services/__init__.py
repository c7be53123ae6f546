"""Services for fracwalk."""

from fracwalk.services.ctrw import CtrwService
from fracwalk.services.fracdiff import FracDiffService
from fracwalk.services.renewal import RenewalService
from fracwalk.services.validator import ValidatorService

__all__ = [
    "CtrwService",
    "FracDiffService",
    "RenewalService",
    "ValidatorService",
]
