"""fracwalk: Mittag-Leffler renewal processes, CTRWs and space-time fractional diffusion."""

__version__ = "0.1.0"
