"""Reproducible, splittable random streams on the counter-based Philox generator."""

from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from fracwalk.errors import DomainError

MAX_SEED = 2**64 - 1


class RngStream:
    """A random stream identified by (seed, stream_id) and an optional child path.

    The same identity always yields the same variates. Children ``child(i)`` are
    independent streams derived through ``SeedSequence`` spawn keys, so batches of a
    parallel run draw the same numbers whatever the thread count.
    """

    def __init__(self, seed: int = 0, stream_id: int = 0, path: Tuple[int, ...] = ()):
        if not 0 <= seed <= MAX_SEED:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
        if not 0 <= stream_id <= MAX_SEED:
            raise DomainError(f"stream_id must be a 64-bit unsigned integer, got {stream_id}")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.path = tuple(int(i) for i in path)
        self._generator: Optional[np.random.Generator] = None

    def __repr__(self) -> str:
        suffix = f", path={self.path}" if self.path else ""
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id}{suffix})"

    @property
    def generator(self) -> np.random.Generator:
        """The underlying generator; created on first use and then advanced by draws."""
        if self._generator is None:
            seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, *self.path))
            self._generator = np.random.Generator(np.random.Philox(seq))
        return self._generator

    def child(self, index: int) -> "RngStream":
        """Independent sub-stream number ``index``, fresh regardless of this stream's state."""
        return RngStream(self.seed, self.stream_id, (*self.path, index))

    def uniform(self, size=None):
        """Uniform variates on the open interval (0, 1), 53 random bits each."""
        return (self.generator.integers(0, 2**53, size=size) + 0.5) * 2.0**-53

    def exponential(self, size=None):
        """Unit exponential variates, strictly positive."""
        return -np.log(self.uniform(size))

    def normal(self, size=None):
        return self.generator.standard_normal(size)

    def signs(self, size=None):
        """Fair +-1 signs."""
        return np.where(self.generator.random(size) < 0.5, -1.0, 1.0)

    def bernoulli(self, p: float, size=None):
        return self.generator.random(size) < p
