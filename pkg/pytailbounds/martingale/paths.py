"""Realized increment paths."""

from functools import cached_property

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field


class Path(BaseModel):
    """Realized increments xi_1..xi_n with cached partial sums S_k."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    increments: tuple[float, ...] = Field(min_length=1)

    @classmethod
    def from_array(cls, values: NDArray[np.float64]) -> "Path":
        """Build a path from a one-dimensional array of increments."""
        return cls(increments=tuple(float(v) for v in np.ravel(values)))

    @property
    def n(self) -> int:
        return len(self.increments)

    @cached_property
    def array(self) -> NDArray[np.float64]:
        """Increments as a read-only float64 array."""
        values = np.asarray(self.increments, dtype=np.float64)
        values.setflags(write=False)
        return values

    @cached_property
    def partial_sums(self) -> NDArray[np.float64]:
        """S_1..S_n, accumulated left to right."""
        sums = np.cumsum(self.array)
        sums.setflags(write=False)
        return sums

    def scaled(self, factor: float) -> "Path":
        """Return the path with every increment multiplied by factor."""
        return Path.from_array(self.array * factor)
