"""Counter-based random substreams.

Trial t of a run seeded with s draws from numpy's Philox generator keyed by

    key(s, t) = mix64((mix64(s) + t * GOLDEN_GAMMA) mod 2^64)

where mix64 is the splitmix64 finalizer. Substreams depend only on
(seed, trial), so results do not depend on worker count or execution order.
"""

import numpy as np
from numpy.typing import NDArray

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit unsigned integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_key(seed: int, trial: int) -> int:
    """Philox key of a trial substream."""
    if trial < 0:
        raise ValueError(f"trial index must be non-negative, got {trial}")
    return mix64((mix64(seed) + trial * GOLDEN_GAMMA) & MASK64)


class RandomStream:
    """Exclusive random source for a single trial.

    Draw order is part of the reproducibility contract: callers request
    uniforms and signs in a fixed sequence per path.
    """

    def __init__(self, seed: int, trial: int = 0):
        """
        Initialize the substream.

        Args:
            seed: Master seed of the run
            trial: Trial index within the run
        """
        self.seed = seed
        self.trial = trial
        self.key = derive_key(seed, trial)
        self._generator = np.random.Generator(np.random.Philox(key=self.key))

    def uniform(self, size: int) -> NDArray[np.float64]:
        """size uniforms on [0, 1)."""
        return self._generator.random(size)

    def open_uniform(self, size: int) -> NDArray[np.float64]:
        """size uniforms on (0, 1]."""
        return 1.0 - self._generator.random(size)

    def signs(self, size: int) -> NDArray[np.float64]:
        """size independent fair signs in {-1.0, +1.0}."""
        return np.where(self._generator.random(size) < 0.5, -1.0, 1.0)
