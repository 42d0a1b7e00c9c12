"""Deterministic counter-based pseudo-random numbers (SplitMix64).

Every output is a pure function of (seed, counter position), so streams
reproduce bit-for-bit across platforms and across scalar/array call mixes.
Constants are the standard SplitMix64 ones (Steele, Lea & Flood); the first
output for seed 0 is the published reference value 0xE220A8397B1DCDAF.
"""

from __future__ import annotations

import math

import numpy as np

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB

# 2**-53: spacing of doubles in [0, 1)
_U53 = 1.0 / 9007199254740992.0


def _mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX_A) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & _MASK64
    return z ^ (z >> 31)


def value_at(seed: int, index: int) -> int:
    """64-bit output at counter position ``index`` of the stream for ``seed``."""
    return _mix64((seed + (index + 1) * _GAMMA) & _MASK64)


def derive_seed(seed: int, *keys: int) -> int:
    """Fold integer keys into a sub-stream seed.

    Used to give, e.g., every (feature, repeat) pair of a permutation-importance
    run its own independent stream while still deriving from one global seed.
    """
    s = seed & _MASK64
    for k in keys:
        s = _mix64((s + (int(k) + 1) * _GAMMA) & _MASK64)
    return s


class SplitMix64:
    """Stateful view over the counter-based stream for one seed."""

    def __init__(self, seed: int):
        self._seed = int(seed) & _MASK64
        self._counter = 0
        self._spare_normal: float | None = None

    @property
    def seed(self) -> int:
        return self._seed

    def next_u64(self) -> int:
        v = value_at(self._seed, self._counter)
        self._counter += 1
        return v

    def uniform(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _U53

    def uniforms(self, n: int) -> np.ndarray:
        """Vectorized batch of ``n`` uniforms; consumes ``n`` counter positions."""
        if n < 0:
            raise ValueError("n must be non-negative")
        idx = np.arange(self._counter + 1, self._counter + n + 1, dtype=np.uint64)
        self._counter += n
        z = (np.uint64(self._seed) + idx * np.uint64(_GAMMA))
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX_A)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX_B)
        z = z ^ (z >> np.uint64(31))
        return (z >> np.uint64(11)).astype(np.float64) * _U53

    def normal(self) -> float:
        """Standard normal via Box-Muller; caches the spare deviate."""
        if self._spare_normal is not None:
            v, self._spare_normal = self._spare_normal, None
            return v
        u1 = 1.0 - self.uniform()  # (0, 1]
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        self._spare_normal = r * math.sin(2.0 * math.pi * u2)
        return r * math.cos(2.0 * math.pi * u2)

    def normals(self, n: int) -> np.ndarray:
        """Vectorized batch of ``n`` standard normals (ignores the scalar spare)."""
        if n < 0:
            raise ValueError("n must be non-negative")
        pairs = (n + 1) // 2
        u1 = 1.0 - self.uniforms(pairs)
        u2 = self.uniforms(pairs)
        r = np.sqrt(-2.0 * np.log(u1))
        out = np.concatenate([r * np.cos(2.0 * np.pi * u2), r * np.sin(2.0 * np.pi * u2)])
        return out[:n]

    def randint_below(self, n: int) -> int:
        """Unbiased integer in [0, n) via rejection sampling."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = ((1 << 64) // n) * n
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def permutation(self, n: int) -> np.ndarray:
        """Fisher-Yates permutation of range(n)."""
        idx = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.randint_below(i + 1)
            idx[i], idx[j] = idx[j], idx[i]
        return np.array(idx, dtype=np.intp)
