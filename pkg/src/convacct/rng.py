"""Deterministic random streams for the synthetic-data generators.

The generator is a counter-based SplitMix64, spelled out completely so that
any implementation (any language) can reproduce a seeded stream:

    state_i  = (seed + (i + 1) * 0x9E3779B97F4A7C15)  mod 2^64
    z        = state_i
    z        = (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9  mod 2^64
    z        = (z XOR (z >> 27)) * 0x94D049BB133111EB  mod 2^64
    output_i = z XOR (z >> 31)

where i = 0, 1, 2, ... counts draws since construction.  Uniform variates
keep the top 53 bits:

    u_i = (output_i >> 11) * 2^-53          in [0, 1)

Normal variates use the Box-Muller transform, keeping only the cosine
branch.  A batch of n normals consumes 2n uniforms: the first n as a, the
next n as b, then

    n_j = sqrt(-2 ln(1 - a_j)) * cos(2 pi b_j)

1 - a is used inside the log so the argument lies in (0, 1].
"""

from __future__ import annotations

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


class SplitMix64:
    """Seeded deterministic stream of uniforms and normals."""

    def __init__(self, seed: int):
        self._seed = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
        self._count = 0

    def raw(self, n: int) -> np.ndarray:
        """Next ``n`` raw 64-bit outputs (uint64 array)."""
        idx = np.arange(self._count + 1, self._count + n + 1, dtype=np.uint64)
        self._count += n
        z = self._seed + idx * _GAMMA
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))

    def uniforms(self, n: int) -> np.ndarray:
        """Next ``n`` uniforms in [0, 1)."""
        return (self.raw(n) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def uniform_range(self, lo: float, hi: float, n: int) -> np.ndarray:
        return lo + (hi - lo) * self.uniforms(n)

    def normals(self, n: int) -> np.ndarray:
        """Next ``n`` standard normals (Box-Muller, cosine branch)."""
        u1 = self.uniforms(n)
        u2 = self.uniforms(n)
        return np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(2.0 * np.pi * u2)
