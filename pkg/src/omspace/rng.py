"""Deterministic random numbers for probe generation.

All suites draw their probes from SplitMix64 (Steele, Lea & Flood 2014), a
64-bit-state generator with a published reference algorithm, so that the same
seed reproduces the same probes in any implementation, in any language. Do not
swap in a platform RNG here: report reproducibility depends on this exact
update function.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 stream: state advances by the golden-gamma constant.

    next_u64 implements the reference mixing function verbatim; everything
    else (floats, normals, complex arrays) is derived from it.
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self, low: float = 0.0, high: float = 1.0) -> float:
        # 53 significant bits, as for IEEE doubles in [0, 1)
        u = self.next_u64() >> 11
        return low + (high - low) * (u * (1.0 / (1 << 53)))

    def uniforms(self, n: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        return np.array([self.uniform(low, high) for _ in range(n)])

    def integer(self, low: int, high: int) -> int:
        """Uniform integer in [low, high] by rejection-free modulo (bias < 2^-50 for small ranges)."""
        span = high - low + 1
        return low + self.next_u64() % span

    def normal(self) -> float:
        # Box-Muller with deterministic pairing; one value per call, spare discarded
        u1 = self.uniform(1e-300, 1.0)
        u2 = self.uniform()
        return float(np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2))

    def normals(self, shape) -> np.ndarray:
        n = int(np.prod(shape))
        return np.array([self.normal() for _ in range(n)]).reshape(shape)

    def complex_normals(self, shape) -> np.ndarray:
        return self.normals(shape) + 1j * self.normals(shape)


def rng_for(seed: int, stream: str) -> SplitMix64:
    """Independent substream: fold a stream label into the seed.

    FNV-1a over the label keeps substreams decorrelated while staying
    reproducible from (seed, label) alone.
    """
    h = 0xCBF29CE484222325
    for byte in stream.encode():
        h = ((h ^ byte) * 0x100000001B3) & _MASK
    return SplitMix64((seed ^ h) & _MASK)
