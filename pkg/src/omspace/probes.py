"""Reproducible probe families shared by the suites and the test suite.

Probes are defined by parameters, not by samples, so the same probe can be
realized on grids of different resolution (needed for refinement drift
checks). All randomness flows through SplitMix64 streams.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .bargmann import hermite_values_1d
from .orlicz import DiscreteSeq, SampledField
from .rng import SplitMix64

__all__ = [
    "SignalParams",
    "sample_signal",
    "random_signal_params",
    "random_seq",
    "random_field",
    "bump_field",
    "hash_inputs",
]


def hash_inputs(*arrays) -> str:
    h = hashlib.sha256()
    for a in arrays:
        h.update(np.ascontiguousarray(a).tobytes())
    return h.hexdigest()[:12]


@dataclass(frozen=True)
class SignalParams:
    """Hermite combination plus modulated Gaussians; resolution-independent."""

    hermite: tuple[tuple[int, complex], ...]
    gauss: tuple[tuple[float, float, float, complex], ...]  # x0, xi0, width, coeff


def sample_signal(params: SignalParams, grid: SampledField) -> SampledField:
    x = grid.axis_coords(0)
    out = np.zeros_like(x, dtype=complex)
    if params.hermite:
        n_max = max(k for k, _ in params.hermite)
        H = hermite_values_1d(n_max, x)
        for k, c in params.hermite:
            out += c * H[k]
    for x0, xi0, width, c in params.gauss:
        out += c * np.pi ** (-0.25) * np.exp(-0.5 * ((x - x0) / width) ** 2
                                             + 1j * xi0 * x) / np.sqrt(width)
    return SampledField(out, grid.spacing, grid.origin)


def random_signal_params(gen: SplitMix64, max_order: int = 8,
                         n_gauss: int = 1) -> SignalParams:
    herm = []
    for k in range(max_order + 1):
        c = (gen.normal() + 1j * gen.normal()) * 0.6**k
        herm.append((k, c))
    gauss = []
    for _ in range(n_gauss):
        gauss.append((gen.uniform(-2.0, 2.0), gen.uniform(-2.0, 2.0),
                      gen.uniform(0.8, 1.4), gen.normal() + 1j * gen.normal()))
    return SignalParams(tuple(herm), tuple(gauss))


def random_seq(gen: SplitMix64, shape, step=None, origin=None) -> DiscreteSeq:
    if isinstance(shape, int):
        shape = (shape,)
    vals = gen.complex_normals(shape)
    if step is None:
        step = (1.0,) * len(shape)
    if origin is None:
        origin = tuple(-(s // 2) for s in shape)
    return DiscreteSeq(vals, step, origin)


def bump_field(gen: SplitMix64, n: int, h: float, origin: float,
               n_bumps: int = 4, complex_amps: bool = True) -> SampledField:
    """Smooth field: a few random Gaussian bumps well inside the box."""
    c = origin + np.arange(n) * h
    span = n * h
    x0lim = origin + 0.25 * span, origin + 0.75 * span
    X, Y = np.meshgrid(c, c, indexing="ij")
    out = np.zeros((n, n), dtype=complex)
    for _ in range(n_bumps):
        x0 = gen.uniform(*x0lim)
        y0 = gen.uniform(*x0lim)
        w = gen.uniform(0.4, 1.2)
        amp = gen.normal() + (1j * gen.normal() if complex_amps else 0.0)
        out += amp * np.exp(-((X - x0) ** 2 + (Y - y0) ** 2) / (2 * w**2))
    return SampledField(out, (h, h), (origin, origin))


def random_field(gen: SplitMix64, n: int, h: float, origin: float,
                 kind: str = "bumps") -> SampledField:
    """kind "bumps": smooth; "noise": rough i.i.d. samples under a box envelope."""
    if kind == "bumps":
        return bump_field(gen, n, h, origin)
    c = origin + np.arange(n) * h
    X, Y = np.meshgrid(c, c, indexing="ij")
    env = np.exp(-0.05 * (X**2 + Y**2))
    vals = gen.complex_normals((n, n)) * env
    return SampledField(vals, (h, h), (origin, origin))
