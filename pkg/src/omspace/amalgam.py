"""Wiener amalgam norms, discrete and semi-discrete convolutions.

Unit cubes are the half-open boxes [k, k+1) x ... so they partition the grid
exactly; fields handed to amalgam routines must have spacing 1/m per axis and
an integer origin, which makes every cube hold the same number of cells and
keeps the piecewise-constant expansion identity exact. Local sup norms over a
cube are maxima over the samples it contains.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal

from .orlicz import (DiscreteSeq, NormReport, SampledField, _lux_batch,
                     _lux_scalar, mixed_luxemburg)
from .weights import Weight
from .young import QuasiYoungFunction, common_order, linf

__all__ = [
    "AmalgamDecomposition",
    "SamplingReport",
    "conv_discrete",
    "conv_semidiscrete",
    "conv_continuous",
    "conv_semidiscrete_wiener",
    "amalgam_decomposition",
    "wiener_norm",
    "g_function",
    "sample_to_lattice",
]


# ------------------------------------------------------------- convolutions

def conv_discrete(a: DiscreteSeq, b: DiscreteSeq) -> DiscreteSeq:
    """(a * b)(n) = sum_k a(k) b(n - k), exact over the joint support box."""
    if a.step != b.step:
        raise ValueError("sequences live on different lattices")
    vals = signal.convolve(a.values, b.values, mode="full", method="direct")
    origin = tuple(oa + ob for oa, ob in zip(a.origin_index, b.origin_index))
    return DiscreteSeq(vals, a.step, origin)


def _lattice_cells(a: DiscreteSeq, f: SampledField) -> list[tuple[tuple[int, ...], complex]]:
    """Nonzero lattice entries of a mapped to integer cell shifts of f's grid."""
    cells = []
    for st, h in zip(a.step, f.spacing):
        ratio = st / h
        if abs(ratio - round(ratio)) > 1e-9:
            raise ValueError(f"lattice step {st} is not aligned to grid spacing {h}")
        cells.append(int(round(ratio)))
    out = []
    for idx in np.ndindex(a.values.shape):
        v = a.values[idx]
        if v != 0:
            shift = tuple((i + o) * c for i, o, c in zip(idx, a.origin_index, cells))
            out.append((shift, complex(v)))
    return out


def conv_semidiscrete(a: DiscreteSeq, f: SampledField) -> SampledField:
    """(a *_Lambda f)(x) = sum_k a(k) f(x - k), periodic wrap on f's grid."""
    if len(a.step) != f.values.ndim:
        raise ValueError("lattice dimension does not match the field")
    out = np.zeros_like(f.values)
    for shift, v in _lattice_cells(a, f):
        out += v * np.roll(f.values, shift, axis=tuple(range(f.values.ndim)))
    return SampledField(out, f.spacing, f.origin)


def conv_continuous(F: SampledField, G: SampledField) -> SampledField:
    """Periodic convolution via the DFT, scaled by the cell measure.

    The result is relabeled back onto the common grid; this needs the origin
    to be an integer number of cells (true for amalgam-aligned grids).
    """
    if F.values.shape != G.values.shape or F.spacing != G.spacing or F.origin != G.origin:
        raise ValueError("fields must share one grid")
    vals = np.fft.ifftn(np.fft.fftn(F.values) * np.fft.fftn(G.values)) * F.cell_measure
    shifts = []
    for o, h in zip(F.origin, F.spacing):
        c = o / h
        if abs(c - round(c)) > 1e-9:
            raise ValueError("grid origin must be an integer number of cells")
        shifts.append(int(round(c)))
    vals = np.roll(vals, shifts, axis=tuple(range(vals.ndim)))
    return SampledField(vals, F.spacing, F.origin)


# ------------------------------------------------------------- amalgam norm

@dataclass(frozen=True)
class AmalgamDecomposition:
    """Cube-local norms a(k, kappa) as a unit-step integer-lattice sequence."""

    local_norms: DiscreteSeq
    inner_name: str
    weighted_inside: bool


def _cube_blocks(F: SampledField) -> tuple[np.ndarray, tuple[int, ...], tuple[int, ...]]:
    """Reshape samples to (cube multi-index..., within-cube flat) blocks."""
    ms = []
    ks = []
    for ax in range(F.values.ndim):
        h = F.spacing[ax]
        m = 1.0 / h
        if abs(m - round(m)) > 1e-9:
            raise ValueError(f"amalgam norms need spacing 1/m, got {h}")
        m = int(round(m))
        o = F.origin[ax]
        if abs(o - round(o)) > 1e-9:
            raise ValueError("amalgam norms need integer grid origins")
        n = F.values.shape[ax]
        if n % m:
            raise ValueError("field must cover whole unit cubes")
        ms.append(m)
        ks.append(n // m)
    nd = F.values.ndim
    shape = []
    for k, m in zip(ks, ms):
        shape.extend([k, m])
    blocks = F.values.reshape(shape)
    # bring cube axes first, cell axes last
    order = list(range(0, 2 * nd, 2)) + list(range(1, 2 * nd, 2))
    blocks = np.transpose(blocks, order)
    blocks = blocks.reshape(tuple(ks) + (-1,))
    origins = tuple(int(round(F.origin[ax])) for ax in range(nd))
    return blocks, tuple(ks), origins


def amalgam_decomposition(F: SampledField, phi_inner: QuasiYoungFunction | None = None,
                          omega: Weight | None = None,
                          weight_mode: str = "inside") -> AmalgamDecomposition:
    """Local Luxemburg norms of F over translated unit cubes.

    phi_inner=None (or a sup core) takes the plain maximum over the cube's
    samples. weight_mode "inside" folds omega into the samples before taking
    local norms; "outside" leaves the samples bare (the weight is then applied
    on the integer lattice by the caller).
    """
    if phi_inner is None:
        phi_inner = linf()
    if weight_mode not in ("inside", "outside"):
        raise ValueError("weight_mode must be 'inside' or 'outside'")
    vals = np.abs(F.values)
    if omega is not None and weight_mode == "inside":
        vals = vals * omega(F.points())
    blocks, ks, origins = _cube_blocks(SampledField(vals, F.spacing, F.origin))
    flat = blocks.reshape(-1, blocks.shape[-1]).T  # (cells per cube, n_cubes)
    local = _lux_batch(flat, F.cell_measure, phi_inner)
    seq = DiscreteSeq(local.reshape(ks), (1.0,) * F.values.ndim, origins)
    return AmalgamDecomposition(seq, phi_inner.name, weight_mode == "inside")


def wiener_norm(F: SampledField, phi_inner: QuasiYoungFunction | None,
                phi1: QuasiYoungFunction, phi2: QuasiYoungFunction,
                omega: Weight | None = None,
                weight_mode: str = "inside") -> NormReport:
    """Amalgam norm: mixed sequence norm of the cube-local norms.

    Default inner norm is the sup over the cube, matching the convention
    W(L^{F1,F2}) = W(L^inf, L^{F1,F2}). With weight_mode "inside" the outer
    sequence norm is unweighted; with "outside" the weight is evaluated at the
    cube corners instead.
    """
    dec = amalgam_decomposition(F, phi_inner, omega, weight_mode)
    outer_weight = omega if weight_mode == "outside" else None
    return mixed_luxemburg(dec.local_norms, phi1, phi2, outer_weight)


def g_function(dec: AmalgamDecomposition, like: SampledField) -> SampledField:
    """Piecewise-constant expansion sum a(k,kappa) chi_{(k,kappa)+Q} on like's grid."""
    blocks, ks, _ = _cube_blocks(like)
    a = dec.local_norms.values
    if a.shape != ks:
        raise ValueError("decomposition does not match the grid")
    ms = tuple(int(round(1.0 / h)) for h in like.spacing)
    out = a
    for ax, m in enumerate(ms):
        out = np.repeat(out, m, axis=ax)
    return SampledField(out, like.spacing, like.origin)


# ------------------------------------------------------- sampling estimates

@dataclass(frozen=True)
class SamplingReport:
    lattice_norm: float
    wiener: float
    c_alpha: float
    c_beta: float
    bound: float
    passed: bool
    samples: DiscreteSeq


def sample_to_lattice(F: SampledField, alpha: float, beta: float,
                      phi1: QuasiYoungFunction, phi2: QuasiYoungFunction,
                      omega: Weight | None = None) -> SamplingReport:
    """Samples c_F(k, kappa) = F(alpha k, beta kappa) with the counting bound
    ||c_F|| <= (C_alpha C_beta)^(1/r0) ||F||_W, C_alpha = (floor(1/alpha)+1)^d.

    The weight is evaluated at the physical sample points, which keeps the
    combinatorial constant exact (no extra weight constant enters).
    """
    nd = F.values.ndim
    if nd % 2:
        raise ValueError("phase-space fields have an even number of axes")
    d = nd // 2
    steps = (alpha,) * d + (beta,) * d
    idx_axes = []
    first_ks = []
    for ax, st in enumerate(steps):
        h = F.spacing[ax]
        ratio = st / h
        if abs(ratio - round(ratio)) > 1e-9:
            raise ValueError(f"sampling step {st} is not a multiple of spacing {h}")
        ratio = int(round(ratio))
        n = F.values.shape[ax]
        coords = F.axis_coords(ax)
        k_lo = int(np.ceil(coords[0] / st - 1e-12))
        k_hi = int(np.floor(coords[-1] / st + 1e-12))
        ks = np.arange(k_lo, k_hi + 1)
        offs = np.round((ks * st - coords[0]) / h).astype(int)
        idx_axes.append(offs)
        first_ks.append(k_lo)
    mesh = np.ix_(*idx_axes)
    c = DiscreteSeq(F.values[mesh], steps, tuple(first_ks))

    r0 = common_order(phi1, phi2)
    c_alpha = float((np.floor(1.0 / alpha) + 1.0) ** d)
    c_beta = float((np.floor(1.0 / beta) + 1.0) ** d)
    lhs = mixed_luxemburg(c, phi1, phi2, omega).value
    wn = wiener_norm(F, None, phi1, phi2, omega).value
    bound = (c_alpha * c_beta) ** (1.0 / r0) * wn
    return SamplingReport(lhs, wn, c_alpha, c_beta, bound,
                          bool(lhs <= bound * (1.0 + 1e-9)), c)


def conv_semidiscrete_wiener(a: DiscreteSeq, F: SampledField,
                             phi1: QuasiYoungFunction, phi2: QuasiYoungFunction,
                             omega0: Weight | None, omega1: Weight | None,
                             omega2: Weight | None, frozen_c: float) -> dict:
    """a *_eps F together with the amalgam bound it must satisfy:
    ||a *_eps F||_W(phi1,phi2,w0) <= C ||a||_(l(phi1,phi2,w1)) ||F||_W(r0,w2)."""
    r0 = common_order(phi1, phi2)
    from .young import monomial
    out = conv_semidiscrete(a, F)
    lhs = wiener_norm(out, None, phi1, phi2, omega0).value
    na = mixed_luxemburg(a, phi1, phi2, omega1).value
    nf = wiener_norm(F, None, monomial(r0), monomial(r0), omega2).value
    rhs = frozen_c * na * nf
    return {"lhs": lhs, "rhs": rhs, "a_norm": na, "f_wiener": nf,
            "ratio": lhs / (na * nf) if na * nf > 0 else 0.0,
            "passed": bool(lhs <= rhs * (1.0 + 1e-9)), "result": out}
