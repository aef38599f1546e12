"""Hermite expansions, the Bargmann-type transform, and Fock-side norms.

The transform is evaluated two independent ways: quadrature against the
analytic kernel (primary) and the normalized-monomial image of the Hermite
coefficients (oracle); the two must agree on any reasonable grid. The
Fock-side norm pairs z = (x - i xi)/sqrt(2) with phase-space points (x, xi):
with the Gaussian factor exp(-|z|^2/2) = exp(-(|x|^2+|xi|^2)/4) folded in, the
Fock-side norm of a transform equals the phase-space mixed norm of the
windowed transform of the signal, sample by sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .orlicz import NormReport, SampledField, mixed_luxemburg
from .weights import Weight
from .young import QuasiYoungFunction

__all__ = [
    "HermiteCoeffs",
    "FockField",
    "hermite_eval",
    "hermite_values_1d",
    "hermite_expand",
    "hermite_signal",
    "bargmann",
    "b_norm",
    "isometry_check",
    "cauchy_riemann_residual",
    "IsometryReport",
    "CRReport",
]

K_MAX = 60
TWO_PI = 2.0 * np.pi


def hermite_values_1d(n_max: int, x: np.ndarray) -> np.ndarray:
    """Rows 0..n_max of the orthonormal Hermite functions at the points x.

    Three-term recurrence on the functions themselves; values decay under the
    Gaussian envelope, so extreme arguments underflow cleanly to zero.
    """
    if n_max > K_MAX:
        raise ValueError(f"order {n_max} above the stable limit {K_MAX}")
    x = np.asarray(x, dtype=float)
    H = np.zeros((n_max + 1,) + x.shape)
    H[0] = np.pi ** (-0.25) * np.exp(-0.5 * x**2)
    if n_max >= 1:
        H[1] = np.sqrt(2.0) * x * H[0]
    for n in range(1, n_max):
        H[n + 1] = np.sqrt(2.0 / (n + 1)) * x * H[n] - np.sqrt(n / (n + 1.0)) * H[n - 1]
    return H


def hermite_eval(alpha, x) -> np.ndarray:
    """h_alpha at points x; alpha is an int (d=1) or a multi-index, and x has
    shape (..., d) for d > 1."""
    if np.isscalar(alpha):
        return hermite_values_1d(int(alpha), np.asarray(x, dtype=float))[int(alpha)]
    alpha = tuple(int(a) for a in alpha)
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != len(alpha):
        raise ValueError("point dimension does not match the multi-index")
    out = np.ones(x.shape[:-1])
    for j, aj in enumerate(alpha):
        out = out * hermite_values_1d(aj, x[..., j])[aj]
    return out


@dataclass(frozen=True)
class HermiteCoeffs:
    """Coefficients c(alpha) for |alpha_j| <= K per axis; tensor layout for d=2."""

    coeffs: np.ndarray  # shape (K+1,) for d=1, (K+1, K+1) for d=2
    d: int
    parseval_defect: float
    boundary_ok: bool

    @property
    def K(self) -> int:
        return self.coeffs.shape[0] - 1


def hermite_expand(f: SampledField, K: int = 40) -> HermiteCoeffs:
    """Quadrature coefficients <f, h_alpha>; the Parseval defect
    | sum |c|^2 - ||f||^2 | is reported, and poor boundary decay is flagged."""
    d = f.values.ndim
    if d not in (1, 2):
        raise ValueError("d = 1 or 2 supported")
    peak = float(np.max(np.abs(f.values)))
    if d == 1:
        edge = max(abs(f.values[0]), abs(f.values[-1]))
    else:
        edge = max(np.max(np.abs(f.values[0, :])), np.max(np.abs(f.values[-1, :])),
                   np.max(np.abs(f.values[:, 0])), np.max(np.abs(f.values[:, -1])))
    boundary_ok = bool(edge <= 1e-12 * max(peak, 1e-300))

    if d == 1:
        H = hermite_values_1d(K, f.axis_coords(0))
        c = f.cell_measure * (H @ f.values)
    else:
        H0 = hermite_values_1d(K, f.axis_coords(0))
        H1 = hermite_values_1d(K, f.axis_coords(1))
        c = f.cell_measure * (H0 @ f.values @ H1.T)
    norm_sq = f.cell_measure * float(np.sum(np.abs(f.values) ** 2))
    defect = abs(float(np.sum(np.abs(c) ** 2)) - norm_sq)
    return HermiteCoeffs(c, d, defect, boundary_ok)


def hermite_signal(alpha, grid: SampledField) -> SampledField:
    """h_alpha sampled on the given grid (d inferred from the grid)."""
    if grid.values.ndim == 1:
        vals = hermite_eval(int(alpha) if np.isscalar(alpha) else alpha[0],
                            grid.axis_coords(0))
    else:
        vals = hermite_eval(alpha, grid.points())
    return SampledField(vals + 0j, grid.spacing, grid.origin)


@dataclass(frozen=True)
class FockField:
    """Samples on a rectangular grid in C^d, axes ordered (Re ..., Im ...)."""

    values: np.ndarray
    re_pts: tuple[np.ndarray, ...]
    im_pts: tuple[np.ndarray, ...]

    @property
    def d(self) -> int:
        return len(self.re_pts)


def _kernel_matrix(z: np.ndarray, y: np.ndarray, h: float) -> np.ndarray:
    """Quadrature kernel K[z, y] = pi^(-1/4) exp(-(z^2 + y^2)/2 + sqrt(2) z y) h."""
    with np.errstate(over="ignore"):
        expo = (-0.5 * (z**2)[:, None] - 0.5 * (y**2)[None, :]
                + np.sqrt(2.0) * np.outer(z, y))
        return np.pi ** (-0.25) * np.exp(expo) * h


def _bargmann_kernel(f: SampledField, zs: list[np.ndarray]) -> np.ndarray:
    """Transform values at the complex grids zs (one 1-D complex array per axis)."""
    d = f.values.ndim
    if d == 1:
        K = _kernel_matrix(zs[0], f.axis_coords(0), f.cell_measure)
        return K @ f.values
    K0 = _kernel_matrix(zs[0], f.axis_coords(0), f.spacing[0])
    K1 = _kernel_matrix(zs[1], f.axis_coords(1), f.spacing[1])
    return K0 @ f.values @ K1.T


def _bargmann_monomials(c: HermiteCoeffs, zs: list[np.ndarray]) -> np.ndarray:
    """Oracle route: sum_alpha c(alpha) z^alpha / sqrt(alpha!)."""
    K = c.K
    fact = np.sqrt([float(math.factorial(k)) for k in range(K + 1)])
    mats = []
    for z in zs:
        Z = np.ones((len(z), K + 1), dtype=complex)
        for k in range(1, K + 1):
            Z[:, k] = Z[:, k - 1] * z
        mats.append(Z / fact[None, :])
    if c.d == 1:
        return mats[0] @ c.coeffs
    return mats[0] @ c.coeffs @ mats[1].T


def _z_grids(F_re: tuple[np.ndarray, ...], F_im: tuple[np.ndarray, ...]) -> list[np.ndarray]:
    """Per-axis complex grids flattened as re + i*im combinations."""
    out = []
    for re, im in zip(F_re, F_im):
        out.append((re[:, None] + 1j * im[None, :]).ravel())
    return out


def bargmann(f: "SampledField | HermiteCoeffs", re_pts, im_pts,
             method: str = "kernel", K: int = 40) -> FockField:
    """Transform of f on the rectangular complex grid re_pts x im_pts.

    method "kernel": quadrature against the analytic kernel (needs a sampled
    f). method "hermite": normalized-monomial image of the Hermite
    coefficients; accepts either a sampled f (expanded at order K) or
    precomputed coefficients. Divergence of the monomial tail (|z| too large
    for K) shows up in the reported coefficients and is the caller's signal to
    enlarge K.
    """
    re_pts = tuple(np.asarray(r, dtype=float) for r in
                   (re_pts if isinstance(re_pts, (tuple, list)) else (re_pts,)))
    im_pts = tuple(np.asarray(i, dtype=float) for i in
                   (im_pts if isinstance(im_pts, (tuple, list)) else (im_pts,)))
    d = len(re_pts)

    if isinstance(f, HermiteCoeffs):
        if method == "kernel":
            raise ValueError("kernel route needs a sampled signal")
        coeffs = f
    elif method == "hermite":
        coeffs = hermite_expand(f, K)
    else:
        coeffs = None

    if d == 1:
        zs = [(re_pts[0][:, None] + 1j * im_pts[0][None, :]).ravel()]
        shape = (len(re_pts[0]), len(im_pts[0]))
        if method == "kernel":
            vals = _bargmann_kernel(f, zs).reshape(shape)
        else:
            vals = _bargmann_monomials(coeffs, zs).reshape(shape)
        return FockField(vals, re_pts, im_pts)

    if d != 2:
        raise ValueError("d = 1 or 2 supported")
    zs = _z_grids(re_pts, im_pts)
    if method == "kernel":
        flat = _bargmann_kernel(f, zs)
    else:
        flat = _bargmann_monomials(coeffs, zs)
    n = [(len(re_pts[j]), len(im_pts[j])) for j in range(2)]
    vals = flat.reshape(n[0][0], n[0][1], n[1][0], n[1][1])
    vals = np.transpose(vals, (0, 2, 1, 3))  # (re1, re2, im1, im2)
    return FockField(vals, re_pts, im_pts)


def b_norm(F: FockField, phi1: QuasiYoungFunction, phi2: QuasiYoungFunction,
           omega: Weight | None = None) -> NormReport:
    """Fock-side mixed norm.

    The field is reindexed to phase-space coordinates x = sqrt(2) Re z,
    xi = -sqrt(2) Im z; the data (2 pi)^(-d/2) exp(-(|x|^2 + |xi|^2)/4) F is
    then measured in the weighted mixed Luxemburg norm, inner in x.
    """
    d = F.d
    vals = F.values
    xs = [np.sqrt(2.0) * r for r in F.re_pts]
    xis = [-np.sqrt(2.0) * i[::-1] for i in F.im_pts]  # ascending xi
    vals = np.flip(vals, axis=tuple(range(d, 2 * d)))

    axes_pts = xs + xis
    mesh = np.meshgrid(*axes_pts, indexing="ij")
    sq = sum(m**2 for m in mesh)
    data = (TWO_PI) ** (-d / 2.0) * np.exp(-0.25 * sq) * vals

    spac = tuple(float(p[1] - p[0]) for p in axes_pts)
    orig = tuple(float(p[0]) for p in axes_pts)
    field = SampledField(data, spac, orig)
    return mixed_luxemburg(field, phi1, phi2, omega)


@dataclass(frozen=True)
class IsometryReport:
    mod_value: float
    fock_value: float
    rel_error: float


def isometry_check(f: SampledField, phi1: QuasiYoungFunction, phi2: QuasiYoungFunction,
                   omega: Weight | None = None, x_max: float = 8.0,
                   xi_max: float = 12.0, method: str = "kernel",
                   K: int = 40) -> IsometryReport:
    """Compare the phase-space mixed norm of the windowed transform against the
    Fock-side norm of the analytic transform, on matching grids."""
    from .gabor import gaussian_window, stft

    win = gaussian_window(SampledField(np.zeros_like(f.values), f.spacing, f.origin))
    V = stft(f, win)
    x = V.axis_coords(0)
    xi = V.axis_coords(1)
    kx = np.abs(x) <= x_max
    kxi = np.abs(xi) <= xi_max
    Vv = V.values[np.ix_(kx, kxi)]
    x, xi = x[kx], xi[kxi]
    mod = mixed_luxemburg(SampledField(Vv, V.spacing, (float(x[0]), float(xi[0]))),
                          phi1, phi2, omega)

    re = x / np.sqrt(2.0)
    im = (-xi / np.sqrt(2.0))[::-1]  # ascending Im z
    F = bargmann(f, re, im, method=method, K=K)
    fock = b_norm(F, phi1, phi2, omega)
    denom = max(mod.value, 1e-300)
    return IsometryReport(mod.value, fock.value, abs(mod.value - fock.value) / denom)


@dataclass(frozen=True)
class CRReport:
    max_ratio: float
    ok: bool


def cauchy_riemann_residual(F: FockField, tol: float = 1e-4) -> CRReport:
    """Fourth-order discrete Cauchy-Riemann test on interior points.

    For each complex coordinate, d/du F + i d/dv F should vanish; the residual
    is compared against the local derivative magnitude (with a global floor to
    ignore points where both derivatives vanish).
    """
    d = F.d

    def diff(vals, axis, step):
        s = [slice(2, -2)] * vals.ndim
        out = np.zeros_like(vals)

        def shifted(k):
            sl = list(s)
            sl[axis] = slice(2 + k, vals.shape[axis] - 2 + k)
            return vals[tuple(sl)]

        out_in = (-shifted(2) + 8 * shifted(1) - 8 * shifted(-1) + shifted(-2)) / (12 * step)
        out[tuple(s)] = out_in
        return out

    worst = 0.0
    interior = tuple(slice(2, -2) for _ in range(2 * d))
    for j in range(d):
        du = float(F.re_pts[j][1] - F.re_pts[j][0])
        dv = float(F.im_pts[j][1] - F.im_pts[j][0])
        Du = diff(F.values, j, du)[interior]
        Dv = diff(F.values, d + j, dv)[interior]
        resid = np.abs(Du + 1j * Dv)
        scale = np.abs(Du) + np.abs(Dv)
        floor = 1e-6 * max(float(np.max(scale)), 1e-300)
        ratio = resid / (scale + floor)
        worst = max(worst, float(np.max(ratio)))
    return CRReport(worst, bool(worst <= tol))
