"""Finite periodic Gabor model in one dimension.

Signals live on the symmetric grid x_n = (n - N/2) h with period L = N h; the
frequency axis is the DFT comb (m - N/2) * 2*pi/L, so every modulation
e^(i x iota) is exactly L-periodic. Lattice steps are integer multiples of the
grid spacing and of the comb spacing; this alignment is validated on
construction and makes analysis a restriction of the full transform.

Normalization: V_phi f(x, xi) = (2pi)^(-1/2) h * sum_n f(x_n) conj(phi(x_n - x))
e^(-i x_n xi), with the window wrapped periodically.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .orlicz import DiscreteSeq, NormReport, SampledField, mixed_luxemburg
from .rng import SplitMix64
from .weights import Weight
from .young import QuasiYoungFunction

__all__ = [
    "GaborSystem",
    "ConvergenceError",
    "FrameBounds",
    "make_grid",
    "gaussian_window",
    "bump_window",
    "l2_norm",
    "stft",
    "stft_quadrature",
    "analysis",
    "synthesis",
    "frame_operator",
    "frame_bounds",
    "dual_window",
    "with_dual",
    "certify_lattice",
    "mod_norm",
    "coef_norm",
    "tensor_phase_window",
]

TWO_PI = 2.0 * np.pi


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, best_residual: float):
        super().__init__(message)
        self.best_residual = best_residual


def make_grid(N: int, L: float) -> SampledField:
    """Empty signal holder fixing the grid geometry (values all zero)."""
    h = L / N
    return SampledField(np.zeros(N, dtype=complex), (h,), (-L / 2.0,))


def _grid_like(grid: SampledField, values: np.ndarray) -> SampledField:
    return SampledField(values, grid.spacing, grid.origin)


def l2_norm(f: SampledField) -> float:
    return float(np.sqrt(f.cell_measure * np.sum(np.abs(f.values) ** 2)))


def gaussian_window(grid: SampledField) -> SampledField:
    x = grid.axis_coords(0)
    return _grid_like(grid, np.pi ** (-0.25) * np.exp(-0.5 * x**2) + 0j)


def bump_window(grid: SampledField, width: float = 2.0) -> SampledField:
    """Smooth compactly supported bump, L2-normalized on the grid."""
    x = grid.axis_coords(0)
    u = x / width
    vals = np.zeros_like(x)
    inside = np.abs(u) < 1.0
    vals[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    f = _grid_like(grid, vals + 0j)
    return _grid_like(grid, f.values / l2_norm(f))


def _dft_freqs(N: int, L: float) -> np.ndarray:
    return (np.arange(N) - N // 2) * (TWO_PI / L)


def _periodized_offsets(phi: np.ndarray) -> np.ndarray:
    """q[j] = phi_per(j*h): reindex samples from [-L/2, L/2) to offsets 0..N-1."""
    N = len(phi)
    return np.roll(phi, -(N // 2))


def _rolled_windows(phi: np.ndarray, shift_indices: np.ndarray) -> np.ndarray:
    """Row k: phi_per(x_n - x_{shift_indices[k]}) over n (offsets (n - k) h)."""
    q = _periodized_offsets(phi)
    N = len(phi)
    n = np.arange(N)
    return q[(n[None, :] - shift_indices[:, None]) % N]


def stft(f: SampledField, phi: SampledField) -> SampledField:
    """Full transform on the N x N grid (all shifts, full DFT comb).

    Output axes: axis 0 = time shift x (grid spacing), axis 1 = frequency xi
    (comb spacing 2*pi/L).
    """
    if f.values.shape != phi.values.shape or f.spacing != phi.spacing:
        raise ValueError("signal and window must share one grid")
    N = f.values.shape[0]
    h = f.spacing[0]
    L = f.period(0)
    W = _rolled_windows(phi.values, np.arange(N))
    G = f.values[None, :] * np.conj(W)
    spec = np.fft.fft(G, axis=1)
    spec = np.fft.fftshift(spec, axes=1)
    signs = (-1.0) ** (np.arange(N) - N // 2)
    vals = (TWO_PI) ** (-0.5) * h * spec * signs[None, :]
    return SampledField(vals, (h, TWO_PI / L), (-L / 2.0, -(N // 2) * TWO_PI / L))


def stft_quadrature(f: SampledField, phi: SampledField,
                    shift_indices: np.ndarray, xi: np.ndarray) -> SampledField:
    """Transform at arbitrary (equally spaced) frequencies by direct quadrature.

    Used where the frequency comb must align with unit cubes rather than with
    the DFT comb. xi must be equally spaced and ascending.
    """
    if f.values.shape != phi.values.shape or f.spacing != phi.spacing:
        raise ValueError("signal and window must share one grid")
    xi = np.asarray(xi, dtype=float)
    d_xi = np.diff(xi)
    if len(xi) < 2 or np.any(np.abs(d_xi - d_xi[0]) > 1e-9 * abs(d_xi[0])):
        raise ValueError("xi must be an ascending equally spaced comb")
    h = f.spacing[0]
    x = f.axis_coords(0)
    shift_indices = np.asarray(shift_indices, dtype=int)
    W = _rolled_windows(phi.values, shift_indices)
    G = f.values[None, :] * np.conj(W)
    E = np.exp(-1j * np.outer(x, xi))
    vals = (TWO_PI) ** (-0.5) * h * (G @ E)
    if len(shift_indices) >= 2:
        steps = np.diff(shift_indices)
        if np.any(steps != steps[0]):
            raise ValueError("shift indices must be equally spaced")
        dx = float(steps[0] * h)
    else:
        dx = h
    return SampledField(vals, (dx, float(d_xi[0])),
                        (float(x[shift_indices[0]]), float(xi[0])))


@dataclass(frozen=True)
class GaborSystem:
    """Window plus aligned lattice; dual window and frame bounds are cached."""

    window: SampledField
    a_steps: int  # time step a = a_steps * h
    b_steps: int  # frequency step b = b_steps * 2*pi/L
    dual: SampledField | None = None
    bounds: "FrameBounds | None" = None

    def __post_init__(self):
        if self.window.values.ndim != 1:
            raise ValueError("one-dimensional windows only")
        N = self.N
        if self.a_steps < 1 or self.b_steps < 1:
            raise ValueError("lattice steps must be positive integers")
        if N % self.a_steps or N % self.b_steps:
            raise ValueError("lattice must divide the grid: a_steps | N and b_steps | N")

    @property
    def N(self) -> int:
        return self.window.values.shape[0]

    @property
    def h(self) -> float:
        return self.window.spacing[0]

    @property
    def L(self) -> float:
        return self.window.period(0)

    @property
    def a(self) -> float:
        return self.a_steps * self.h

    @property
    def b(self) -> float:
        return self.b_steps * TWO_PI / self.L

    @property
    def n_time(self) -> int:
        return self.N // self.a_steps

    @property
    def n_freq(self) -> int:
        return self.N // self.b_steps

    @property
    def redundancy(self) -> float:
        return TWO_PI / (self.a * self.b)

    def time_indices(self) -> np.ndarray:
        j = np.arange(self.n_time) - self.n_time // 2
        return self.N // 2 + j * self.a_steps

    def freq_indices(self) -> np.ndarray:
        m = np.arange(self.n_freq) - self.n_freq // 2
        return self.N // 2 + m * self.b_steps

    def time_points(self) -> np.ndarray:
        return (np.arange(self.n_time) - self.n_time // 2) * self.a

    def freq_points(self) -> np.ndarray:
        return (np.arange(self.n_freq) - self.n_freq // 2) * self.b

    def coeffs(self, values: np.ndarray) -> DiscreteSeq:
        values = np.asarray(values, dtype=complex)
        if values.shape != (self.n_time, self.n_freq):
            raise ValueError("coefficient shape does not match the lattice")
        return DiscreteSeq(values, (self.a, self.b),
                           (-(self.n_time // 2), -(self.n_freq // 2)))


def analysis(sys: GaborSystem, f: SampledField) -> DiscreteSeq:
    """Lattice samples of the transform: the full DFT comb restricted to the comb
    multiples, computed shift by shift."""
    if f.values.shape != sys.window.values.shape or f.spacing != sys.window.spacing:
        raise ValueError("signal grid does not match the system grid")
    N, h, L = sys.N, sys.h, sys.L
    W = _rolled_windows(sys.window.values, sys.time_indices())
    G = f.values[None, :] * np.conj(W)
    spec = np.fft.fftshift(np.fft.fft(G, axis=1), axes=1)
    signs = (-1.0) ** (np.arange(N) - N // 2)
    full = (TWO_PI) ** (-0.5) * h * spec * signs[None, :]
    return sys.coeffs(full[:, sys.freq_indices()])


def synthesis(sys: GaborSystem, c: DiscreteSeq, window: SampledField | None = None) -> SampledField:
    """D c = sum_{j, m} c(j, m) e^(i x iota_m) psi(x - t_j), periodic wrap."""
    psi = window if window is not None else sys.window
    if c.values.shape != (sys.n_time, sys.n_freq):
        raise ValueError("coefficients do not match the system lattice")
    x = sys.window.axis_coords(0)
    E = np.exp(1j * np.outer(sys.freq_points(), x))  # (n_freq, N)
    P = c.values @ E                                  # (n_time, N)
    Psi = _rolled_windows(psi.values, sys.time_indices())
    return _grid_like(sys.window, np.sum(P * Psi, axis=0))


def frame_operator(sys: GaborSystem, f: SampledField,
                   psi: SampledField | None = None) -> SampledField:
    """S_{phi, psi} f = D_psi (C_phi f); psi defaults to the analysis window."""
    return synthesis(sys, analysis(sys, f), psi if psi is not None else sys.window)


@dataclass(frozen=True)
class FrameBounds:
    A: float
    B: float
    iterations: int
    is_frame: bool

    @property
    def ratio(self) -> float:
        return self.A / self.B if self.B > 0 else 0.0


def _power_iteration(apply_op, v0: np.ndarray, mu: float, tol: float,
                     max_iter: int) -> tuple[float, int]:
    v = v0 / np.sqrt(mu * np.sum(np.abs(v0) ** 2))
    lam = 0.0
    for it in range(1, max_iter + 1):
        w = apply_op(v)
        lam_new = float(np.real(mu * np.sum(np.conj(v) * w)))
        nw = np.sqrt(mu * np.sum(np.abs(w) ** 2))
        if nw == 0.0:
            return 0.0, it
        v = w / nw
        if it > 4 and abs(lam_new - lam) <= tol * max(abs(lam_new), 1e-300):
            return lam_new, it
        lam = lam_new
    return lam, max_iter


def frame_bounds(sys: GaborSystem, tol: float = 1e-8, max_iter: int = 8000) -> FrameBounds:
    """Extreme eigenvalues of S_{phi,phi} by power iteration on S and on B*I - S."""
    N, h = sys.N, sys.h
    gen = SplitMix64(0x5EED0 + N)
    v0 = gen.normals(N) + 1j * gen.normals(N)

    def apply_s(v):
        return frame_operator(sys, _grid_like(sys.window, v)).values

    B, it_b = _power_iteration(apply_s, v0, h, tol, max_iter)
    shift = B * (1.0 + 1e-6) + 1e-300

    def apply_shifted(v):
        return shift * v - apply_s(v)

    top, it_a = _power_iteration(apply_shifted, v0, h, tol, max_iter)
    A = shift - top
    return FrameBounds(float(A), float(B), it_b + it_a, bool(A > 1e-10 * B))


def dual_window(sys: GaborSystem, tol: float = 1e-10) -> SampledField:
    """Canonical dual: solve S_{phi,phi} psi = phi by conjugate gradients.

    S is Hermitian positive definite whenever the system is a frame; a
    residual plateau above tol over the 3N-iteration budget raises
    ConvergenceError carrying the best residual seen.
    """
    phi = sys.window.values
    h = sys.h

    def apply_s(v):
        return frame_operator(sys, _grid_like(sys.window, v)).values

    b_norm = np.sqrt(h * np.sum(np.abs(phi) ** 2))
    x = np.zeros_like(phi)
    r = phi.copy()
    p = r.copy()
    rs = float(np.real(h * np.sum(np.conj(r) * r)))
    best = np.sqrt(rs)
    budget = 3 * sys.N
    for _ in range(budget):
        Ap = apply_s(p)
        denom = float(np.real(h * np.sum(np.conj(p) * Ap)))
        if denom <= 0:
            break  # loss of positivity: not a frame at this lattice
        alpha = rs / denom
        x = x + alpha * p
        r = r - alpha * Ap
        rs_new = float(np.real(h * np.sum(np.conj(r) * r)))
        best = min(best, np.sqrt(rs_new))
        if np.sqrt(rs_new) <= tol * b_norm:
            return _grid_like(sys.window, x)
        p = r + (rs_new / rs) * p
        rs = rs_new
    # polish: report the true residual of the final iterate
    res = np.sqrt(h * np.sum(np.abs(apply_s(x) - phi) ** 2))
    if res <= tol * b_norm:
        return _grid_like(sys.window, x)
    raise ConvergenceError(
        f"dual-window iteration stalled: residual {res:.3e} > tol {tol:.1e} * ||phi||",
        best_residual=float(best / b_norm))


def with_dual(sys: GaborSystem, tol: float = 1e-10, n_probes: int = 5) -> GaborSystem:
    """Cache dual window and frame bounds; validate reconstruction on a probe set."""
    fb = frame_bounds(sys)
    if not fb.is_frame:
        raise ValueError(f"not a frame at this lattice: A={fb.A:.3e}, B={fb.B:.3e}")
    psi = dual_window(sys, tol)
    gen = SplitMix64(0xD0A1)
    for _ in range(n_probes):
        f = _grid_like(sys.window, gen.normals(sys.N) + 1j * gen.normals(sys.N))
        rec = synthesis(sys, analysis(sys, f), psi)
        rel = l2_norm(_grid_like(sys.window, rec.values - f.values)) / l2_norm(f)
        if rel > 1e-8:
            raise ConvergenceError(
                f"cached dual fails reconstruction: relative error {rel:.3e}", rel)
    return replace(sys, dual=psi, bounds=fb)


def certify_lattice(window: SampledField, a_steps: int, b_steps: int,
                    min_ratio: float = 0.01) -> GaborSystem:
    """Halve the lattice steps until the frame bounds certify A/B >= min_ratio."""
    while True:
        sys = GaborSystem(window, a_steps, b_steps)
        fb = frame_bounds(sys)
        if fb.is_frame and fb.ratio >= min_ratio:
            return replace(sys, bounds=fb)
        if a_steps == 1 and b_steps == 1:
            raise ValueError("no certified lattice found even at full density")
        a_steps = max(1, a_steps // 2)
        b_steps = max(1, b_steps // 2)


def default_window(grid: SampledField) -> SampledField:
    return gaussian_window(grid)


def mod_norm(f: SampledField, phi1: QuasiYoungFunction, phi2: QuasiYoungFunction,
             omega: Weight | None = None, window: SampledField | None = None,
             x_max: float | None = None, xi_max: float | None = None) -> NormReport:
    """Mixed Luxemburg norm of the transform field, x inner / xi outer.

    The window defaults to the standard Gaussian. Optional x_max / xi_max
    restrict the field to a centered box (the dropped tails must be
    negligible; used to keep weighted integrands inside safe ranges).
    """
    win = window if window is not None else gaussian_window(
        SampledField(np.zeros_like(f.values), f.spacing, f.origin))
    V = stft(f, win)
    vals = V.values
    x = V.axis_coords(0)
    xi = V.axis_coords(1)
    if x_max is not None:
        keep = np.abs(x) <= x_max
        vals = vals[keep, :]
        x = x[keep]
    if xi_max is not None:
        keep = np.abs(xi) <= xi_max
        vals = vals[:, keep]
        xi = xi[keep]
    field = SampledField(vals, V.spacing, (float(x[0]), float(xi[0])))
    return mixed_luxemburg(field, phi1, phi2, omega)


def coef_norm(c: DiscreteSeq, phi1: QuasiYoungFunction, phi2: QuasiYoungFunction,
              omega: Weight | None = None) -> NormReport:
    """Mixed Luxemburg norm of lattice coefficients under counting measure."""
    return mixed_luxemburg(c, phi1, phi2, omega)


def fourier_transform(f: SampledField) -> SampledField:
    """hat(f) on the DFT comb, with the (2pi)^(-d/2) forward convention."""
    N = f.values.shape[0]
    h = f.spacing[0]
    L = f.period(0)
    signs = (-1.0) ** (np.arange(N) - N // 2)
    vals = (TWO_PI) ** (-0.5) * h * np.fft.fftshift(np.fft.fft(f.values)) * signs
    return SampledField(vals, (TWO_PI / L,), (-(N // 2) * TWO_PI / L,))


def tensor_phase_window(phi1: SampledField, phi2: SampledField) -> SampledField:
    """Phase-space window phi1(x) conj(hat(phi2)(xi)) e^(-i x xi) on the grid x comb."""
    if phi1.values.shape != phi2.values.shape or phi1.spacing != phi2.spacing:
        raise ValueError("windows must share one grid")
    h = phi1.spacing[0]
    L = phi1.period(0)
    x = phi1.axis_coords(0)
    hat2 = fourier_transform(phi2)
    xi = hat2.axis_coords(0)
    vals = phi1.values[:, None] * np.conj(hat2.values)[None, :] * np.exp(-1j * np.outer(x, xi))
    return SampledField(vals, (h, TWO_PI / L), (float(x[0]), float(xi[0])))
