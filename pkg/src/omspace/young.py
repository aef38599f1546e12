"""Young and quasi-Young functions.

A Young core is a convex nondecreasing map of [0, inf) into [0, inf] that
vanishes at 0 and is unbounded; +inf is an allowed value (IEEE inf). A
quasi-Young function of order r0 in (0, 1] evaluates its core at t**r0.
Cores are immutable; evaluation is vectorized over numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

__all__ = [
    "YoungCore",
    "PowerCore",
    "LinfCore",
    "ExpM1Core",
    "PiecewiseCore",
    "QuasiYoungFunction",
    "power",
    "monomial",
    "linf",
    "expm1",
    "piecewise",
    "parse_young",
    "verify_quasi_young",
    "limit_ratio_at_zero",
    "YoungReport",
    "RatioLimit",
]


class YoungCore:
    """Base class for Young cores; subclasses implement eval and raise_power."""

    def eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def raise_power(self, e: float) -> "YoungCore":
        """Core of u -> self(u**e), e >= 1. Used to rebase declared orders."""
        raise NotImplementedError

    @property
    def name(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class PowerCore(YoungCore):
    """coeff * t**exponent with exponent >= 1 (convexity) and coeff > 0."""

    exponent: float
    coeff: float = 1.0

    def __post_init__(self):
        if self.exponent < 1.0:
            raise ValueError(f"power core exponent must be >= 1, got {self.exponent}")
        if not self.coeff > 0.0:
            raise ValueError("power core coefficient must be positive")

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore"):
            return self.coeff * t**self.exponent

    def raise_power(self, e: float) -> "PowerCore":
        return PowerCore(self.exponent * e, self.coeff)

    @property
    def name(self) -> str:
        return f"power(p={self.exponent:g},c={self.coeff:g})"


@dataclass(frozen=True)
class LinfCore(YoungCore):
    """0 on [0, 1], +inf beyond; the sup-norm core."""

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t <= 1.0, 0.0, np.inf)

    def raise_power(self, e: float) -> "LinfCore":
        # t**e <= 1 iff t <= 1, so the core is invariant
        return self

    @property
    def name(self) -> str:
        return "linf"


@dataclass(frozen=True)
class ExpM1Core(YoungCore):
    """exp(t) - 1."""

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore"):
            return np.expm1(t)

    def raise_power(self, e: float) -> "YoungCore":
        return ComposedCore(self, e)

    @property
    def name(self) -> str:
        return "expm1"


@dataclass(frozen=True)
class PiecewiseCore(YoungCore):
    """Right-continuous knot table, linear interpolation between finite knots.

    Beyond the last finite knot the last finite segment's slope is continued,
    unless an inf knot exists, in which case the value is inf there. Convexity
    of the table is not enforced here; verify_quasi_young reports on it.
    """

    knots_t: tuple[float, ...]
    knots_v: tuple[float, ...]

    def __post_init__(self):
        t = np.asarray(self.knots_t)
        if len(t) < 2 or np.any(np.diff(t) <= 0):
            raise ValueError("piecewise core needs >= 2 strictly increasing knots")
        if t[0] != 0.0:
            raise ValueError("piecewise core must start at t=0")

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        kt = np.asarray(self.knots_t)
        kv = np.asarray(self.knots_v)
        finite = np.isfinite(kv)
        ft, fv = kt[finite], kv[finite]
        out = np.interp(t, ft, fv)
        beyond = t > ft[-1]
        if np.any(beyond):
            if not finite.all():
                out = np.where(beyond, np.inf, out)
            else:
                slope = (fv[-1] - fv[-2]) / (ft[-1] - ft[-2])
                out = np.where(beyond, fv[-1] + slope * (t - ft[-1]), out)
        return out

    def raise_power(self, e: float) -> "YoungCore":
        return ComposedCore(self, e)

    @property
    def name(self) -> str:
        return f"piecewise({len(self.knots_t)} knots)"


@dataclass(frozen=True)
class ComposedCore(YoungCore):
    """base(t**power) for power >= 1; keeps convexity of nondecreasing convex bases."""

    base: YoungCore
    power: float

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore"):
            return self.base.eval(t**self.power)

    def raise_power(self, e: float) -> "ComposedCore":
        return ComposedCore(self.base, self.power * e)

    @property
    def name(self) -> str:
        return f"{self.base.name}^(t**{self.power:g})"


@dataclass(frozen=True)
class QuasiYoungFunction:
    """Core Phi0 plus declared order r0 in (0, 1]; evaluates Phi0(t**r0).

    The declared order is trusted input and is propagated into every norm
    built from this function; only the core is validated by
    verify_quasi_young (recovering a maximal order from samples is ill-posed).
    """

    core: YoungCore
    order: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.order <= 1.0):
            raise ValueError(f"order must lie in (0, 1], got {self.order}")

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise ValueError("quasi-Young functions are defined on t >= 0")
        # single canonical expression: core(t**order), bitwise-stable
        return self.core.eval(t**self.order)

    def __call__(self, t):
        return self.eval(t)

    def with_order(self, r0: float) -> "QuasiYoungFunction":
        """Equivalent function declared at a smaller order r0 <= order."""
        if r0 > self.order + 1e-15:
            raise ValueError("can only rebase to a smaller or equal order")
        if abs(r0 - self.order) < 1e-15:
            return self
        return QuasiYoungFunction(self.core.raise_power(self.order / r0), r0)

    @property
    def name(self) -> str:
        return f"{self.core.name}@r0={self.order:g}"


def common_order(*phis: QuasiYoungFunction) -> float:
    return min(p.order for p in phis)


# ---------------------------------------------------------------- builders

def power(p: float) -> QuasiYoungFunction:
    """The canonical scale of power functions: t**p / p, declared at order min(p, 1)."""
    if not p > 0:
        raise ValueError("power builder needs p > 0")
    r0 = min(p, 1.0)
    return QuasiYoungFunction(PowerCore(p / r0, 1.0 / p), r0)


def monomial(p: float) -> QuasiYoungFunction:
    """Plain t**p (coefficient 1); its Luxemburg norm is the standard p-norm."""
    if not p > 0:
        raise ValueError("monomial builder needs p > 0")
    r0 = min(p, 1.0)
    return QuasiYoungFunction(PowerCore(p / r0, 1.0), r0)


def linf() -> QuasiYoungFunction:
    return QuasiYoungFunction(LinfCore(), 1.0)


def expm1() -> QuasiYoungFunction:
    return QuasiYoungFunction(ExpM1Core(), 1.0)


def piecewise(knots: Sequence[tuple[float, float]], order: float = 1.0) -> QuasiYoungFunction:
    ts, vs = zip(*knots)
    return QuasiYoungFunction(PiecewiseCore(tuple(ts), tuple(vs)), order)


def parse_young(spec: str) -> QuasiYoungFunction:
    """Builders addressable by name: power:p, mono:p, linf, expm1, piecewise:file.csv."""
    kind, _, arg = spec.partition(":")
    if kind == "power":
        return power(float(arg))
    if kind == "mono":
        return monomial(float(arg))
    if kind == "linf":
        return linf()
    if kind == "expm1":
        return expm1()
    if kind == "piecewise":
        rows = np.loadtxt(Path(arg), delimiter=",", ndmin=2)
        return piecewise([(float(t), float(v)) for t, v in rows])
    raise ValueError(f"unknown quasi-Young builder {spec!r}")


# ---------------------------------------------------------------- validation

@dataclass(frozen=True)
class YoungReport:
    ok: bool
    zero_at_zero: bool
    nondecreasing: bool
    convex: bool
    unbounded: bool
    first_violation: float | None = None
    notes: tuple[str, ...] = field(default=())


def verify_quasi_young(phi: QuasiYoungFunction, grid: np.ndarray) -> YoungReport:
    """Finite-grid certification of the Young-core axioms.

    Convexity is tested on second differences of the core, with any chord
    whose right endpoint is inf counted as satisfied (convex functions may
    jump to inf). Unboundedness is a heuristic on the sampled tail.
    """
    grid = np.asarray(grid, dtype=float)
    if grid[0] != 0.0 or len(grid) < 3 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing and start at 0, length >= 3")
    v = phi.core.eval(grid)

    zero_at_zero = v[0] == 0.0
    notes: list[str] = []
    first_violation = None

    finite_mask = np.isfinite(v)
    # once inf is reached the function must stay inf (nondecreasing into inf)
    nondecreasing = True
    for i in range(len(v) - 1):
        a, b = v[i], v[i + 1]
        if np.isinf(a) and np.isfinite(b):
            nondecreasing = False
        elif np.isfinite(a) and np.isfinite(b) and b < a - 1e-15 * max(1.0, abs(a)):
            nondecreasing = False
        if not nondecreasing:
            first_violation = float(grid[i + 1])
            notes.append(f"monotonicity fails at t={grid[i + 1]:g}")
            break

    scale = float(np.max(np.abs(v[finite_mask]))) if finite_mask.any() else 1.0
    scale = max(scale, 1.0)
    convex = True
    for i in range(1, len(v) - 1):
        if np.isinf(v[i + 1]):
            continue  # chord ending at inf is always above the graph
        if np.isinf(v[i]) or np.isinf(v[i - 1]):
            convex = False  # inf followed by a finite value
        else:
            left = (v[i] - v[i - 1]) / (grid[i] - grid[i - 1])
            right = (v[i + 1] - v[i]) / (grid[i + 1] - grid[i])
            if right < left - 1e-12 * scale:
                convex = False
        if not convex:
            if first_violation is None:
                first_violation = float(grid[i])
            notes.append(f"convexity fails at knot t={grid[i]:g}")
            break

    if not finite_mask.all():
        unbounded = True
    else:
        mid = v[len(v) // 2]
        unbounded = v[-1] >= max(1.0, 10.0 * mid) or (v[-1] > v[-2] > 0)
        if not unbounded:
            notes.append("tail does not look unbounded on this grid")

    ok = zero_at_zero and nondecreasing and convex and unbounded
    return YoungReport(ok, bool(zero_at_zero), nondecreasing, convex, bool(unbounded),
                       first_violation, tuple(notes))


@dataclass(frozen=True)
class RatioLimit:
    value: float
    stabilized: bool
    divergent: bool
    ratios: tuple[float, ...]


def limit_ratio_at_zero(psi: QuasiYoungFunction, phi: QuasiYoungFunction,
                        t_seq: np.ndarray | None = None) -> RatioLimit:
    """Extrapolated limit of psi(t)/phi(t) as t -> 0+ along t_seq.

    Stabilization means the last three ratios agree to relative 1e-3. If phi
    vanishes somewhere on the sequence while psi does not, or if the ratios
    blow up, the result is flagged divergent.
    """
    if t_seq is None:
        t_seq = 10.0 ** (-(1.0 + 0.5 * np.arange(17)))  # 1e-1 .. 1e-9
    t_seq = np.asarray(t_seq, dtype=float)
    if np.any(np.diff(t_seq) >= 0) or t_seq[-1] >= 1e-8 or np.any(t_seq <= 0):
        raise ValueError("t_seq must be strictly decreasing positive, ending below 1e-8")

    pv = phi.eval(t_seq)
    sv = psi.eval(t_seq)
    if np.any((pv == 0) & (sv > 0)):
        return RatioLimit(np.inf, False, True, ())
    good = pv > 0
    ratios = sv[good] / pv[good]
    if len(ratios) < 3:
        return RatioLimit(float("nan"), False, False, tuple(ratios))
    last3 = ratios[-3:]
    if np.max(last3) <= 1e-6 * max(1.0, ratios[0]):
        # ratios collapse toward zero: the limit is 0
        return RatioLimit(0.0, True, False, tuple(float(r) for r in ratios))
    spread = np.max(last3) - np.min(last3)
    ref = max(abs(last3[-1]), 1e-300)
    stabilized = spread <= 1e-3 * ref
    divergent = bool(np.isinf(ratios[-1]) or (
        ratios[-1] > 1e6 * max(ratios[0], 1e-300) and ratios[-1] > ratios[-2] > ratios[-3]))
    return RatioLimit(float(ratios[-1]), bool(stabilized and not divergent), divergent,
                      tuple(float(r) for r in ratios))
