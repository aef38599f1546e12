"""Moderate weights on R^d and on phase space R^(2d).

A weight evaluates to strictly positive finite values; every constructor also
records a submultiplicative companion and a growth-class tag. Class tags are
finite-grid certifications, not proofs: the defining conditions quantify over
all of R^d, so the checks report the grids they used.

Point convention: a point array has shape (..., n). For even n the point is
split in half as (x, xi) and the cited phase-space formulas use |x| + |xi|
(Euclidean norm on each half); for odd n the full Euclidean norm is used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

__all__ = [
    "Weight",
    "make_poly",
    "make_exp",
    "make_const",
    "make_tabulated",
    "parse_weight",
    "check_moderate",
    "classify_weight",
    "ModeratenessReport",
    "scale_by_bracket_power",
    "EXP_LADDER",
    "POLY_LADDER",
]

EXP_LADDER = (4.0, 2.0, 1.0, 0.5, 0.25, 0.125)
POLY_LADDER = (0.0, 1.0, 2.0, 3.0, 4.0)


def _split_norms(pts: np.ndarray) -> tuple[np.ndarray, np.ndarray | None]:
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    n = pts.shape[-1]
    if n % 2 == 0 and n >= 2:
        half = n // 2
        return (np.linalg.norm(pts[..., :half], axis=-1),
                np.linalg.norm(pts[..., half:], axis=-1))
    return np.linalg.norm(pts, axis=-1), None


@dataclass(frozen=True)
class Weight:
    """Positive weight with optional log-scale evaluator for overflow-free ratio tests."""

    fn: Callable[[np.ndarray], np.ndarray]
    name: str
    class_tag: str = "unknown"  # P | PE0 | PE | unknown
    companion: "Weight | None" = None
    params: dict = field(default_factory=dict)
    log_fn: Callable[[np.ndarray], np.ndarray] | None = None

    def __call__(self, pts) -> np.ndarray:
        vals = np.asarray(self.fn(np.asarray(pts, dtype=float)))
        return vals

    def log(self, pts) -> np.ndarray:
        if self.log_fn is not None:
            return np.asarray(self.log_fn(np.asarray(pts, dtype=float)))
        return np.log(self(pts))


def make_const() -> Weight:
    w = Weight(lambda p: np.ones(np.atleast_2d(p).shape[:-1]), "const", "P",
               None, {}, lambda p: np.zeros(np.atleast_2d(p).shape[:-1]))
    object.__setattr__(w, "companion", w)
    return w


def make_poly(r: float) -> Weight:
    """(1 + |x| + |xi|)**r on phase space, (1 + |x|)**r on odd-dimensional points."""

    def logw(pts):
        n1, n2 = _split_norms(pts)
        base = 1.0 + n1 + (n2 if n2 is not None else 0.0)
        return r * np.log(base)

    comp = make_poly(-r) if r < 0 else None
    w = Weight(lambda p: np.exp(logw(p)), f"poly:{r:g}", "P", comp, {"r": r}, logw)
    if comp is None:
        # nonnegative polynomial weights are submultiplicative: self-companion
        object.__setattr__(w, "companion", w)
    return w


def make_exp(s: float, sigma: float, r: float) -> Weight:
    """exp(r * (|x|**(1/s) + |xi|**(1/sigma))); subexponential for s, sigma > 1."""
    if s < 0.5 or sigma < 0.5:
        raise ValueError("make_exp requires s, sigma >= 1/2")

    def logw(pts):
        n1, n2 = _split_norms(pts)
        out = r * n1 ** (1.0 / s)
        if n2 is not None:
            out = out + r * n2 ** (1.0 / sigma)
        return out

    if r == 0:
        tag = "P"
    elif min(s, sigma) > 1.0:
        tag = "PE0"
    else:
        tag = "PE"
    comp = make_exp(s, sigma, -r) if r < 0 else None
    w = Weight(lambda p: np.exp(logw(p)), f"exp:{s:g},{sigma:g},{r:g}", tag, comp,
               {"s": s, "sigma": sigma, "r": r}, logw)
    if comp is None:
        # r >= 0 makes the weight even and submultiplicative: self-companion
        object.__setattr__(w, "companion", w)
    return w


def make_tabulated(table: dict[tuple[float, ...], float]) -> Weight:
    """Lookup weight; requested points must match table keys to 1e-9."""
    keys = np.array(list(table.keys()), dtype=float)
    vals = np.array(list(table.values()), dtype=float)
    if np.any(vals <= 0):
        raise ValueError("tabulated weight values must be positive")

    def fn(pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        flat = pts.reshape(-1, pts.shape[-1])
        out = np.empty(len(flat))
        for i, p in enumerate(flat):
            d = np.max(np.abs(keys - p), axis=1)
            j = int(np.argmin(d))
            if d[j] > 1e-9:
                raise ValueError(f"point {p} not in weight table")
            out[i] = vals[j]
        return out.reshape(pts.shape[:-1])

    return Weight(fn, f"tabulated({len(table)})", "unknown", None, {})


def parse_weight(spec: str) -> Weight:
    """CLI names: poly:r, exp:s,sigma,r, const, tabulated:file.csv."""
    kind, _, arg = spec.partition(":")
    if kind == "const":
        return make_const()
    if kind == "poly":
        return make_poly(float(arg))
    if kind == "exp":
        s, sigma, r = (float(x) for x in arg.split(","))
        return make_exp(s, sigma, r)
    if kind == "tabulated":
        rows = np.loadtxt(Path(arg), delimiter=",", ndmin=2)
        return make_tabulated({tuple(row[:-1]): float(row[-1]) for row in rows})
    raise ValueError(f"unknown weight builder {spec!r}")


def scale_by_bracket_power(omega: Weight, r: float) -> Weight:
    """omega(X) * (1 + |z|^2)**(r/2) with |z|^2 = |X|^2 / 2 under X=(x,xi) <-> z."""

    def logw(pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        zsq = 0.5 * np.sum(pts**2, axis=-1)
        return omega.log(pts) + 0.5 * r * np.log1p(zsq)

    return Weight(lambda p: np.exp(logw(p)), f"{omega.name}*bracket^{r:g}",
                  "unknown", None, {"base": omega.name, "r": r}, logw)


# ------------------------------------------------------------ moderateness

@dataclass(frozen=True)
class ModeratenessReport:
    C: float
    log_C: float
    worst_pair: tuple[tuple[float, ...], tuple[float, ...]]
    n_pairs: int

    def __repr__(self):
        return f"ModeratenessReport(C={self.C:.6g}, pairs={self.n_pairs})"


def sup_ratio(w0: Weight, w1: Weight, w2: Weight,
              xs: np.ndarray, ys: np.ndarray,
              box: np.ndarray | None = None) -> ModeratenessReport:
    """max over probed (x, y) of w0(x+y) / (w1(x) * w2(y)), in log scale.

    Pairs whose sum falls outside the bounding box of xs are skipped, so the
    probe set stays closed under the sums actually used.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    ys = np.atleast_2d(np.asarray(ys, dtype=float))
    if len(xs) == 0 or len(ys) == 0:
        raise ValueError("empty probe grid")
    if box is None:
        box = np.stack([xs.min(axis=0), xs.max(axis=0)])

    log1 = w1.log(xs)  # (nx,)
    log2 = w2.log(ys)  # (ny,)
    best = -np.inf
    worst = (tuple(xs[0]), tuple(ys[0]))
    n_pairs = 0
    for j, y in enumerate(ys):
        sums = xs + y
        inside = np.all((sums >= box[0] - 1e-12) & (sums <= box[1] + 1e-12), axis=1)
        if not inside.any():
            continue
        n_pairs += int(inside.sum())
        log_ratio = w0.log(sums[inside]) - log1[inside] - log2[j]
        i = int(np.argmax(log_ratio))
        if log_ratio[i] > best:
            best = float(log_ratio[i])
            worst = (tuple(xs[inside][i]), tuple(y))
    with np.errstate(over="ignore"):
        return ModeratenessReport(float(np.exp(best)), best, worst, n_pairs)


def _grid(radius: float, dim: int, per_axis: int = 9) -> np.ndarray:
    axes = [np.linspace(-radius, radius, per_axis)] * dim
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    return pts.reshape(-1, dim)


def check_moderate(omega: Weight, v: Weight, grid: np.ndarray) -> ModeratenessReport:
    """C = max over grid pairs of omega(x+y) / (omega(x) v(y)), sums clipped to the grid box."""
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    return sup_ratio(omega, omega, v, grid, grid)


def _ray_points(dim: int, magnitude: float) -> np.ndarray:
    """Points of a given magnitude along the coordinate axes and the diagonal."""
    dirs = list(np.eye(dim))
    dirs.append(np.ones(dim) / np.sqrt(dim))
    pts = [sign * magnitude * d for d in dirs for sign in (1.0, -1.0)]
    return np.asarray(pts)


def _passes(omega: Weight, v: Weight, radii, dim: int) -> bool:
    """Pass iff the sup log-ratio plateaus as the probed magnitudes grow.

    Box grids cover the small scales; log-spaced ray pairs extend two decades
    past the largest box radius (log-scale evaluation, so no overflow). Any
    growth in the sup over the outermost levels certifies failure.
    """
    levels = sorted(set(radii) | {radii[-1] * 10.0, radii[-1] * 100.0})
    sups = []
    running = -np.inf
    for R in levels:
        try:
            if R <= radii[-1]:
                g = _grid(R, dim)
                running = max(running, sup_ratio(omega, omega, v, g, g).log_C)
            rays = np.concatenate([_ray_points(dim, m)
                                   for m in (0.25 * R, 0.5 * R, R)])
            box = np.stack([np.full(dim, -2.0 * R), np.full(dim, 2.0 * R)])
            running = max(running, sup_ratio(omega, omega, v, rays, rays, box).log_C)
        except ValueError:
            continue  # weight undefined out here (tabulated); rely on inner levels
        sups.append(running)
    if len(sups) < 3:
        return False
    return sups[-1] - sups[-3] <= 0.02 * max(1.0, abs(sups[-3]))


def classify_weight(omega: Weight, radii=(1.0, 3.0, 10.0, 30.0, 100.0),
                    dim: int = 2) -> str:
    """Evidence-based class tag from the probe ladders.

    P: moderate w.r.t. some polynomial companion; PE0: moderate w.r.t.
    exp(r'|.|) for every ladder r'; PE: for some ladder r'. The ladder is
    fixed because no constructive r is available in general.
    """
    radii = tuple(radii)
    if radii[-1] / radii[0] < 100.0:
        raise ValueError("radii must span at least two decades")
    for k in POLY_LADDER:
        if _passes(omega, make_poly(k), radii, dim):
            return "P"
    passing = [rp for rp in EXP_LADDER if _passes(omega, make_exp(1, 1, rp), radii, dim)]
    if len(passing) == len(EXP_LADDER):
        return "PE0"
    if passing:
        return "PE"
    return "unknown"
