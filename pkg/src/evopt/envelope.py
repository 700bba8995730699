"""
Log-growth objectives on [a, b] and their convex envelopes.

The c-envelope of f at x is the infimum of E_Q[f] over distributions Q on
[a, b] with mean x. On an interval it is enough to look at two-point measures,

    f^c(x) = min_{x1 <= x <= x2} w f(x1) + (1 - w) f(x2),   w = (x2 - x)/(x2 - x1),

which is what :func:`c_envelope_at` evaluates on a grid. Values live in the
extended reals [-inf, inf); an atom with zero weight contributes 0 even when f
is -inf there.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core_types import SupportInterval, affine_value

DEFAULT_GRID_N = 2001


def _log0(v):
    """log with log(0) = -inf and no warnings."""
    v = np.asarray(v, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.log(v)
    return float(out) if out.ndim == 0 else out


def weighted_sum(w, f1, f2):
    """``w*f1 + (1-w)*f2`` where a zero weight kills a -inf value."""
    w = np.asarray(w, dtype=float)
    f1 = np.asarray(f1, dtype=float)
    f2 = np.asarray(f2, dtype=float)
    with np.errstate(invalid="ignore"):
        t1 = np.where(w > 0, w * f1, 0.0)
        t2 = np.where(w < 1, (1.0 - w) * f2, 0.0)
    out = t1 + t2
    return float(out) if out.ndim == 0 else out


def f_alpha_at(mu0: float, alpha: float, x):
    """``log(1 + alpha*(x - mu0))``."""
    return _log0(affine_value(mu0, alpha, x))


def F_at(mu0: float, alpha: float, beta: float, x):
    """``log((1 + alpha*(x - mu0)) / (1 + beta*(x - mu0)))`` with 0/0 = 1."""
    if alpha == beta:
        out = np.zeros_like(np.asarray(x, dtype=float))
        return float(out) if out.ndim == 0 else out
    num = np.asarray(affine_value(mu0, alpha, x))
    den = np.asarray(affine_value(mu0, beta, x))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.log(num) - np.log(den)
    # both zero only if alpha == beta at x != mu0, handled above; still guard
    out = np.where((num == 0) & (den == 0), 0.0, out)
    return float(out) if out.ndim == 0 else out


def G_at(support: SupportInterval, mu0: float, alpha: float, beta: float, x):
    """Affine interpolation of F between its values at a and b."""
    fa = F_at(mu0, alpha, beta, support.a)
    fb = F_at(mu0, alpha, beta, support.b)
    w = (support.b - np.asarray(x, dtype=float)) / support.width
    return weighted_sum(w, fa, fb)


def chord_at(f: Callable, support: SupportInterval, x):
    """Value at x of the chord of f between a and b."""
    w = (support.b - np.asarray(x, dtype=float)) / support.width
    return weighted_sum(w, f(support.a), f(support.b))


class ObjectiveFn:
    """A scalar function on [a, b] with values in [-inf, inf)."""

    def __call__(self, x):
        raise NotImplementedError


@dataclass(frozen=True)
class FAlpha(ObjectiveFn):
    mu0: float
    alpha: float

    def __call__(self, x):
        return f_alpha_at(self.mu0, self.alpha, x)


@dataclass(frozen=True)
class FRatio(ObjectiveFn):
    mu0: float
    alpha: float
    beta: float

    def __call__(self, x):
        return F_at(self.mu0, self.alpha, self.beta, x)

    @property
    def curvature(self) -> str:
        """'zero', 'convex', 'concave' or 'mixed' from the signs of (alpha, beta)."""
        al, be = self.alpha, self.beta
        if al == be:
            return "zero"
        if 0 <= al <= be or be <= al <= 0:
            return "convex"
        if 0 <= be <= al or al <= be <= 0:
            return "concave"
        return "mixed"


@dataclass(frozen=True)
class GChord(ObjectiveFn):
    support: SupportInterval
    mu0: float
    alpha: float
    beta: float

    def __call__(self, x):
        return G_at(self.support, self.mu0, self.alpha, self.beta, x)


@dataclass(frozen=True)
class Custom(ObjectiveFn):
    fn: Callable

    def __call__(self, x):
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)


def _grid_with(support: SupportInterval, grid_n: int, x) -> np.ndarray:
    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    g = np.linspace(support.a, support.b, grid_n)
    return np.unique(np.concatenate([g, np.atleast_1d(np.asarray(x, dtype=float))]))


def _envelope_pairs(xs, fs, x):
    """Brute-force minimum over grid pairs bracketing x."""
    at = fs[xs == x]
    best = at[0] if at.size else np.inf
    left, right = xs < x, xs > x
    if left.any() and right.any():
        x1, f1 = xs[left][:, None], fs[left][:, None]
        x2, f2 = xs[right][None, :], fs[right][None, :]
        w = (x2 - x) / (x2 - x1)
        best = min(best, float(np.min(weighted_sum(w, f1, f2))))
    return best


def _lower_hull(xs, fs):
    """Indices of the lower convex hull of finite points sorted by xs."""
    hull: list[int] = []
    for i in range(len(xs)):
        while len(hull) >= 2:
            j, k = hull[-2], hull[-1]
            # drop k if it lies on or above the segment j -> i
            cross = (xs[k] - xs[j]) * (fs[i] - fs[j]) - (fs[k] - fs[j]) * (xs[i] - xs[j])
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    return np.asarray(hull, dtype=int)


def _envelope_hull(xs, fs, x):
    """Same minimum as :func:`_envelope_pairs`, via the lower hull of the grid."""
    x = np.atleast_1d(x)
    neg = np.isneginf(fs)
    finite = ~neg
    out = np.empty(x.shape, dtype=float)
    if finite.sum() >= 1:
        hx, hf = xs[finite], fs[finite]
        idx = _lower_hull(hx, hf)
        out[:] = np.interp(x, hx[idx], hf[idx])
        # points outside the finite hull's span are only reachable through -inf atoms
        out[(x < hx[idx[0]]) | (x > hx[idx[-1]])] = -np.inf
    else:
        out[:] = -np.inf
    if neg.any():
        bad = xs[neg]
        lo, hi = xs[0], xs[-1]
        for k, xv in enumerate(x):
            # a -inf atom gets positive weight if it can be paired across x
            hit = np.any(bad == xv)
            hit |= np.any(bad < xv) and xv < hi
            hit |= np.any(bad > xv) and xv > lo
            if hit:
                out[k] = -np.inf
    return out


def c_envelope_at(
    f: Callable,
    support: SupportInterval,
    x,
    grid_n: int = DEFAULT_GRID_N,
    method: str = "hull",
):
    """Grid evaluation of the convex envelope of f on [a, b] at x.

    The grid is uniform with ``grid_n`` points and always contains x itself.
    ``method="pairs"`` enumerates every bracketing pair explicitly (quadratic
    cost); ``method="hull"`` returns the identical minimum through the lower
    convex hull of the grid values.
    """
    xq = np.asarray(x, dtype=float)
    if np.any(xq < support.a) or np.any(xq > support.b):
        raise ValueError("x outside support")
    xs = _grid_with(support, grid_n, xq)
    fs = np.asarray(f(xs), dtype=float)
    if method == "pairs":
        out = np.array([_envelope_pairs(xs, fs, xv) for xv in np.atleast_1d(xq)])
    elif method == "hull":
        out = _envelope_hull(xs, fs, xq)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(out[0]) if xq.ndim == 0 else out.reshape(xq.shape)


def c_envelope_analytic(
    f: ObjectiveFn, support: SupportInterval, x, grid_n: int = DEFAULT_GRID_N
):
    """Convex envelope using the known curvature of the built-in objectives.

    Convex objectives are their own envelope and concave ones are replaced by
    the chord between a and b. FRatio with alpha and beta of opposite signs has
    no fixed curvature and is delegated to :func:`c_envelope_at`.
    """
    if isinstance(f, GChord):
        return f(x)
    if isinstance(f, FAlpha):
        if f.alpha == 0:
            return f(x)
        return chord_at(f, support, x)
    if isinstance(f, FRatio):
        kind = f.curvature
        if kind in ("zero", "convex"):
            return f(x)
        if kind == "concave":
            return chord_at(f, support, x)
    return c_envelope_at(f, support, x, grid_n)
