"""
Domain types for single-round mean testing on a bounded interval, plus exact
evaluation of coin-betting e-variables.

A coin-betting e-variable for the null "mean = mu0" on [a, b] is the affine map

    E_alpha(x) = 1 + alpha * (x - mu0),

which is non-negative on [a, b] exactly when alpha lies in the betting range
[1 / (mu0 - b), 1 / (mu0 - a)].
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np


class DomainError(ValueError):
    """Raised when an input lies outside the domain an operation is defined on."""


# Relative slack used to snap 1 + alpha*(x - mu0) to exactly zero when alpha sits
# on the boundary of the betting range; 1/(mu0 - a) * (a - mu0) is not always -1
# in floating point.
_SNAP = 8 * np.finfo(float).eps


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    return value


@dataclass(frozen=True)
class SupportInterval:
    """The bounded range [a, b] of the observed random variable."""

    a: float
    b: float

    def __post_init__(self):
        a = _check_finite("a", self.a)
        b = _check_finite("b", self.b)
        if not a < b:
            raise DomainError(f"support needs a < b, got a={a}, b={b}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def contains(self, x: float) -> bool:
        return self.a <= x <= self.b

    def interior(self, x: float) -> bool:
        return self.a < x < self.b

    def require_interior(self, name: str, x: float) -> float:
        x = _check_finite(name, x)
        if not self.interior(x):
            raise DomainError(
                f"{name}={x} must lie strictly inside ({self.a}, {self.b})"
            )
        return x

    def to_unit(self, x):
        """Map points of [a, b] onto [0, 1] via t = (x - a) / (b - a)."""
        return (np.asarray(x, dtype=float) - self.a) / self.width

    def from_unit(self, t):
        return self.a + np.asarray(t, dtype=float) * self.width

    def reflect(self, x):
        """The point reflection x -> a + b - x."""
        return self.a + self.b - np.asarray(x, dtype=float)


@dataclass(frozen=True)
class BettingRange:
    """Closed interval of betting parameters keeping E_alpha non-negative."""

    alpha_min: float
    alpha_max: float

    def __post_init__(self):
        if not self.alpha_min < 0 < self.alpha_max:
            raise DomainError(
                f"betting range must straddle 0, got "
                f"[{self.alpha_min}, {self.alpha_max}]"
            )

    @property
    def width(self) -> float:
        return self.alpha_max - self.alpha_min

    def contains(self, alpha: float) -> bool:
        return self.alpha_min <= alpha <= self.alpha_max

    def clamp(self, alpha: float) -> float:
        return min(max(alpha, self.alpha_min), self.alpha_max)

    def grid(self, n: int) -> np.ndarray:
        return np.linspace(self.alpha_min, self.alpha_max, n)


def betting_range(support: SupportInterval, mu0: float) -> BettingRange:
    """Return ``(1/(mu0 - b), 1/(mu0 - a))`` for a null mean inside (a, b)."""
    mu0 = support.require_interior("mu0", mu0)
    return BettingRange(1.0 / (mu0 - support.b), 1.0 / (mu0 - support.a))


def affine_value(mu0: float, alpha, x):
    """Vectorised ``1 + alpha*(x - mu0)``, snapped to 0 at the saturation point.

    No domain checks: callers guarantee alpha in the betting range and x in
    the support, so negative results only arise from rounding.
    """
    alpha = np.asarray(alpha, dtype=float)
    dx = np.asarray(x, dtype=float) - mu0
    prod = alpha * dx
    val = 1.0 + prod
    val = np.where(np.abs(val) <= _SNAP * (1.0 + np.abs(prod)), 0.0, val)
    val = np.maximum(val, 0.0)
    if val.ndim == 0:
        return float(val)
    return val


@dataclass(frozen=True)
class CoinBet:
    """Coin-betting e-variable ``x -> 1 + alpha*(x - mu0)`` on a support interval."""

    mu0: float
    alpha: float
    support: SupportInterval

    def __post_init__(self):
        mu0 = self.support.require_interior("mu0", self.mu0)
        alpha = _check_finite("alpha", self.alpha)
        rng = betting_range(self.support, mu0)
        if not rng.contains(alpha):
            raise DomainError(
                f"alpha={alpha} outside betting range "
                f"[{rng.alpha_min}, {rng.alpha_max}]"
            )
        object.__setattr__(self, "mu0", mu0)
        object.__setattr__(self, "alpha", alpha)

    @property
    def range(self) -> BettingRange:
        return betting_range(self.support, self.mu0)

    def __call__(self, x):
        return evar_eval(self, x)

    def to_unit(self) -> "CoinBet":
        """The same e-variable expressed on [0, 1] (alpha scales by b - a)."""
        unit = SupportInterval(0.0, 1.0)
        m0 = float(self.support.to_unit(self.mu0))
        # alpha is valid here, so any overshoot of the unit range is rounding
        alpha = betting_range(unit, m0).clamp(self.alpha * self.support.width)
        return CoinBet(m0, alpha, unit)


def evar_eval(bet: CoinBet, x):
    """Evaluate the e-variable at x (scalar or array); x must lie in the support."""
    xs = np.asarray(x, dtype=float)
    if np.any(xs < bet.support.a) | np.any(xs > bet.support.b) | np.any(np.isnan(xs)):
        raise DomainError(f"x outside support [{bet.support.a}, {bet.support.b}]")
    return affine_value(bet.mu0, bet.alpha, xs)


@dataclass(frozen=True)
class TwoPointDist:
    """``theta * delta_{x1} + (1 - theta) * delta_{x2}`` with x1 <= x2.

    A Dirac measure is stored with ``x1 == x2`` and ``theta == 1``.
    """

    x1: float
    x2: float
    theta: float = 1.0

    def __post_init__(self):
        x1 = _check_finite("x1", self.x1)
        x2 = _check_finite("x2", self.x2)
        theta = _check_finite("theta", self.theta)
        if x1 > x2:
            raise DomainError(f"need x1 <= x2, got {x1} > {x2}")
        if not 0.0 <= theta <= 1.0:
            raise DomainError(f"theta={theta} not in [0, 1]")
        if x1 == x2:
            theta = 1.0
        object.__setattr__(self, "x1", x1)
        object.__setattr__(self, "x2", x2)
        object.__setattr__(self, "theta", theta)

    @classmethod
    def dirac(cls, x: float) -> "TwoPointDist":
        return cls(x, x, 1.0)

    @classmethod
    def with_mean(cls, x1: float, x2: float, mean: float) -> "TwoPointDist":
        """The unique measure on {x1, x2} with the given mean."""
        if not x1 <= mean <= x2:
            raise DomainError(f"mean {mean} not in [{x1}, {x2}]")
        if x1 == x2:
            return cls.dirac(x1)
        return cls(x1, x2, (x2 - mean) / (x2 - x1))

    @property
    def is_dirac(self) -> bool:
        return self.x1 == self.x2 or self.theta == 1.0 or self.theta == 0.0

    @property
    def mean(self) -> float:
        return self.theta * self.x1 + (1.0 - self.theta) * self.x2

    def atoms(self) -> list[tuple[float, float]]:
        """(point, mass) pairs with strictly positive mass."""
        out = []
        if self.theta > 0:
            out.append((self.x1, self.theta))
        if self.theta < 1 and self.x2 != self.x1:
            out.append((self.x2, 1.0 - self.theta))
        return out

    def within(self, support: SupportInterval) -> bool:
        return support.a <= self.x1 and self.x2 <= support.b

    def to_unit(self, support: SupportInterval) -> "TwoPointDist":
        return TwoPointDist(
            float(support.to_unit(self.x1)), float(support.to_unit(self.x2)), self.theta
        )

    def to_dict(self) -> dict:
        return {"x1": self.x1, "x2": self.x2, "theta": self.theta}


def e_expectation(bet: CoinBet, dist: TwoPointDist) -> float:
    """E_dist[E_alpha], which by affinity is ``1 + alpha*(mean - mu0)``."""
    if not dist.within(bet.support):
        raise DomainError("distribution not supported inside the betting support")
    return 1.0 + bet.alpha * (dist.mean - bet.mu0)


class ProblemKind(str, Enum):
    TWO_SIDED = "two-sided"
    ONE_SIDED_UPPER = "one-sided"
    ONE_SIDED_LOWER = "one-sided-lower"
    AGNOSTIC = "agnostic"


@dataclass(frozen=True)
class MeanProblem:
    """A null mean mu0 against an alternative described by ``kind`` (and mu1)."""

    support: SupportInterval
    kind: ProblemKind
    mu0: float
    mu1: Optional[float] = None

    def __post_init__(self):
        kind = ProblemKind(self.kind)
        object.__setattr__(self, "kind", kind)
        mu0 = self.support.require_interior("mu0", self.mu0)
        object.__setattr__(self, "mu0", mu0)
        if kind is ProblemKind.AGNOSTIC:
            if self.mu1 is not None:
                raise DomainError("the agnostic alternative takes no mu1")
            return
        if self.mu1 is None:
            raise DomainError(f"{kind.value} problem needs mu1")
        mu1 = self.support.require_interior("mu1", self.mu1)
        object.__setattr__(self, "mu1", mu1)
        if kind is ProblemKind.ONE_SIDED_UPPER and mu1 < mu0:
            raise DomainError("one-sided (upper) alternative needs mu1 >= mu0")
        if kind is ProblemKind.ONE_SIDED_LOWER and mu1 > mu0:
            raise DomainError("one-sided (lower) alternative needs mu1 <= mu0")

    @property
    def a(self) -> float:
        return self.support.a

    @property
    def b(self) -> float:
        return self.support.b

    @property
    def range(self) -> BettingRange:
        return betting_range(self.support, self.mu0)
