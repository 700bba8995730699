"""
GROW and REGROW betting parameters for single-round mean testing on [a, b].

Three alternatives are covered, all against a null mean mu0:

* two-sided point alternative ``mean = mu1``
  (:func:`grow_two_sided`, :func:`regrow_two_sided`);
* one-sided alternative ``mean > mu1`` against the null ``mean <= mu0``
  (:func:`grow_one_sided`, :func:`regrow_one_sided`) and its mirror image
  (:func:`regrow_one_sided_lower`);
* the agnostic alternative ``mean != mu0``
  (:func:`agnostic_grow`, :func:`agnostic_regrow`).

The minimal-effect-size alternative ``|mean - mu0| > delta`` has the same
solution as the agnostic one; :func:`solve` accepts it under that alias.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from scipy.optimize import bisect

from .core_types import (
    DomainError,
    MeanProblem,
    ProblemKind,
    SupportInterval,
    TwoPointDist,
    betting_range,
)
from .envelope import F_at, G_at, f_alpha_at, weighted_sum

BISECT_XTOL = 1e-12
BISECT_MAXITER = 200
BRACKET_SHRINK = 1e-12
CLOSED_FORM_AGREEMENT = 1e-8
# one-sided mu1 closer than this fraction of (b - a) to b is rejected
UPPER_MARGIN = 1e-9


class Criterion(str, Enum):
    GROW = "grow"
    REGROW = "regrow"


@dataclass(frozen=True)
class OptResult:
    """Optimal betting parameter, its sup-inf value and the worst-case laws.

    ``attained[i]`` is False when ``worst_cases[i]`` only lies in the closure
    of the alternative (the infimum is approached, not reached).
    """

    alpha_star: float
    objective_value: float
    criterion: Criterion
    worst_cases: list[TwoPointDist] = field(default_factory=list)
    attained: list[bool] = field(default_factory=list)
    residual: float = 0.0


class RootBracketError(RuntimeError):
    """The defining equation showed no sign change on its bracket."""


def _interior(support: SupportInterval, mu0, mu1=None):
    support.require_interior("mu0", mu0)
    if mu1 is not None:
        support.require_interior("mu1", mu1)


def grow_alpha(support: SupportInterval, mu0: float, mu1: float) -> float:
    """``(mu1 - mu0) / ((mu0 - a)(b - mu0))``."""
    return (mu1 - mu0) / ((mu0 - support.a) * (support.b - mu0))


def _extreme_law(support: SupportInterval, mean: float) -> TwoPointDist:
    return TwoPointDist.with_mean(support.a, support.b, mean)


def _bisect(h, lo, hi, width):
    eta = BRACKET_SHRINK * width
    lo, hi = lo + eta, hi - eta
    h_lo, h_hi = h(lo), h(hi)
    if h_lo == 0:
        return lo
    if h_hi == 0:
        return hi
    if math.isnan(h_lo) or math.isnan(h_hi) or (h_lo > 0) == (h_hi > 0):
        raise RootBracketError(f"no sign change: h({lo})={h_lo}, h({hi})={h_hi}")
    return bisect(h, lo, hi, xtol=BISECT_XTOL, maxiter=BISECT_MAXITER)


def grow_two_sided(support: SupportInterval, mu0: float, mu1: float) -> OptResult:
    _interior(support, mu0, mu1)
    alpha = grow_alpha(support, mu0, mu1)
    w = (support.b - mu1) / support.width
    value = weighted_sum(
        w, f_alpha_at(mu0, alpha, support.a), f_alpha_at(mu0, alpha, support.b)
    )
    return OptResult(
        alpha, value, Criterion.GROW, [_extreme_law(support, mu1)], [True]
    )


def regrow_two_sided(support: SupportInterval, mu0: float, mu1: float) -> OptResult:
    """REGROW for ``mean = mu0`` vs ``mean = mu1``.

    The parameter equalises the relative loss at the Dirac mass on mu1 (whose
    GRO bet is the edge of the betting range) with the chord value against the
    GROW bet; it is the root of an increasing-minus-decreasing function,
    located by bisection.
    """
    _interior(support, mu0, mu1)
    rng = betting_range(support, mu0)
    worst = [_extreme_law(support, mu1), TwoPointDist.dirac(mu1)]
    if mu1 == mu0:
        return OptResult(0.0, 0.0, Criterion.REGROW, worst, [True, True])
    gw = grow_alpha(support, mu0, mu1)
    edge = rng.alpha_max if mu1 > mu0 else rng.alpha_min

    def h(alpha):
        return F_at(mu0, alpha, edge, mu1) - G_at(support, mu0, alpha, gw, mu1)

    lo, hi = (gw, rng.alpha_max) if mu1 > mu0 else (rng.alpha_min, gw)
    alpha = _bisect(h, lo, hi, rng.width)
    return OptResult(
        alpha,
        F_at(mu0, alpha, edge, mu1),
        Criterion.REGROW,
        worst,
        [True, True],
        residual=abs(h(alpha)),
    )


def grow_one_sided(support: SupportInterval, mu0: float, mu1: float) -> OptResult:
    """GROW for ``mean <= mu0`` vs ``mean > mu1``; the worst case is only a limit."""
    _interior(support, mu0, mu1)
    if mu1 < mu0:
        raise DomainError("one-sided alternative needs mu1 >= mu0")
    res = grow_two_sided(support, mu0, mu1)
    return OptResult(res.alpha_star, res.objective_value, Criterion.GROW, res.worst_cases, [False])


def _one_sided_ratio(support: SupportInterval, mu1: float) -> float:
    t = (mu1 - support.a) / support.width
    return t ** ((mu1 - support.a) / (support.b - mu1))


def regrow_one_sided_closed_form(support: SupportInterval, mu0: float, mu1: float) -> float:
    a, b = support.a, support.b
    r = _one_sided_ratio(support, mu1)
    q = (b - mu1) / (b - a)
    return ((b - mu0) - (mu0 - a) * q * r) / ((mu0 - a) * (b - mu0) * (1.0 + q * r))


def _check_upper_margin(support: SupportInterval, mu1: float):
    if support.b - mu1 < UPPER_MARGIN * support.width:
        raise DomainError("mu1 too close to b for the one-sided REGROW closed form")


def regrow_one_sided(support: SupportInterval, mu0: float, mu1: float) -> OptResult:
    """REGROW for ``mean <= mu0`` vs ``mean > mu1`` (mu1 >= mu0).

    Uses the closed form and cross-checks it with bisection on the equation
    ``F(alpha, alpha_max; b) = G(alpha, alpha_gw; mu1)``.
    """
    _interior(support, mu0, mu1)
    if mu1 < mu0:
        raise DomainError("one-sided alternative needs mu1 >= mu0")
    _check_upper_margin(support, mu1)
    rng = betting_range(support, mu0)
    gw = grow_alpha(support, mu0, mu1)

    def h(alpha):
        return F_at(mu0, alpha, rng.alpha_max, support.b) - G_at(
            support, mu0, alpha, gw, mu1
        )

    alpha = regrow_one_sided_closed_form(support, mu0, mu1)
    root = _bisect(h, gw, rng.alpha_max, rng.width)
    if abs(root - alpha) > CLOSED_FORM_AGREEMENT * max(1.0, abs(alpha)):
        raise RuntimeError(
            f"closed form {alpha} disagrees with bisection root {root}"
        )
    return OptResult(
        alpha,
        F_at(mu0, alpha, rng.alpha_max, support.b),
        Criterion.REGROW,
        [_extreme_law(support, mu1), TwoPointDist.dirac(support.b)],
        [False, True],
        residual=abs(h(alpha)),
    )


def grow_one_sided_lower(support: SupportInterval, mu0: float, mu1: float) -> OptResult:
    """Mirror of :func:`grow_one_sided` for ``mean >= mu0`` vs ``mean < mu1``."""
    _interior(support, mu0, mu1)
    if mu1 > mu0:
        raise DomainError("lower one-sided alternative needs mu1 <= mu0")
    res = grow_two_sided(support, mu0, mu1)
    return OptResult(res.alpha_star, res.objective_value, Criterion.GROW, res.worst_cases, [False])


def regrow_one_sided_lower(support: SupportInterval, mu0: float, mu1: float) -> OptResult:
    """REGROW for ``mean >= mu0`` vs ``mean < mu1`` (mu1 <= mu0), by bisection."""
    _interior(support, mu0, mu1)
    if mu1 > mu0:
        raise DomainError("lower one-sided alternative needs mu1 <= mu0")
    if mu1 - support.a < UPPER_MARGIN * support.width:
        raise DomainError("mu1 too close to a for the lower one-sided REGROW")
    rng = betting_range(support, mu0)
    gw = grow_alpha(support, mu0, mu1)

    def h(alpha):
        return F_at(mu0, alpha, rng.alpha_min, support.a) - G_at(
            support, mu0, alpha, gw, mu1
        )

    alpha = _bisect(h, rng.alpha_min, gw, rng.width)
    return OptResult(
        alpha,
        F_at(mu0, alpha, rng.alpha_min, support.a),
        Criterion.REGROW,
        [_extreme_law(support, mu1), TwoPointDist.dirac(support.a)],
        [False, True],
        residual=abs(h(alpha)),
    )


def agnostic_grow(support: SupportInterval, mu0: float) -> OptResult:
    """The agnostic GROW e-variable is the constant 1."""
    _interior(support, mu0)
    return OptResult(0.0, 0.0, Criterion.GROW, [], [])


def agnostic_regrow_alpha(support: SupportInterval, mu0: float) -> float:
    return (support.midpoint - mu0) / ((mu0 - support.a) * (support.b - mu0))


def agnostic_regrow(support: SupportInterval, mu0: float) -> OptResult:
    _interior(support, mu0)
    rng = betting_range(support, mu0)
    alpha = agnostic_regrow_alpha(support, mu0)
    up = F_at(mu0, alpha, rng.alpha_max, support.b)
    down = F_at(mu0, alpha, rng.alpha_min, support.a)
    return OptResult(
        alpha,
        up,
        Criterion.REGROW,
        [TwoPointDist.dirac(support.a), TwoPointDist.dirac(support.b)],
        [True, True],
        residual=abs(up - down),
    )


def bernoulli_regrow_one_sided(mu0: float) -> float:
    """REGROW success probability eps for Ber(mu0) vs {Ber(mu): mu > mu0}."""
    if not 0.0 < mu0 < 1.0:
        raise DomainError("mu0 must lie in (0, 1)")
    return 1.0 / (1.0 + (1.0 - mu0) * mu0 ** (mu0 / (1.0 - mu0)))


def bernoulli_regrow_agnostic() -> float:
    return 0.5


def bernoulli_evar(eps: float, mu0: float) -> tuple[float, float]:
    """Values (Z(1), Z(0)) of the Bernoulli e-variable ``(eps/mu0, (1-eps)/(1-mu0))``."""
    return eps / mu0, (1.0 - eps) / (1.0 - mu0)


def bernoulli_alpha(eps: float, mu0: float) -> float:
    """Coin-betting parameter on [0, 1] whose restriction to {0, 1} is Z_eps."""
    unit = SupportInterval(0.0, 1.0)
    if not 0.0 <= eps <= 1.0:
        raise DomainError(f"eps={eps} not in [0, 1]")
    # eps in {0, 1} hits the range ends, which the division can miss by an ulp
    return betting_range(unit, mu0).clamp((eps - mu0) / (mu0 * (1.0 - mu0)))


_SOLVERS = {
    (ProblemKind.TWO_SIDED, Criterion.GROW): grow_two_sided,
    (ProblemKind.TWO_SIDED, Criterion.REGROW): regrow_two_sided,
    (ProblemKind.ONE_SIDED_UPPER, Criterion.GROW): grow_one_sided,
    (ProblemKind.ONE_SIDED_UPPER, Criterion.REGROW): regrow_one_sided,
    (ProblemKind.ONE_SIDED_LOWER, Criterion.GROW): grow_one_sided_lower,
    (ProblemKind.ONE_SIDED_LOWER, Criterion.REGROW): regrow_one_sided_lower,
}


def solve(problem: MeanProblem, criterion) -> OptResult:
    """Dispatch a :class:`MeanProblem` to the matching solver."""
    criterion = Criterion(criterion)
    if problem.kind is ProblemKind.AGNOSTIC:
        fn = agnostic_grow if criterion is Criterion.GROW else agnostic_regrow
        return fn(problem.support, problem.mu0)
    return _SOLVERS[problem.kind, criterion](problem.support, problem.mu0, problem.mu1)

