"""
E-power and growth-rate-optimal (Kelly) betting against simple two-point
alternatives.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.special import rel_entr

from .core_types import (
    CoinBet,
    DomainError,
    SupportInterval,
    TwoPointDist,
    betting_range,
)
from .envelope import f_alpha_at, weighted_sum


class GroResult(NamedTuple):
    beta_star: float
    value: float


def e_power(bet: CoinBet, dist: TwoPointDist) -> float:
    """E_dist[log E_alpha]; -inf as soon as a positive-mass atom hits E = 0."""
    if not dist.within(bet.support):
        raise DomainError("distribution not supported inside the betting support")
    return two_point_log_growth(bet.mu0, bet.alpha, dist.x1, dist.x2, dist.theta)


def two_point_log_growth(mu0, beta, x1, x2, theta):
    """Vectorised ``theta*log(1+beta(x1-mu0)) + (1-theta)*log(1+beta(x2-mu0))``."""
    return weighted_sum(theta, f_alpha_at(mu0, beta, x1), f_alpha_at(mu0, beta, x2))


def kelly_fraction(mu0, x1, x2, theta, alpha_min, alpha_max):
    """Maximiser of the two-point log growth over [alpha_min, alpha_max].

    Vectorised over (x1, x2, theta). For atoms straddling mu0 the stationary
    point is ``(mean - mu0) / ((mu0 - x1)(x2 - mu0))``, clamped to the range;
    when all mass sits on one side of mu0 the objective is monotone and the
    corresponding end of the range wins.
    """
    x1, x2, theta = np.broadcast_arrays(
        np.asarray(x1, float), np.asarray(x2, float), np.asarray(theta, float)
    )
    mean = theta * x1 + (1.0 - theta) * x2
    drift = mean - mu0
    # effective support: drop zero-mass atoms
    lo = np.where(theta > 0, x1, x2)
    hi = np.where(theta < 1, x2, x1)
    straddle = (lo < mu0) & (hi > mu0)
    with np.errstate(divide="ignore", invalid="ignore"):
        interior = drift / ((mu0 - lo) * (hi - mu0))
    beta = np.where(
        straddle,
        np.clip(interior, alpha_min, alpha_max),
        np.where(drift > 0, alpha_max, np.where(drift < 0, alpha_min, 0.0)),
    )
    return float(beta) if beta.ndim == 0 else beta


def kelly_growth(mu0, x1, x2, theta, alpha_min, alpha_max):
    """Vectorised ``(beta_star, optimal log growth)`` for two-point alternatives.

    At an interior optimum the two e-values are exactly
    ``theta(x2-x1)/(x2-mu0)`` and ``(1-theta)(x2-x1)/(mu0-x1)``; using them
    directly avoids the cancellation in ``1 + beta*(x - mu0)`` that would
    otherwise send an atom of tiny mass to e-value 0.
    """
    beta = kelly_fraction(mu0, x1, x2, theta, alpha_min, alpha_max)
    x1, x2, theta = np.broadcast_arrays(
        np.asarray(x1, float), np.asarray(x2, float), np.asarray(theta, float)
    )
    direct = np.asarray(two_point_log_growth(mu0, beta, x1, x2, theta))
    drift = theta * x1 + (1 - theta) * x2 - mu0
    # drift == 0 keeps the exact value 0 from beta = 0
    straddle = (x1 < mu0) & (mu0 < x2) & (theta > 0) & (theta < 1) & (drift != 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        interior = drift / ((mu0 - x1) * (x2 - mu0))
        tol = 1e-12 * (alpha_max - alpha_min)
        inside = straddle & (interior >= alpha_min - tol) & (interior <= alpha_max + tol)
        span = x2 - x1
        e1 = theta * span / (x2 - mu0)
        e2 = (1 - theta) * span / (mu0 - x1)
        closed = weighted_sum(theta, np.log(e1), np.log(e2))
    # direct evaluation is more accurate unless an e-value is small
    use_closed = inside & (np.minimum(e1, e2) < 0.5)
    value = np.where(use_closed, closed, direct)
    if value.ndim == 0:
        return float(beta), float(value)
    return beta, value


def gro_two_point(
    dist: TwoPointDist, mu0: float, support: SupportInterval
) -> GroResult:
    """GRO betting parameter and optimal e-power for a two-point alternative."""
    rng = betting_range(support, mu0)
    if not dist.within(support):
        raise DomainError("distribution not supported inside [a, b]")
    beta, value = kelly_growth(mu0, dist.x1, dist.x2, dist.theta, rng.alpha_min, rng.alpha_max)
    if value < 0:
        # can only come from rounding; beta = 0 always achieves 0
        beta, value = 0.0, 0.0
    return GroResult(float(beta), float(value))


def kl_bernoulli(p, q):
    """KL(Ber(p) || Ber(q))."""
    return rel_entr(p, q) + rel_entr(1.0 - p, 1.0 - q)


class GroCurvePoint(NamedTuple):
    mu: float
    gro_extreme: float
    gro_dirac: float


def gro_value_curve(mu, mu0: float, support: SupportInterval) -> list[GroCurvePoint]:
    """GRO as a function of the alternative mean.

    For each mean mu the two simple alternatives of interest are the extreme
    two-point law on {a, b} with mean mu (on [0, 1] this is Ber(mu), whose GRO
    is kl(mu, mu0)) and the Dirac mass at mu.
    """
    out = []
    for m in np.atleast_1d(np.asarray(mu, dtype=float)):
        if not support.contains(m):
            raise DomainError(f"mean {m} outside support")
        extreme = TwoPointDist.with_mean(support.a, support.b, m)
        out.append(
            GroCurvePoint(
                float(m),
                gro_two_point(extreme, mu0, support).value,
                gro_two_point(TwoPointDist.dirac(m), mu0, support).value,
            )
        )
    return out
