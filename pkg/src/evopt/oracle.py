"""
Brute-force sup-inf verification over grids of betting parameters and
two-point alternatives.

Nothing here uses the closed forms of :mod:`evopt.optima` to *search*; they are
only consulted afterwards to report the gap. The inner infimum over an
alternative class is taken over every two-point law whose atoms lie on a
support grid and whose mean lies in the class (on a mean grid for composite
classes), which is enough because the objectives are linear in the law and
the extreme points of ``{Q : E_Q[X] = m}`` are two-point measures.

For REGROW the inner infimum over (beta, Q) is evaluated as
``min_Q (E_Q[f_alpha] - max_beta E_Q[f_beta])``, i.e. the same minimum with the
beta-grid maximisation done first for every Q.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .core_types import (
    CoinBet,
    MeanProblem,
    ProblemKind,
    TwoPointDist,
    affine_value,
)
from .growth import kelly_growth, two_point_log_growth
from .optima import Criterion, solve

CHUNK = 4096


def _default_threads() -> int:
    fallback = min(4, os.cpu_count() or 1)
    try:
        return max(1, int(os.environ.get("EVOPT_THREADS", fallback)))
    except ValueError:
        return fallback


@dataclass(frozen=True)
class GridSpec:
    n_alpha: int = 401
    n_beta: int = 401
    n_support: int = 201
    n_mean: int = 101

    def __post_init__(self):
        for name in ("n_alpha", "n_beta", "n_support", "n_mean"):
            if getattr(self, name) < 3:
                raise ValueError(f"{name} must be >= 3")

    def refined(self) -> "GridSpec":
        """Every grid doubled in resolution; the old grids stay nested inside."""
        return GridSpec(*(2 * n - 1 for n in (self.n_alpha, self.n_beta, self.n_support, self.n_mean)))


@dataclass(frozen=True)
class OracleReport:
    alpha_hat: float
    value_hat: float
    worst_dist_hat: Optional[TwoPointDist]
    gap_to_closed_form: float
    criterion: Criterion
    alpha_star: float
    alpha_step: float
    on_boundary: bool = False

    @property
    def alpha_gap_steps(self) -> float:
        return abs(self.alpha_hat - self.alpha_star) / self.alpha_step

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion.value,
            "alpha_hat": self.alpha_hat,
            "value_hat": self.value_hat,
            "alpha_star": self.alpha_star,
            "alpha_step": self.alpha_step,
            "alpha_gap_steps": self.alpha_gap_steps,
            "gap_to_closed_form": self.gap_to_closed_form,
            "worst_dist_hat": None if self.worst_dist_hat is None else self.worst_dist_hat.to_dict(),
            "on_boundary": self.on_boundary,
        }


class Alternatives(NamedTuple):
    """A finite family of two-point laws on a shared support grid."""

    xs: np.ndarray
    i1: np.ndarray
    i2: np.ndarray
    theta: np.ndarray
    mean: np.ndarray

    def __len__(self):
        return len(self.theta)

    def law(self, k: int) -> TwoPointDist:
        return TwoPointDist(float(self.xs[self.i1[k]]), float(self.xs[self.i2[k]]), float(self.theta[k]))


def _mean_grid(problem: MeanProblem, spec: GridSpec) -> tuple[np.ndarray, Optional[float]]:
    """Means spanned by the alternative, plus the closure point if it is not attained."""
    a, b = problem.a, problem.b
    kind = problem.kind
    if kind is ProblemKind.TWO_SIDED:
        return np.array([problem.mu1]), None
    if kind is ProblemKind.ONE_SIDED_UPPER:
        return np.linspace(problem.mu1, b, spec.n_mean), problem.mu1
    if kind is ProblemKind.ONE_SIDED_LOWER:
        return np.linspace(a, problem.mu1, spec.n_mean), problem.mu1
    means = np.linspace(a, b, spec.n_mean)
    return means[means != problem.mu0], None


def alternatives(problem: MeanProblem, spec: GridSpec) -> Alternatives:
    """Every two-point law with atoms on the support grid and mean on the mean grid."""
    means, _ = _mean_grid(problem, spec)
    base = [np.linspace(problem.a, problem.b, spec.n_support), [problem.mu0]]
    if problem.mu1 is not None:
        base.append([problem.mu1])
    base = np.unique(np.concatenate(base))
    # snap means onto base points they only miss by rounding
    pos = np.clip(np.searchsorted(base, means), 1, len(base) - 1)
    near = np.where(means - base[pos - 1] < base[pos] - means, base[pos - 1], base[pos])
    means = np.unique(np.where(np.abs(means - near) <= 1e-9 * problem.support.width, near, means))
    if problem.kind is ProblemKind.AGNOSTIC:
        means = means[means != problem.mu0]
    # mean-grid points off the base grid only enter as Dirac atoms
    xs = np.unique(np.concatenate([base, means]))
    on_base = np.isin(xs, base)
    i1s, i2s, thetas, ms = [], [], [], []
    for m in means:
        (k,) = np.nonzero(xs == m)
        i1s.append(k)
        i2s.append(k)
        thetas.append(np.ones(1))
        ms.append(np.full(1, m))
        left = np.nonzero(on_base & (xs < m))[0]
        right = np.nonzero(on_base & (xs > m))[0]
        if left.size and right.size:
            l, r = np.meshgrid(left, right, indexing="ij")
            l, r = l.ravel(), r.ravel()
            i1s.append(l)
            i2s.append(r)
            thetas.append((xs[r] - m) / (xs[r] - xs[l]))
            ms.append(np.full(l.size, m))
    return Alternatives(
        xs,
        np.concatenate(i1s).astype(np.intp),
        np.concatenate(i2s).astype(np.intp),
        np.concatenate(thetas),
        np.concatenate(ms),
    )


def parameter_grid(problem: MeanProblem, n: int) -> np.ndarray:
    """Betting parameters admissible for the problem's null.

    One-sided nulls only admit bets of one sign.
    """
    rng = problem.range
    if problem.kind is ProblemKind.ONE_SIDED_UPPER:
        return np.linspace(0.0, rng.alpha_max, n)
    if problem.kind is ProblemKind.ONE_SIDED_LOWER:
        return np.linspace(rng.alpha_min, 0.0, n)
    return np.linspace(rng.alpha_min, rng.alpha_max, n)


# Stand-in for log 0 inside grid tables: a zero weight times it is exactly 0,
# any positive weight leaves it far below _NEG_CUT, below which results are -inf.
_NEG = -1e300
_NEG_CUT = -1e200


def _log_table(mu0, params, xs):
    """log E_param(x), one row per support point, one column per parameter."""
    with np.errstate(divide="ignore"):
        t = np.log(affine_value(mu0, params[None, :], xs[:, None]))
    return np.maximum(t, _NEG)


def _expect(table, alts: Alternatives, sl: slice):
    """E_Q[log E_param] with shape (parameters, laws in the slice)."""
    th = alts.theta[sl, None]
    out = th * table[alts.i1[sl]]
    out += (1.0 - th) * table[alts.i2[sl]]
    out[out < _NEG_CUT] = -np.inf
    return out.T


def _chunks(n):
    return [slice(s, min(s + CHUNK, n)) for s in range(0, n, CHUNK)]


def _map_chunks(fn, n, threads):
    parts = _chunks(n)
    if threads > 1 and len(parts) > 1:
        with ThreadPoolExecutor(threads) as ex:
            return list(ex.map(fn, parts))
    return [fn(p) for p in parts]


def gro_on_grid(problem: MeanProblem, alts: Alternatives, betas, threads=None) -> np.ndarray:
    """max over the beta grid of E_Q[log(1 + beta(X - mu0))] for every Q."""
    table = _log_table(problem.mu0, np.asarray(betas, float), alts.xs)
    out = _map_chunks(lambda sl: _expect(table, alts, sl).max(axis=0), len(alts), threads or _default_threads())
    return np.concatenate(out)


def gro_exact(problem: MeanProblem, alts: Alternatives) -> np.ndarray:
    """GRO of every Q from the two-point Kelly fraction."""
    params = parameter_grid(problem, 2)
    x1, x2 = alts.xs[alts.i1], alts.xs[alts.i2]
    return kelly_growth(problem.mu0, x1, x2, alts.theta, params[0], params[-1])[1]


def inner_values(problem: MeanProblem, alphas, alts: Alternatives, offset=None, threads=None):
    """Matrix of E_Q[f_alpha] - offset(Q), one row per alpha, one column per Q."""
    alphas = np.atleast_1d(np.asarray(alphas, float))
    table = _log_table(problem.mu0, alphas, alts.xs)
    vals = _expect(table, alts, slice(None))
    if offset is not None:
        vals = vals - offset[None, :]
    return vals


def sup_inf_profile(
    problem: MeanProblem, criterion, spec: GridSpec = GridSpec(), gro: str = "grid", threads=None
):
    """phi(alpha) = min over grid alternatives of the inner objective, on the alpha grid.

    Returns ``(alphas, phi, alts, offset)``.
    """
    criterion = Criterion(criterion)
    threads = threads or _default_threads()
    alts = alternatives(problem, spec)
    alphas = parameter_grid(problem, spec.n_alpha)
    offset = None
    if criterion is Criterion.REGROW:
        if gro == "grid":
            offset = gro_on_grid(problem, alts, parameter_grid(problem, spec.n_beta), threads)
        elif gro == "exact":
            offset = gro_exact(problem, alts)
        else:
            raise ValueError(f"unknown gro method {gro!r}")
    table = _log_table(problem.mu0, alphas, alts.xs)

    def chunk_min(sl):
        vals = _expect(table, alts, sl)
        if offset is not None:
            vals = vals - offset[None, sl]
        return vals.min(axis=1)

    parts = _map_chunks(chunk_min, len(alts), threads)
    phi = np.min(np.stack(parts), axis=0)
    return alphas, phi, alts, offset


def _report(problem, criterion, spec, gro, threads) -> OracleReport:
    criterion = Criterion(criterion)
    alphas, phi, alts, offset = sup_inf_profile(problem, criterion, spec, gro, threads)
    k = int(np.argmax(phi))
    alpha_hat, value_hat = float(alphas[k]), float(phi[k])
    row = inner_values(problem, [alpha_hat], alts, offset)[0]
    j = int(np.argmin(row))
    worst = alts.law(j)
    _, closure = _mean_grid(problem, spec)
    exact = solve(problem, criterion)
    return OracleReport(
        alpha_hat=alpha_hat,
        value_hat=value_hat,
        worst_dist_hat=worst,
        gap_to_closed_form=abs(exact.objective_value - value_hat),
        criterion=criterion,
        alpha_star=exact.alpha_star,
        alpha_step=float(alphas[1] - alphas[0]),
        on_boundary=closure is not None and bool(alts.mean[j] == closure),
    )


def grid_grow(problem: MeanProblem, spec: GridSpec = GridSpec(), threads=None) -> OracleReport:
    """Grid sup over alpha of the worst-case e-power over two-point alternatives."""
    return _report(problem, Criterion.GROW, spec, "grid", threads)


def grid_regrow(
    problem: MeanProblem, spec: GridSpec = GridSpec(), gro: str = "grid", threads=None
) -> OracleReport:
    """Grid sup over alpha of the worst-case e-power shortfall relative to GRO.

    ``gro="grid"`` takes GRO(Q) as the maximum over the beta grid; ``"exact"``
    uses the two-point Kelly fraction instead.
    """
    return _report(problem, Criterion.REGROW, spec, gro, threads)


def beta_profile(problem: MeanProblem, alpha: float, spec: GridSpec = GridSpec()):
    """beta -> min over grid alternatives of E_Q[F_{alpha,beta}], on the beta grid."""
    alts = alternatives(problem, spec)
    betas = parameter_grid(problem, spec.n_beta)
    ea = inner_values(problem, [alpha], alts)[0]
    eb = inner_values(problem, betas, alts)
    with np.errstate(invalid="ignore"):
        diff = ea[None, :] - eb
    # -inf - -inf only when both bets zero out on the same atom; the ratio is then 1
    diff = np.where(np.isnan(diff), 0.0, diff)
    return betas, diff.min(axis=1)


@dataclass
class WorstCaseReport:
    criterion: Criterion
    alpha: float
    grid_min: float
    grid_argmin: Optional[TwoPointDist]
    claimed_values: list[float] = field(default_factory=list)
    claimed_attained: list[bool] = field(default_factory=list)
    near_minimizers: list[TwoPointDist] = field(default_factory=list)
    limit_gaps: list[float] = field(default_factory=list)
    tol: float = 1e-6
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion.value,
            "alpha": self.alpha,
            "grid_min": self.grid_min,
            "grid_argmin": None if self.grid_argmin is None else self.grid_argmin.to_dict(),
            "claimed_values": self.claimed_values,
            "claimed_attained": self.claimed_attained,
            "near_minimizers": [q.to_dict() for q in self.near_minimizers],
            "limit_gaps": self.limit_gaps,
            "tol": self.tol,
            "passed": self.passed,
            "failures": self.failures,
        }


def _objective_at(problem, criterion, alpha, q: TwoPointDist) -> float:
    val = two_point_log_growth(problem.mu0, alpha, q.x1, q.x2, q.theta)
    if criterion is Criterion.REGROW:
        params = parameter_grid(problem, 2)
        val -= kelly_growth(problem.mu0, q.x1, q.x2, q.theta, params[0], params[-1])[1]
    return float(val)


def confirm_worst_cases(
    problem: MeanProblem,
    alpha_star: float,
    claimed: list[TwoPointDist],
    spec: GridSpec = GridSpec(),
    criterion=Criterion.REGROW,
    attained: Optional[list[bool]] = None,
    tol: float = 1e-6,
) -> WorstCaseReport:
    """Check that the claimed laws attain the inner infimum at ``alpha_star``.

    The inner objective (e-power for GROW, e-power minus exact GRO for
    REGROW) is evaluated on every grid alternative. A claimed law fails if
    some grid law beats it by more than ``tol``; several claimed laws must
    also agree with each other within ``tol``. Limiting laws (``attained``
    False) are evaluated at the closure point and additionally checked to be
    the limit of laws from inside the alternative.
    """
    criterion = Criterion(criterion)
    attained = list(attained) if attained is not None else [True] * len(claimed)
    CoinBet(problem.mu0, alpha_star, problem.support)  # validates the parameter
    alts = alternatives(problem, spec)
    offset = gro_exact(problem, alts) if criterion is Criterion.REGROW else None
    row = inner_values(problem, [alpha_star], alts, offset)[0]
    j = int(np.argmin(row))
    grid_min = float(row[j])
    near = np.nonzero(row <= grid_min + tol)[0]
    report = WorstCaseReport(
        criterion, alpha_star, grid_min, alts.law(j), tol=tol,
        near_minimizers=[alts.law(k) for k in near[:50]],
        claimed_attained=attained,
    )
    for q, ok in zip(claimed, attained):
        val = _objective_at(problem, criterion, alpha_star, q)
        report.claimed_values.append(val)
        if not q.within(problem.support):
            report.failures.append(f"claimed law {q} outside support")
        if val > grid_min + tol:
            report.failures.append(
                f"grid law {alts.law(j)} beats claimed {q} by {val - grid_min:.3g}"
            )
        if not ok:
            gap = _limit_gap(problem, criterion, alpha_star, q)
            report.limit_gaps.append(gap)
            if gap > tol:
                report.failures.append(f"limiting law {q} not approached (gap {gap:.3g})")
    vals = report.claimed_values
    if len(vals) > 1 and max(vals) - min(vals) > tol:
        report.failures.append(f"worst-case values disagree: spread {max(vals) - min(vals):.3g}")
    return report


def _limit_gap(problem, criterion, alpha, q: TwoPointDist) -> float:
    """|objective(q) - objective(q_eps)| for a law q_eps inside the open class."""
    eps = 1e-9 * problem.support.width
    shift = eps if problem.kind is ProblemKind.ONE_SIDED_UPPER else -eps
    m = q.mean + shift
    inner = TwoPointDist.with_mean(q.x1, q.x2, m) if q.x1 < m < q.x2 else TwoPointDist.dirac(m)
    return abs(_objective_at(problem, criterion, alpha, inner) - _objective_at(problem, criterion, alpha, q))


class MCEstimate(NamedTuple):
    mean: float
    stderr: float


def mc_epower(bet: CoinBet, sampler_dist: TwoPointDist, n: int, seed: int) -> MCEstimate:
    """Monte Carlo estimate of E[log E_alpha(X)] for X ~ sampler_dist.

    Returns ``(-inf, inf)`` if a sampled atom has e-value 0.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    first = rng.random(n) < sampler_dist.theta
    xs = np.where(first, sampler_dist.x1, sampler_dist.x2)
    vals = bet(xs)
    if np.any(vals == 0):
        return MCEstimate(-np.inf, np.inf)
    logs = np.log(vals)
    sd = float(np.std(logs, ddof=1)) if n > 1 else 0.0
    return MCEstimate(float(np.mean(logs)), sd / np.sqrt(n))


def random_instance(rng: np.random.Generator, kind=ProblemKind.TWO_SIDED, margin=0.05) -> MeanProblem:
    """A random valid problem with means kept ``margin*(b-a)`` away from the ends."""
    from .core_types import SupportInterval

    kind = ProblemKind(kind)
    a = float(rng.uniform(-5, 5))
    b = a + float(rng.uniform(0.2, 10))
    lo, hi = a + margin * (b - a), b - margin * (b - a)
    mu0 = float(rng.uniform(lo, hi))
    support = SupportInterval(a, b)
    if kind is ProblemKind.AGNOSTIC:
        return MeanProblem(support, kind, mu0)
    mu1 = float(rng.uniform(lo, hi))
    if kind is ProblemKind.ONE_SIDED_UPPER and mu1 < mu0:
        mu0, mu1 = mu1, mu0
    if kind is ProblemKind.ONE_SIDED_LOWER and mu1 > mu0:
        mu0, mu1 = mu1, mu0
    return MeanProblem(support, kind, mu0, mu1)


def convergence_constant(problem: MeanProblem, criterion, sizes=(51, 101, 201)) -> tuple[float, list[float]]:
    """Empirical C with |grid value - closed form| <= C / n over the given grid sizes."""
    gaps = []
    for n in sizes:
        spec = GridSpec(n, n, n, max(3, n // 2 + 1))
        rep = _report(problem, Criterion(criterion), spec, "grid", None)
        gaps.append(rep.gap_to_closed_form)
    return max(g * n for g, n in zip(gaps, sizes)), gaps
