"""
Command-line front end.

    evopt solve --kind two-sided --a 0 --b 1 --mu0 0.5 --mu1 0.75 --criterion grow
    evopt curves --a 0 --b 1 --mu0 0.5 --n 200
    evopt bernoulli --mu0 0.3 --n 101
    evopt verify --kind agnostic --a 0 --b 1 --mu0 0.25

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core_types import (
    CoinBet,
    DomainError,
    MeanProblem,
    ProblemKind,
    SupportInterval,
    TwoPointDist,
)
from .growth import e_power, gro_two_point
from .optima import (
    Criterion,
    bernoulli_alpha,
    bernoulli_regrow_agnostic,
    bernoulli_regrow_one_sided,
    grow_alpha,
    regrow_one_sided,
    regrow_two_sided,
    solve,
)
from . import oracle

KINDS = [k.value for k in ProblemKind] + ["min-effect"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    subcommand: str
    a: float = 0.0
    b: float = 1.0
    mu0: float = 0.5
    mu1: Optional[float] = None
    kind: str = "two-sided"
    delta: Optional[float] = None
    criterion: str = "grow"
    n: int = 201
    margin: float = 1e-3
    n_alpha: int = 401
    n_beta: int = 401
    n_support: int = 201
    n_mean: int = 101
    alpha_override: Optional[float] = None
    tol_alpha_steps: float = 2.0
    tol_value: float = 1e-3
    tol_worst: float = 1e-6
    mc_samples: int = 100_000
    seed: int = 0
    format: Optional[str] = None
    output: Optional[str] = None

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        fields = {k: v for k, v in vars(ns).items() if k in cls.__dataclass_fields__}
        return cls(**fields)

    def problem(self) -> MeanProblem:
        support = SupportInterval(self.a, self.b)
        if self.kind == "min-effect":
            # alternatives |mean - mu0| > delta share the agnostic solution
            mu0 = support.require_interior("mu0", self.mu0)
            if self.delta is None or not 0 < self.delta < min(self.b - mu0, mu0 - self.a):
                raise DomainError("min-effect needs 0 < delta < min(b - mu0, mu0 - a)")
            return MeanProblem(support, ProblemKind.AGNOSTIC, mu0)
        kind = ProblemKind(self.kind)
        mu1 = None if kind is ProblemKind.AGNOSTIC else self.mu1
        return MeanProblem(support, kind, self.mu0, mu1)

    def grid(self) -> oracle.GridSpec:
        return oracle.GridSpec(self.n_alpha, self.n_beta, self.n_support, self.n_mean)


def _num(x: float) -> str:
    return format(float(x), ".12g")


def _json_float(x):
    x = float(x)
    if math.isfinite(x):
        return x
    return "-inf" if x < 0 else ("inf" if x > 0 else "nan")


def _write(text: str, path: Optional[str]):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) for v in row])
    return buf.getvalue()


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=False) + "\n"


def cmd_solve(cfg: RunConfig) -> tuple[int, str]:
    problem = cfg.problem()
    res = solve(problem, cfg.criterion)
    out = {
        "problem": cfg.kind,
        "a": problem.a,
        "b": problem.b,
        "mu0": problem.mu0,
        "mu1": problem.mu1,
        "criterion": res.criterion.value,
        "alpha_star": res.alpha_star,
        "objective_value": _json_float(res.objective_value),
        "worst_cases": [
            dict(q.to_dict(), attained=ok) for q, ok in zip(res.worst_cases, res.attained)
        ],
        "residual": res.residual,
    }
    if (cfg.format or "json") == "csv":
        header = ["alpha_star", "objective_value", "residual"]
        return EXIT_OK, _csv(header, [[res.alpha_star, res.objective_value, res.residual]])
    return EXIT_OK, _dumps(out)


CURVE_HEADER = ["mu1", "alpha_gw", "alpha_rgw_twosided", "alpha_rgw_onesided"]


def curve_rows(support: SupportInterval, mu0: float, n: int, margin: float):
    """Optimal parameters on a grid of mu1 in (mu0, b)."""
    mu0 = support.require_interior("mu0", mu0)
    if n < 2:
        raise DomainError("need at least 2 grid points")
    lo = mu0 + margin * support.width
    hi = support.b - margin * support.width
    if not lo < hi:
        raise DomainError("margin leaves no room between mu0 and b")
    rows = []
    for m in np.linspace(lo, hi, n):
        m = float(m)
        rows.append([
            m,
            grow_alpha(support, mu0, m),
            regrow_two_sided(support, mu0, m).alpha_star,
            regrow_one_sided(support, mu0, m).alpha_star,
        ])
    return rows


def cmd_curves(cfg: RunConfig) -> tuple[int, str]:
    rows = curve_rows(SupportInterval(cfg.a, cfg.b), cfg.mu0, cfg.n, cfg.margin)
    if cfg.format == "json":
        return EXIT_OK, _dumps([dict(zip(CURVE_HEADER, r)) for r in rows])
    return EXIT_OK, _csv(CURVE_HEADER, rows)


BERNOULLI_HEADER = ["mu", "gro_value", "tangent_at_eps1", "tangent_at_half", "tangent_at_mu0"]


def bernoulli_rows(mu0: float, n: int):
    """GRO of Ber(mu) and the e-power lines of three Bernoulli e-variables."""
    unit = SupportInterval(0.0, 1.0)
    mu0 = unit.require_interior("mu0", mu0)
    eps1 = bernoulli_regrow_one_sided(mu0)
    half = bernoulli_regrow_agnostic()
    bets = [CoinBet(mu0, bernoulli_alpha(e, mu0), unit) for e in (eps1, half, mu0)]
    special = np.array([eps1, half, mu0])
    grid = np.linspace(0.0, 1.0, n)
    # grid points that miss a special point only by rounding are replaced by it
    grid = grid[np.min(np.abs(grid[:, None] - special[None, :]), axis=1) > 1e-12]
    mus = np.unique(np.concatenate([grid, special]))
    rows = []
    for m in mus:
        law = TwoPointDist.with_mean(0.0, 1.0, float(m))
        rows.append([float(m), gro_two_point(law, mu0, unit).value] + [e_power(z, law) for z in bets])
    return rows


def cmd_bernoulli(cfg: RunConfig) -> tuple[int, str]:
    rows = bernoulli_rows(cfg.mu0, cfg.n)
    if cfg.format == "json":
        return EXIT_OK, _dumps([dict(zip(BERNOULLI_HEADER, r)) for r in rows])
    return EXIT_OK, _csv(BERNOULLI_HEADER, rows)


def _check(name, passed, **detail):
    return {"name": name, "passed": bool(passed), "detail": detail}


def run_verify(cfg: RunConfig) -> dict:
    problem = cfg.problem()
    spec = cfg.grid()
    crits = [Criterion.GROW, Criterion.REGROW] if cfg.criterion == "both" else [Criterion(cfg.criterion)]
    checks, reports = [], {}
    for crit in crits:
        exact = solve(problem, crit)
        alpha_ref = exact.alpha_star if cfg.alpha_override is None else cfg.alpha_override
        rep = oracle.grid_grow(problem, spec) if crit is Criterion.GROW else oracle.grid_regrow(problem, spec)
        steps = abs(rep.alpha_hat - alpha_ref) / rep.alpha_step
        checks.append(_check(f"{crit.value}_alpha", steps <= cfg.tol_alpha_steps,
                             alpha_hat=rep.alpha_hat, alpha_ref=alpha_ref, steps=steps))
        checks.append(_check(f"{crit.value}_value", rep.gap_to_closed_form <= cfg.tol_value,
                             gap=rep.gap_to_closed_form))
        try:
            wc = oracle.confirm_worst_cases(
                problem, alpha_ref, exact.worst_cases, spec, crit, exact.attained, cfg.tol_worst
            )
            checks.append(_check(f"{crit.value}_worst_cases", wc.passed, failures=wc.failures))
            wc_dict = wc.to_dict()
        except DomainError as exc:
            checks.append(_check(f"{crit.value}_worst_cases", False, failures=[str(exc)]))
            wc_dict = None
        if exact.worst_cases and cfg.mc_samples > 0:
            law = exact.worst_cases[0]
            try:
                bet = CoinBet(problem.mu0, alpha_ref, problem.support)
            except DomainError as exc:
                checks.append(_check(f"{crit.value}_mc", False, error=str(exc)))
            else:
                est = oracle.mc_epower(bet, law, cfg.mc_samples, cfg.seed)
                exact_power = e_power(bet, law)
                ok = abs(est.mean - exact_power) <= 4 * est.stderr + 1e-12
                checks.append(_check(f"{crit.value}_mc", ok, estimate=_json_float(est.mean),
                                     stderr=_json_float(est.stderr), exact=_json_float(exact_power)))
        reports[crit.value] = {"grid": _clean(rep.to_dict()), "worst_cases": _clean(wc_dict)}
    return {
        "problem": cfg.kind,
        "a": problem.a,
        "b": problem.b,
        "mu0": problem.mu0,
        "mu1": problem.mu1,
        "alpha_override": cfg.alpha_override,
        "passed": all(c["passed"] for c in checks),
        "checks": _clean(checks),
        "reports": reports,
    }


def _clean(obj):
    """Replace non-finite floats by strings so the output stays strict JSON."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float):
        return _json_float(obj)
    return obj


def cmd_verify(cfg: RunConfig) -> tuple[int, str]:
    result = run_verify(cfg)
    if not result["passed"]:
        lines = [f"{'check':<22} status"]
        for c in result["checks"]:
            lines.append(f"{c['name']:<22} {'ok' if c['passed'] else 'FAIL'}")
        sys.stderr.write("\n".join(lines) + "\n")
    return (EXIT_OK if result["passed"] else EXIT_FAIL), _dumps(result)


def _add_problem_args(p: argparse.ArgumentParser, mu1=True):
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--mu0", type=float, required=True)
    if mu1:
        p.add_argument("--kind", choices=KINDS, default="two-sided")
        p.add_argument("--mu1", type=float)
        p.add_argument("--delta", type=float, help="minimal effect size (kind min-effect)")


def _add_output_args(p: argparse.ArgumentParser, default: str, choices=("json", "csv")):
    p.add_argument("--format", choices=list(choices), default=default)
    p.add_argument("--output", help="output path (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evopt",
        description="Optimal coin-betting e-variables for the mean of a bounded random variable.",
        epilog="Exit codes: 0 success, 1 verification failure, 2 usage or domain error.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("solve", help="optimal GROW / REGROW betting parameter")
    _add_problem_args(p)
    p.add_argument("--criterion", choices=["grow", "regrow"], required=True)
    _add_output_args(p, "json")

    p = sub.add_parser("curves", help="optimal parameters as functions of mu1 (CSV)")
    _add_problem_args(p, mu1=False)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--margin", type=float, default=1e-3,
                   help="keep mu1 this fraction of (b - a) away from mu0 and b")
    _add_output_args(p, "csv")

    p = sub.add_parser("bernoulli", help="GRO curve and e-power tangents for Ber(mu) (CSV)")
    p.add_argument("--mu0", type=float, required=True)
    p.add_argument("--n", type=int, default=201)
    _add_output_args(p, "csv")

    p = sub.add_parser("verify", help="check closed forms against the grid oracle")
    _add_problem_args(p)
    p.add_argument("--criterion", choices=["grow", "regrow", "both"], default="both")
    for name, default in (("n-alpha", 401), ("n-beta", 401), ("n-support", 201), ("n-mean", 101)):
        p.add_argument(f"--{name}", type=int, default=default)
    p.add_argument("--alpha-override", type=float,
                   help="check this alpha instead of the closed form (negative control)")
    p.add_argument("--tol-alpha-steps", type=float, default=2.0)
    p.add_argument("--tol-value", type=float, default=1e-3)
    p.add_argument("--tol-worst", type=float, default=1e-6)
    p.add_argument("--mc-samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0, help="Monte Carlo seed")
    _add_output_args(p, "json", choices=("json",))
    return parser


COMMANDS = {
    "solve": cmd_solve,
    "curves": cmd_curves,
    "bernoulli": cmd_bernoulli,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = RunConfig.from_args(ns)
    try:
        code, text = COMMANDS[cfg.subcommand](cfg)
    except (DomainError, ValueError) as exc:
        sys.stderr.write(f"evopt: error: {exc}\n")
        return EXIT_USAGE
    _write(text, cfg.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
