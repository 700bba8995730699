import numpy as np
import pytest
from hypothesis import given, strategies as st

from evopt.core_types import (
    BettingRange,
    CoinBet,
    DomainError,
    MeanProblem,
    ProblemKind,
    SupportInterval,
    TwoPointDist,
    betting_range,
    e_expectation,
    evar_eval,
)

from conftest import UNIT, interior_points, supports


@pytest.mark.parametrize(
    "a,b,mu0,expected",
    [(0, 1, 0.5, (-2.0, 2.0)), (-1, 1, 0, (-1.0, 1.0)), (2, 6, 3, (-1 / 3, 1.0))],
)
def test_betting_range_values(a, b, mu0, expected):
    rng = betting_range(SupportInterval(a, b), mu0)
    assert (rng.alpha_min, rng.alpha_max) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("mu0", [0.0, 1.0, -0.1, float("nan")])
def test_betting_range_rejects_boundary_mu0(mu0):
    with pytest.raises(DomainError):
        betting_range(UNIT, mu0)


def test_support_validation():
    with pytest.raises(DomainError):
        SupportInterval(1.0, 1.0)
    with pytest.raises(DomainError):
        SupportInterval(0.0, float("inf"))
    with pytest.raises(DomainError):
        BettingRange(0.0, 1.0)


@pytest.mark.parametrize(
    "alpha,x,expected", [(0.0, 0.9, 1.0), (2.0, 0.0, 0.0), (1.0, 1.0, 1.5), (-2.0, 1.0, 0.0)]
)
def test_evar_eval_examples(alpha, x, expected):
    assert evar_eval(CoinBet(0.5, alpha, UNIT), x) == pytest.approx(expected, abs=1e-15)


def test_evar_eval_rejects_points_outside_support():
    bet = CoinBet(0.5, 1.0, UNIT)
    with pytest.raises(DomainError):
        evar_eval(bet, 1.01)
    with pytest.raises(DomainError):
        bet(np.array([0.2, -0.5]))


def test_coinbet_rejects_alpha_outside_range():
    with pytest.raises(DomainError):
        CoinBet(0.5, 2.0 + 1e-9, UNIT)


def test_e_expectation_examples():
    assert e_expectation(CoinBet(0.5, 1.0, UNIT), TwoPointDist.dirac(0.75)) == 1.25
    dist = TwoPointDist(0.0, 1.0, 0.25)
    assert e_expectation(CoinBet(0.5, 2.0, UNIT), dist) == pytest.approx(1.5, abs=1e-15)


@given(supports(), st.floats(0, 1), st.data())
def test_evar_nonnegative_on_dense_grid(support, _, data):
    mu0 = data.draw(interior_points(support, 0.01))
    rng = betting_range(support, mu0)
    alphas = rng.grid(41)
    alphas[0], alphas[-1] = rng.alpha_min, rng.alpha_max
    xs = np.linspace(support.a, support.b, 101)
    for alpha in alphas:
        assert np.all(CoinBet(mu0, float(alpha), support)(xs) >= 0)


@given(supports(), st.data())
def test_endpoint_saturation(support, data):
    mu0 = data.draw(interior_points(support, 0.01))
    rng = betting_range(support, mu0)
    assert CoinBet(mu0, rng.alpha_max, support)(support.a) == 0.0
    assert CoinBet(mu0, rng.alpha_min, support)(support.b) == 0.0


@given(supports(), st.data(), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_null_mean_gives_unit_expectation(support, data, s, u, v):
    mu0 = data.draw(interior_points(support, 0.01))
    rng = betting_range(support, mu0)
    x1 = support.a + u * (mu0 - support.a)
    x2 = mu0 + v * (support.b - mu0)
    if x1 == x2:
        dist = TwoPointDist.dirac(mu0)
    else:
        dist = TwoPointDist(x1, x2, (x2 - mu0) / (x2 - x1))
    bet = CoinBet(mu0, rng.clamp(rng.alpha_min + s * rng.width), support)
    assert e_expectation(bet, dist) == pytest.approx(1.0, abs=1e-12)


@given(supports(), st.data(), st.floats(0, 1), st.floats(0, 1))
def test_rescaling_to_unit_interval(support, data, s, t):
    mu0 = data.draw(interior_points(support, 0.01))
    rng = betting_range(support, mu0)
    bet = CoinBet(mu0, rng.clamp(rng.alpha_min + s * rng.width), support)
    unit = bet.to_unit()
    assert unit.mu0 == pytest.approx((mu0 - support.a) / support.width)
    x = float(support.from_unit(t))
    assert unit(t) == pytest.approx(bet(x), rel=1e-10, abs=1e-10)


def test_two_point_dirac_normalisation():
    assert TwoPointDist(0.3, 0.3, 0.2) == TwoPointDist.dirac(0.3)
    assert TwoPointDist.with_mean(0.0, 1.0, 0.75) == TwoPointDist(0.0, 1.0, 0.25)
    with pytest.raises(DomainError):
        TwoPointDist(0.5, 0.2)
    with pytest.raises(DomainError):
        TwoPointDist(0.0, 1.0, 1.5)
    assert TwoPointDist(0.0, 1.0, 1.0).atoms() == [(0.0, 1.0)]


def test_mean_problem_validation():
    MeanProblem(UNIT, "two-sided", 0.5, 0.2)
    with pytest.raises(DomainError):
        MeanProblem(UNIT, ProblemKind.ONE_SIDED_UPPER, 0.5, 0.2)
    with pytest.raises(DomainError):
        MeanProblem(UNIT, ProblemKind.ONE_SIDED_LOWER, 0.5, 0.7)
    with pytest.raises(DomainError):
        MeanProblem(UNIT, ProblemKind.AGNOSTIC, 0.5, 0.7)
    with pytest.raises(DomainError):
        MeanProblem(UNIT, ProblemKind.TWO_SIDED, 0.5)
    with pytest.raises(DomainError):
        MeanProblem(UNIT, ProblemKind.TWO_SIDED, 0.5, 1.0)
