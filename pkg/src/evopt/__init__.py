"""Optimal coin-betting e-variables for testing the mean of a bounded random variable."""
from .core_types import (
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
from .envelope import FAlpha, FRatio, GChord, c_envelope_analytic, c_envelope_at
from .growth import e_power, gro_two_point, gro_value_curve, kl_bernoulli
from .optima import Criterion, OptResult, grow_alpha, solve

__version__ = "0.1.0"

__all__ = [
    "BettingRange",
    "CoinBet",
    "Criterion",
    "DomainError",
    "FAlpha",
    "FRatio",
    "GChord",
    "MeanProblem",
    "OptResult",
    "ProblemKind",
    "SupportInterval",
    "TwoPointDist",
    "betting_range",
    "c_envelope_analytic",
    "c_envelope_at",
    "e_expectation",
    "e_power",
    "evar_eval",
    "gro_two_point",
    "gro_value_curve",
    "grow_alpha",
    "kl_bernoulli",
    "solve",
]
