"""Efficiency criteria of a game and their aggregation over replicates."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UndefinedMetricError

__all__ = ["GameResult", "Summary", "SweepRow", "aci", "survival_rate", "accept_share", "aggregate"]


@dataclass(frozen=True)
class GameResult:
    """Aggregates of one played game.

    ``aci_numerator`` is the summed capital increment received by agents that
    were alive at each step (zero on rejected steps); ``aci_denominator``
    counts the agent-steps actually played.
    """

    n: int
    aci_numerator: float
    aci_denominator: int
    survivors: int
    accepted_steps: int
    played_steps: int


@dataclass(frozen=True)
class Summary:
    aci_mean: float
    aci_stderr: float
    survival_mean: float
    survival_stderr: float
    accept_share_mean: float
    replicates: int


@dataclass(frozen=True)
class SweepRow:
    """One cell of a sweep: configuration echo plus replicate statistics."""

    family: str
    k: float | None
    mu: float
    sigma: float
    n: int
    c0: float
    steps: int
    mode: str
    strategy: str
    window_pct: float | None
    replicates: int
    base_seed: int
    aci_mean: float
    aci_stderr: float
    survival_mean: float
    survival_stderr: float
    accept_share: float


def aci(result):
    """Average one-step capital increment per alive agent."""
    if result.aci_denominator <= 0:
        raise UndefinedMetricError("no agent-steps were played; ACI is undefined")
    return result.aci_numerator / result.aci_denominator


def survival_rate(result, n=None):
    n = result.n if n is None else n
    if n < 1:
        raise ValueError("original society size must be positive")
    return result.survivors / n


def accept_share(result):
    if result.played_steps == 0:
        return 0.0
    return result.accepted_steps / result.played_steps


def _mean_stderr(values):
    # fsum keeps the result independent of replicate order
    m = len(values)
    mean = math.fsum(values) / m
    if m < 2:
        return mean, math.nan
    var = math.fsum((v - mean) ** 2 for v in values) / (m - 1)
    return mean, math.sqrt(var / m)


def aggregate(results, n=None):
    """Mean and standard error of per-game ACI and survival rate.

    Per-game values are computed first and then averaged.  With a single
    replicate the standard errors are NaN.
    """
    results = list(results)
    if not results:
        raise ValueError("cannot aggregate an empty list of games")
    aci_mean, aci_se = _mean_stderr([aci(r) for r in results])
    surv_mean, surv_se = _mean_stderr([survival_rate(r, n) for r in results])
    share = math.fsum(accept_share(r) for r in results) / len(results)
    return Summary(aci_mean, aci_se, surv_mean, surv_se, share, len(results))
