"""Society state, voting strategies and the step loop of one game.

A proposal is a 1-d float array with one increment per currently alive
agent, ordered by original agent id.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import distributions
from .errors import DomainError
from .metrics import GameResult

__all__ = [
    "Strategy",
    "Mode",
    "StrategyConfig",
    "ModeConfig",
    "SocietyState",
    "StepRecord",
    "support_count",
    "poorest_agents",
    "cast_votes",
    "tally",
    "apply_step",
    "eliminate_bankrupts",
    "run_game",
]


class Strategy(str, enum.Enum):
    EGOIST = "egoist"
    ALTRUIST = "altruist"


class Mode(str, enum.Enum):
    EXTINCTION = "extinct"
    NO_EXTINCTION = "noextinct"


@dataclass(frozen=True)
class StrategyConfig:
    """Egoist, or altruist supporting the poorest ``window_fraction`` of society."""

    kind: Strategy = Strategy.EGOIST
    window_fraction: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Strategy(self.kind))
        if not 0.0 < self.window_fraction <= 1.0:
            raise DomainError(f"support window must lie in (0, 1], got {self.window_fraction!r}")

    @classmethod
    def egoist(cls):
        return cls(Strategy.EGOIST)

    @classmethod
    def altruist(cls, pct):
        return cls(Strategy.ALTRUIST, pct / 100.0)

    @property
    def window_pct(self):
        if self.kind is Strategy.EGOIST:
            return None
        return 100.0 * self.window_fraction

    @property
    def label(self):
        if self.kind is Strategy.EGOIST:
            return "egoist"
        return f"altruist:{self.window_pct:g}"


@dataclass(frozen=True)
class ModeConfig:
    mode: Mode = Mode.NO_EXTINCTION
    initial_capital: float = 40.0
    max_steps: int = 500

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.max_steps < 1:
            raise DomainError(f"a game needs at least one step, got max_steps={self.max_steps}")
        if self.mode is Mode.EXTINCTION and self.initial_capital < 0:
            raise DomainError("initial capital must be non-negative in extinction mode")

    @property
    def extinction(self):
        return self.mode is Mode.EXTINCTION


@dataclass
class SocietyState:
    """Capitals and alive flags indexed by original agent id.

    Eliminated agents keep their slot (and last capital) with ``alive=False``.
    """

    capitals: np.ndarray
    alive: np.ndarray
    step: int = 0

    @classmethod
    def initial(cls, n, c0):
        if n < 1:
            raise DomainError(f"society needs at least one agent, got n={n}")
        return cls(np.full(n, float(c0)), np.ones(n, dtype=bool))

    @property
    def n(self):
        return self.capitals.size

    @property
    def alive_ids(self):
        return np.flatnonzero(self.alive)

    @property
    def alive_count(self):
        return int(np.count_nonzero(self.alive))


@dataclass(frozen=True)
class StepRecord:
    """Snapshot of one played step, handed to ``run_game``'s ``on_step`` hook."""

    step: int
    alive_ids: np.ndarray
    capitals_before: np.ndarray
    increments: np.ndarray
    yes: int
    accepted: bool
    capitals_after: np.ndarray = field(repr=False)


def support_count(alive_count, window_fraction):
    """Number of poorest agents an altruist looks at (round half up, at least 1)."""
    if alive_count < 1:
        raise DomainError("support window needs at least one alive agent")
    n0 = math.floor(window_fraction * alive_count + 0.5)
    return min(alive_count, max(1, n0))


def poorest_agents(state, n0):
    """Ids of the ``n0`` poorest alive agents; ties go to the smaller id."""
    ids = state.alive_ids
    if n0 > ids.size:
        raise ValueError(f"cannot pick {n0} poorest agents out of {ids.size} alive")
    order = np.argsort(state.capitals[ids], kind="stable")
    return ids[order[:n0]]


def _altruist_yes(capitals, increments, window_fraction):
    # capitals and increments are aligned on the alive agents
    m = increments.size
    n0 = support_count(m, window_fraction)
    if n0 == m:
        total = increments.sum()
    else:
        total = increments[np.argsort(capitals, kind="stable")[:n0]].sum()
    return m if total > 0.0 else 0


def cast_votes(state, proposal, strategy):
    """Number of yes votes among alive agents."""
    ids = state.alive_ids
    proposal = np.asarray(proposal, dtype=float)
    if proposal.shape != ids.shape:
        raise ValueError(f"proposal has {proposal.size} entries but {ids.size} agents are alive")
    if strategy.kind is Strategy.EGOIST:
        return int(np.count_nonzero(proposal > 0.0))
    return _altruist_yes(state.capitals[ids], proposal, strategy.window_fraction)


def tally(yes, alive_count):
    """Strict simple majority of the alive agents."""
    return 2 * yes > alive_count


def apply_step(state, proposal, accept):
    """Add the proposal to alive agents' capitals if accepted; advances the step (in place)."""
    if accept:
        state.capitals[state.alive] += proposal
    state.step += 1
    return state


def eliminate_bankrupts(state):
    """Kill alive agents with strictly negative capital (in place).

    Returns ``(state, eliminated_count)``.
    """
    doomed = state.alive & (state.capitals < 0.0)
    count = int(np.count_nonzero(doomed))
    if count:
        state.alive &= ~doomed
    return state, count


def run_game(dist, strategy, mode, n, seed, *, sampler=None, on_step=None):
    """Play one game and return its :class:`GameResult`.

    ``sampler(rng, size)`` overrides proposal generation (``dist`` is then
    ignored); ``on_step(record)`` receives a :class:`StepRecord` per step.
    """
    if sampler is None:
        sampler = distributions.make_sampler(dist)

    rng = np.random.default_rng(seed)
    state = SocietyState.initial(n, mode.initial_capital)
    capitals, alive = state.capitals, state.alive
    extinction = mode.extinction
    egoist = strategy.kind is Strategy.EGOIST
    frac = strategy.window_fraction

    ids = np.arange(n)
    all_alive = True
    numerator = 0.0
    denominator = accepted_steps = played = 0
    dirty = False  # capitals changed since the last elimination pass

    for m in range(1, mode.max_steps + 1):
        if extinction and dirty:
            _, died = eliminate_bankrupts(state)
            dirty = False
            if died:
                ids = np.flatnonzero(alive)
                all_alive = False
                if ids.size == 0:
                    break
        size = ids.size
        inc = sampler(rng, size)
        caps = capitals if all_alive else capitals[ids]
        if egoist:
            yes = int(np.count_nonzero(inc > 0.0))
        else:
            yes = _altruist_yes(caps, inc, frac)
        accept = 2 * yes > size

        before = caps.copy() if on_step is not None else None
        if accept:
            if all_alive:
                capitals += inc
            else:
                capitals[ids] += inc
            numerator += float(inc.sum())
            accepted_steps += 1
            dirty = True
        state.step = m
        denominator += size
        played += 1
        if on_step is not None:
            on_step(StepRecord(m, ids.copy(), before, np.array(inc), yes, bool(accept),
                               capitals[ids].copy()))

    if extinction:
        # agents that went negative on the last step are bankrupt as well
        survivors = int(np.count_nonzero(alive & (capitals >= 0.0)))
    else:
        survivors = n
    return GameResult(n, numerator, denominator, survivors, accepted_steps, played)
