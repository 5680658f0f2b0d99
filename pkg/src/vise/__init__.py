"""Monte Carlo engine for voting societies in a stochastic environment.

Societies of egoists or altruists vote on random proposals of capital
increments; accepted proposals are added to the capitals.  The package
simulates games, aggregates the average one-step capital increment and the
survival rate over parameter sweeps, and tabulates the tail heaviness of the
proposal distributions.
"""

from .distributions import DistributionSpec, Family
from .errors import ConfigError, DomainError, UndefinedMetricError
from .experiment import ExperimentConfig, derive_seed, run_sweep
from .metrics import GameResult, SweepRow, aci, aggregate, survival_rate
from .voting import Mode, ModeConfig, Strategy, StrategyConfig, run_game

__version__ = "0.1.0"

__all__ = [
    "DistributionSpec", "Family", "ConfigError", "DomainError", "UndefinedMetricError",
    "ExperimentConfig", "derive_seed", "run_sweep", "GameResult", "SweepRow", "aci",
    "aggregate", "survival_rate", "Mode", "ModeConfig", "Strategy", "StrategyConfig", "run_game",
]
