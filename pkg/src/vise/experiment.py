"""Parameter sweeps over environments, favorability and strategies.

Every (cell, replicate) pair gets its own generator seed, derived statelessly
from the base seed, a content hash of the cell and the replicate index.  A
cell's results therefore do not depend on the rest of the grid, on worker
count or on scheduling order.
"""

from __future__ import annotations

import hashlib
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .distributions import DistributionSpec, Family
from .errors import DomainError
from .metrics import SweepRow, aggregate
from .voting import ModeConfig, StrategyConfig, run_game

__all__ = ["ExperimentConfig", "Cell", "derive_seed", "cell_key", "build_cells", "run_cell", "run_sweep"]

log = logging.getLogger(__name__)

MASK64 = 0xFFFFFFFFFFFFFFFF

DEFAULT_MU_GRID = tuple(float(m) for m in range(-25, 16))
DEFAULT_STRATEGIES = (
    StrategyConfig.egoist(),
    StrategyConfig.altruist(30),
    StrategyConfig.altruist(50),
    StrategyConfig.altruist(65),
    StrategyConfig.altruist(80),
    StrategyConfig.altruist(100),
)


def _splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(base_seed, cell_index, replicate_index):
    """Stateless 64-bit seed for one replicate of one cell.

    Each input is folded in through a bijective mixer, so two calls that
    differ only in their last argument never collide.
    """
    x = _splitmix64(base_seed & MASK64)
    x = _splitmix64(x ^ (cell_index & MASK64))
    return _splitmix64(x ^ (replicate_index & MASK64))


@dataclass(frozen=True)
class Cell:
    dist: DistributionSpec
    strategy: StrategyConfig
    mode: ModeConfig
    n: int

    def describe(self):
        return (f"family={self.dist.label} mu={self.dist.mu:g} sigma={self.dist.sigma:g} "
                f"n={self.n} strategy={self.strategy.label} mode={self.mode.mode.value}")


def cell_key(cell, common_random_numbers=False):
    """64-bit content hash identifying a cell's random stream.

    With common random numbers the strategy is left out, so all strategies
    of one (distribution, mu) pair face the same proposal stream.
    """
    d, md = cell.dist, cell.mode
    parts = [d.family.value, repr(d.k), repr(float(d.mu)), repr(float(d.sigma)), str(cell.n),
             repr(float(md.initial_capital)), str(md.max_steps), md.mode.value]
    if not common_random_numbers:
        parts.append(cell.strategy.label)
    digest = hashlib.blake2b("|".join(parts).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


@dataclass
class ExperimentConfig:
    """A sweep grid.  ``distributions`` are templates; their ``mu`` is swept."""

    distributions: list = field(default_factory=lambda: [DistributionSpec(Family.NORMAL, 0.0, 80.0)])
    mu_grid: list = field(default_factory=lambda: list(DEFAULT_MU_GRID))
    sigma: float = 80.0
    n: int = 201
    mode: ModeConfig = field(default_factory=ModeConfig)
    replicates: int = 100
    strategies: list = field(default_factory=lambda: list(DEFAULT_STRATEGIES))
    base_seed: int = 0
    common_random_numbers: bool = False

    def __post_init__(self):
        if self.replicates < 1:
            raise DomainError(f"replicates must be at least 1, got {self.replicates}")
        if not self.mu_grid:
            raise DomainError("mu grid is empty")
        if not self.distributions:
            raise DomainError("no distributions given")
        if not self.strategies:
            raise DomainError("no strategies given")
        if self.n < 1:
            raise DomainError(f"society needs at least one agent, got n={self.n}")


def build_cells(config):
    """Cells in output order: distribution, then mu, then strategy."""
    cells = []
    for template in config.distributions:
        for mu in config.mu_grid:
            try:
                dist = DistributionSpec(template.family, float(mu), config.sigma, template.k)
            except DomainError as exc:
                raise DomainError(f"cell family={template.family.value} mu={mu:g}: {exc}") from exc
            for strategy in config.strategies:
                cells.append(Cell(dist, strategy, config.mode, config.n))
    return cells


def _play(task):
    cell, seed = task
    return run_game(cell.dist, cell.strategy, cell.mode, cell.n, seed)


def _row(cell, results, config):
    s = aggregate(results, cell.n)
    return SweepRow(
        family=cell.dist.family.value, k=cell.dist.k, mu=cell.dist.mu, sigma=cell.dist.sigma,
        n=cell.n, c0=cell.mode.initial_capital, steps=cell.mode.max_steps,
        mode=cell.mode.mode.value, strategy=cell.strategy.kind.value,
        window_pct=cell.strategy.window_pct, replicates=config.replicates,
        base_seed=config.base_seed, aci_mean=s.aci_mean, aci_stderr=s.aci_stderr,
        survival_mean=s.survival_mean, survival_stderr=s.survival_stderr,
        accept_share=s.accept_share_mean,
    )


def _tasks(cells, config):
    for cell in cells:
        key = cell_key(cell, config.common_random_numbers)
        for r in range(config.replicates):
            yield cell, derive_seed(config.base_seed, key, r)


def run_cell(cell, config):
    """Play all replicates of one cell in this process; returns the game results."""
    return [_play(t) for t in _tasks([cell], config)]


def default_workers():
    env = os.environ.get("VISE_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_sweep(config, workers=1):
    """Run every cell of ``config`` and return one :class:`SweepRow` per cell."""
    cells = build_cells(config)
    tasks = list(_tasks(cells, config))
    log.info("sweep: %d cells x %d replicates on %d worker(s)", len(cells), config.replicates, workers)
    try:
        if workers <= 1:
            results = [_play(t) for t in tasks]
        else:
            chunk = max(1, len(tasks) // (workers * 16))
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_play, tasks, chunksize=chunk))
    except DomainError as exc:
        # locate the failing cell by replaying sequentially
        for cell in cells:
            try:
                _play((cell, 0))
            except DomainError as inner:
                raise DomainError(f"cell {cell.describe()}: {inner}") from exc
        raise

    rows = []
    R = config.replicates
    for i, cell in enumerate(cells):
        rows.append(_row(cell, results[i * R:(i + 1) * R], config))
    return rows
