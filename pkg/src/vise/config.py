"""Plain-text sweep configuration: one ``key = value`` pair per line.

Lines starting with ``#`` and blank lines are ignored.  Recognised keys::

    family        comma list of normal | sp | t3 | laplace   (default normal)
    k             comma list of SP tail indices; required iff family has sp
    mu_grid       comma list, or start:step:stop (stop inclusive)
    sigma         standard deviation of increments              (default 80)
    n             number of agents                              (default 201)
    c0            initial capital                               (default 40)
    steps         game length M                                 (default 500)
    replicates    games per cell                                (default 100)
    strategies    comma list of egoist | altruist:<pct>
    mode          extinct | noextinct                           (default noextinct)
    base_seed     non-negative integer                          (default 0)
    common_random_numbers   true | false                        (default false)
"""

from __future__ import annotations

import math

from .distributions import DistributionSpec, Family
from .errors import ConfigError
from .experiment import DEFAULT_MU_GRID, DEFAULT_STRATEGIES, ExperimentConfig
from .voting import Mode, ModeConfig, StrategyConfig

__all__ = ["KEYS", "parse_config", "load_config", "parse_grid", "parse_strategy"]

KEYS = (
    "family", "k", "mu_grid", "sigma", "n", "c0", "steps", "replicates",
    "strategies", "mode", "base_seed", "common_random_numbers",
)

_FAMILIES = {"normal": Family.NORMAL, "sp": Family.SP, "t3": Family.T3, "laplace": Family.LAPLACE}
_MODES = {"extinct": Mode.EXTINCTION, "noextinct": Mode.NO_EXTINCTION}


def _split(value):
    return [p.strip() for p in value.split(",") if p.strip()]


def parse_grid(text):
    """Parse ``a,b,c`` or ``start:step:stop`` (stop included) into floats."""
    text = text.strip()
    if not text:
        raise ValueError("empty grid")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range must be start:step:stop, got {text!r}")
        start, step, stop = (float(p) for p in parts)
        if step == 0 or (stop - start) * step < 0:
            raise ValueError(f"range {text!r} does not reach its stop value")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]
    values = [float(p) for p in _split(text)]
    if not values:
        raise ValueError("empty grid")
    return values


def parse_strategy(token):
    token = token.strip().lower()
    if token == "egoist":
        return StrategyConfig.egoist()
    if token.startswith("altruist:"):
        return StrategyConfig.altruist(float(token.split(":", 1)[1]))
    raise ValueError(f"unknown strategy {token!r} (expected egoist or altruist:<pct>)")


def _parse_bool(value):
    v = value.strip().lower()
    if v in ("true", "yes", "1"):
        return True
    if v in ("false", "no", "0"):
        return False
    raise ValueError(f"expected true or false, got {value!r}")


def _read_pairs(lines):
    pairs = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in pairs:
            raise ConfigError(f"duplicate key {key!r} (first set on line {pairs[key][1]})", lineno)
        pairs[key] = (value, lineno)
    return pairs


def parse_config(text):
    """Parse configuration text into an :class:`ExperimentConfig`."""
    pairs = _read_pairs(text.splitlines())

    def get(key, convert, default):
        if key not in pairs:
            return default
        value, lineno = pairs[key]
        try:
            return convert(value)
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}", lineno) from None

    def families(value):
        out = []
        for token in _split(value):
            if token.lower() not in _FAMILIES:
                raise ValueError(f"unknown family {token!r}")
            out.append(_FAMILIES[token.lower()])
        if not out:
            raise ValueError("no family given")
        return out

    fams = get("family", families, [Family.NORMAL])
    ks = get("k", lambda v: [float(p) for p in _split(v)], None)
    if Family.SP in fams and not ks:
        line = pairs["family"][1] if "family" in pairs else None
        raise ConfigError("family sp requires a tail index k", line)
    if ks and Family.SP not in fams:
        raise ConfigError("conflicting keys: k is set but family has no sp", pairs["k"][1])

    sigma = get("sigma", float, 80.0)
    # templates only: mu is swept per cell; bad sigma or k raise DomainError
    templates = []
    for fam in fams:
        for k in (ks if fam is Family.SP else [None]):
            templates.append(DistributionSpec(fam, 0.0, sigma, k))

    mode = ModeConfig(
        get("mode", lambda v: _MODES[v.strip().lower()], Mode.NO_EXTINCTION),
        get("c0", float, 40.0),
        get("steps", int, 500),
    )
    return ExperimentConfig(
        distributions=templates,
        mu_grid=get("mu_grid", parse_grid, list(DEFAULT_MU_GRID)),
        sigma=sigma,
        n=get("n", int, 201),
        mode=mode,
        replicates=get("replicates", int, 100),
        strategies=get("strategies", lambda v: [parse_strategy(t) for t in _split(v)] or _empty(),
                       list(DEFAULT_STRATEGIES)),
        base_seed=get("base_seed", _parse_seed, 0),
        common_random_numbers=get("common_random_numbers", _parse_bool, False),
    )


def _empty():
    raise ValueError("empty list")


def _parse_seed(value):
    seed = int(value, 0)
    if not 0 <= seed < 2 ** 64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return seed


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
