"""Proposal generators: normal, symmetrized Pareto, Student t3 and Laplace.

Every family is parameterized by its mean ``mu`` and standard deviation
``sigma``; the symmetrized Pareto (SP) family additionally takes a tail
index ``k > 2``.  The SP scale ``a`` is derived from ``(k, sigma)`` so that
the variance equals ``sigma**2``.

All closed-form functions accept scalars or numpy arrays and return the same
shape (a Python float for scalar input).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError

__all__ = [
    "Family",
    "DistributionSpec",
    "sp_scale",
    "sp_pdf",
    "sp_cdf",
    "sp_quantile",
    "laplace_cdf",
    "laplace_quantile",
    "normal_cdf",
    "t3_cdf",
    "cdf",
    "open_uniform",
    "make_sampler",
    "sample",
    "tail_heaviness",
    "log_tail_heaviness",
]

#: Smallest accepted SP tail index is strictly above ``2 + K_MARGIN``.
K_MARGIN = 1e-6

_SQRT2 = math.sqrt(2.0)


class Family(str, enum.Enum):
    NORMAL = "normal"
    SP = "sp"
    T3 = "t3"
    LAPLACE = "laplace"


@dataclass(frozen=True)
class DistributionSpec:
    """Parameters of one proposal generator.

    ``k`` is required for ``Family.SP`` and must be ``None`` otherwise.
    """

    family: Family
    mu: float = 0.0
    sigma: float = 1.0
    k: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        _check_sigma(self.sigma)
        if self.family is Family.SP:
            if self.k is None:
                raise DomainError("symmetrized Pareto family requires a tail index k")
            _check_k(self.k)
            object.__setattr__(self, "k", float(self.k))
        elif self.k is not None:
            raise DomainError(f"tail index k is meaningless for family {self.family.value!r}")

    @property
    def label(self):
        if self.family is Family.SP:
            return f"sp{self.k:g}"
        return self.family.value

    def with_mu(self, mu):
        return DistributionSpec(self.family, mu, self.sigma, self.k)

    def cdf(self, x):
        return cdf(x, self)

    def sample(self, rng, n):
        return sample(self, rng, n)


def _check_sigma(sigma):
    if not (sigma > 0 and math.isfinite(sigma)):
        raise DomainError(f"sigma must be positive and finite, got {sigma!r}")


def _check_k(k):
    if not (k > 2.0 + K_MARGIN and math.isfinite(k)):
        raise DomainError(f"tail index k must exceed 2 (variance undefined), got {k!r}")


def _ret(x, out):
    return float(out) if np.ndim(x) == 0 else out


def _require_sp(spec):
    if spec.family is not Family.SP:
        raise DomainError(f"expected a symmetrized Pareto spec, got {spec.family.value!r}")


def _sp_rate(k):
    # 1/a in units of 1/sigma: sqrt(2 / ((k-1)(k-2)))
    return math.sqrt(2.0 / ((k - 1.0) * (k - 2.0)))


def sp_scale(k, sigma):
    """Scale ``a`` of the SP density whose variance is ``sigma**2``."""
    _check_k(k)
    _check_sigma(sigma)
    return sigma * math.sqrt((k - 1.0) * (k - 2.0) / 2.0)


def sp_pdf(x, spec):
    _require_sp(spec)
    a = sp_scale(spec.k, spec.sigma)
    d = np.abs(np.asarray(x, dtype=float) - spec.mu)
    return _ret(x, spec.k / (2.0 * a) * np.power(d / a + 1.0, -(spec.k + 1.0)))


def sp_cdf(x, spec):
    _require_sp(spec)
    k = spec.k
    t = (np.asarray(x, dtype=float) - spec.mu) / spec.sigma
    # half the mass beyond |t| standard deviations
    half_tail = 0.5 * np.exp(-k * np.log1p(np.abs(t) * _sp_rate(k)))
    return _ret(x, np.where(t <= 0.0, half_tail, 1.0 - half_tail))


def sp_quantile(u, spec):
    """Inverse of :func:`sp_cdf` on the open interval (0, 1)."""
    _require_sp(spec)
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0.0) | (u >= 1.0)) or np.any(np.isnan(u)):
        raise DomainError("quantile argument must lie strictly inside (0, 1)")
    a = sp_scale(spec.k, spec.sigma)
    lower = u <= 0.5
    tail = np.where(lower, 2.0 * u, 2.0 * (1.0 - u))
    dist = a * np.expm1(-np.log(tail) / spec.k)
    return _ret(u, np.where(lower, spec.mu - dist, spec.mu + dist))


def laplace_cdf(x, mu, sigma):
    """CDF of the Laplace law with mean ``mu`` and standard deviation ``sigma``."""
    _check_sigma(sigma)
    t = (np.asarray(x, dtype=float) - mu) * _SQRT2 / sigma
    half_tail = 0.5 * np.exp(-np.abs(t))
    return _ret(x, np.where(t <= 0.0, half_tail, 1.0 - half_tail))


def laplace_quantile(u, mu, sigma):
    _check_sigma(sigma)
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0.0) | (u >= 1.0)) or np.any(np.isnan(u)):
        raise DomainError("quantile argument must lie strictly inside (0, 1)")
    lower = u <= 0.5
    dist = -sigma / _SQRT2 * np.log(np.where(lower, 2.0 * u, 2.0 * (1.0 - u)))
    return _ret(u, np.where(lower, mu - dist, mu + dist))


def normal_cdf(x, mu, sigma):
    _check_sigma(sigma)
    return _ret(x, special.ndtr((np.asarray(x, dtype=float) - mu) / sigma))


def _t3_sf_std(s):
    """Upper tail P(T/sqrt(3) > s) of a Student t3 variable T, for s >= 0.

    Uses u = 1/s so that the tail is arctan(u) - u/(1+u^2), with a series
    for small u where the two terms cancel.
    """
    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore"):
        u = np.where(s > 0.0, 1.0 / s, np.inf)
    small = u < 1e-2
    u_big = np.where(small | np.isinf(u), 1.0, u)
    direct = (np.arctan(u_big) - u_big / (1.0 + u_big * u_big)) / math.pi
    u2 = u * u
    series = u * u2 * (2.0 / 3.0 - u2 * (4.0 / 5.0 - u2 * (6.0 / 7.0 - u2 * 8.0 / 9.0))) / math.pi
    return np.where(small, series, np.where(np.isinf(u), 0.5, direct))


def t3_cdf(x, mu, sigma):
    """CDF of ``mu + sigma/sqrt(3) * T`` with T ~ Student t, 3 d.o.f.

    The scaling gives mean ``mu`` and standard deviation ``sigma``.
    """
    _check_sigma(sigma)
    # T/sqrt(3) == (x - mu)/sigma
    s = (np.asarray(x, dtype=float) - mu) / sigma
    tail = _t3_sf_std(np.abs(s))
    return _ret(x, np.where(s <= 0.0, tail, 1.0 - tail))


def cdf(x, spec):
    """CDF of any supported family."""
    if spec.family is Family.SP:
        return sp_cdf(x, spec)
    if spec.family is Family.NORMAL:
        return normal_cdf(x, spec.mu, spec.sigma)
    if spec.family is Family.T3:
        return t3_cdf(x, spec.mu, spec.sigma)
    return laplace_cdf(x, spec.mu, spec.sigma)


_U53 = 2.0 ** -53


def open_uniform(rng, n):
    """``n`` uniform draws on the open interval (0, 1), multiples of 2**-53."""
    return rng.integers(1, 1 << 53, size=n, dtype=np.int64) * _U53


def make_sampler(spec):
    """Return ``draw(rng, n)`` producing i.i.d. increments from ``spec``.

    SP and Laplace use the inverse CDF on open uniforms; normal uses the
    generator's standard normals; t3 is a normal over a chi-square(3) root.
    """
    fam = spec.family
    mu, sigma = spec.mu, spec.sigma

    if fam is Family.NORMAL:
        def draw(rng, n):
            return mu + sigma * rng.standard_normal(n)
    elif fam is Family.T3:
        def draw(rng, n):
            z = rng.standard_normal((4, n))
            chi2 = z[1] * z[1] + z[2] * z[2] + z[3] * z[3]
            # sigma/sqrt(3) * z0/sqrt(chi2/3)
            return mu + sigma * z[0] / np.sqrt(chi2)
    else:
        if fam is Family.SP:
            a, inv_k = sp_scale(spec.k, sigma), 1.0 / spec.k

            def dist(t):
                return a * np.expm1(-inv_k * np.log(t))
        else:
            b = sigma / _SQRT2

            def dist(t):
                return -b * np.log(t)

        def draw(rng, n):
            u = open_uniform(rng, n)
            # same branches as the quantile: lower half for u <= 1/2
            d = dist(2.0 * np.minimum(u, 1.0 - u))
            return np.where(u <= 0.5, mu - d, mu + d)
    return draw


def sample(spec, rng, n):
    """Draw ``n`` i.i.d. increments from ``spec`` using generator ``rng``."""
    if n < 0:
        raise DomainError(f"sample size must be non-negative, got {n}")
    return make_sampler(spec)(rng, n)


def _check_z(z):
    z = np.asarray(z, dtype=float)
    if np.any(z < 0.0) or np.any(np.isnan(z)):
        raise DomainError("tail-heaviness argument z must be non-negative")
    return z


def tail_heaviness(spec, z):
    """Probability of deviating from the mean by at least ``z`` standard deviations."""
    zz = _check_z(z)
    fam = spec.family
    if fam is Family.SP:
        out = np.exp(-spec.k * np.log1p(zz * _sp_rate(spec.k)))
    elif fam is Family.LAPLACE:
        out = np.exp(-zz * _SQRT2)
    elif fam is Family.NORMAL:
        out = special.erfc(zz / _SQRT2)
    else:
        out = 2.0 * _t3_sf_std(zz)
    return _ret(z, out)


def log_tail_heaviness(spec, z):
    """Natural log of :func:`tail_heaviness`, stable for very large ``z``."""
    zz = _check_z(z)
    fam = spec.family
    if fam is Family.SP:
        out = -spec.k * np.log1p(zz * _sp_rate(spec.k))
    elif fam is Family.LAPLACE:
        out = -zz * _SQRT2
    elif fam is Family.NORMAL:
        out = math.log(2.0) + special.log_ndtr(-zz)
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            u = np.where(zz > 0.0, 1.0 / np.where(zz > 0.0, zz, 1.0), np.inf)
            u2 = u * u
            far = (
                math.log(2.0 / math.pi)
                + 3.0 * np.log(u)
                + np.log(2.0 / 3.0 - u2 * (4.0 / 5.0 - u2 * (6.0 / 7.0 - u2 * 8.0 / 9.0)))
            )
            near = np.log(2.0 * _t3_sf_std(zz))
        out = np.where(u < 1e-2, far, near)
    return _ret(z, out)
