"""Asymmetric Laplace distribution: check loss, density, CDF and mixture draws.

The distribution is parameterized by location ``mu``, scale ``sigma > 0`` and
a quantile level ``tau`` in (0, 1); its tau-quantile is exactly ``mu``.  Draws
use the exponential-normal mixture

    y = mu + k1 * e + sqrt(k2 * sigma * e) * z,

with ``e`` exponential with mean ``sigma``, ``z`` standard normal, and

    k1 = (1 - 2*tau) / (tau * (1 - tau)),   k2 = 2 / (tau * (1 - tau)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuantileLevel",
    "MixtureConstants",
    "check_loss",
    "mixture_constants",
    "ald_logpdf",
    "ald_cdf",
    "ald_sample",
]


@dataclass(frozen=True)
class QuantileLevel:
    """A quantile level restricted to the open interval (0, 1)."""

    tau: float

    def __post_init__(self):
        tau = float(self.tau)
        if not (0.0 < tau < 1.0) or not math.isfinite(tau):
            raise ValueError(f"quantile level must lie in (0, 1), got {self.tau!r}")
        object.__setattr__(self, "tau", tau)


@dataclass(frozen=True)
class MixtureConstants:
    """Constants of the exponential-normal mixture at a given quantile level.

    ``k1`` vanishes at tau = 0.5 and is antisymmetric about it; ``k2`` is
    strictly positive and symmetric.
    """

    k1: float
    k2: float


def _as_tau(tau) -> float:
    if isinstance(tau, QuantileLevel):
        return tau.tau
    return QuantileLevel(tau).tau


def mixture_constants(tau) -> MixtureConstants:
    """Return (k1, k2) for quantile level ``tau``."""
    t = _as_tau(tau)
    denom = t * (1.0 - t)
    return MixtureConstants(k1=(1.0 - 2.0 * t) / denom, k2=2.0 / denom)


def check_loss(u, tau):
    """Piecewise-linear quantile loss u * (tau - 1[u <= 0]).

    Vectorized in ``u``; non-negative, and zero only at u = 0.  The u = 0
    point is assigned to the left branch, matching the indicator 1[u <= 0].
    """
    t = _as_tau(tau)
    u = np.asarray(u, dtype=float)
    out = np.where(u <= 0.0, u * (t - 1.0), u * t)
    return out if out.ndim else float(out)


def ald_logpdf(y, mu, sigma, tau):
    """Log density log[tau*(1-tau)/sigma] - check_loss(y - mu, tau)/sigma."""
    t = _as_tau(tau)
    sigma = float(sigma)
    if not sigma > 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    y = np.asarray(y, dtype=float)
    out = math.log(t * (1.0 - t) / sigma) - check_loss(y - mu, t) / sigma
    return out if np.ndim(out) else float(out)


def ald_cdf(y, mu, sigma, tau):
    """Distribution function, from the two-piece exponential form.

    P(Y <= y) = tau * exp((1-tau)(y-mu)/sigma)          for y <= mu,
                1 - (1-tau) * exp(-tau (y-mu)/sigma)    for y >  mu.
    """
    t = _as_tau(tau)
    sigma = float(sigma)
    if not sigma > 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    u = (np.asarray(y, dtype=float) - mu) / sigma
    lower = t * np.exp(np.minimum(u, 0.0) * (1.0 - t))
    upper = 1.0 - (1.0 - t) * np.exp(-t * np.maximum(u, 0.0))
    out = np.where(u <= 0.0, lower, upper)
    return out if out.ndim else float(out)


def ald_sample(mu, sigma, tau, rng, size=None):
    """Draw from the distribution via its exponential-normal mixture.

    ``rng`` is a :class:`siqreg.rng.RandomStream` (or any object exposing
    ``exponential(mean, size)`` and ``normal(size)``).
    """
    consts = mixture_constants(tau)
    sigma = float(sigma)
    if not sigma > 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    e = rng.exponential(sigma, size=size)
    z = rng.normal(size=size)
    return mu + consts.k1 * e + np.sqrt(consts.k2 * sigma * e) * z
