"""Seedable random variate generation for the sampler's conditional draws.

Everything routes through one PCG64 stream per chain, so a run is fully
reproducible from its seed.  Standard families (normal, uniform, exponential,
gamma) defer to numpy's generator; the inverse-Gaussian and GIG(1/2) samplers
are implemented here because the latent-variable update needs them in exactly
this parameterization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["GigParams", "RandomStream"]

# Below this, the GIG(1/2, m, n) density is numerically the Gamma(1/2, n^2/2)
# limit and the inverse-Gaussian route would need mean n/m -> infinity.
GIG_SMALL_M = 1e-12


@dataclass(frozen=True)
class GigParams:
    """Parameters of GIG(rho, m, n) with density ~ x^(rho-1) exp(-(m^2/x + n^2 x)/2).

    Only rho = 1/2 is supported; ``m = 0`` is allowed and degenerates to a
    Gamma(1/2, n^2/2) draw.
    """

    m: float
    n: float
    rho: float = 0.5

    def __post_init__(self):
        if self.rho != 0.5:
            raise ValueError(f"only rho = 1/2 is supported, got {self.rho}")
        if not self.m >= 0.0:
            raise ValueError(f"m must be non-negative, got {self.m}")
        if not self.n > 0.0:
            raise ValueError(f"n must be positive, got {self.n}")


class RandomStream:
    """Deterministic random stream with the variate families used by the sampler.

    Identical seeds produce identical draw sequences.  A stream is never
    shared between chains; replicate streams come from :meth:`spawn`, which
    derives independent child streams deterministically.
    """

    def __init__(self, seed=None):
        if isinstance(seed, np.random.SeedSequence):
            self._seq = seed
        else:
            self._seq = np.random.SeedSequence(seed)
        self._gen = np.random.Generator(np.random.PCG64(self._seq))

    def spawn(self, n_children: int) -> list["RandomStream"]:
        """Derive ``n_children`` independent child streams."""
        return [RandomStream(s) for s in self._seq.spawn(n_children)]

    # -- numpy-backed families ------------------------------------------------

    def normal(self, size=None):
        return self._gen.standard_normal(size)

    def uniform(self, size=None):
        return self._gen.random(size)

    def laplace(self, scale, size=None):
        if not scale > 0.0:
            raise ValueError(f"scale must be positive, got {scale}")
        return self._gen.laplace(0.0, scale, size)

    def exponential(self, mean, size=None):
        """Exponential with the given MEAN (not rate)."""
        if not mean > 0.0:
            raise ValueError(f"mean must be positive, got {mean}")
        return self._gen.exponential(mean, size)

    def gamma(self, shape, rate, size=None):
        """Gamma draw in the shape/rate parameterization; mean is shape/rate."""
        bad = (not shape > 0.0) if np.ndim(shape) == 0 else bool(np.any(shape <= 0.0))
        bad = bad or ((not rate > 0.0) if np.ndim(rate) == 0 else bool(np.any(rate <= 0.0)))
        if bad:
            raise ValueError(f"shape and rate must be positive, got {shape}, {rate}")
        return self._gen.standard_gamma(shape, size) / rate

    def inverse_gamma(self, shape, scale, size=None):
        """Inverse gamma with density ~ x^(-shape-1) exp(-scale/x).

        Sampled as the reciprocal of a Gamma(shape, rate=scale) draw.
        """
        return 1.0 / self.gamma(shape, scale, size)

    # -- hand-rolled families --------------------------------------------------

    def inverse_gaussian(self, mean, shape, size=None):
        """Inverse-Gaussian draw (mean/shape parameterization).

        Michael-Schucany-Haas: with w = mean*z^2/(2*shape), the candidate root
        is written as mean / (1 + w + sqrt(w*(w + 2))), which is exact algebra
        for the smaller root and avoids cancellation for large z^2.
        """
        mu = np.asarray(mean, dtype=float)
        lam = np.asarray(shape, dtype=float)
        if np.any(mu <= 0.0) or np.any(lam <= 0.0):
            raise ValueError("mean and shape must be positive")
        z = self._gen.standard_normal(size)
        w = mu * z * z / (2.0 * lam)
        x = mu / (1.0 + w + np.sqrt(w * (w + 2.0)))
        u = self._gen.random(size)
        out = np.where(u <= mu / (mu + x), x, mu * mu / x)
        return out if out.ndim else float(out)

    def gig_half(self, m, n, size=None):
        """GIG(1/2, m, n) draw: density ~ x^(-1/2) exp(-(m^2/x + n^2 x)/2).

        If X has this law then 1/X is inverse-Gaussian with mean n/m and shape
        n^2, which gives a rejection-free sampler.  Entries with m below
        ``GIG_SMALL_M`` fall back to the exact Gamma(1/2, rate n^2/2) limit.
        """
        scalar = size is None and np.ndim(m) == 0 and np.ndim(n) == 0
        m = np.atleast_1d(np.asarray(m, dtype=float))
        if np.any(m < 0.0):
            raise ValueError("m must be non-negative")
        if np.any(np.asarray(n) <= 0.0):
            raise ValueError("n must be positive")
        if size is not None and m.shape != (size,):
            m = np.broadcast_to(m, (size,)).copy()
        n = np.broadcast_to(np.asarray(n, dtype=float), m.shape)

        out = np.empty_like(m)
        small = m < GIG_SMALL_M
        if np.any(~small):
            mm, nn = m[~small], n[~small]
            v = self.inverse_gaussian(nn / mm, nn * nn, size=mm.size)
            out[~small] = 1.0 / np.atleast_1d(v)
        if np.any(small):
            nn = n[small]
            out[small] = self.gamma(0.5, nn * nn / 2.0, size=nn.size)
        return float(out[0]) if scalar else out

    def gig(self, params: GigParams, size=None):
        """GIG draw validated through :class:`GigParams` (rho fixed at 1/2)."""
        return self.gig_half(params.m, params.n, size=size)
