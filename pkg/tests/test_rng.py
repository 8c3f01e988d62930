import math

import numpy as np
import numpy.testing as npt
import pytest
from scipy import integrate, stats

from siqreg.rng import GigParams, RandomStream

N = 1_000_000


def bessel_k_half(z):
    """Closed-form K_{1/2}(z) = sqrt(pi / (2 z)) * exp(-z)."""
    return math.sqrt(math.pi / (2.0 * z)) * math.exp(-z)


def bessel_k_three_halves(z):
    """Closed-form K_{3/2}(z) = K_{1/2}(z) * (1 + 1/z)."""
    return bessel_k_half(z) * (1.0 + 1.0 / z)


def gig_half_moment(m, n, k):
    """Quadrature oracle for E[X^k] under the GIG(1/2, m, n) density."""
    dens = lambda x: x**-0.5 * math.exp(-0.5 * (m * m / x + n * n * x))
    z, _ = integrate.quad(dens, 0, np.inf, limit=400)
    num, _ = integrate.quad(lambda x: x**k * dens(x), 0, np.inf, limit=400)
    return num / z


def inverse_gaussian_cdf(x, mu, lam):
    x = np.asarray(x, dtype=float)
    a = np.sqrt(lam / x) * (x / mu - 1.0)
    b = -np.sqrt(lam / x) * (x / mu + 1.0)
    return stats.norm.cdf(a) + np.exp(2.0 * lam / mu) * stats.norm.cdf(b)


class TestReproducibility:
    def test_same_seed_same_sequences(self):
        a, b = RandomStream(123), RandomStream(123)
        npt.assert_array_equal(a.normal(size=10), b.normal(size=10))
        npt.assert_array_equal(a.exponential(2.0, size=10), b.exponential(2.0, size=10))
        npt.assert_array_equal(a.gamma(0.7, 2.0, size=10), b.gamma(0.7, 2.0, size=10))
        npt.assert_array_equal(
            a.inverse_gamma(3.0, 2.0, size=10), b.inverse_gamma(3.0, 2.0, size=10)
        )
        npt.assert_array_equal(
            a.gig_half(np.full(10, 1.0), 1.0), b.gig_half(np.full(10, 1.0), 1.0)
        )

    def test_spawn_children_differ(self):
        parent = RandomStream(5)
        c1, c2 = parent.spawn(2)
        assert not np.allclose(c1.normal(size=8), c2.normal(size=8))

    def test_spawn_deterministic(self):
        x = RandomStream(5).spawn(3)[2].normal(size=4)
        y = RandomStream(5).spawn(3)[2].normal(size=4)
        npt.assert_array_equal(x, y)


class TestExponential:
    def test_mean(self, rng):
        x = rng.exponential(2.0, size=N)
        assert np.mean(x) == pytest.approx(2.0, rel=0.01)

    def test_tail_probability(self, rng):
        x = rng.exponential(1.7, size=N)
        assert np.mean(x > 1.7) == pytest.approx(math.exp(-1.0), abs=0.005)

    def test_kolmogorov_smirnov(self, rng):
        x = rng.exponential(0.4, size=N)
        assert stats.kstest(x, lambda v: 1 - np.exp(-v / 0.4)).statistic <= 0.005

    def test_rejects_bad_mean(self, rng):
        with pytest.raises(ValueError):
            rng.exponential(0.0)


class TestGamma:
    def test_shape_one_is_exponential(self, rng):
        x = rng.gamma(1.0, 2.0, size=N)
        assert np.mean(x) == pytest.approx(0.5, rel=0.01)
        assert stats.kstest(x, lambda v: 1 - np.exp(-2.0 * v)).statistic <= 0.005

    def test_mean(self, rng):
        x = rng.gamma(2.5, 1.5, size=N)
        assert np.mean(x) == pytest.approx(2.5 / 1.5, rel=0.01)

    def test_small_shape_branch_vs_quadrature(self, rng):
        # Quadrature-moment oracle for shape < 1.
        shape, rate = 0.5, 1.0
        dens = lambda x: x ** (shape - 1.0) * math.exp(-rate * x)
        z, _ = integrate.quad(dens, 0, np.inf, limit=400)
        m1, _ = integrate.quad(lambda x: x * dens(x), 0, np.inf, limit=400)
        x = rng.gamma(shape, rate, size=N)
        assert np.mean(x) == pytest.approx(m1 / z, rel=0.01)
        assert np.all(x > 0)

    def test_rejects_bad_params(self, rng):
        with pytest.raises(ValueError):
            rng.gamma(0.0, 1.0)
        with pytest.raises(ValueError):
            rng.gamma(1.0, -1.0)


class TestInverseGamma:
    def test_mean(self, rng):
        x = rng.inverse_gamma(3.0, 2.0, size=N)
        assert np.mean(x) == pytest.approx(2.0 / (3.0 - 1.0), rel=0.01)

    def test_reciprocal_is_gamma(self, rng):
        shape, scale = 2.2, 1.4
        x = rng.inverse_gamma(shape, scale, size=N)
        ks = stats.kstest(1.0 / x, stats.gamma(a=shape, scale=1.0 / scale).cdf).statistic
        assert ks <= 0.005

    def test_moments_vs_quadrature(self, rng):
        shape, scale = 2.0, 1.0
        dens = lambda x: x ** (-shape - 1.0) * math.exp(-scale / x)
        z, _ = integrate.quad(dens, 0, np.inf, limit=400)
        m1, _ = integrate.quad(lambda x: x * dens(x), 0, np.inf, limit=400)
        x = rng.inverse_gamma(shape, scale, size=N)
        assert np.mean(x) == pytest.approx(m1 / z, rel=0.01)


class TestInverseGaussian:
    def test_moments(self, rng):
        mu, lam = 1.3, 2.1
        x = rng.inverse_gaussian(mu, lam, size=N)
        assert np.mean(x) == pytest.approx(mu, rel=0.01)
        assert np.var(x) == pytest.approx(mu**3 / lam, rel=0.02)

    def test_kolmogorov_smirnov(self, rng):
        mu, lam = 0.8, 1.5
        x = rng.inverse_gaussian(mu, lam, size=N)
        assert stats.kstest(x, lambda v: inverse_gaussian_cdf(v, mu, lam)).statistic <= 0.005

    def test_positive(self, rng):
        x = rng.inverse_gaussian(5.0, 0.1, size=N)
        assert np.all(x > 0) and np.all(np.isfinite(x))


class TestGigHalf:
    def test_zero_m_gamma_limit(self, rng):
        n0 = 1.7
        x = rng.gig_half(np.zeros(N), n0)
        assert np.mean(x) == pytest.approx(1.0 / n0**2, rel=0.01)
        assert np.all(x > 0)

    def test_unit_mean_closed_form(self, rng):
        # E[X] = (m/n) K_{3/2}(mn) / K_{1/2}(mn) = 2 at m = n = 1.
        expected = bessel_k_three_halves(1.0) / bessel_k_half(1.0)
        assert expected == pytest.approx(2.0)
        x = rng.gig_half(np.ones(N), 1.0)
        assert np.mean(x) == pytest.approx(expected, rel=0.01)

    def test_moments_vs_quadrature(self, rng):
        m, n0 = 2.0, 3.0
        mean = gig_half_moment(m, n0, 1)
        var = gig_half_moment(m, n0, 2) - mean**2
        # The quadrature oracle agrees with the closed-form Bessel ratio.
        assert mean == pytest.approx(
            (m / n0) * bessel_k_three_halves(m * n0) / bessel_k_half(m * n0), rel=1e-9
        )
        x = rng.gig_half(np.full(N, m), n0)
        assert np.mean(x) == pytest.approx(mean, rel=0.01)
        assert np.var(x) == pytest.approx(var, rel=0.01)

    def test_reciprocal_is_inverse_gaussian(self, rng):
        m, n0 = 1.2, 0.9
        x = rng.gig_half(np.full(N, m), n0)
        ks = stats.kstest(
            1.0 / x, lambda v: inverse_gaussian_cdf(v, n0 / m, n0 * n0)
        ).statistic
        assert ks <= 0.005

    def test_finite_positive_mixed_m(self, rng):
        m = np.concatenate([np.zeros(1000), np.full(1000, 1e-13), np.full(1000, 2.0)])
        x = rng.gig_half(m, 0.7)
        assert np.all(x > 0) and np.all(np.isfinite(x))

    def test_scalar_call(self, rng):
        x = rng.gig_half(1.0, 1.0)
        assert isinstance(x, float) and x > 0

    def test_params_validation(self, rng):
        with pytest.raises(ValueError):
            GigParams(m=-1.0, n=1.0)
        with pytest.raises(ValueError):
            GigParams(m=1.0, n=0.0)
        with pytest.raises(ValueError):
            GigParams(m=1.0, n=1.0, rho=1.0)
        assert rng.gig(GigParams(m=1.0, n=1.0)) > 0
        with pytest.raises(ValueError):
            rng.gig_half(-1.0, 1.0)
