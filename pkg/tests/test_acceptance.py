"""Acceptance suite: every release criterion at its stated tolerance.

Each test prints one PASS/FAIL line (visible with ``pytest -s`` or in captured
output).  The replication studies run the desk-scale protocol: n = 100,
20 replications, 10000 scans with a 5000-scan burn-in.
"""

import csv
import math

import numpy as np
from scipy import integrate

from siqreg.ald import ald_logpdf, ald_sample, mixture_constants
from siqreg.analysis import acf, normalize_draws
from siqreg.cli import main
from siqreg.kernel import FactorizationError, build_kernel, factor_covariance
from siqreg.rng import RandomStream
from siqreg.sampler import (
    ChainState,
    Hyperparams,
    SamplerConfig,
    log_target_beta,
    log_target_gamma,
    run_chain,
    scan_once,
)
from siqreg.simulate import SimSpec, generate, generate_example1, run_replication_study

PROTOCOL = dict(iterations=10000, burn_in=5000)
JOBS = 2


def report(name, passed, detail=""):
    print(f"ACCEPTANCE {name}: {'PASS' if passed else 'FAIL'} {detail}", flush=True)
    assert passed, f"{name}: {detail}"


def run_study(example, tau, seed, replications=20):
    spec = SimSpec(example, 100, tau, replications=replications, seed=seed)
    cfg = SamplerConfig(tau=tau, seed=0, **PROTOCOL)
    study = run_replication_study(spec, cfg, jobs=JOBS)
    assert not study.failures, study.failures
    return study


# ---------------------------------------------------------------------------
# Recovery criteria
# ---------------------------------------------------------------------------


def test_example1_median_recovery():
    study = run_study("1", 0.5, seed=101)
    report(
        "example1-median-mse<=0.001",
        bool(np.all(study.mse <= 1e-3)),
        f"mse={np.array2string(study.mse, precision=6)}",
    )


def test_example1_tail_recovery():
    study = run_study("1", 0.1, seed=102)
    report(
        "example1-tail-mse<=0.002",
        bool(np.all(study.mse <= 2e-3)),
        f"mse={np.array2string(study.mse, precision=6)}",
    )


def test_example3_tail_recovery():
    study = run_study("3", 0.1, seed=103)
    report(
        "example3-tail-mse<=0.002",
        bool(np.all(study.mse <= 2e-3)),
        f"mse={np.array2string(study.mse, precision=6)}",
    )


def test_example4_scale_recovery():
    study = run_study("4", 0.5, seed=104)
    in_band = int(np.sum((study.sigma_means >= 0.040) & (study.sigma_means <= 0.065)))
    report(
        "example4-sigma-in-[0.040,0.065]-on->=16/20",
        in_band >= 16,
        f"in_band={in_band}/20 means={np.array2string(study.sigma_means, precision=4)}",
    )


# ---------------------------------------------------------------------------
# Mixing comparison
# ---------------------------------------------------------------------------


def test_mixing_collapsed_beats_uncollapsed():
    # One dataset, same seed and same initial proposal scales; both chains
    # use the standard frozen burn-in tuner (a fixed shared scale leaves the
    # uncollapsed chain immobile).  ACF is compared on the per-draw
    # normalized index components, the identified scale.
    data, _ = generate_example1(100, RandomStream(7))
    hp = Hyperparams()
    col = run_chain(data, SamplerConfig(tau=0.5, seed=33, **PROTOCOL), hp)
    unc = run_chain(
        data, SamplerConfig(tau=0.5, seed=33, collapsed=False, **PROTOCOL), hp
    )
    nc, nu = normalize_draws(col.beta), normalize_draws(unc.beta)
    means_c, means_u, ok = [], [], True
    for j in range(3):
        mc = float(np.mean(np.abs(acf(nc[:, j], 50)[1:])))
        mu = float(np.mean(np.abs(acf(nu[:, j], 50)[1:])))
        means_c.append(round(mc, 3))
        means_u.append(round(mu, 3))
        ok = ok and mc < mu
    report(
        "mixing-collapsed-acf-strictly-lower",
        ok,
        f"collapsed={means_c} uncollapsed={means_u}",
    )


# ---------------------------------------------------------------------------
# Acceptance-rate window
# ---------------------------------------------------------------------------


def test_acceptance_rate_window():
    rates = {}
    ok = True
    for example, seed in (("1", 105), ("2", 106), ("3", 107)):
        data, _ = generate(example, 100, 0.5, RandomStream(seed))
        draws = run_chain(data, SamplerConfig(tau=0.5, seed=seed, **PROTOCOL))
        rates[example] = (round(draws.beta_accept_rate, 3), round(draws.gamma_accept_rate, 3))
        for rate in rates[example]:
            ok = ok and 0.08 <= rate <= 0.35
    report("acceptance-rates-in-[0.08,0.35]", ok, f"rates={rates}")


# ---------------------------------------------------------------------------
# Sampler correctness bundle
# ---------------------------------------------------------------------------


class ArrayData:
    def __init__(self, X, y):
        self.X = np.asarray(X, dtype=float)
        self.y = np.asarray(y, dtype=float)


GEWEKE_HP = Hyperparams(
    a_sigma=5.0, b_sigma=5.0, a_lambda=5.0, b_lambda=5.0, a_gamma=5.0, b_gamma=5.0,
    sigma_beta_prop=0.4, sigma_gamma_prop=0.8,
)
GEWEKE_TAU = 0.3


def geweke_prior_draw(X, hp, rng) -> ChainState:
    n = X.shape[0]
    sigma = float(rng.inverse_gamma(hp.a_sigma, hp.b_sigma))
    lam = float(rng.gamma(hp.a_lambda, hp.b_lambda))
    gamma = float(rng.inverse_gamma(hp.a_gamma, hp.b_gamma))
    beta = rng.laplace(sigma / lam, size=X.shape[1])
    e = rng.exponential(sigma, size=n)
    C = build_kernel(X @ beta, gamma)
    fc = None
    for jitter in (1e-10, 1e-8, 1e-6):
        try:
            fc = factor_covariance(C, 0.0, jitter * gamma)
            break
        except FactorizationError:
            continue
    assert fc is not None
    eta = fc.lower @ rng.normal(size=n)
    return ChainState(beta=beta, eta=eta, e=e, sigma=sigma, lam=lam, gamma=gamma)


def geweke_model_y(state, mc, rng):
    scale = np.sqrt(mc.k2 * state.sigma * state.e)
    return state.eta + mc.k1 * state.e + scale * rng.normal(size=state.e.shape[0])


def geweke_stats(state):
    return (
        state.sigma,
        state.lam,
        state.gamma,
        float(np.sum(state.beta**2)),
        float(np.mean(state.eta)),
    )


def geweke_z_scores(chains=250, length=20, marginal_rounds=8000, seed=42, scan=None):
    """Joint-distribution test: prior/model forward draws vs sampler scans.

    Marginal side: iid draws of (parameters, data) from prior and model.
    Successive side: ``chains`` independent runs of length ``length`` (5000
    scans in total), each started at an exact joint draw and alternating one
    sampler scan with a data redraw; a correct scan leaves every run
    stationary, so the per-run means are iid with the prior-predictive
    expectation and give honest standard errors however slowly the chain
    mixes.  Power check (not rerun here): corrupting the sigma-conditional
    shape or dropping the log-walk Jacobian yields |z| of 20 and 7.

    Hyperparameters are set so the monitored scalars have finite fourth
    moments (the 0.5 defaults give the scale parameters infinite means, under
    which mean-comparison z-scores are undefined); the sampler code path is
    identical for all hyperparameter values.
    """
    if scan is None:
        scan = scan_once
    rng = RandomStream(seed)
    n, p = 10, 2
    X = np.sqrt(12.0) * (rng.uniform(size=(n, p)) - 0.5)  # fixed design, sd 1
    hp = GEWEKE_HP
    mc = mixture_constants(GEWEKE_TAU)

    marginal = np.empty((marginal_rounds, 5))
    for i in range(marginal_rounds):
        marginal[i] = geweke_stats(geweke_prior_draw(X, hp, rng))

    # Per-chain stretch means of each statistic and of its square.
    chain_m1 = np.empty((chains, 5))
    chain_m2 = np.empty((chains, 5))
    buffer = np.empty((length, 5))
    for c in range(chains):
        state = geweke_prior_draw(X, hp, rng)
        y = geweke_model_y(state, mc, rng)
        for i in range(length):
            scan(
                state,
                ArrayData(X, y),
                hp,
                GEWEKE_TAU,
                rng,
                sigma_beta_prop=hp.sigma_beta_prop,
                sigma_gamma_prop=hp.sigma_gamma_prop,
            )
            y = geweke_model_y(state, mc, rng)
            buffer[i] = geweke_stats(state)
        chain_m1[c] = buffer.mean(axis=0)
        chain_m2[c] = (buffer**2).mean(axis=0)

    z_scores = []
    for k in range(5):
        for moment, chain_side in ((1, chain_m1), (2, chain_m2)):
            a = marginal[:, k] ** moment
            se_a = a.std(ddof=1) / math.sqrt(a.shape[0])
            b = chain_side[:, k]
            se_b = b.std(ddof=1) / math.sqrt(chains)
            z_scores.append((a.mean() - b.mean()) / math.hypot(se_a, se_b))
    return np.array(z_scores)


def test_geweke_joint_distribution():
    z = geweke_z_scores()
    report(
        "geweke-|z|<4-on-monitored-statistics",
        bool(np.all(np.abs(z) < 4.0)),
        f"|z|max={np.abs(z).max():.2f} z={np.array2string(z, precision=2)}",
    )


def test_collapsed_targets_match_dense_formulas():
    np_rng = np.random.default_rng(0)
    hp = Hyperparams()
    worst = 0.0
    for n in (2, 3, 5):
        state = ChainState(
            beta=np_rng.normal(size=2),
            eta=np.zeros(n),
            e=np_rng.random(n) + 0.3,
            sigma=0.8,
            lam=1.1,
            gamma=1.4,
        )
        data = ArrayData(np_rng.normal(size=(n, 2)), np_rng.normal(size=n))
        mc = mixture_constants(0.3)
        t = data.X @ state.beta
        C = state.gamma * np.exp(-np.subtract.outer(t, t) ** 2)
        A = C + np.diag(mc.k2 * state.sigma * state.e)
        r = data.y - mc.k1 * state.e
        dense_beta = (
            -0.5 * np.linalg.slogdet(A)[1]
            - 0.5 * r @ np.linalg.inv(A) @ r
            - (state.lam / state.sigma) * np.sum(np.abs(state.beta))
        )
        worst = max(worst, abs(log_target_beta(state.beta, state, data, hp, 0.3) - dense_beta))
        g = 0.9
        Cg = g * np.exp(-np.subtract.outer(t, t) ** 2)
        Ag = Cg + np.diag(mc.k2 * state.sigma * state.e)
        dense_gamma = (
            -0.5 * np.linalg.slogdet(Ag)[1]
            - 0.5 * r @ np.linalg.inv(Ag) @ r
            - (hp.a_gamma + 1) * math.log(g)
            - hp.b_gamma / g
        )
        worst = max(worst, abs(log_target_gamma(g, state, data, hp, 0.3) - dense_gamma))
    report("collapsed-targets-match-dense-1e-10", worst < 1e-10, f"worst={worst:.2e}")


def test_eta_conditional_moments():
    np_rng = np.random.default_rng(5)
    n = 3
    state = ChainState(
        beta=np.array([0.6, -0.4]),
        eta=np.zeros(n),
        e=np.array([0.5, 1.2, 0.8]),
        sigma=0.7,
        lam=1.0,
        gamma=1.5,
    )
    data = ArrayData(np_rng.normal(size=(n, 2)), np_rng.normal(size=n))
    tau = 0.4
    mc = mixture_constants(tau)
    t = data.X @ state.beta
    C = state.gamma * np.exp(-np.subtract.outer(t, t) ** 2)
    E = np.diag(mc.k2 * state.sigma * state.e)
    Ainv = np.linalg.inv(C + E)
    mu = C @ Ainv @ (data.y - mc.k1 * state.e)
    cov = C @ Ainv @ E

    from siqreg.sampler import gibbs_update_eta

    rng = RandomStream(17)
    draws = np.empty((30_000, n))
    for i in range(draws.shape[0]):
        draws[i] = gibbs_update_eta(state, data, Hyperparams(), tau, rng)
    se = np.sqrt(np.diag(cov) / draws.shape[0])
    ok = bool(np.all(np.abs(draws.mean(axis=0) - mu) < 3 * se))
    sample_cov = np.cov(draws.T)
    for i in range(n):
        for j in range(n):
            se_ij = math.sqrt((cov[i, i] * cov[j, j] + cov[i, j] ** 2) / draws.shape[0])
            ok = ok and abs(sample_cov[i, j] - cov[i, j]) < 4 * se_ij
    report("eta-conditional-monte-carlo-moments", ok)


def test_gig_sampler_moments():
    rng = RandomStream(20260810)
    n_draws = 1_000_000
    # closed-form: E = (m/n) K_{3/2}(mn)/K_{1/2}(mn) with half-integer K's
    m, n0 = 1.0, 1.0
    expected = (m / n0) * (1.0 + 1.0 / (m * n0))
    x = rng.gig_half(np.full(n_draws, m), n0)
    ok = abs(np.mean(x) - expected) / expected < 0.01

    m, n0 = 2.0, 3.0
    dens = lambda v: v**-0.5 * math.exp(-0.5 * (m * m / v + n0 * n0 * v))
    z, _ = integrate.quad(dens, 0, np.inf, limit=400)
    mean_q = integrate.quad(lambda v: v * dens(v), 0, np.inf, limit=400)[0] / z
    var_q = integrate.quad(lambda v: v * v * dens(v), 0, np.inf, limit=400)[0] / z - mean_q**2
    x = rng.gig_half(np.full(n_draws, m), n0)
    ok = ok and abs(np.mean(x) - mean_q) / mean_q < 0.01
    ok = ok and abs(np.var(x) - var_q) / var_q < 0.01
    report("gig-half-moments-within-1pct", ok)


def test_ald_density_and_quantile():
    total, _ = integrate.quad(
        lambda v: math.exp(ald_logpdf(v, 0.0, 0.7, 0.1)), -np.inf, np.inf, limit=200
    )
    ok = abs(total - 1.0) < 1e-6
    rng = RandomStream(7)
    y = ald_sample(0.0, 1.0, 0.3, rng, size=1_000_000)
    ok = ok and abs(np.mean(y <= 0.0) - 0.3) < 0.005
    report("ald-density-integrates-and-quantile-property", ok)


# ---------------------------------------------------------------------------
# Determinism
# ---------------------------------------------------------------------------


def test_determinism_byte_identical_chain(tmp_path):
    data_path = tmp_path / "data.csv"
    data, _ = generate_example1(20, RandomStream(42))
    X, y = data.original_X(), data.original_y()
    with open(data_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x1", "x2", "x3", "y"])
        for i in range(20):
            w.writerow([repr(float(v)) for v in X[i]] + [repr(float(y[i]))])
    args = ["--tau", "0.5", "--iters", "400", "--burnin", "150", "--seed", "9"]
    outs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        code = main(
            ["fit", "--data", str(data_path), "--response", "y", "--out", str(out)] + args
        )
        assert code == 0
        outs.append((out / "chain.csv").read_bytes())
    report("determinism-byte-identical-chain", outs[0] == outs[1])
