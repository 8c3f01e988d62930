"""Metropolis-within-Gibbs sampler for single-index quantile regression.

Model: the conditional tau-quantile of y given covariates x is g(x' beta) for
an unknown link g carrying a zero-mean Gaussian-process prior with kernel
gamma * exp(-(t - t')^2), evaluated at the index points t_i = x_i' beta.  The
quantile likelihood is asymmetric Laplace with scale sigma, augmented with
latent exponentials e_i so that

    y | eta, e, sigma  ~  N(eta + k1 * e,  E),     E = k2 * sigma * diag(e),

where eta is the vector of link values.  Each beta_j has a Laplace(0,
sigma/lambda) prior, and (sigma, lambda, gamma) carry IG / Gamma / IG
hyperpriors.

The default scan integrates eta out of the beta and gamma Metropolis updates
(working with C + E, which stays well conditioned, instead of the frequently
near-singular C) and then redraws the remaining blocks from their exact
conditionals, in the fixed order

    beta-MH  ->  gamma-MH  ->  eta  ->  sigma  ->  lambda  ->  e.

Because eta is redrawn immediately after the two marginal updates, the scan
leaves the joint posterior invariant while mixing much faster than the
uncollapsed variant.  The uncollapsed variant (``collapsed=False``) keeps eta
inside the beta/gamma targets and stabilizes C with a fixed 1e-5 diagonal
nugget; it targets the same posterior and is kept for comparison runs.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np

from ._blas import single_thread_blas
from .ald import mixture_constants
from .kernel import (
    FactorizationError,
    FactoredCovariance,
    build_kernel,
    collapsed_gaussian_logpdf,
    factor_covariance,
    single_index,
)
from .rng import RandomStream

__all__ = [
    "Hyperparams",
    "SamplerConfig",
    "ChainState",
    "ChainDraws",
    "NumericFailure",
    "log_target_beta",
    "log_target_gamma",
    "log_target_beta_uncollapsed",
    "log_target_gamma_uncollapsed",
    "mh_update_beta",
    "mh_update_gamma",
    "gibbs_update_eta",
    "sigma_conditional",
    "gibbs_update_sigma",
    "lambda_conditional",
    "gibbs_update_lambda",
    "e_conditional",
    "gibbs_update_e",
    "initialize_state",
    "collapsed_log_joint",
    "scan_once",
    "run_chain",
]

logger = logging.getLogger(__name__)

# Diagonal nugget used by the uncollapsed beta/gamma targets, where the bare
# kernel matrix C must be inverted.
UNCOLLAPSED_NUGGET = 1e-5

# One-shot relative regularization when the conditional covariance of eta
# fails to factor; a second failure is an error.
ETA_COV_RETRY_SCALE = 1e-10


@dataclass
class Hyperparams:
    """Prior hyperparameters and proposal scales.

    The six prior constants default to 0.5.  ``sigma_beta_prop`` and
    ``sigma_gamma_prop`` are the random-walk scales for the beta and log-gamma
    Metropolis moves (starting values when auto-tuning is on).  ``jitter`` is
    an extra diagonal stabilizer for the collapsed-path factorizations and
    defaults to 0 since C + E already has a strictly positive diagonal shift.

    ``lambda_rate_sigma_power`` selects the power of sigma in the rate of the
    lambda update, rate = b_lambda + sum_j |beta_j| / sigma**power.  Power 1 is
    the default: it is the reading consistent with the joint posterior and the
    Laplace prior exp(-lambda |beta_j| / sigma), and the one that passes the
    joint-distribution validation test.  Power 2 is accepted as a variant;
    converged chains recover the index equally well under either, but the
    variant can converge more slowly from overdispersed starts.
    """

    a_sigma: float = 0.5
    b_sigma: float = 0.5
    a_lambda: float = 0.5
    b_lambda: float = 0.5
    a_gamma: float = 0.5
    b_gamma: float = 0.5
    sigma_beta_prop: float = 0.1
    sigma_gamma_prop: float = 0.5
    jitter: float = 0.0
    lambda_rate_sigma_power: int = 1

    def __post_init__(self):
        for name in ("a_sigma", "b_sigma", "a_lambda", "b_lambda", "a_gamma", "b_gamma"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if self.sigma_beta_prop < 0.0 or self.sigma_gamma_prop < 0.0:
            raise ValueError("proposal scales must be non-negative")
        if self.jitter < 0.0:
            raise ValueError("jitter must be non-negative")
        if self.lambda_rate_sigma_power not in (1, 2):
            raise ValueError("lambda_rate_sigma_power must be 1 or 2")


@dataclass
class SamplerConfig:
    """Chain length, retention and variant switches.

    ``pilot_candidates`` overdispersed starts each run ``pilot_scans`` warmup
    scans before the chain proper; the best candidate by collapsed
    log-posterior continues.  The index posterior has occasional well-
    separated minor modes that can trap a single randomly-started chain, and
    the pilot stage removes those trapped runs.
    """

    tau: float = 0.5
    iterations: int = 10000
    burn_in: int = 5000
    thin: int = 1
    collapsed: bool = True
    seed: int | None = None
    autotune: bool = True
    tune_interval: int = 500
    retain_eta: bool = False
    retain_e: bool = True
    pilot_candidates: int = 12
    pilot_scans: int = 300

    def __post_init__(self):
        if not 0.0 < self.tau < 1.0:
            raise ValueError(f"tau must lie in (0, 1), got {self.tau}")
        if self.burn_in < 0 or self.iterations <= self.burn_in:
            raise ValueError("need 0 <= burn_in < iterations")
        if self.thin < 1:
            raise ValueError("thin must be at least 1")
        if self.tune_interval < 1:
            raise ValueError("tune_interval must be at least 1")
        if self.pilot_candidates < 1 or self.pilot_scans < 0:
            raise ValueError("need pilot_candidates >= 1 and pilot_scans >= 0")


@dataclass
class ChainState:
    """One sampler state.  ``beta`` is unconstrained (not unit-norm)."""

    beta: np.ndarray
    eta: np.ndarray
    e: np.ndarray
    sigma: float
    lam: float
    gamma: float

    def validate(self):
        if np.any(self.e <= 0.0):
            raise ValueError("latent exponentials must be strictly positive")
        for name in ("sigma", "lam", "gamma"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")

    def copy(self) -> "ChainState":
        return ChainState(
            beta=self.beta.copy(),
            eta=self.eta.copy(),
            e=self.e.copy(),
            sigma=self.sigma,
            lam=self.lam,
            gamma=self.gamma,
        )


@dataclass
class ChainDraws:
    """Retained post-burn-in draws plus Metropolis acceptance bookkeeping.

    Acceptance counters cover the post-burn-in span only, i.e. the rates
    achieved with frozen proposal scales.  ``e`` is retained by default
    because link-curve evaluation at new index values needs the per-draw
    latent covariance; ``eta`` retention is off by default.
    """

    tau: float
    beta: np.ndarray
    sigma: np.ndarray
    lam: np.ndarray
    gamma: np.ndarray
    e: np.ndarray | None
    eta: np.ndarray | None
    accepted_beta: int
    proposed_beta: int
    accepted_gamma: int
    proposed_gamma: int
    sigma_beta_prop: float
    sigma_gamma_prop: float
    final_state: ChainState
    wall_time: float = 0.0

    @property
    def n_kept(self) -> int:
        return self.beta.shape[0]

    @property
    def beta_accept_rate(self) -> float:
        return self.accepted_beta / max(self.proposed_beta, 1)

    @property
    def gamma_accept_rate(self) -> float:
        return self.accepted_gamma / max(self.proposed_gamma, 1)


class NumericFailure(RuntimeError):
    """Numeric abort inside a chain, with the iteration and a state snapshot."""

    def __init__(self, message, iteration=None, state=None):
        super().__init__(message)
        self.iteration = iteration
        self.state = state


# ---------------------------------------------------------------------------
# Per-scan shared work
# ---------------------------------------------------------------------------


@dataclass
class _ScanWork:
    """Quantities shared by the beta/gamma/eta steps of one scan.

    E, r are fixed across those steps (sigma and e are updated later in the
    scan); K and fc track the current beta/gamma and are swapped on accept.
    """

    E: np.ndarray  # k2 * sigma * e
    r: np.ndarray  # y - k1 * e
    K: np.ndarray  # exp(-(t_i - t_j)^2) at the current beta
    fc: FactoredCovariance  # factor of gamma * K + diag(E) + jitter


def _prepare_work(state, X, y, mc, jitter) -> _ScanWork:
    E = mc.k2 * state.sigma * state.e
    r = y - mc.k1 * state.e
    K = build_kernel(single_index(X, state.beta), 1.0)
    fc = factor_covariance(state.gamma * K, E, jitter)
    return _ScanWork(E=E, r=r, K=K, fc=fc)


def _l1(v) -> float:
    return float(np.sum(np.abs(v)))


def _gamma_log_prior(gamma, hp) -> float:
    return -(hp.a_gamma + 1.0) * np.log(gamma) - hp.b_gamma / gamma


# ---------------------------------------------------------------------------
# Log targets (collapsed and uncollapsed)
# ---------------------------------------------------------------------------


def log_target_beta(beta, state, data, hp, tau) -> float:
    """Collapsed log conditional of beta, up to an additive constant.

    collapsed_gaussian_logpdf(y - k1*e, C(beta) + E) - (lambda/sigma) * ||beta||_1.
    The Laplace normalizing constant is omitted: it cancels in Metropolis
    ratios at fixed (lambda, sigma).  ``state.eta`` is ignored.
    """
    mc = mixture_constants(tau)
    X, y = np.asarray(data.X, float), np.asarray(data.y, float)
    E = mc.k2 * state.sigma * state.e
    r = y - mc.k1 * state.e
    K = build_kernel(single_index(X, np.asarray(beta, float)), 1.0)
    fc = factor_covariance(state.gamma * K, E, hp.jitter)
    return collapsed_gaussian_logpdf(r, fc) - (state.lam / state.sigma) * _l1(beta)


def log_target_gamma(gamma, state, data, hp, tau) -> float:
    """Collapsed log conditional of gamma, up to an additive constant."""
    if not gamma > 0.0:
        raise ValueError("gamma must be positive")
    mc = mixture_constants(tau)
    X, y = np.asarray(data.X, float), np.asarray(data.y, float)
    E = mc.k2 * state.sigma * state.e
    r = y - mc.k1 * state.e
    K = build_kernel(single_index(X, state.beta), 1.0)
    fc = factor_covariance(gamma * K, E, hp.jitter)
    return collapsed_gaussian_logpdf(r, fc) + _gamma_log_prior(gamma, hp)


def log_target_beta_uncollapsed(beta, state, data, hp, tau) -> float:
    """Uncollapsed log conditional of beta given the current eta.

    Gaussian prior term for eta under C(beta) + nugget*I, plus the Laplace
    penalty; does not involve y directly.
    """
    X = np.asarray(data.X, float)
    K = build_kernel(single_index(X, np.asarray(beta, float)), 1.0)
    fc = factor_covariance(state.gamma * K, 0.0, UNCOLLAPSED_NUGGET)
    return collapsed_gaussian_logpdf(state.eta, fc) - (state.lam / state.sigma) * _l1(beta)


def log_target_gamma_uncollapsed(gamma, state, data, hp, tau) -> float:
    """Uncollapsed log conditional of gamma given the current eta."""
    if not gamma > 0.0:
        raise ValueError("gamma must be positive")
    X = np.asarray(data.X, float)
    K = build_kernel(single_index(X, state.beta), 1.0)
    fc = factor_covariance(gamma * K, 0.0, UNCOLLAPSED_NUGGET)
    return collapsed_gaussian_logpdf(state.eta, fc) + _gamma_log_prior(gamma, hp)


# ---------------------------------------------------------------------------
# Metropolis updates
# ---------------------------------------------------------------------------


def mh_update_beta(state, data, hp, tau, rng, scale=None, work=None, collapsed=True):
    """One joint random-walk Metropolis move on beta.

    Returns ``(new_beta, accepted)``; ``state`` is not modified.  When a
    ``_ScanWork`` cache is supplied (collapsed path), its kernel and
    factorization are replaced on accept.  A factorization failure on the
    proposal auto-rejects with a warning.
    """
    X, y = np.asarray(data.X, float), np.asarray(data.y, float)
    mc = mixture_constants(tau)
    if scale is None:
        scale = hp.sigma_beta_prop
    prop = state.beta + scale * rng.normal(size=state.beta.shape[0])

    if collapsed:
        if work is None:
            work = _prepare_work(state, X, y, mc, hp.jitter)
        try:
            K_prop = build_kernel(single_index(X, prop), 1.0)
            fc_prop = factor_covariance(state.gamma * K_prop, work.E, hp.jitter)
        except FactorizationError as err:
            logger.warning("beta proposal rejected: %s", err)
            return state.beta, False
        ratio = state.lam / state.sigma
        log_num = collapsed_gaussian_logpdf(work.r, fc_prop) - ratio * _l1(prop)
        log_den = collapsed_gaussian_logpdf(work.r, work.fc) - ratio * _l1(state.beta)
        if np.log(rng.uniform()) < log_num - log_den:
            work.K, work.fc = K_prop, fc_prop
            return prop, True
        return state.beta, False

    try:
        log_num = log_target_beta_uncollapsed(prop, state, data, hp, tau)
    except FactorizationError as err:
        logger.warning("beta proposal rejected: %s", err)
        return state.beta, False
    log_den = log_target_beta_uncollapsed(state.beta, state, data, hp, tau)
    if np.log(rng.uniform()) < log_num - log_den:
        return prop, True
    return state.beta, False


def mh_update_gamma(state, data, hp, tau, rng, scale=None, work=None, collapsed=True):
    """One log-scale random-walk Metropolis move on gamma.

    The acceptance ratio includes the change-of-variables term
    log(gamma') - log(gamma).  Returns ``(new_gamma, accepted)``.
    """
    X, y = np.asarray(data.X, float), np.asarray(data.y, float)
    mc = mixture_constants(tau)
    if scale is None:
        scale = hp.sigma_gamma_prop
    log_prop = np.log(state.gamma) + scale * rng.normal()
    prop = float(np.exp(log_prop))
    jacobian = log_prop - np.log(state.gamma)

    if collapsed:
        if work is None:
            work = _prepare_work(state, X, y, mc, hp.jitter)
        try:
            fc_prop = factor_covariance(prop * work.K, work.E, hp.jitter)
        except FactorizationError as err:
            logger.warning("gamma proposal rejected: %s", err)
            return state.gamma, False
        log_num = collapsed_gaussian_logpdf(work.r, fc_prop) + _gamma_log_prior(prop, hp)
        log_den = collapsed_gaussian_logpdf(work.r, work.fc) + _gamma_log_prior(
            state.gamma, hp
        )
        if np.log(rng.uniform()) < log_num - log_den + jacobian:
            work.fc = fc_prop
            return prop, True
        return state.gamma, False

    try:
        log_num = log_target_gamma_uncollapsed(prop, state, data, hp, tau)
    except FactorizationError as err:
        logger.warning("gamma proposal rejected: %s", err)
        return state.gamma, False
    log_den = log_target_gamma_uncollapsed(state.gamma, state, data, hp, tau)
    if np.log(rng.uniform()) < log_num - log_den + jacobian:
        return prop, True
    return state.gamma, False


# ---------------------------------------------------------------------------
# Gibbs updates
# ---------------------------------------------------------------------------


def gibbs_update_eta(state, data, hp, tau, rng, work=None) -> np.ndarray:
    """Draw eta ~ N(C (C+E)^{-1} r,  C (C+E)^{-1} E).

    Both moments are evaluated through the factor of C + E in the forms

        mu    = r - E (C+E)^{-1} r,
        Sigma = E - E (C+E)^{-1} E,

    which are algebraically identical to the display but scale with ||E||
    rather than ||C||, keeping roundoff well below Sigma's small eigenvalues.
    The covariance is symmetrized; if its factorization fails it is
    regularized once with a relative diagonal shift, and a second failure
    raises :class:`NumericFailure`.
    """
    X, y = np.asarray(data.X, float), np.asarray(data.y, float)
    mc = mixture_constants(tau)
    if work is None:
        work = _prepare_work(state, X, y, mc, hp.jitter)
    mu = work.r - work.E * work.fc.solve(work.r)
    # Pick the expression whose roundoff tracks the smaller of ||E|| and ||C||,
    # so numerical noise stays below Sigma's small eigenvalues in both the
    # low-noise and high-noise regimes.
    if np.max(work.E) <= state.gamma:
        V = work.fc.half_solve(np.diag(work.E))  # L^{-1} E
        cov = np.diag(work.E) - V.T @ V
    else:
        C = state.gamma * work.K
        U = work.fc.solve(C)  # (C+E)^{-1} C
        cov = C - U.T @ C
    cov = 0.5 * (cov + cov.T)
    try:
        fc_cov = factor_covariance(cov, 0.0)
    except FactorizationError:
        try:
            fc_cov = factor_covariance(cov, ETA_COV_RETRY_SCALE * state.gamma)
        except FactorizationError as err:
            raise NumericFailure(
                f"conditional covariance of eta failed to factor twice: {err}",
                state=state,
            ) from err
    return mu + fc_cov.lower @ rng.normal(size=fc_cov.n)


def sigma_conditional(state, data, hp, tau):
    """(shape, scale) of sigma's inverse-gamma conditional.

    shape = 3n/2 + p + a_sigma,
    scale = sum_i[(y_i - eta_i - k1 e_i)^2 / (2 k2 e_i) + e_i]
            + lambda * sum_j |beta_j| + b_sigma.
    """
    y = np.asarray(data.y, float)
    mc = mixture_constants(tau)
    n = y.shape[0]
    p = state.beta.shape[0]
    resid = y - state.eta - mc.k1 * state.e
    shape = 1.5 * n + p + hp.a_sigma
    scale = (
        float(np.sum(resid * resid / (2.0 * mc.k2 * state.e) + state.e))
        + state.lam * _l1(state.beta)
        + hp.b_sigma
    )
    return shape, scale


def gibbs_update_sigma(state, data, hp, tau, rng) -> float:
    """Draw sigma from its inverse-gamma conditional."""
    shape, scale = sigma_conditional(state, data, hp, tau)
    return float(rng.inverse_gamma(shape, scale))


def lambda_conditional(state, hp):
    """(shape, rate) of lambda's gamma conditional:
    shape = a_lambda + p, rate = b_lambda + sum|beta_j| / sigma^power."""
    p = state.beta.shape[0]
    rate = hp.b_lambda + _l1(state.beta) / state.sigma**hp.lambda_rate_sigma_power
    return hp.a_lambda + p, rate


def gibbs_update_lambda(state, hp, rng) -> float:
    """Draw lambda from its gamma conditional."""
    shape, rate = lambda_conditional(state, hp)
    return float(rng.gamma(shape, rate))


def e_conditional(state, data, tau):
    """(m vector, shared n0) of the latents' GIG(1/2, m_i, n0) conditionals.

    m_i = sqrt((y_i - eta_i)^2 / (k2 sigma)),
    n0  = sqrt(k1^2 / (k2 sigma) + 2 / sigma).
    """
    y = np.asarray(data.y, float)
    mc = mixture_constants(tau)
    m = np.abs(y - state.eta) / np.sqrt(mc.k2 * state.sigma)
    n0 = float(np.sqrt(mc.k1**2 / (mc.k2 * state.sigma) + 2.0 / state.sigma))
    return m, n0


def gibbs_update_e(state, data, hp, tau, rng) -> np.ndarray:
    """Draw each latent e_i independently from its GIG(1/2) conditional."""
    m, n0 = e_conditional(state, data, tau)
    return rng.gig_half(m, n0)


# ---------------------------------------------------------------------------
# Scan, initialization, chain
# ---------------------------------------------------------------------------


def initialize_state(data, hp, cfg, rng) -> ChainState:
    """Overdispersed start: beta ~ N(0, 0.25 I); e = 1; sigma = lambda = gamma = 1.

    eta is then drawn once from its conditional given those values, so
    different seeds give visibly different starting points for trace-plot
    comparisons.
    """
    X = np.asarray(data.X, float)
    p = X.shape[1]
    state = ChainState(
        beta=0.5 * rng.normal(size=p),
        eta=np.zeros(X.shape[0]),
        e=np.ones(X.shape[0]),
        sigma=1.0,
        lam=1.0,
        gamma=1.0,
    )
    state.eta = gibbs_update_eta(state, data, hp, cfg.tau, rng)
    return state


def collapsed_log_joint(state, data, hp, tau) -> float:
    """Unnormalized log posterior of (beta, e, sigma, lambda, gamma) with the
    link values integrated out; used to rank pilot starts."""
    n = np.asarray(data.y).shape[0]
    p = state.beta.shape[0]
    value = log_target_beta(state.beta, state, data, hp, tau)
    value += p * np.log(state.lam / (2.0 * state.sigma))
    value += -(hp.a_sigma + 1.0) * np.log(state.sigma) - hp.b_sigma / state.sigma
    value += (hp.a_lambda - 1.0) * np.log(state.lam) - hp.b_lambda * state.lam
    value += -(hp.a_gamma + 1.0) * np.log(state.gamma) - hp.b_gamma / state.gamma
    value += -n * np.log(state.sigma) - float(np.sum(state.e)) / state.sigma
    return float(value)


def _pilot_start(data, cfg, hp, rng) -> ChainState:
    best_state = None
    best_score = -np.inf
    for k in range(cfg.pilot_candidates):
        try:
            state = initialize_state(data, hp, cfg, rng)
            for _ in range(cfg.pilot_scans):
                scan_once(
                    state,
                    data,
                    hp,
                    cfg.tau,
                    rng,
                    sigma_beta_prop=hp.sigma_beta_prop,
                    sigma_gamma_prop=hp.sigma_gamma_prop,
                    collapsed=cfg.collapsed,
                )
            score = collapsed_log_joint(state, data, hp, cfg.tau)
        except (FactorizationError, NumericFailure) as err:
            logger.warning("pilot start %d abandoned: %s", k, err)
            continue
        if score > best_score:
            best_state, best_score = state, score
    if best_state is None:
        raise NumericFailure("every pilot start failed numerically")
    return best_state


def scan_once(
    state,
    data,
    hp,
    tau,
    rng,
    sigma_beta_prop=None,
    sigma_gamma_prop=None,
    collapsed=True,
):
    """Run one full scan in place; returns (beta_accepted, gamma_accepted)."""
    X, y = np.asarray(data.X, float), np.asarray(data.y, float)
    mc = mixture_constants(tau)
    work = _prepare_work(state, X, y, mc, hp.jitter) if collapsed else None

    state.beta, acc_b = mh_update_beta(
        state, data, hp, tau, rng, scale=sigma_beta_prop, work=work, collapsed=collapsed
    )
    state.gamma, acc_g = mh_update_gamma(
        state, data, hp, tau, rng, scale=sigma_gamma_prop, work=work, collapsed=collapsed
    )
    if not collapsed:
        work = _prepare_work(state, X, y, mc, hp.jitter)
    state.eta = gibbs_update_eta(state, data, hp, tau, rng, work=work)
    state.sigma = gibbs_update_sigma(state, data, hp, tau, rng)
    state.lam = gibbs_update_lambda(state, hp, rng)
    state.e = gibbs_update_e(state, data, hp, tau, rng)
    return acc_b, acc_g


def run_chain(
    data,
    cfg: SamplerConfig,
    hp: Hyperparams | None = None,
    rng=None,
    initial_state: ChainState | None = None,
) -> ChainDraws:
    """Run the sampler and return retained draws.

    Scans t = 1..iterations; scan t is retained when t > burn_in and
    (t - burn_in) is a multiple of thin, giving floor((iterations - burn_in) /
    thin) retained draws.  With ``autotune`` on, proposal scales double or
    halve every ``tune_interval`` burn-in scans whenever the windowed
    acceptance rate leaves [0.10, 0.30], and freeze at the end of burn-in;
    reported acceptance rates cover the frozen span.  Numeric failures abort
    with the iteration index and a state snapshot attached.  A warm
    ``initial_state`` (e.g. the final state of an earlier run) replaces the
    default pilot-selected start.
    """
    if hp is None:
        hp = Hyperparams()
    if rng is None:
        rng = RandomStream(cfg.seed)
    X = np.asarray(data.X, dtype=float)
    y = np.asarray(data.y, dtype=float)
    n, p = X.shape
    if n < 3:
        raise ValueError(f"need at least 3 observations, got {n}")
    if y.shape != (n,):
        raise ValueError("response length does not match the design matrix")

    started = time.perf_counter()
    if initial_state is not None:
        initial_state.validate()
        state = initial_state.copy()
    else:
        with single_thread_blas():
            state = _pilot_start(data, cfg, hp, rng)
    scale_b = hp.sigma_beta_prop
    scale_g = hp.sigma_gamma_prop

    n_keep = (cfg.iterations - cfg.burn_in) // cfg.thin
    beta_out = np.empty((n_keep, p))
    sigma_out = np.empty(n_keep)
    lam_out = np.empty(n_keep)
    gamma_out = np.empty(n_keep)
    e_out = np.empty((n_keep, n)) if cfg.retain_e else None
    eta_out = np.empty((n_keep, n)) if cfg.retain_eta else None

    win_b = win_g = win_n = 0
    acc_b_frozen = acc_g_frozen = prop_frozen = 0
    kept = 0
    with single_thread_blas():
        for t in range(1, cfg.iterations + 1):
            try:
                acc_b, acc_g = scan_once(
                    state,
                    data,
                    hp,
                    cfg.tau,
                    rng,
                    sigma_beta_prop=scale_b,
                    sigma_gamma_prop=scale_g,
                    collapsed=cfg.collapsed,
                )
            except (FactorizationError, NumericFailure, FloatingPointError) as err:
                raise NumericFailure(
                    f"scan {t} aborted: {err}", iteration=t, state=state.copy()
                ) from err

            if t <= cfg.burn_in:
                if cfg.autotune:
                    win_b += acc_b
                    win_g += acc_g
                    win_n += 1
                    if win_n == cfg.tune_interval:
                        scale_b = _retune(scale_b, win_b / win_n)
                        scale_g = _retune(scale_g, win_g / win_n)
                        win_b = win_g = win_n = 0
            else:
                acc_b_frozen += acc_b
                acc_g_frozen += acc_g
                prop_frozen += 1
                if (t - cfg.burn_in) % cfg.thin == 0:
                    beta_out[kept] = state.beta
                    sigma_out[kept] = state.sigma
                    lam_out[kept] = state.lam
                    gamma_out[kept] = state.gamma
                    if e_out is not None:
                        e_out[kept] = state.e
                    if eta_out is not None:
                        eta_out[kept] = state.eta
                    kept += 1

    for name, arr in (("beta", beta_out), ("sigma", sigma_out), ("lambda", lam_out), ("gamma", gamma_out)):
        if not np.all(np.isfinite(arr)):
            raise NumericFailure(f"non-finite values in retained {name} draws", state=state)

    return ChainDraws(
        tau=cfg.tau,
        beta=beta_out,
        sigma=sigma_out,
        lam=lam_out,
        gamma=gamma_out,
        e=e_out,
        eta=eta_out,
        accepted_beta=acc_b_frozen,
        proposed_beta=prop_frozen,
        accepted_gamma=acc_g_frozen,
        proposed_gamma=prop_frozen,
        sigma_beta_prop=scale_b,
        sigma_gamma_prop=scale_g,
        final_state=state,
        wall_time=time.perf_counter() - started,
    )


def _retune(scale, rate):
    if rate < 0.10:
        return scale * 0.5
    if rate > 0.30:
        return scale * 2.0
    return scale
