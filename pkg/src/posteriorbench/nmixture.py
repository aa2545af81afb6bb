"""Binomial N-mixture model for repeated animal counts.

Generative model, per site i with repeats n = 1..R:

    N_i ~ Poisson(lambda)            latent abundance, marginalized here
    y_{i,n} | N_i ~ Binomial(N_i, p)
    p ~ Uniform(0, 1),  lambda ~ Gamma(shape, rate)

The data only pin down the product lambda * p well (with a single repeat the
counts are exactly Poisson(lambda * p)), so the (p, lambda) posterior forms a
banana-shaped ridge along lambda ~ const / p.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, xlog1py, xlogy

from .dists import gamma_logpdf, logsumexp
from .targets import Target
from .transforms import ParamDescriptor, ParamSpace, Positive, UnitInterval

DEFAULT_TOL = 1e-12
_BLOCK = 50


@dataclass(frozen=True)
class NMixtureData:
    """Count matrix (sites x repeats) plus the Gamma(shape, rate) prior on lambda."""

    counts: np.ndarray
    prior_shape: float = 1.0
    prior_rate: float = 0.01

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 2 or counts.size == 0:
            raise ValueError("counts must be a nonempty sites x repeats matrix")
        if (counts < 0).any():
            raise ValueError("counts must be nonnegative")
        if not (self.prior_shape > 0 and self.prior_rate > 0):
            raise ValueError("Gamma prior shape and rate must be positive")
        object.__setattr__(self, "counts", counts)

    @property
    def n_sites(self) -> int:
        return self.counts.shape[0]

    @property
    def n_repeats(self) -> int:
        return self.counts.shape[1]


@dataclass(frozen=True)
class NMixtureParams:
    p: float
    lam: float

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError("p must lie strictly in (0, 1)")
        if not self.lam > 0.0:
            raise ValueError("lambda must be positive")

    def as_vector(self) -> np.ndarray:
        return np.array([self.p, self.lam])


def _upper_bound(y_max: int, lam: float) -> int:
    return int(max(y_max, np.ceil(lam)) + np.ceil(10.0 * np.sqrt(lam + 1.0)) + 20)


def _site_terms(y_row: np.ndarray, p: float, lam: float, n_lo: int, n_hi: int):
    """Summand log Poisson(N; lam) + sum_n log Binomial(y_n; N, p) on a range of N."""
    n = np.arange(n_lo, n_hi + 1, dtype=np.int64)
    t = xlogy(n, lam) - lam - gammaln(n + 1.0)
    for y in y_row:
        t = t + (
            gammaln(n + 1.0)
            - gammaln(y + 1.0)
            - gammaln(n - y + 1.0)
            + xlogy(float(y), p)
            + xlog1py(n - y, -p)
        )
    return n, t


def nmixture_site_loglik(y_row, p: float, lam: float, tol: float = DEFAULT_TOL) -> float:
    """Log marginal likelihood of one site's count row, N summed out.

    The sum starts at max(y_row) and is truncated adaptively so that the final
    50-term block contributes less than ``tol`` relative mass. p = 1 is allowed
    as a limit (the sum collapses to the single term N = y if counts agree).
    """
    ll, _, _ = _site_loglik_grad(y_row, p, lam, tol, want_grad=False)
    return ll


def nmixture_site_grad(y_row, p: float, lam: float, tol: float = DEFAULT_TOL):
    """(loglik, d/dp, d/dlambda) of the site marginal; requires 0 < p < 1."""
    if not 0.0 < p < 1.0:
        raise ValueError("gradient requires p strictly inside (0, 1)")
    return _site_loglik_grad(y_row, p, lam, tol, want_grad=True)


def _site_loglik_grad(y_row, p, lam, tol, want_grad):
    y_row = np.asarray(y_row, dtype=np.int64).ravel()
    if y_row.size == 0:
        raise ValueError("y_row must be nonempty")
    if (y_row < 0).any():
        raise ValueError("counts must be nonnegative")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if not lam > 0.0:
        raise ValueError("lambda must be positive")
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must lie in (0, 1)")

    y_max = int(y_row.max())
    n_lo = y_max
    n_hi = _upper_bound(y_max, lam)
    n, t = _site_terms(y_row, p, lam, n_lo, n_hi)
    ll = logsumexp(t)
    # extend in fixed blocks until the last block is negligible
    while True:
        lo, hi = n_hi + 1, n_hi + _BLOCK
        n_ext, t_ext = _site_terms(y_row, p, lam, lo, hi)
        block = logsumexp(t_ext)
        ll_new = np.logaddexp(ll, block)
        if np.isfinite(ll_new):
            n = np.concatenate([n, n_ext])
            t = np.concatenate([t, t_ext])
        n_hi = hi
        done = block == -np.inf or (np.isfinite(ll_new) and block - ll_new < np.log(tol))
        ll = ll_new
        if done:
            break
    if not want_grad or not np.isfinite(ll):
        return float(ll), float("nan"), float("nan")
    w = np.exp(t - ll)
    r = float(y_row.size)
    s = float(y_row.sum())
    d_lam = float(np.sum(w * (n / lam - 1.0)))
    d_p = float(np.sum(w * (s / p - (r * n - s) / (1.0 - p))))
    return float(ll), d_p, d_lam


def nmixture_log_density(data: NMixtureData, p: float, lam: float,
                         tol: float = DEFAULT_TOL) -> float:
    """Unnormalized log posterior: site marginals + Gamma/Uniform priors."""
    if not (0.0 < p < 1.0 and lam > 0.0):
        return -np.inf
    ll = _all_sites_loglik(data, p, lam, tol, want_grad=False)[0]
    return ll + gamma_logpdf(lam, data.prior_shape, data.prior_rate)


def nmixture_log_density_grad(data: NMixtureData, p: float, lam: float,
                              tol: float = DEFAULT_TOL):
    if not (0.0 < p < 1.0 and lam > 0.0):
        return -np.inf, np.zeros(2)
    ll, d_p, d_lam = _all_sites_loglik(data, p, lam, tol, want_grad=True)
    lp = ll + gamma_logpdf(lam, data.prior_shape, data.prior_rate)
    d_lam += (data.prior_shape - 1.0) / lam - data.prior_rate
    return lp, np.array([d_p, d_lam])


def _all_sites_loglik(data: NMixtureData, p, lam, tol, want_grad):
    """Vectorized site sum sharing one truncation range across sites."""
    counts = data.counts
    y_max = int(counts.max())
    n_hi = _upper_bound(y_max, lam)
    n, t = _sites_matrix(data, p, lam, 0, n_hi)
    per_site = _lse_rows(t)
    while True:
        lo, hi = n_hi + 1, n_hi + _BLOCK
        n_ext, t_ext = _sites_matrix(data, p, lam, lo, hi)
        block = _lse_rows(t_ext)
        new = np.logaddexp(per_site, block)
        grow = np.isfinite(new).all()
        if grow:
            n = np.concatenate([n, n_ext])
            t = np.concatenate([t, t_ext], axis=0)
        n_hi = hi
        rel = block - np.where(np.isfinite(new), new, 0.0)
        done = np.all((block == -np.inf) | (rel < np.log(tol)))
        per_site = new
        if done:
            break
    ll = float(per_site.sum())
    if not want_grad or not np.isfinite(ll):
        return ll, float("nan"), float("nan")
    w = np.exp(t - per_site[None, :])
    r = float(data.n_repeats)
    s = counts.sum(axis=1).astype(float)
    d_lam = float(np.sum(w * (n[:, None] / lam - 1.0)))
    d_p = float(np.sum(w * (s[None, :] / p - (r * n[:, None] - s[None, :]) / (1.0 - p))))
    return ll, d_p, d_lam


def _lse_rows(t: np.ndarray) -> np.ndarray:
    m = t.max(axis=0)
    safe = np.where(np.isfinite(m), m, 0.0)
    out = safe + np.log(np.sum(np.exp(t - safe[None, :]), axis=0))
    return np.where(np.isfinite(m), out, m)


def _sites_matrix(data: NMixtureData, p, lam, n_lo, n_hi):
    """Summand matrix (N values x sites) over an N range shared by all sites."""
    counts = data.counts
    n = np.arange(n_lo, n_hi + 1, dtype=np.int64)
    uniq, inv = np.unique(counts, return_inverse=True)
    site_uniq = np.zeros((counts.shape[0], uniq.size), dtype=np.int64)
    flat = inv.reshape(counts.shape)
    for j in range(uniq.size):
        site_uniq[:, j] = (flat == j).sum(axis=1)
    nn = n[:, None].astype(float)
    yy = uniq[None, :].astype(float)
    with np.errstate(invalid="ignore"):
        g = np.where(nn >= yy, gammaln(nn - yy + 1.0), 0.0)
    s = counts.sum(axis=1).astype(float)
    r = float(counts.shape[1])
    pois = xlogy(n, lam) - lam - gammaln(n + 1.0)
    t = (
        pois[:, None]
        + r * gammaln(n + 1.0)[:, None]
        - g @ site_uniq.T.astype(float)
        + xlogy(s[None, :], p)
        + xlog1py(r * nn - s[None, :], -p)
        - gammaln(counts + 1.0).sum(axis=1)[None, :]
    )
    # rows with N below a site's largest count carry zero binomial mass
    site_ymax = counts.max(axis=1)
    t = np.where(n[:, None] >= site_ymax[None, :], t, -np.inf)
    return n, t


def simulate_nmixture(seed: int, n_sites: int = 20, n_repeats: int = 5,
                      lam: float = 30.0, p: float = 0.1,
                      prior_shape: float = 1.0, prior_rate: float = 0.01) -> NMixtureData:
    """Draw latent abundances then binomially thinned repeat counts."""
    if n_sites < 1 or n_repeats < 1:
        raise ValueError("need at least one site and one repeat")
    if not (lam > 0 and 0.0 <= p <= 1.0):
        raise ValueError("require lambda > 0 and p in [0, 1]")
    rng = np.random.default_rng(seed)
    abundance = rng.poisson(lam, size=n_sites)
    counts = rng.binomial(np.broadcast_to(abundance[:, None], (n_sites, n_repeats)), p)
    return NMixtureData(counts=counts, prior_shape=prior_shape, prior_rate=prior_rate)


class NMixtureTarget(Target):
    name = "nmixture"

    def __init__(self, data: NMixtureData, tol: float = DEFAULT_TOL):
        self.data = data
        self.tol = tol
        self.space = ParamSpace(
            [ParamDescriptor("p", UnitInterval()), ParamDescriptor("lambda", Positive())]
        )

    def log_density(self, params) -> float:
        p, lam = np.asarray(params, dtype=float)
        return nmixture_log_density(self.data, p, lam, self.tol)

    def log_density_grad(self, params):
        p, lam = np.asarray(params, dtype=float)
        return nmixture_log_density_grad(self.data, p, lam, self.tol)
