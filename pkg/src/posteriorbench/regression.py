"""Two-coefficient Gaussian regressions: collinear and spike-and-slab.

Shared likelihood: y_i ~ Normal(x_i . beta, noise_sd^2) with a fixed noise
scale (1 in both stock configurations).

Collinear: beta ~ Normal(0, prior_sd^2 I). With nearly anticorrelated
regressors only beta_1 - beta_2 is identified, leaving a thin needle-shaped
ridge along the (1, 1) direction.

Spike-and-slab: each beta_j independently carries a two-component Gaussian
mixture prior, spike_prob on the narrow "spike" and the rest on the wide
"slab"; the latent component label is marginalized in closed form. With
little data the posterior looks like a cross centered at the origin.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dists import logsumexp, normal_logpdf
from .targets import Target
from .transforms import ParamDescriptor, ParamSpace, Real


@dataclass(frozen=True)
class RegressionData:
    """Design matrix (n x 2), responses, and the fixed noise scale."""

    X: np.ndarray
    y: np.ndarray
    noise_sd: float = 1.0

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.X, dtype=float))
        y = np.asarray(self.y, dtype=float).ravel()
        if X.shape[0] != y.size or X.shape[0] < 1:
            raise ValueError("X rows and y length must match and be >= 1")
        if not self.noise_sd > 0:
            raise ValueError("noise_sd must be positive")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.y.size

    @property
    def dim(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class CollinearPrior:
    prior_sd: float = 100.0

    def __post_init__(self):
        if not self.prior_sd > 0:
            raise ValueError("prior_sd must be positive")


@dataclass(frozen=True)
class SpikeSlabPrior:
    spike_var: float = 0.1
    slab_var: float = 100.0
    spike_prob: float = 0.1

    def __post_init__(self):
        if not (0 < self.spike_var < self.slab_var):
            raise ValueError("require 0 < spike_var < slab_var")
        if not 0.0 < self.spike_prob < 1.0:
            raise ValueError("spike_prob must lie strictly in (0, 1)")


def _gauss_loglik(data: RegressionData, beta: np.ndarray) -> float:
    r = data.y - data.X @ beta
    return float(np.sum(normal_logpdf(r, 0.0, data.noise_sd)))


def _gauss_loglik_grad(data: RegressionData, beta: np.ndarray) -> np.ndarray:
    r = data.y - data.X @ beta
    return data.X.T @ r / data.noise_sd**2


def collinear_log_density(data: RegressionData, prior: CollinearPrior, beta) -> float:
    """Gaussian log-likelihood plus the isotropic Normal(0, prior_sd^2) prior."""
    beta = _check_beta(data, beta)
    return _gauss_loglik(data, beta) + float(
        np.sum(normal_logpdf(beta, 0.0, prior.prior_sd))
    )


def collinear_log_density_grad(data: RegressionData, prior: CollinearPrior, beta):
    beta = _check_beta(data, beta)
    lp = collinear_log_density(data, prior, beta)
    grad = _gauss_loglik_grad(data, beta) - beta / prior.prior_sd**2
    return lp, grad


def spike_slab_log_prior(beta_j: float, prior: SpikeSlabPrior) -> float:
    """Per-coordinate mixture prior, component label summed out."""
    return logsumexp(
        [
            np.log(prior.spike_prob) + normal_logpdf(beta_j, 0.0, np.sqrt(prior.spike_var)),
            np.log1p(-prior.spike_prob) + normal_logpdf(beta_j, 0.0, np.sqrt(prior.slab_var)),
        ]
    )


def _spike_slab_prior_grad(beta_j: float, prior: SpikeSlabPrior) -> float:
    ls = np.log(prior.spike_prob) + normal_logpdf(beta_j, 0.0, np.sqrt(prior.spike_var))
    lb = np.log1p(-prior.spike_prob) + normal_logpdf(beta_j, 0.0, np.sqrt(prior.slab_var))
    tot = np.logaddexp(ls, lb)
    w_spike = np.exp(ls - tot)
    w_slab = np.exp(lb - tot)
    return -beta_j * (w_spike / prior.spike_var + w_slab / prior.slab_var)


def spike_slab_log_density(data: RegressionData, prior: SpikeSlabPrior, beta) -> float:
    beta = _check_beta(data, beta)
    return _gauss_loglik(data, beta) + sum(
        spike_slab_log_prior(float(b), prior) for b in beta
    )


def spike_slab_log_density_grad(data: RegressionData, prior: SpikeSlabPrior, beta):
    beta = _check_beta(data, beta)
    lp = spike_slab_log_density(data, prior, beta)
    grad = _gauss_loglik_grad(data, beta) + np.array(
        [_spike_slab_prior_grad(float(b), prior) for b in beta]
    )
    return lp, grad


def _check_beta(data: RegressionData, beta) -> np.ndarray:
    beta = np.asarray(beta, dtype=float).ravel()
    if beta.size != data.dim:
        raise ValueError(f"beta has length {beta.size}, design has {data.dim} columns")
    return beta


def simulate_collinear(seed: int, n: int = 30, rho: float = -0.995,
                       beta_true=(-10.0, 10.0)) -> RegressionData:
    """Bivariate-normal regressors with unit variances and correlation rho."""
    if not abs(rho) < 1:
        raise ValueError("require |rho| < 1")
    if n < 1:
        raise ValueError("need n >= 1")
    rng = np.random.default_rng(seed)
    chol = np.linalg.cholesky(np.array([[1.0, rho], [rho, 1.0]]))
    X = rng.standard_normal((n, 2)) @ chol.T
    y = X @ np.asarray(beta_true, dtype=float) + rng.standard_normal(n)
    return RegressionData(X=X, y=y)


def simulate_spike_slab(seed: int, n: int = 10, beta_true=(0.0, 0.0)) -> RegressionData:
    """Regressors uniform on [-2, 2]^2, unit-variance Gaussian noise."""
    if n < 1:
        raise ValueError("need n >= 1")
    rng = np.random.default_rng(seed)
    X = rng.uniform(-2.0, 2.0, size=(n, 2))
    y = X @ np.asarray(beta_true, dtype=float) + rng.standard_normal(n)
    return RegressionData(X=X, y=y)


def symmetrize(data: RegressionData) -> RegressionData:
    """Augment with all four sign-flips of the regressor columns.

    The result is invariant (as a point set) under flipping either column, so
    the spike-and-slab posterior becomes exactly symmetric in beta_j -> -beta_j.
    """
    X, y = data.X, data.y
    flips = [np.array([1.0, 1.0]), np.array([-1.0, 1.0]),
             np.array([1.0, -1.0]), np.array([-1.0, -1.0])]
    X_sym = np.vstack([X * f for f in flips])
    y_sym = np.concatenate([y] * 4)
    return RegressionData(X=X_sym, y=y_sym, noise_sd=data.noise_sd)


class _RegressionTarget(Target):
    def __init__(self, data: RegressionData):
        self.data = data
        self.space = ParamSpace(
            [ParamDescriptor(f"beta{j + 1}", Real()) for j in range(data.dim)]
        )


class CollinearTarget(_RegressionTarget):
    name = "collinear"

    def __init__(self, data: RegressionData, prior: CollinearPrior | None = None):
        super().__init__(data)
        self.prior = prior or CollinearPrior()

    def log_density(self, params) -> float:
        return collinear_log_density(self.data, self.prior, params)

    def log_density_grad(self, params):
        return collinear_log_density_grad(self.data, self.prior, params)


class SpikeSlabTarget(_RegressionTarget):
    name = "spike_slab"

    def __init__(self, data: RegressionData, prior: SpikeSlabPrior | None = None):
        super().__init__(data)
        self.prior = prior or SpikeSlabPrior()

    def log_density(self, params) -> float:
        return spike_slab_log_density(self.data, self.prior, params)

    def log_density_grad(self, params):
        return spike_slab_log_density_grad(self.data, self.prior, params)
