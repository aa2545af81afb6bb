"""Stochastic volatility with AR(1) latent log-variance.

    y_t = eps_t exp(h_t / 2),          eps_t ~ Normal(0, 1)
    h_{t+1} = mu + phi (h_t - mu) + sigma delta_t
    h_1 ~ Normal(mu, sigma / sqrt(1 - phi^2))
    phi ~ Uniform(-1, 1), sigma ~ half-Cauchy(0, 5), mu ~ Cauchy(0, 10)

All sd-position arguments are standard deviations. As |phi| -> 1 the
stationary sd of h_1 diverges, the data stop pinning mu down, and the
(phi, mu) sample cloud widens into a mushroom: a narrow stem at moderate phi
under a broad heavy-tailed cap near |phi| = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dists import cauchy_logpdf, half_cauchy_logpdf, normal_logpdf, uniform_logpdf
from .targets import Target
from .transforms import Interval, ParamDescriptor, ParamSpace, Positive, Real


@dataclass(frozen=True)
class SVData:
    """Observed return series y_1..y_T."""

    returns: np.ndarray

    def __post_init__(self):
        returns = np.asarray(self.returns, dtype=float).ravel()
        if returns.size < 1:
            raise ValueError("need at least one observation")
        object.__setattr__(self, "returns", returns)

    @property
    def T(self) -> int:
        return self.returns.size


@dataclass(frozen=True)
class SVParams:
    mu: float
    phi: float
    sigma: float
    h: np.ndarray

    def __post_init__(self):
        if not abs(self.phi) < 1.0:
            raise ValueError("|phi| must be < 1")
        if not self.sigma > 0.0:
            raise ValueError("sigma must be positive")
        object.__setattr__(self, "h", np.asarray(self.h, dtype=float).ravel())

    def as_vector(self) -> np.ndarray:
        return np.concatenate([[self.mu, self.phi, self.sigma], self.h])


def stationary_sd(phi: float, sigma: float) -> float:
    """Marginal sd of h_1; diverges monotonically as |phi| -> 1."""
    if not abs(phi) < 1.0:
        raise ValueError("|phi| must be < 1")
    return sigma / math.sqrt(1.0 - phi * phi)


def sv_log_density(data: SVData, mu: float, phi: float, sigma: float, h) -> float:
    """Joint unnormalized log posterior over (mu, phi, sigma, h_1..h_T)."""
    h = np.asarray(h, dtype=float).ravel()
    if h.size != data.T:
        raise ValueError(f"h has length {h.size}, data has T={data.T}")
    if not (abs(phi) < 1.0 and sigma > 0.0):
        return -np.inf
    sd1 = stationary_sd(phi, sigma)
    lp = normal_logpdf(h[0], mu, sd1)
    if data.T > 1:
        means = mu + phi * (h[:-1] - mu)
        lp += float(np.sum(normal_logpdf(h[1:], means, sigma)))
    lp += float(np.sum(normal_logpdf(data.returns, 0.0, np.exp(0.5 * h))))
    lp += uniform_logpdf(phi, -1.0, 1.0)
    lp += half_cauchy_logpdf(sigma, 5.0)
    lp += cauchy_logpdf(mu, 0.0, 10.0)
    return float(lp)


def sv_log_density_grad(data: SVData, mu: float, phi: float, sigma: float, h):
    h = np.asarray(h, dtype=float).ravel()
    if h.size != data.T:
        raise ValueError(f"h has length {h.size}, data has T={data.T}")
    if not (abs(phi) < 1.0 and sigma > 0.0):
        return -np.inf, np.zeros(3 + h.size)
    lp = sv_log_density(data, mu, phi, sigma, h)
    T = data.T
    grad_h = np.zeros(T)

    # h_1 stationary prior
    one_m_phi2 = 1.0 - phi * phi
    var1 = sigma * sigma / one_m_phi2
    r1 = h[0] - mu
    grad_h[0] += -r1 / var1
    d_mu = r1 / var1
    # d/d sd1 = -1/sd1 + r1^2/sd1^3, with sd1 = sigma (1-phi^2)^{-1/2}
    sd1 = math.sqrt(var1)
    d_sd1 = -1.0 / sd1 + r1 * r1 / sd1**3
    d_sigma = d_sd1 / math.sqrt(one_m_phi2)
    d_phi = d_sd1 * sigma * phi * one_m_phi2**-1.5

    # AR(1) transitions
    if T > 1:
        resid = h[1:] - (mu + phi * (h[:-1] - mu))
        w = resid / (sigma * sigma)
        grad_h[1:] += -w
        grad_h[:-1] += w * phi
        d_mu += float(np.sum(w)) * (1.0 - phi)
        d_phi += float(np.sum(w * (h[:-1] - mu)))
        d_sigma += float(np.sum(-1.0 / sigma + resid * resid / sigma**3))

    # observations: logN(y_t; 0, e^{h_t/2})
    grad_h += -0.5 + 0.5 * data.returns**2 * np.exp(-h)

    # priors
    d_sigma += -2.0 * sigma / (25.0 + sigma * sigma)
    d_mu += -2.0 * mu / (100.0 + mu * mu)

    return lp, np.concatenate([[d_mu, d_phi, d_sigma], grad_h])


def simulate_sv(seed: int, T: int = 5, mu: float = -1.02, phi: float = -0.95,
                sigma: float = 0.1):
    """Simulate returns; also returns the latent path for testing.

    h_1 is drawn from its stationary law, the path evolves by the AR(1)
    recursion, and all returns are drawn afterwards.
    """
    if T < 1:
        raise ValueError("need T >= 1")
    if not (abs(phi) < 1.0 and sigma >= 0.0):
        raise ValueError("require |phi| < 1 and sigma >= 0")
    rng = np.random.default_rng(seed)
    h = np.empty(T)
    h[0] = mu + (sigma / math.sqrt(1.0 - phi * phi)) * rng.standard_normal()
    for t in range(1, T):
        h[t] = mu + phi * (h[t - 1] - mu) + sigma * rng.standard_normal()
    y = rng.standard_normal(T) * np.exp(0.5 * h)
    return SVData(returns=y), h


class SVTarget(Target):
    name = "stoch_vol"

    def __init__(self, data: SVData):
        self.data = data
        descriptors = [
            ParamDescriptor("mu", Real()),
            ParamDescriptor("phi", Interval(-1.0, 1.0)),
            ParamDescriptor("sigma", Positive()),
        ]
        descriptors.extend(
            ParamDescriptor(f"h{t + 1}", Real()) for t in range(data.T)
        )
        self.space = ParamSpace(descriptors)

    def log_density(self, params) -> float:
        params = np.asarray(params, dtype=float)
        return sv_log_density(self.data, params[0], params[1], params[2], params[3:])

    def log_density_grad(self, params):
        params = np.asarray(params, dtype=float)
        return sv_log_density_grad(self.data, params[0], params[1], params[2], params[3:])

    def grid_density(self, x_param, y_param, fixed):
        raise ValueError(
            "stoch_vol is a sample-based target: the latent path cannot be "
            "collapsed onto a 2-D grid"
        )
