"""Single-covariate Bayesian LASSO with a uniform hyperprior on the penalty.

    y_i ~ Normal(x_i * beta, sigma^2)      sigma known
    beta ~ Laplace(0, lam)
    lam ~ Uniform(0.001, 10)

Two Laplace parameterizations are supported since "Laplace(0, lam)" is
ambiguous in the literature:

* ``scale`` (default): density (1 / 2 lam) exp(-|beta| / lam)
* ``rate``:            density (lam / 2) exp(-lam |beta|)

For any fixed lam the conditional in beta is log-concave; joint modes in
(beta, lam) are what make this target multimodal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dists import normal_logpdf
from .targets import Target
from .transforms import Interval, ParamDescriptor, ParamSpace, Real

LAM_LO = 0.001
LAM_HI = 10.0
CONVENTIONS = ("scale", "rate")


@dataclass(frozen=True)
class LassoData:
    """Covariates (all 1 in the stock configuration), responses, known noise sd."""

    x: np.ndarray
    y: np.ndarray
    sigma: float = 8.0

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).ravel()
        y = np.asarray(self.y, dtype=float).ravel()
        if x.size < 1 or x.shape != y.shape:
            raise ValueError("need matching nonempty x and y")
        # sigma = 0 is allowed for noise-free simulated data but cannot be evaluated
        if not self.sigma >= 0:
            raise ValueError("sigma must be nonnegative")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class LassoParams:
    beta: float
    lam: float

    def __post_init__(self):
        if not LAM_LO < self.lam < LAM_HI:
            raise ValueError(f"lambda must lie strictly in ({LAM_LO}, {LAM_HI})")

    def as_vector(self) -> np.ndarray:
        return np.array([self.beta, self.lam])


def _laplace_log_prior(beta: float, lam: float, convention: str) -> float:
    if convention == "scale":
        return -math.log(2.0 * lam) - abs(beta) / lam
    if convention == "rate":
        return math.log(lam / 2.0) - lam * abs(beta)
    raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")


def _laplace_log_prior_grad(beta: float, lam: float, convention: str):
    # d/dbeta uses the 0 subgradient element at beta = 0 exactly
    sgn = float(np.sign(beta))
    if convention == "scale":
        return -sgn / lam, -1.0 / lam + abs(beta) / lam**2
    if convention == "rate":
        return -sgn * lam, 1.0 / lam - abs(beta)
    raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")


def lasso_log_density(data: LassoData, beta: float, lam: float,
                      convention: str = "scale") -> float:
    """Unnormalized log posterior; lam outside (0.001, 10) yields -inf."""
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    if not LAM_LO < lam < LAM_HI:
        return -np.inf
    ll = float(np.sum(normal_logpdf(data.y, data.x * beta, data.sigma)))
    return ll + _laplace_log_prior(beta, lam, convention) - math.log(LAM_HI - LAM_LO)


def lasso_log_density_grad(data: LassoData, beta: float, lam: float,
                           convention: str = "scale"):
    if not LAM_LO < lam < LAM_HI:
        return -np.inf, np.zeros(2)
    lp = lasso_log_density(data, beta, lam, convention)
    d_beta = float(np.sum(data.x * (data.y - data.x * beta))) / data.sigma**2
    pb, pl = _laplace_log_prior_grad(beta, lam, convention)
    return lp, np.array([d_beta + pb, pl])


def simulate_lasso(seed: int, n: int = 5, beta_true: float = 5.0,
                   sigma: float = 8.0) -> LassoData:
    """Unit covariates, so the task is Gaussian mean estimation."""
    if n < 1:
        raise ValueError("need n >= 1")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    rng = np.random.default_rng(seed)
    x = np.ones(n)
    y = beta_true * x + sigma * rng.standard_normal(n)
    return LassoData(x=x, y=y, sigma=sigma)


class LassoTarget(Target):
    name = "adaptive_lasso"

    def __init__(self, data: LassoData, convention: str = "scale"):
        if convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
        self.data = data
        self.convention = convention
        self.space = ParamSpace(
            [
                ParamDescriptor("beta", Real()),
                ParamDescriptor("lambda", Interval(LAM_LO, LAM_HI)),
            ]
        )

    def log_density(self, params) -> float:
        beta, lam = np.asarray(params, dtype=float)
        return lasso_log_density(self.data, beta, lam, self.convention)

    def log_density_grad(self, params):
        beta, lam = np.asarray(params, dtype=float)
        return lasso_log_density_grad(self.data, beta, lam, self.convention)
