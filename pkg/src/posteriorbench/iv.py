"""Just-identified instrumental-variable model with a diffuse covariance prior.

    y_i = x_i beta + eps_i
    x_i = z_i Pi + v_i
    (eps_i, v_i) ~ Normal(0, Sigma),  prior p(beta, Pi, Sigma) ~ |Sigma|^(-3/2)

With the residual scatter S(beta, Pi) = sum_i u_i u_i^T for
u_i = (y_i - x_i beta, x_i - z_i Pi), the joint log density is

    -((n + 3) / 2) log|Sigma| - tr(Sigma^{-1} S) / 2 - n log(2 pi).

Integrating Sigma out analytically (the integrand is an inverse-Wishart
kernel with n degrees of freedom) leaves the two-parameter profile

    -(n / 2) log det S(beta, Pi)    (+ a (beta, Pi)-independent constant),

which blows up to +inf wherever the two residual vectors become collinear.
When the instrument is weak that singular set hugs Pi = 0, producing the
contour plot's characteristic spike and diverging ridgelines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .targets import Target
from .transforms import ParamDescriptor, ParamSpace, Real, Spd2x2

LOG_TWO_PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class IVData:
    """Outcome y, endogenous regressor x, instrument z (equal lengths, n >= 3)."""

    y: np.ndarray
    x: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float).ravel()
        x = np.asarray(self.x, dtype=float).ravel()
        z = np.asarray(self.z, dtype=float).ravel()
        if not (y.shape == x.shape == z.shape):
            raise ValueError("y, x, z must have equal lengths")
        if y.size < 3:
            raise ValueError("need n >= 3 for the covariance marginal to converge")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)

    @property
    def n(self) -> int:
        return self.y.size


@dataclass(frozen=True)
class IVParams:
    beta: float
    pi: float
    sigma: np.ndarray  # 2x2 SPD

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=float)
        if sigma.shape != (2, 2) or not np.allclose(sigma, sigma.T):
            raise ValueError("sigma must be a symmetric 2x2 matrix")
        if not (sigma[0, 0] > 0 and np.linalg.det(sigma) > 0):
            raise ValueError("sigma must be positive definite")
        object.__setattr__(self, "sigma", sigma)

    def as_vector(self) -> np.ndarray:
        s = self.sigma
        return np.array([self.beta, self.pi, s[0, 0], s[1, 0], s[1, 1]])


def iv_residual_outer(data: IVData, beta: float, pi: float) -> np.ndarray:
    """Residual scatter S(beta, Pi) = sum_i u_i u_i^T (symmetric PSD)."""
    e = data.y - beta * data.x
    v = data.x - pi * data.z
    return np.array([[e @ e, e @ v], [e @ v, v @ v]])


def iv_joint_log_density(data: IVData, beta: float, pi: float, sigma) -> float:
    """Joint log density over (beta, Pi, Sigma); sigma must be SPD."""
    sigma = np.asarray(sigma, dtype=float)
    s11, s21, s22 = sigma[0, 0], sigma[1, 0], sigma[1, 1]
    det = s11 * s22 - s21 * s21
    if not (s11 > 0 and det > 0):
        raise ValueError("sigma must be positive definite")
    n = data.n
    scatter = iv_residual_outer(data, beta, pi)
    inv = np.array([[s22, -s21], [-s21, s11]]) / det
    return float(
        -0.5 * (n + 3) * math.log(det)
        - 0.5 * np.sum(inv * scatter)
        - n * LOG_TWO_PI
    )


def iv_joint_log_density_grad(data: IVData, beta: float, pi: float, sigma):
    sigma = np.asarray(sigma, dtype=float)
    s11, s21, s22 = sigma[0, 0], sigma[1, 0], sigma[1, 1]
    det = s11 * s22 - s21 * s21
    if not (s11 > 0 and det > 0):
        raise ValueError("sigma must be positive definite")
    n = data.n
    scatter = iv_residual_outer(data, beta, pi)
    inv = np.array([[s22, -s21], [-s21, s11]]) / det
    lp = float(-0.5 * (n + 3) * math.log(det) - 0.5 * np.sum(inv * scatter) - n * LOG_TWO_PI)

    e = data.y - beta * data.x
    v = data.x - pi * data.z
    ae = inv[0, 0] * e + inv[0, 1] * v  # first row of Sigma^{-1} u_i over i
    av = inv[1, 0] * e + inv[1, 1] * v
    d_beta = float(data.x @ ae)
    d_pi = float(data.z @ av)

    # d/dSigma of the two Sigma terms: -((n+3)/2) Sigma^{-1} + Sigma^{-1} S Sigma^{-1} / 2
    g_full = -0.5 * (n + 3) * inv + 0.5 * inv @ scatter @ inv
    grad = np.array([d_beta, d_pi, g_full[0, 0], 2.0 * g_full[1, 0], g_full[1, 1]])
    return lp, grad


def iv_marginal_log_density(data: IVData, beta: float, pi: float) -> float:
    """Sigma-marginalized profile -(n/2) log det S; +inf on the singular set."""
    scatter = iv_residual_outer(data, beta, pi)
    det = scatter[0, 0] * scatter[1, 1] - scatter[0, 1] ** 2
    if det <= 0.0:
        return np.inf
    return float(-0.5 * data.n * math.log(det))


def iv_marginal_constant(n: int) -> float:
    """Additive constant making exp(marginal) the exact Sigma-integral.

    Value of log integral over SPD Sigma of |Sigma|^{-(n+3)/2}
    exp(-tr(Sigma^{-1} S)/2 - n log 2 pi) with det S factored out:
    n log 2 + log Gamma_2(n/2) - n log(2 pi).
    """
    from scipy.special import gammaln

    log_gamma2 = 0.5 * math.log(math.pi) + gammaln(0.5 * n) + gammaln(0.5 * (n - 1))
    return n * math.log(2.0) + log_gamma2 - n * LOG_TWO_PI


def simulate_iv(seed: int, n: int = 50, beta: float = 0.1, pi: float = 0.1,
                sigma=None, instrument_prob: float = 0.75) -> IVData:
    """Bernoulli instruments; jointly normal residual pairs with covariance sigma."""
    if n < 3:
        raise ValueError("need n >= 3")
    if not 0.0 < instrument_prob < 1.0:
        raise ValueError("instrument_prob must lie in (0, 1)")
    sigma = np.eye(2) if sigma is None else np.asarray(sigma, dtype=float)
    if sigma.shape != (2, 2) or np.linalg.det(sigma) <= 0 or sigma[0, 0] <= 0:
        raise ValueError("sigma must be a 2x2 SPD matrix")
    rng = np.random.default_rng(seed)
    z = rng.binomial(1, instrument_prob, size=n).astype(float)
    chol = np.linalg.cholesky(sigma)
    resid = rng.standard_normal((n, 2)) @ chol.T
    eps, v = resid[:, 0], resid[:, 1]
    x = z * pi + v
    y = x * beta + eps
    return IVData(y=y, x=x, z=z)


class IVTarget(Target):
    """Joint 5-parameter target; grids use the analytic Sigma-marginal."""

    name = "iv"

    def __init__(self, data: IVData):
        self.data = data
        self.space = ParamSpace(
            [
                ParamDescriptor("beta", Real()),
                ParamDescriptor("pi", Real()),
                ParamDescriptor("sigma", Spd2x2()),
            ]
        )

    def log_density(self, params) -> float:
        beta, pi, s11, s21, s22 = np.asarray(params, dtype=float)
        if not (s11 > 0 and s11 * s22 - s21 * s21 > 0):
            return -np.inf
        return iv_joint_log_density(self.data, beta, pi,
                                    np.array([[s11, s21], [s21, s22]]))

    def log_density_grad(self, params):
        beta, pi, s11, s21, s22 = np.asarray(params, dtype=float)
        if not (s11 > 0 and s11 * s22 - s21 * s21 > 0):
            return -np.inf, np.zeros(5)
        return iv_joint_log_density_grad(self.data, beta, pi,
                                         np.array([[s11, s21], [s21, s22]]))

    def grid_density(self, x_param: str, y_param: str, fixed: dict[str, float]):
        """2-D slices run on the Sigma-marginalized profile over (beta, pi)."""
        if {x_param, y_param} != {"beta", "pi"}:
            raise ValueError(
                "the iv grid is defined over (beta, pi); the covariance is "
                "marginalized analytically"
            )
        if fixed:
            raise ValueError("no free parameters remain once sigma is marginalized")
        if x_param == "beta":
            return lambda x, y: iv_marginal_log_density(self.data, x, y)
        return lambda x, y: iv_marginal_log_density(self.data, y, x)
