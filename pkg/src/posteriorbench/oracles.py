"""Independent brute-force verifiers.

Every function here validates a fast-path operation without calling it:
exhaustive latent-variable enumeration, explicit truncated series, central
finite differences, and adaptive cubature over the covariance block. Only the
elementary log-pdfs in ``dists`` are shared with the code under test.

The same checks back the ``check`` CLI subcommand so a modified build can be
revalidated in place.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .dists import (
    binomial_logpmf,
    gamma_logpdf,
    logsumexp,
    normal_logpdf,
    poisson_logpmf,
)
from .iv import IVData
from .occupancy import OccupancyData
from .regression import RegressionData, SpikeSlabPrior
from .targets import Target

LOG_TWO_PI = math.log(2.0 * math.pi)


def fd_gradient(target: Target, theta_u, h: float = 1e-5) -> np.ndarray:
    """Central finite differences of the unconstrained log density.

    Coordinates whose stencil hits a non-finite value come back as NaN.
    """
    theta_u = np.asarray(theta_u, dtype=float)
    out = np.empty_like(theta_u)
    for i in range(theta_u.size):
        hi = theta_u.copy()
        lo = theta_u.copy()
        hi[i] += h
        lo[i] -= h
        f_hi = target.logp_u(hi)
        f_lo = target.logp_u(lo)
        out[i] = (f_hi - f_lo) / (2.0 * h) if np.isfinite(f_hi) and np.isfinite(f_lo) else np.nan
    return out


def occupancy_enumerate(data: OccupancyData, psi: float, p: float) -> float:
    """Exact marginal log-likelihood by summing over all 2^sites occupancy
    assignments; limited to 20 sites."""
    m = data.n_sites
    if m > 20:
        raise ValueError(f"enumeration over 2^{m} assignments refused (max 20 sites)")
    s = data.s
    k = data.k
    terms = []
    for z in itertools.product((0, 1), repeat=m):
        total = 0.0
        for zi, si, ki in zip(z, s, k):
            if zi:
                total += _log_pow(psi, 1) + _log_pow(p, si) + _log_pow(1.0 - p, ki - si)
            elif si == 0:
                total += _log_pow(1.0 - psi, 1)
            else:
                total = -np.inf
                break
        terms.append(total)
    return logsumexp(terms)


def _log_pow(base: float, exponent) -> float:
    if exponent == 0:
        return 0.0
    if base <= 0.0:
        return -np.inf
    return exponent * math.log(base)


def nmixture_truncation_scan(y_row, p: float, lam: float, bounds) -> list[float]:
    """Partial-sum log marginals of one site at explicit truncation points."""
    y_row = np.asarray(y_row, dtype=np.int64).ravel()
    bounds = list(bounds)
    if any(b2 <= b1 for b1, b2 in zip(bounds, bounds[1:])):
        raise ValueError("bounds must be strictly increasing")
    y_max = int(y_row.max())
    out = []
    for bound in bounds:
        terms = []
        for n in range(y_max, bound + 1):
            t = poisson_logpmf(n, lam)
            for y in y_row:
                t += binomial_logpmf(int(y), n, p)
            terms.append(t)
        out.append(logsumexp(terms) if terms else -np.inf)
    return out


def spike_slab_enumerate(data: RegressionData, prior: SpikeSlabPrior, beta) -> float:
    """Exact log posterior via the 4-term sum over component labels in {0,1}^2."""
    beta = np.asarray(beta, dtype=float).ravel()
    if data.dim != 2 or beta.size != 2:
        raise ValueError("enumeration requires exactly two coefficients")
    terms = []
    for z in itertools.product((0, 1), repeat=2):
        t = 0.0
        for zj, bj in zip(z, beta):
            if zj:
                t += math.log(prior.spike_prob)
                t += normal_logpdf(bj, 0.0, math.sqrt(prior.spike_var))
            else:
                t += math.log1p(-prior.spike_prob)
                t += normal_logpdf(bj, 0.0, math.sqrt(prior.slab_var))
        terms.append(t)
    log_prior = logsumexp(terms)
    loglik = 0.0
    for xi, yi in zip(data.X, data.y):
        loglik += normal_logpdf(yi, float(xi @ beta), data.noise_sd)
    return log_prior + loglik


@dataclass(frozen=True)
class QuadratureResult:
    log_value: float
    rel_err: float
    converged: bool


def iv_sigma_quadrature(data: IVData, beta: float, pi: float,
                        rel_tol: float = 1e-5) -> QuadratureResult:
    """Numerically integrate the joint density over the covariance block.

    Integration runs in (log l11, l21, log l22) Cholesky coordinates over a
    box centered at the inverse-Wishart mode, widened until the boundary
    contribution is negligible. Returns the log integral; ``converged`` is
    False when the cubature error report exceeds ``rel_tol`` relative.
    """
    n = data.n
    # residual scatter, summed explicitly and independently
    s11 = s21 = s22 = 0.0
    for yi, xi, zi in zip(data.y, data.x, data.z):
        e = yi - beta * xi
        v = xi - pi * zi
        s11 += e * e
        s21 += e * v
        s22 += v * v
    scatter = np.array([[s11, s21], [s21, s22]])

    def log_integrand(a: float, b: float, c: float) -> float:
        l11 = math.exp(a)
        l22 = math.exp(c)
        m11 = l11 * l11
        m21 = b * l11
        m22 = b * b + l22 * l22
        det = m11 * m22 - m21 * m21
        tr = (m22 * s11 - 2.0 * m21 * s21 + m11 * s22) / det
        logp = -0.5 * (n + 3) * math.log(det) - 0.5 * tr - n * LOG_TWO_PI
        return logp + math.log(4.0) + 3.0 * a + 2.0 * c

    try:
        mode = np.linalg.cholesky(scatter / (n + 3))
    except np.linalg.LinAlgError:
        return QuadratureResult(math.nan, math.inf, False)
    center = np.array([math.log(mode[0, 0]), mode[1, 0], math.log(mode[1, 1])])
    peak = log_integrand(*center)

    # curvature-scaled box, expanded until the faces carry negligible mass
    h = 1e-4
    sds = np.empty(3)
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        second = (log_integrand(*(center + e)) - 2.0 * peak + log_integrand(*(center - e))) / h**2
        sds[i] = 1.0 / math.sqrt(max(-second, 1e-6))
    width = 7.0
    for _ in range(8):
        boundary = -np.inf
        for i in range(3):
            for sign in (-1.0, 1.0):
                face = center.copy()
                face[i] += sign * width * sds[i]
                boundary = max(boundary, log_integrand(*face) - peak)
        if boundary < math.log(1e-8):
            break
        width *= 1.4

    ranges = [(center[i] - width * sds[i], center[i] + width * sds[i]) for i in range(3)]
    val, err = integrate.nquad(
        lambda a, b, c: math.exp(log_integrand(a, b, c) - peak),
        ranges,
        opts={"epsabs": 1e-12, "epsrel": 1e-9},
    )
    if not val > 0:
        return QuadratureResult(math.nan, math.inf, False)
    rel = err / val
    return QuadratureResult(peak + math.log(val), rel, rel < rel_tol)
