"""Elementary log-densities and numerically stable summation.

All values are extended reals encoded as plain floats: ``-inf`` means zero
mass, ``+inf`` is reserved for the instrumental-variable profile density and
is never produced here. Out-of-support *arguments* yield ``-inf``; invalid
*parameters* (negative scales, empty inputs) raise ``ValueError``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln, xlog1py, xlogy

LOG_TWO_PI = math.log(2.0 * math.pi)


def logsumexp(values) -> float:
    """log(sum(exp(values))) via max-shifting.

    Safe for inputs of any magnitude (no overflow up to +-1e6 and far
    beyond). Entries equal to -inf contribute zero mass; an all--inf input
    returns -inf. Empty input raises ValueError.
    """
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError("logsumexp of an empty vector")
    m = np.max(arr)
    if not np.isfinite(m):
        # all -inf, or a +inf entry dominates, or NaN propagates
        return float(m + 0.0) if not np.isnan(m) else float("nan")
    return float(m + math.log(np.sum(np.exp(arr - m))))


def poisson_logpmf(k, mean):
    """Log pmf of Poisson(mean) at integer count(s) k; -inf for k < 0."""
    if not mean > 0.0:
        raise ValueError(f"Poisson mean must be positive, got {mean}")
    k = np.asarray(k, dtype=float)
    out = xlogy(k, mean) - mean - gammaln(k + 1.0)
    out = np.where(k >= 0, out, -np.inf)
    return float(out) if out.ndim == 0 else out


def binomial_logpmf(k, n, p):
    """Log pmf of Binomial(n, p) at k; p in [0, 1] inclusive (p=1 as a limit)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"binomial p must lie in [0, 1], got {p}")
    k = np.asarray(k, dtype=float)
    n = np.asarray(n, dtype=float)
    out = (
        gammaln(n + 1.0)
        - gammaln(k + 1.0)
        - gammaln(n - k + 1.0)
        + xlogy(k, p)
        + xlog1py(n - k, -p)
    )
    out = np.where((k >= 0) & (k <= n), out, -np.inf)
    return float(out) if out.ndim == 0 else out


def bernoulli_logpmf(k, p):
    """Log pmf of Bernoulli(p) at k in {0, 1}."""
    return binomial_logpmf(k, 1, p)


def normal_logpdf(x, mean, sd):
    """Log pdf of Normal(mean, sd); sd is a standard deviation (scalar or array)."""
    sd = np.asarray(sd, dtype=float)
    if not np.all(sd > 0.0):
        raise ValueError(f"normal sd must be positive, got {sd}")
    x = np.asarray(x, dtype=float)
    z = (x - mean) / sd
    out = -0.5 * LOG_TWO_PI - np.log(sd) - 0.5 * z * z
    return float(out) if out.ndim == 0 else out


def gamma_logpdf(x, shape, rate):
    """Log pdf of Gamma(shape, rate) at x; -inf for x <= 0."""
    if not (shape > 0.0 and rate > 0.0):
        raise ValueError(f"gamma shape/rate must be positive, got {shape}, {rate}")
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = shape * math.log(rate) - gammaln(shape) + xlogy(shape - 1.0, x) - rate * x
    out = np.where(x > 0, out, -np.inf)
    return float(out) if out.ndim == 0 else out


def uniform_logpdf(x, lo, hi):
    """Log pdf of Uniform(lo, hi); -inf outside [lo, hi]."""
    if not lo < hi:
        raise ValueError(f"uniform requires lo < hi, got ({lo}, {hi})")
    x = np.asarray(x, dtype=float)
    out = np.where((x >= lo) & (x <= hi), -math.log(hi - lo), -np.inf)
    return float(out) if out.ndim == 0 else out


def laplace_logpdf(x, loc, scale):
    """Log pdf of Laplace(loc, scale) with density exp(-|x-loc|/scale)/(2 scale)."""
    if not scale > 0.0:
        raise ValueError(f"laplace scale must be positive, got {scale}")
    x = np.asarray(x, dtype=float)
    out = -math.log(2.0 * scale) - np.abs(x - loc) / scale
    return float(out) if out.ndim == 0 else out


def cauchy_logpdf(x, loc, scale):
    """Log pdf of Cauchy(loc, scale)."""
    if not scale > 0.0:
        raise ValueError(f"cauchy scale must be positive, got {scale}")
    x = np.asarray(x, dtype=float)
    z = (x - loc) / scale
    out = -math.log(math.pi * scale) - np.log1p(z * z)
    return float(out) if out.ndim == 0 else out


def half_cauchy_logpdf(x, scale):
    """Log pdf of a Cauchy(0, scale) restricted to x >= 0 (doubled mass)."""
    if not scale > 0.0:
        raise ValueError(f"half-cauchy scale must be positive, got {scale}")
    x = np.asarray(x, dtype=float)
    out = np.where(x >= 0, math.log(2.0) + cauchy_logpdf(np.abs(x), 0.0, scale), -np.inf)
    return float(out) if out.ndim == 0 else out


_DISPATCH = {
    "poisson": poisson_logpmf,
    "binomial": binomial_logpmf,
    "bernoulli": bernoulli_logpmf,
    "normal": normal_logpdf,
    "gamma": gamma_logpdf,
    "uniform": uniform_logpdf,
    "laplace": laplace_logpdf,
    "cauchy": cauchy_logpdf,
    "half_cauchy": half_cauchy_logpdf,
}


def log_pdf(dist: str, params, x):
    """Dispatch log density/mass by distribution tag.

    ``params`` is the positional parameter tuple of the matching function,
    e.g. ``log_pdf("normal", (0.0, 1.0), 0.0)``. Unknown tags and invalid
    parameters raise ValueError.
    """
    try:
        fn = _DISPATCH[dist]
    except KeyError:
        raise ValueError(f"unknown distribution tag {dist!r}") from None
    return fn(x, *params)
