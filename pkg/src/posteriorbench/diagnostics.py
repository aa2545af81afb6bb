"""Convergence diagnostics: split R-hat and autocorrelation-based ESS."""

from __future__ import annotations

import numpy as np


def _as_chains(draws) -> np.ndarray:
    arr = np.asarray(draws, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError("draws must be a (chains, iterations) array")
    return arr


def split_rhat(draws) -> float:
    """Potential scale reduction on half-chains.

    Each chain is split in two (odd middle element dropped), then
    sqrt(((n-1)/n W + B/n) / W) over the half-chains. Zero within-chain
    variance returns the +inf sentinel.
    """
    arr = _as_chains(draws)
    half = arr.shape[1] // 2
    if half < 4:
        raise ValueError("need at least 8 draws per chain for split R-hat")
    halves = np.vstack([arr[:, :half], arr[:, arr.shape[1] - half :]])
    n = half
    within = halves.var(axis=1, ddof=1)
    w = float(within.mean())
    if w == 0.0:
        return float("inf")
    b = n * float(halves.mean(axis=1).var(ddof=1))
    var_plus = (n - 1) / n * w + b / n
    return float(np.sqrt(var_plus / w))


def ess(draws) -> float:
    """Effective sample size from pooled-chain autocovariance.

    Per-chain autocovariances are averaged, converted to correlations against
    the pooled variance estimate, and summed in (Geyer) pairs until the first
    nonpositive pair. Capped at 1.05x the total draw count; a constant series
    has ESS 0.
    """
    arr = _as_chains(draws)
    m, n = arr.shape
    if n < 4:
        raise ValueError("need at least 4 draws per chain")
    within = arr.var(axis=1, ddof=1)
    w = float(within.mean())
    if w == 0.0:
        return 0.0
    b_over_n = float(arr.mean(axis=1).var(ddof=1)) if m > 1 else 0.0
    var_plus = (n - 1) / n * w + b_over_n

    acov = np.zeros(n)
    for chain in arr:
        acov += _autocov(chain)
    acov /= m
    rho = 1.0 - (w - acov) / var_plus

    tau = 0.0
    rho0 = rho[0]
    half = n // 2
    for t in range(half):
        pair = rho[2 * t] + (rho[2 * t + 1] if 2 * t + 1 < n else 0.0)
        if pair <= 0.0:
            break
        tau += 2.0 * pair
    tau -= rho0
    tau = max(tau, 1e-12)
    total = float(m * n)
    return float(min(total / tau, 1.05 * total))


def _autocov(x: np.ndarray) -> np.ndarray:
    """Biased (1/n) autocovariance via FFT."""
    n = x.size
    centered = x - x.mean()
    size = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(centered, size)
    acov = np.fft.irfft(f * np.conj(f), size)[:n].real
    return acov / n
