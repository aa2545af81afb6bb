"""Deterministic self-verification suite built on the brute-force oracles.

Each check compares a fast-path computation against an independent oracle
and reports the worst observed metric against its threshold. The whole suite
runs in well under five minutes and is exposed as the ``check`` subcommand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import oracles
from .dists import gamma_logpdf, logsumexp
from .iv import iv_joint_log_density, iv_marginal_log_density, iv_residual_outer
from .lasso import lasso_log_density
from .nmixture import nmixture_log_density, nmixture_site_loglik, _upper_bound
from .occupancy import OccupancyData, occupancy_log_density, simulate_occupancy
from .reference import TARGET_NAMES, reference_target
from .regression import spike_slab_log_density
from .stochvol import stationary_sd
from .transforms import Interval, ParamDescriptor, ParamSpace, Positive, Real, Spd2x2, UnitInterval


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    metric: float
    threshold: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} {self.metric:.3e} {self.threshold:.3e}"


def _result(name: str, metric: float, threshold: float) -> CheckResult:
    ok = bool(np.isfinite(metric) and metric < threshold)
    return CheckResult(name=name, passed=ok, metric=float(metric), threshold=threshold)


# interior sampling boxes for randomized gradient checks, in unconstrained coords
_GRAD_BOXES = {
    "nmixture": (-1.5, 3.8),
    "occupancy": (-2.5, 2.5),
    "collinear": (-12.0, 12.0),
    "spike_slab": (-2.0, 2.0),
    "adaptive_lasso": (-3.0, 3.0),
    "iv": (-1.0, 1.0),
    "stoch_vol": (-1.5, 1.5),
}


def gradient_check(name: str, n_points: int = 20, h: float = 1e-5,
                   rng_seed: int = 2024) -> CheckResult:
    """Analytic versus central-finite-difference gradients at random interior
    points; the metric is max_i |g_i - fd_i| / max(1, |fd_i|)."""
    target = reference_target(name)
    lo, hi = _GRAD_BOXES[name]
    rng = np.random.default_rng(rng_seed)
    worst = 0.0
    for _ in range(n_points):
        u = rng.uniform(lo, hi, size=target.space.dim_unconstrained)
        if name == "adaptive_lasso" and abs(u[0]) < 0.05:
            u[0] = 0.2  # keep clear of the |beta| kink
        _, grad = target.logp_grad_u(u)
        fd = oracles.fd_gradient(target, u, h)
        err = np.abs(grad - fd) / np.maximum(1.0, np.abs(fd))
        worst = max(worst, float(np.nanmax(err)))
        if np.isnan(fd).any():
            worst = math.inf
    return _result(f"{name}.gradient_fd", worst, 1e-5)


def check_transform_roundtrip(seed: int = 5) -> CheckResult:
    rng = np.random.default_rng(seed)
    space = ParamSpace(
        [
            ParamDescriptor("a", Real()),
            ParamDescriptor("b", Positive()),
            ParamDescriptor("c", UnitInterval()),
            ParamDescriptor("d", Interval(-1.0, 1.0)),
            ParamDescriptor("e", Interval(0.001, 10.0)),
            ParamDescriptor("f", Spd2x2()),
        ]
    )
    worst = 0.0
    for _ in range(100):
        u = rng.uniform(-3.0, 3.0, size=space.dim_unconstrained)
        c, _ = space.to_constrained(u)
        u2 = space.to_unconstrained(c)
        c2, _ = space.to_constrained(u2)
        worst = max(
            worst,
            float(np.max(np.abs(u2 - u) / np.maximum(1.0, np.abs(u)))),
            float(np.max(np.abs(c2 - c) / np.maximum(1.0, np.abs(c)))),
        )
    return _result("core.transform_roundtrip", worst, 1e-12)


def check_transform_jacobian(seed: int = 6) -> CheckResult:
    rng = np.random.default_rng(seed)
    space = ParamSpace(
        [
            ParamDescriptor("a", Positive()),
            ParamDescriptor("b", UnitInterval()),
            ParamDescriptor("c", Interval(-1.0, 1.0)),
            ParamDescriptor("d", Spd2x2()),
        ]
    )
    h = 1e-6
    worst = 0.0
    for _ in range(50):
        u = rng.uniform(-2.0, 2.0, size=space.dim_unconstrained)
        _, log_jac = space.to_constrained(u)
        jac = np.empty((space.dim_constrained, space.dim_unconstrained))
        for i in range(space.dim_unconstrained):
            up = u.copy()
            um = u.copy()
            up[i] += h
            um[i] -= h
            jac[:, i] = (space.to_constrained(up)[0] - space.to_constrained(um)[0]) / (2 * h)
        fd_log_jac = math.log(abs(np.linalg.det(jac)))
        worst = max(worst, abs(fd_log_jac - log_jac))
    return _result("core.transform_jacobian_fd", worst, 1e-6)


def check_thinning_identity() -> CheckResult:
    worst = 0.0
    for y in (0, 3, 7):
        for p in np.linspace(0.05, 0.95, 10):
            for lam in np.linspace(1.0, 50.0, 10):
                direct = nmixture_site_loglik([y], float(p), float(lam))
                thinned = oracles.poisson_logpmf(y, float(lam * p))
                worst = max(worst, abs(direct - thinned))
    return _result("nmixture.thinning_identity", worst, 1e-9)


def check_truncation_stability() -> CheckResult:
    target = reference_target("nmixture")
    counts = target.data.counts
    worst = 0.0
    for p, lam in ((0.05, 80.0), (0.1, 30.0), (0.4, 8.0), (0.9, 2.0)):
        bound = _upper_bound(int(counts.max()), lam)
        for row in counts[:5]:
            a, b = oracles.nmixture_truncation_scan(row, p, lam, [bound, bound + 50])
            worst = max(worst, abs(b - a))
    return _result("nmixture.truncation_stability", worst, 1e-8)


def check_nmixture_reference_value() -> CheckResult:
    target = reference_target("nmixture")
    data = target.data
    fast = nmixture_log_density(data, 0.1, 30.0)
    bound = _upper_bound(int(data.counts.max()), 30.0) + 200
    slow = sum(
        oracles.nmixture_truncation_scan(row, 0.1, 30.0, [bound])[0]
        for row in data.counts
    )
    slow += gamma_logpdf(30.0, data.prior_shape, data.prior_rate)
    return _result("nmixture.reference_value", abs(fast - slow), 1e-9)


def check_occupancy_enumeration(seed: int = 9) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(5):
        k = rng.integers(1, 9, size=6)
        s = rng.integers(0, k + 1)
        data = OccupancyData(s=s, k=k)
        for psi, p in ((0.1, 0.1), (0.5, 0.5), (0.9, 0.2)):
            worst = max(
                worst,
                abs(occupancy_log_density(data, psi, p) - oracles.occupancy_enumerate(data, psi, p)),
            )
    return _result("occupancy.enumeration", worst, 1e-12)


def check_occupancy_pairwise() -> CheckResult:
    target = reference_target("occupancy")
    data = target.data
    total = 0.0
    for i in range(0, data.n_sites, 2):
        pair = OccupancyData(s=data.s[i : i + 2], k=data.k[i : i + 2])
        total += oracles.occupancy_enumerate(pair, 0.1, 0.1)
    full = occupancy_log_density(data, 0.1, 0.1)
    return _result("occupancy.pairwise_enumeration", abs(total - full), 1e-9)


def check_spike_slab_enumeration(seed: int = 13) -> CheckResult:
    target = reference_target("spike_slab")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        beta = rng.uniform(-3.0, 3.0, size=2)
        fast = spike_slab_log_density(target.data, target.prior, beta)
        slow = oracles.spike_slab_enumerate(target.data, target.prior, beta)
        worst = max(worst, abs(fast - slow))
    return _result("spike_slab.enumeration", worst, 1e-12)


def check_lasso_column_unimodal() -> CheckResult:
    """For fixed lambda the beta-conditional is log-concave: one local max."""
    target = reference_target("adaptive_lasso")
    betas = np.linspace(-10.0, 15.0, 301)
    worst = 0.0
    for lam in (0.01, 0.3, 2.0, 9.0):
        vals = np.array([lasso_log_density(target.data, float(b), lam) for b in betas])
        interior = vals[1:-1]
        n_max = int(np.sum((interior > vals[:-2]) & (interior > vals[2:])))
        worst = max(worst, float(n_max))
    return _result("adaptive_lasso.column_unimodal", worst, 1.5)


def check_iv_residual_outer(seed: int = 17) -> CheckResult:
    target = reference_target("iv")
    data = target.data
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(10):
        beta, pi = rng.uniform(-2.0, 2.0, size=2)
        fast = iv_residual_outer(data, beta, pi)
        slow = np.zeros((2, 2))
        for yi, xi, zi in zip(data.y, data.x, data.z):
            u = np.array([yi - beta * xi, xi - pi * zi])
            slow += np.outer(u, u)
        denom = max(1.0, float(np.abs(slow).max()))
        worst = max(worst, float(np.abs(fast - slow).max()) / denom)
    return _result("iv.residual_outer", worst, 1e-12)


def check_iv_joint_terms() -> CheckResult:
    target = reference_target("iv")
    data = target.data
    sigma = np.array([[1.3, 0.4], [0.4, 0.9]])
    fast = iv_joint_log_density(data, 0.1, 0.1, sigma)
    det = np.linalg.det(sigma)
    inv = np.linalg.inv(sigma)
    tr = 0.0
    for yi, xi, zi in zip(data.y, data.x, data.z):
        u = np.array([yi - 0.1 * xi, xi - 0.1 * zi])
        tr += float(u @ inv @ u)
    slow = -0.5 * (data.n + 3) * math.log(det) - 0.5 * tr - data.n * math.log(2 * math.pi)
    return _result("iv.joint_terms", abs(fast - slow) / max(1.0, abs(slow)), 1e-12)


def check_iv_quadrature(n_points: int = 3, seed: int = 23) -> CheckResult:
    """Constant gap between the analytic profile and the cubature integral."""
    target = reference_target("iv")
    rng = np.random.default_rng(seed)
    points = [(0.1, 0.1), (0.3, -0.2)]
    while len(points) < n_points:
        points.append(tuple(rng.uniform(-0.6, 0.6, size=2)))
    constants = []
    for beta, pi in points:
        quad = oracles.iv_sigma_quadrature(target.data, beta, pi)
        if not quad.converged:
            return _result("iv.marginal_quadrature", math.inf, 1e-3)
        constants.append(quad.log_value - iv_marginal_log_density(target.data, beta, pi))
    constants = np.asarray(constants)
    spread = float(constants.max() - constants.min()) / abs(float(constants.mean()))
    return _result("iv.marginal_quadrature", spread, 1e-3)


def check_sv_transition_rewrite(seed: int = 29) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(200):
        mu, h = rng.uniform(-5.0, 5.0, size=2)
        phi = rng.uniform(-0.999, 0.999)
        a = mu + phi * (h - mu)
        b = (1.0 - phi) * mu + phi * h
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return _result("stoch_vol.transition_rewrite", worst, 1e-12)


def check_sv_h1_sd_diverges() -> CheckResult:
    phis = np.linspace(0.0, 0.999999, 200)
    sds = np.array([stationary_sd(float(p), 0.1) for p in phis])
    monotone = bool(np.all(np.diff(sds) > 0))
    big = sds[-1] > 1e2 * sds[0]
    return _result("stoch_vol.h1_prior_sd_diverges", 0.0 if (monotone and big) else 1.0, 0.5)


def check_logsumexp() -> CheckResult:
    worst = abs(logsumexp([0.0, 0.0]) - math.log(2.0))
    worst = max(worst, abs(logsumexp([-np.inf, 3.5]) - 3.5))
    worst = max(worst, abs(logsumexp([1000.0, 1000.1]) - (1000.1 + np.log1p(math.exp(-0.1)))))
    worst = max(worst, abs(logsumexp([1e6, 1e6]) - (1e6 + math.log(2.0))))
    return _result("core.logsumexp", worst, 1e-12)


_CORE_CHECKS = [check_transform_roundtrip, check_transform_jacobian, check_logsumexp]

_TARGET_CHECKS = {
    "nmixture": [check_thinning_identity, check_truncation_stability, check_nmixture_reference_value],
    "occupancy": [check_occupancy_enumeration, check_occupancy_pairwise],
    "collinear": [],
    "spike_slab": [check_spike_slab_enumeration],
    "adaptive_lasso": [check_lasso_column_unimodal],
    "iv": [check_iv_residual_outer, check_iv_joint_terms, check_iv_quadrature],
    "stoch_vol": [check_sv_transition_rewrite, check_sv_h1_sd_diverges],
}


def run_checks(target: str | None = None) -> list[CheckResult]:
    """Run the oracle suite for one target, or everything when target is None."""
    results = []
    if target is None:
        for fn in _CORE_CHECKS:
            results.append(fn())
        names = TARGET_NAMES
    else:
        if target not in _TARGET_CHECKS:
            raise KeyError(f"unknown target {target!r}; known: {tuple(_TARGET_CHECKS)}")
        names = (target,)
    for name in names:
        for fn in _TARGET_CHECKS[name]:
            results.append(fn())
        results.append(gradient_check(name))
    return results
