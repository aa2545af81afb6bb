"""Reference samplers on unconstrained space.

Two algorithms, both Metropolis-corrected and seed-deterministic:

* ``rwm``: isotropic Gaussian random-walk proposals whose scale is adapted
  during warmup by stochastic approximation toward a target acceptance rate
  and frozen afterwards.
* ``hmc``: leapfrog Hamiltonian Monte Carlo with identity mass matrix, step
  size adapted during warmup by dual averaging, and the leapfrog count
  jittered uniformly within +-50% per iteration.

Chains run independently from generators seeded ``seed + chain_index``;
draws are reported in constrained space.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import ess, split_rhat
from .targets import Target

_INIT_RETRIES = 100


class SamplerInitError(RuntimeError):
    """Raised when no finite-density start point is found."""


@dataclass(frozen=True)
class SamplerConfig:
    seed: int
    algorithm: str = "hmc"
    chains: int = 4
    warmup: int = 1000
    iters: int = 1000
    target_accept: float | None = None  # 0.8 hmc, 0.3 rwm
    leapfrog_steps: int = 32
    step_size: float | None = None  # fix the hmc step size, disabling adaptation

    def __post_init__(self):
        if self.algorithm not in ("rwm", "hmc"):
            raise ValueError("algorithm must be 'rwm' or 'hmc'")
        if self.chains < 1 or self.iters < 1 or self.warmup < 0:
            raise ValueError("need chains >= 1, iters >= 1, warmup >= 0")
        if self.leapfrog_steps < 1:
            raise ValueError("leapfrog_steps must be >= 1")
        if self.target_accept is not None and not 0.0 < self.target_accept < 1.0:
            raise ValueError("target_accept must lie in (0, 1)")

    @property
    def accept_goal(self) -> float:
        if self.target_accept is not None:
            return self.target_accept
        return 0.8 if self.algorithm == "hmc" else 0.3


@dataclass
class ChainSet:
    names: list[str]
    draws: np.ndarray  # (chains, iters, dim_constrained)
    accept_rate: np.ndarray  # per chain, post-warmup
    step_size: np.ndarray  # per chain, frozen after warmup
    divergences: int  # post-warmup, all chains
    diagnostics: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return self.draws[:, :, self.names.index(name)]


def _init_point(target: Target, rng: np.random.Generator) -> np.ndarray:
    dim = target.space.dim_unconstrained
    for _ in range(_INIT_RETRIES):
        u = rng.uniform(-2.0, 2.0, size=dim)
        if np.isfinite(target.logp_u(u)):
            return u
    raise SamplerInitError(
        f"no finite initial density for {target.name!r} in {_INIT_RETRIES} tries"
    )


def leapfrog(value_grad, u, p, step: float, steps: int):
    """Integrate Hamilton's equations; returns (u, p, logp, ok).

    ``ok`` is False as soon as a non-finite density or gradient is met, which
    callers count as a divergent proposal.
    """
    lp, grad = value_grad(u)
    if not (np.isfinite(lp) and np.isfinite(grad).all()):
        return u, p, lp, False
    u = np.array(u, dtype=float)
    p = np.array(p, dtype=float)
    p += 0.5 * step * grad
    for k in range(steps):
        u += step * p
        lp, grad = value_grad(u)
        if not (np.isfinite(lp) and np.isfinite(grad).all()):
            return u, p, lp, False
        p += (0.5 if k == steps - 1 else 1.0) * step * grad
    return u, p, lp, True


def _find_reasonable_step(value_grad, u, rng) -> float:
    """Crude doubling/halving so one leapfrog step has accept prob near 0.5."""
    step = 1.0
    lp0, _ = value_grad(u)
    p = rng.standard_normal(u.size)
    h0 = -lp0 + 0.5 * p @ p
    u1, p1, lp1, ok = leapfrog(value_grad, u, p, step, 1)
    log_ratio = (-(-lp1 + 0.5 * p1 @ p1) + h0) if ok else -np.inf
    direction = 1.0 if log_ratio > math.log(0.5) else -1.0
    for _ in range(50):
        step *= 2.0**direction
        u1, p1, lp1, ok = leapfrog(value_grad, u, p, step, 1)
        log_ratio = (-(-lp1 + 0.5 * p1 @ p1) + h0) if ok else -np.inf
        if direction * log_ratio <= direction * math.log(0.5):
            break
    return step


def _hmc_chain(target: Target, config: SamplerConfig, chain_seed: int):
    rng = np.random.default_rng(chain_seed)
    vg = target.logp_grad_u
    u = _init_point(target, rng)
    lp = target.logp_u(u)
    dim = u.size

    fixed_step = config.step_size is not None
    step = config.step_size if fixed_step else _find_reasonable_step(vg, u, rng)
    # dual averaging state (Hoffman-Gelman constants)
    mu_da = math.log(10.0 * step)
    log_step_bar = math.log(step)
    h_bar = 0.0
    gamma, t0, kappa = 0.05, 10.0, 0.75

    lo = max(1, int(round(0.5 * config.leapfrog_steps)))
    hi = max(lo, int(round(1.5 * config.leapfrog_steps)))

    draws = np.empty((config.iters, target.space.dim_constrained))
    accepts = 0
    divergences = 0
    total = config.warmup + config.iters
    for it in range(total):
        steps = int(rng.integers(lo, hi + 1))
        p = rng.standard_normal(dim)
        h0 = -lp + 0.5 * p @ p
        u_new, p_new, lp_new, ok = leapfrog(vg, u, p, step, steps)
        if ok:
            h1 = -lp_new + 0.5 * p_new @ p_new
            log_alpha = min(0.0, h0 - h1) if np.isfinite(h1) else -np.inf
        else:
            log_alpha = -np.inf
        alpha = math.exp(log_alpha) if np.isfinite(log_alpha) else 0.0
        if math.log(rng.uniform()) < log_alpha:
            u, lp = u_new, lp_new
            accepted = True
        else:
            accepted = False

        if it < config.warmup:
            if not fixed_step:
                t = it + 1
                eta = 1.0 / (t + t0)
                h_bar = (1.0 - eta) * h_bar + eta * (config.accept_goal - alpha)
                log_step = mu_da - math.sqrt(t) / gamma * h_bar
                weight = t**-kappa
                log_step_bar = weight * log_step + (1.0 - weight) * log_step_bar
                step = math.exp(log_step)
                if it + 1 == config.warmup:
                    step = math.exp(log_step_bar)  # freeze at the averaged value
        else:
            if not ok:
                divergences += 1
            if accepted:
                accepts += 1
            draws[it - config.warmup] = target.space.to_constrained(u)[0]
    return draws, accepts / config.iters, step, divergences


def _rwm_chain(target: Target, config: SamplerConfig, chain_seed: int):
    rng = np.random.default_rng(chain_seed)
    u = _init_point(target, rng)
    lp = target.logp_u(u)
    dim = u.size
    scale = 2.38 / math.sqrt(dim)

    draws = np.empty((config.iters, target.space.dim_constrained))
    accepts = 0
    total = config.warmup + config.iters
    for it in range(total):
        proposal = u + scale * rng.standard_normal(dim)
        lp_new = target.logp_u(proposal)
        log_alpha = min(0.0, lp_new - lp) if np.isfinite(lp_new) else -np.inf
        if math.log(rng.uniform()) < log_alpha:
            u, lp = proposal, lp_new
            accepted = True
        else:
            accepted = False
        if it < config.warmup:
            alpha = math.exp(log_alpha) if np.isfinite(log_alpha) else 0.0
            scale = math.exp(
                math.log(scale) + (alpha - config.accept_goal) / (it + 1) ** 0.6
            )
        else:
            if accepted:
                accepts += 1
            draws[it - config.warmup] = target.space.to_constrained(u)[0]
    return draws, accepts / config.iters, scale, 0


def sample(target: Target, config: SamplerConfig) -> ChainSet:
    """Run all chains and attach split R-hat / ESS per parameter."""
    kernel = _hmc_chain if config.algorithm == "hmc" else _rwm_chain
    names = target.space.constrained_names()
    all_draws = np.empty((config.chains, config.iters, target.space.dim_constrained))
    accept = np.empty(config.chains)
    steps = np.empty(config.chains)
    divergences = 0
    for c in range(config.chains):
        draws, acc, step, div = kernel(target, config, config.seed + c)
        all_draws[c] = draws
        accept[c] = acc
        steps[c] = step
        divergences += div
    chains = ChainSet(
        names=names,
        draws=all_draws,
        accept_rate=accept,
        step_size=steps,
        divergences=divergences,
    )
    diag = {}
    for k, name in enumerate(names):
        series = all_draws[:, :, k]
        diag[name] = {
            "rhat": split_rhat(series) if config.iters >= 8 else float("nan"),
            "ess": ess(series) if config.iters >= 4 else float("nan"),
        }
    chains.diagnostics = diag
    return chains


def rwm_sample(target: Target, config: SamplerConfig) -> ChainSet:
    if config.algorithm != "rwm":
        raise ValueError("config.algorithm must be 'rwm'")
    return sample(target, config)


def hmc_sample(target: Target, config: SamplerConfig) -> ChainSet:
    if config.algorithm != "hmc":
        raise ValueError("config.algorithm must be 'hmc'")
    return sample(target, config)


def write_draws_csv(chains: ChainSet, path) -> None:
    """One row per post-warmup draw: chain, iter, then constrained coordinates."""
    try:
        with open(path, "w") as fh:
            fh.write("chain,iter," + ",".join(chains.names) + "\n")
            n_chains, n_iters, _ = chains.draws.shape
            for c in range(n_chains):
                for t in range(n_iters):
                    row = ",".join(f"{v:.17g}" for v in chains.draws[c, t])
                    fh.write(f"{c},{t},{row}\n")
    except OSError as exc:
        raise OSError(f"cannot write draws CSV to {path}: {exc}") from exc


def write_diagnostics_json(chains: ChainSet, path) -> None:
    payload = {
        "params": chains.diagnostics,
        "accept_rate": [float(a) for a in chains.accept_rate],
        "step_size": [float(s) for s in chains.step_size],
        "divergences": chains.divergences,
    }
    try:
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write diagnostics to {path}: {exc}") from exc
