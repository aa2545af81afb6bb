"""Common interface for posterior targets.

A target bundles a dataset with an unnormalized log posterior over a named
parameter space and supplies both evaluations used downstream:

* constrained space, no transform Jacobian -- what the contour grids plot;
* unconstrained space, with the log-Jacobian of the transform added -- what
  the samplers and finite-difference checks operate on.

Targets are immutable after construction and all evaluations are pure, so a
single instance may be shared freely across threads.
"""

from __future__ import annotations

import numpy as np

from .transforms import ParamSpace


class Target:
    """Base class; subclasses set ``name``/``space`` and the density pair."""

    name: str = "?"
    space: ParamSpace

    def log_density(self, params) -> float:
        """Unnormalized log posterior at a constrained vector (no Jacobian)."""
        raise NotImplementedError

    def log_density_grad(self, params) -> tuple[float, np.ndarray]:
        """Value and gradient with respect to the constrained coordinates."""
        raise NotImplementedError

    # -- unconstrained-space evaluation ------------------------------------

    def logp_u(self, u) -> float:
        c, log_jac = self.space.to_constrained(u)
        lp = self.log_density(c)
        return lp + log_jac if np.isfinite(lp) else lp

    def logp_grad_u(self, u) -> tuple[float, np.ndarray]:
        u = np.asarray(u, dtype=float)
        c, log_jac = self.space.to_constrained(u)
        lp, grad_c = self.log_density_grad(c)
        if not np.isfinite(lp):
            return lp, np.zeros_like(u)
        return lp + log_jac, self.space.chain_grad(u, c, grad_c)

    # -- 2-D grid support ---------------------------------------------------

    def grid_density(self, x_param: str, y_param: str, fixed: dict[str, float]):
        """Return f(x, y) -> log density for a 2-D slice in constrained space.

        Non-axis coordinates must all be pinned through ``fixed``.
        """
        names = self.space.constrained_names()
        if x_param not in names or y_param not in names:
            raise ValueError(f"axis parameters must be among {names}")
        template = np.empty(len(names))
        for k, name in enumerate(names):
            if name in (x_param, y_param):
                continue
            if name not in fixed:
                raise ValueError(f"parameter {name!r} is neither an axis nor fixed")
            template[k] = float(fixed[name])
        xi = names.index(x_param)
        yi = names.index(y_param)

        def fn(x: float, y: float) -> float:
            point = template.copy()
            point[xi] = x
            point[yi] = y
            return self.log_density(point)

        return fn


class MvNormalTarget(Target):
    """Multivariate normal with known moments, for sampler calibration."""

    name = "mvnormal"

    def __init__(self, mean, cov):
        from .transforms import ParamDescriptor, Real

        self.mean = np.asarray(mean, dtype=float)
        self.cov = np.asarray(cov, dtype=float)
        d = self.mean.shape[0]
        if self.cov.shape != (d, d):
            raise ValueError("mean/cov dimension mismatch")
        self.precision = np.linalg.inv(self.cov)
        _, self._logdet = np.linalg.slogdet(self.cov)
        self.space = ParamSpace(
            [ParamDescriptor(f"x{i + 1}", Real()) for i in range(d)]
        )

    def log_density(self, params) -> float:
        r = np.asarray(params, dtype=float) - self.mean
        d = self.mean.shape[0]
        return float(
            -0.5 * r @ self.precision @ r
            - 0.5 * self._logdet
            - 0.5 * d * np.log(2.0 * np.pi)
        )

    def log_density_grad(self, params):
        r = np.asarray(params, dtype=float) - self.mean
        g = -self.precision @ r
        return self.log_density(params), g
