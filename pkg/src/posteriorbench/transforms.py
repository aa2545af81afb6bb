"""Parameter supports and smooth bijections onto unconstrained space.

Every support maps a block of unconstrained coordinates ``u`` to constrained
coordinates ``c`` together with the log absolute determinant of ``dc/du``.
Scalar supports use the standard maps (logistic for the unit interval, scaled
logistic for a finite interval, exp for the half line); 2x2 symmetric
positive-definite matrices use a Cholesky factor with log-transformed
diagonal, packed as ``(s11, s21, s22)``.

The maps are total on unconstrained space; the inverse raises ValueError on
or outside the support boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _softplus(t: float) -> float:
    # log(1 + exp(t)) without overflow
    return float(np.logaddexp(0.0, t))


def _sigmoid(t: float) -> float:
    if t >= 0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


class Support:
    """One block of a parameter space: sizes, bijection, and gradient chain."""

    size_c = 1  # constrained coordinates
    size_u = 1  # unconstrained coordinates

    def constrain(self, u: np.ndarray) -> tuple[np.ndarray, float]:
        raise NotImplementedError

    def unconstrain(self, c: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def chain_grad(self, u: np.ndarray, c: np.ndarray, grad_c: np.ndarray) -> np.ndarray:
        """Map d(logp)/dc to d/du of logp(c(u)) + log|det dc/du|."""
        raise NotImplementedError

    def contains(self, c: np.ndarray) -> bool:
        raise NotImplementedError

    def label(self) -> str:
        raise NotImplementedError

    def coord_names(self, name: str) -> list[str]:
        return [name]


@dataclass(frozen=True)
class Real(Support):
    def constrain(self, u):
        return np.array([u[0]]), 0.0

    def unconstrain(self, c):
        return np.array([c[0]])

    def chain_grad(self, u, c, grad_c):
        return np.array([grad_c[0]])

    def contains(self, c):
        return bool(np.isfinite(c[0]))

    def label(self):
        return "real"


@dataclass(frozen=True)
class Positive(Support):
    def constrain(self, u):
        x = math.exp(u[0])
        return np.array([x]), float(u[0])

    def unconstrain(self, c):
        if not c[0] > 0.0:
            raise ValueError(f"value {c[0]} is not strictly positive")
        return np.array([math.log(c[0])])

    def chain_grad(self, u, c, grad_c):
        return np.array([grad_c[0] * c[0] + 1.0])

    def contains(self, c):
        return bool(c[0] > 0.0)

    def label(self):
        return "positive"


@dataclass(frozen=True)
class UnitInterval(Support):
    def constrain(self, u):
        s = _sigmoid(u[0])
        log_jac = -(_softplus(u[0]) + _softplus(-u[0]))
        return np.array([s]), log_jac

    def unconstrain(self, c):
        if not 0.0 < c[0] < 1.0:
            raise ValueError(f"value {c[0]} is not strictly inside (0, 1)")
        return np.array([math.log(c[0]) - math.log1p(-c[0])])

    def chain_grad(self, u, c, grad_c):
        s = c[0]
        return np.array([grad_c[0] * s * (1.0 - s) + (1.0 - 2.0 * s)])

    def contains(self, c):
        return bool(0.0 < c[0] < 1.0)

    def label(self):
        return "unit_interval"


@dataclass(frozen=True)
class Interval(Support):
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"interval requires lo < hi, got ({self.lo}, {self.hi})")

    def constrain(self, u):
        s = _sigmoid(u[0])
        width = self.hi - self.lo
        log_jac = math.log(width) - (_softplus(u[0]) + _softplus(-u[0]))
        return np.array([self.lo + width * s]), log_jac

    def unconstrain(self, c):
        if not self.lo < c[0] < self.hi:
            raise ValueError(f"value {c[0]} is not strictly inside ({self.lo}, {self.hi})")
        s = (c[0] - self.lo) / (self.hi - self.lo)
        return np.array([math.log(s) - math.log1p(-s)])

    def chain_grad(self, u, c, grad_c):
        width = self.hi - self.lo
        s = (c[0] - self.lo) / width
        return np.array([grad_c[0] * width * s * (1.0 - s) + (1.0 - 2.0 * s)])

    def contains(self, c):
        return bool(self.lo < c[0] < self.hi)

    def label(self):
        return f"interval({self.lo},{self.hi})"


@dataclass(frozen=True)
class Spd2x2(Support):
    """2x2 SPD matrices packed as (s11, s21, s22).

    Unconstrained coordinates are (log l11, l21, log l22) of the lower
    Cholesky factor. log|det d(s11,s21,s22)/du| = log 4 + 3 log l11 + 2 log l22.
    """

    size_c = 3
    size_u = 3

    def constrain(self, u):
        l11 = math.exp(u[0])
        l21 = u[1]
        l22 = math.exp(u[2])
        c = np.array([l11 * l11, l21 * l11, l21 * l21 + l22 * l22])
        log_jac = math.log(4.0) + 3.0 * u[0] + 2.0 * u[2]
        return c, log_jac

    def unconstrain(self, c):
        s11, s21, s22 = c
        if not s11 > 0.0:
            raise ValueError("matrix is not positive definite (s11 <= 0)")
        l11 = math.sqrt(s11)
        l21 = s21 / l11
        rem = s22 - l21 * l21
        if not rem > 0.0:
            raise ValueError("matrix is not positive definite (Schur complement <= 0)")
        return np.array([math.log(l11), l21, 0.5 * math.log(rem)])

    def chain_grad(self, u, c, grad_c):
        l11 = math.exp(u[0])
        l21 = u[1]
        l22 = math.exp(u[2])
        g11, g21, g22 = grad_c
        return np.array(
            [
                g11 * 2.0 * l11 * l11 + g21 * l21 * l11 + 3.0,
                g21 * l11 + g22 * 2.0 * l21,
                g22 * 2.0 * l22 * l22 + 2.0,
            ]
        )

    def contains(self, c):
        s11, s21, s22 = c
        return bool(s11 > 0.0 and s22 > 0.0 and s11 * s22 - s21 * s21 > 0.0)

    def label(self):
        return "spd2x2"

    def coord_names(self, name):
        return [f"{name}11", f"{name}21", f"{name}22"]


@dataclass(frozen=True)
class ParamDescriptor:
    """A named parameter block with its support."""

    name: str
    support: Support


class ParamSpace:
    """Ordered parameter blocks with the joint bijection to R^n."""

    def __init__(self, descriptors):
        descriptors = tuple(descriptors)
        names = [d.name for d in descriptors]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate parameter names in {names}")
        self.descriptors = descriptors
        c_slices, u_slices = [], []
        ci = ui = 0
        for d in descriptors:
            c_slices.append(slice(ci, ci + d.support.size_c))
            u_slices.append(slice(ui, ui + d.support.size_u))
            ci += d.support.size_c
            ui += d.support.size_u
        self._c_slices = tuple(c_slices)
        self._u_slices = tuple(u_slices)

    @property
    def dim_constrained(self) -> int:
        return sum(d.support.size_c for d in self.descriptors)

    @property
    def dim_unconstrained(self) -> int:
        return sum(d.support.size_u for d in self.descriptors)

    def constrained_names(self) -> list[str]:
        out = []
        for d in self.descriptors:
            out.extend(d.support.coord_names(d.name))
        return out

    def to_constrained(self, u) -> tuple[np.ndarray, float]:
        """Map unconstrained u to (constrained vector, log|det dc/du|)."""
        u = np.asarray(u, dtype=float)
        if u.shape != (self.dim_unconstrained,):
            raise ValueError(
                f"expected unconstrained vector of length {self.dim_unconstrained}, "
                f"got shape {u.shape}"
            )
        c = np.empty(self.dim_constrained)
        log_jac = 0.0
        for d, cs, us in zip(self.descriptors, self._c_slices, self._u_slices):
            c[cs], lj = d.support.constrain(u[us])
            log_jac += lj
        return c, log_jac

    def to_unconstrained(self, c) -> np.ndarray:
        """Inverse map; raises ValueError on or outside a support boundary."""
        c = np.asarray(c, dtype=float)
        if c.shape != (self.dim_constrained,):
            raise ValueError(
                f"expected constrained vector of length {self.dim_constrained}, "
                f"got shape {c.shape}"
            )
        u = np.empty(self.dim_unconstrained)
        for d, cs, us in zip(self.descriptors, self._c_slices, self._u_slices):
            try:
                u[us] = d.support.unconstrain(c[cs])
            except ValueError as exc:
                raise ValueError(f"parameter {d.name!r}: {exc}") from None
        return u

    def chain_grad(self, u, c, grad_c) -> np.ndarray:
        """Gradient of logp(c(u)) + log|det dc/du| given d(logp)/dc."""
        u = np.asarray(u, dtype=float)
        c = np.asarray(c, dtype=float)
        grad_c = np.asarray(grad_c, dtype=float)
        g = np.empty(self.dim_unconstrained)
        for d, cs, us in zip(self.descriptors, self._c_slices, self._u_slices):
            g[us] = d.support.chain_grad(u[us], c[cs], grad_c[cs])
        return g

    def contains(self, c) -> bool:
        """True if c lies strictly inside every support."""
        c = np.asarray(c, dtype=float)
        return all(
            d.support.contains(c[cs]) for d, cs in zip(self.descriptors, self._c_slices)
        )

    def index_of(self, coord_name: str) -> int:
        names = self.constrained_names()
        try:
            return names.index(coord_name)
        except ValueError:
            raise KeyError(f"no parameter coordinate named {coord_name!r}; have {names}") from None
