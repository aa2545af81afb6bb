"""Dataset JSON round-trip and target construction.

One JSON schema per target, all of the form
``{"target": <name>, "data": {...}, "prior": {...}?}``:

* nmixture:       data.counts (int matrix);      prior.shape, prior.rate
* occupancy:      data.sites = [{"s": int, "k": int}, ...]
* collinear:      data.X, data.y, data.noise_sd; prior.sd
* spike_slab:     data.X, data.y, data.noise_sd; prior.spike_var, slab_var, spike_prob
* adaptive_lasso: data.x, data.y, data.sigma
* iv:             data.y, data.x, data.z
* stoch_vol:      data.y
"""

from __future__ import annotations

import json

import numpy as np

from .iv import IVData, IVTarget
from .lasso import LassoData, LassoTarget
from .nmixture import NMixtureData, NMixtureTarget
from .occupancy import OccupancyData, OccupancyTarget
from .regression import (
    CollinearPrior,
    CollinearTarget,
    RegressionData,
    SpikeSlabPrior,
    SpikeSlabTarget,
)
from .stochvol import SVData, SVTarget


def dataset_payload(target) -> dict:
    """Serializable payload for a target's dataset (inverse of build_target)."""
    name = target.name
    if name == "nmixture":
        d = target.data
        return {
            "target": name,
            "data": {"counts": d.counts.tolist()},
            "prior": {"shape": d.prior_shape, "rate": d.prior_rate},
        }
    if name == "occupancy":
        d = target.data
        sites = [{"s": int(s), "k": int(k)} for s, k in zip(d.s, d.k)]
        return {"target": name, "data": {"sites": sites}}
    if name == "collinear":
        d = target.data
        return {
            "target": name,
            "data": {"X": d.X.tolist(), "y": d.y.tolist(), "noise_sd": d.noise_sd},
            "prior": {"sd": target.prior.prior_sd},
        }
    if name == "spike_slab":
        d = target.data
        p = target.prior
        return {
            "target": name,
            "data": {"X": d.X.tolist(), "y": d.y.tolist(), "noise_sd": d.noise_sd},
            "prior": {
                "spike_var": p.spike_var,
                "slab_var": p.slab_var,
                "spike_prob": p.spike_prob,
            },
        }
    if name == "adaptive_lasso":
        d = target.data
        return {
            "target": name,
            "data": {"x": d.x.tolist(), "y": d.y.tolist(), "sigma": d.sigma},
        }
    if name == "iv":
        d = target.data
        return {
            "target": name,
            "data": {"y": d.y.tolist(), "x": d.x.tolist(), "z": d.z.tolist()},
        }
    if name == "stoch_vol":
        return {"target": name, "data": {"y": target.data.returns.tolist()}}
    raise KeyError(f"unknown target {name!r}")


def build_target(payload: dict, lasso_convention: str = "scale"):
    """Construct the matching Target from a dataset payload."""
    name = payload.get("target")
    data = payload.get("data", {})
    prior = payload.get("prior", {})
    if name == "nmixture":
        return NMixtureTarget(
            NMixtureData(
                counts=np.asarray(data["counts"]),
                prior_shape=float(prior.get("shape", 1.0)),
                prior_rate=float(prior.get("rate", 0.01)),
            )
        )
    if name == "occupancy":
        sites = data["sites"]
        return OccupancyTarget(
            OccupancyData(
                s=np.array([s["s"] for s in sites]),
                k=np.array([s["k"] for s in sites]),
            )
        )
    if name == "collinear":
        return CollinearTarget(
            RegressionData(
                X=np.asarray(data["X"]),
                y=np.asarray(data["y"]),
                noise_sd=float(data.get("noise_sd", 1.0)),
            ),
            CollinearPrior(prior_sd=float(prior.get("sd", 100.0))),
        )
    if name == "spike_slab":
        return SpikeSlabTarget(
            RegressionData(
                X=np.asarray(data["X"]),
                y=np.asarray(data["y"]),
                noise_sd=float(data.get("noise_sd", 1.0)),
            ),
            SpikeSlabPrior(
                spike_var=float(prior.get("spike_var", 0.1)),
                slab_var=float(prior.get("slab_var", 100.0)),
                spike_prob=float(prior.get("spike_prob", 0.1)),
            ),
        )
    if name == "adaptive_lasso":
        return LassoTarget(
            LassoData(
                x=np.asarray(data["x"]),
                y=np.asarray(data["y"]),
                sigma=float(data.get("sigma", 8.0)),
            ),
            convention=lasso_convention,
        )
    if name == "iv":
        return IVTarget(
            IVData(
                y=np.asarray(data["y"]),
                x=np.asarray(data["x"]),
                z=np.asarray(data["z"]),
            )
        )
    if name == "stoch_vol":
        return SVTarget(SVData(returns=np.asarray(data["y"])))
    raise KeyError(f"unknown target {name!r} in dataset payload")


def save_dataset(path, payload: dict) -> None:
    try:
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write dataset to {path}: {exc}") from exc


def load_dataset(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read dataset from {path}: {exc}") from exc
