"""Command-line entry point: list | simulate | grid | sample | check.

Every output file gets a ``<path>.manifest.json`` sibling recording the tool
version, subcommand, seed, and full parameter map, so any artifact can be
reproduced byte-for-byte. Seeds are mandatory wherever randomness is involved.

Exit codes: 0 success, 1 runtime/check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .checks import run_checks
from .datasets import build_target, dataset_payload, load_dataset, save_dataset
from .grid import DensityGrid, GridSpec, evaluate_grid, write_grid
from .iv import simulate_iv
from .lasso import simulate_lasso
from .nmixture import simulate_nmixture
from .occupancy import simulate_occupancy
from .reference import DEFAULT_GRIDS, TARGET_INFO, TARGET_NAMES
from .regression import simulate_collinear, simulate_spike_slab
from .samplers import (
    SamplerConfig,
    SamplerInitError,
    sample,
    write_diagnostics_json,
    write_draws_csv,
)
from .stochvol import simulate_sv
from .targets import Target

# simulate overrides: flag -> (targets that accept it)
_SIM_FLAGS = {
    "sites": ("nmixture", "occupancy"),
    "repeats": ("nmixture", "occupancy"),
    "lam": ("nmixture",),
    "p": ("nmixture", "occupancy"),
    "prior_shape": ("nmixture",),
    "prior_rate": ("nmixture",),
    "psi": ("occupancy",),
    "n": ("collinear", "spike_slab", "adaptive_lasso", "iv"),
    "rho": ("collinear",),
    "beta": ("collinear", "spike_slab", "adaptive_lasso", "iv"),
    "sigma": ("adaptive_lasso", "stoch_vol"),
    "pi": ("iv",),
    "sigma_matrix": ("iv",),
    "instrument_prob": ("iv",),
    "horizon": ("stoch_vol",),
    "mu": ("stoch_vol",),
    "phi": ("stoch_vol",),
    "normal_arg": ("spike_slab",),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posteriorbench",
        description="Benchmark suite of hard posterior targets: simulate "
        "datasets, render density grids, run reference samplers, and verify "
        "against brute-force oracles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="describe every target")

    sim = sub.add_parser("simulate", help="draw a dataset from a target's generative model")
    sim.add_argument("target", choices=TARGET_NAMES)
    sim.add_argument("--seed", type=int, required=True)
    sim.add_argument("--out", default=None, help="dataset path (default <target>_data.json)")
    sim.add_argument("--sites", type=int)
    sim.add_argument("--repeats", type=int)
    sim.add_argument("--lam", type=float)
    sim.add_argument("--p", type=float)
    sim.add_argument("--psi", type=float)
    sim.add_argument("--prior-shape", dest="prior_shape", type=float)
    sim.add_argument("--prior-rate", dest="prior_rate", type=float)
    sim.add_argument("--n", type=int)
    sim.add_argument("--rho", type=float)
    sim.add_argument("--beta", type=float, nargs="+")
    sim.add_argument("--sigma", type=float)
    sim.add_argument("--pi", type=float)
    sim.add_argument("--sigma-matrix", dest="sigma_matrix", type=float, nargs=3,
                     metavar=("S11", "S21", "S22"))
    sim.add_argument("--instrument-prob", dest="instrument_prob", type=float)
    sim.add_argument("--horizon", type=int, help="series length for stoch_vol")
    sim.add_argument("--mu", type=float)
    sim.add_argument("--phi", type=float)
    sim.add_argument("--normal-arg", dest="normal_arg", choices=("var", "sd"),
                     help="read the spike/slab prior numbers as variances (default) or sds")

    grd = sub.add_parser("grid", help="evaluate a 200x200 density grid and write CSV/PGM")
    grd.add_argument("target", choices=TARGET_NAMES)
    grd.add_argument("--data", required=True, help="dataset JSON from `simulate`")
    grd.add_argument("--x-param", dest="x_param", default=None)
    grd.add_argument("--y-param", dest="y_param", default=None)
    grd.add_argument("--x-range", dest="x_range", type=float, nargs=2, metavar=("LO", "HI"))
    grd.add_argument("--y-range", dest="y_range", type=float, nargs=2, metavar=("LO", "HI"))
    grd.add_argument("--nx", type=int, default=200)
    grd.add_argument("--ny", type=int, default=200)
    grd.add_argument("--fixed", action="append", default=[], metavar="NAME=VALUE",
                     help="pin a non-axis parameter (repeatable)")
    grd.add_argument("--out-csv", dest="out_csv", default=None)
    grd.add_argument("--out-pgm", dest="out_pgm", default=None)
    grd.add_argument("--laplace-rate", dest="laplace_rate", action="store_true",
                     help="adaptive_lasso only: rate parameterization of the Laplace prior")

    smp = sub.add_parser("sample", help="run a reference sampler and write draws CSV")
    smp.add_argument("target", choices=TARGET_NAMES)
    smp.add_argument("--data", required=True)
    smp.add_argument("--seed", type=int, required=True)
    smp.add_argument("--sampler", choices=("hmc", "rwm"), default="hmc")
    smp.add_argument("--chains", type=int, default=4)
    smp.add_argument("--warmup", type=int, default=1000)
    smp.add_argument("--iters", type=int, default=1000)
    smp.add_argument("--target-accept", dest="target_accept", type=float, default=None)
    smp.add_argument("--leapfrog-steps", dest="leapfrog_steps", type=int, default=32)
    smp.add_argument("--laplace-rate", dest="laplace_rate", action="store_true")
    smp.add_argument("--out", default=None, help="draws path (default <target>_draws.csv)")

    chk = sub.add_parser("check", help="run the brute-force oracle suite")
    chk.add_argument("target", nargs="?", choices=TARGET_NAMES, default=None)
    chk.add_argument("--json", action="store_true")
    return parser


def _write_manifest(out_path: str, payload: dict) -> None:
    with open(f"{out_path}.manifest.json", "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _manifest(args, parameters: dict, inputs: dict, outputs: dict) -> dict:
    return {
        "tool": "posteriorbench",
        "version": __version__,
        "subcommand": args.command,
        "target": getattr(args, "target", None),
        "seed": getattr(args, "seed", None),
        "parameters": parameters,
        "inputs": inputs,
        "outputs": outputs,
    }


def _cmd_list() -> int:
    print(f"{'target':<15} {'panel':<6} {'shape':<12} model")
    for name in TARGET_NAMES:
        panel, model, shape = TARGET_INFO[name]
        print(f"{name:<15} {panel:<6} {shape:<12} {model}")
        params = _describe_params(name)
        print(f"{'':<15} parameters: {params}")
    return 0


def _describe_params(name: str) -> str:
    from .reference import reference_target

    target = reference_target(name)
    parts = []
    for d in target.space.descriptors:
        parts.append(f"{d.name} ({d.support.label()})")
    return ", ".join(parts)


def _cmd_simulate(parser, args) -> int:
    target = args.target
    for flag, owners in _SIM_FLAGS.items():
        if getattr(args, flag, None) is not None and target not in owners:
            parser.error(f"--{flag.replace('_', '-')} does not apply to target {target!r}")

    def val(flag, default):
        v = getattr(args, flag)
        return default if v is None else v

    if target == "nmixture":
        data_target = _sim_nmixture(args, val)
    elif target == "occupancy":
        data_target = _sim_occupancy(args, val)
    elif target == "collinear":
        beta = val("beta", [-10.0, 10.0])
        if len(beta) != 2:
            parser.error("collinear --beta takes exactly two numbers")
        from .regression import CollinearTarget

        data_target = CollinearTarget(
            simulate_collinear(args.seed, n=val("n", 30), rho=val("rho", -0.995),
                               beta_true=beta)
        )
    elif target == "spike_slab":
        beta = val("beta", [0.0, 0.0])
        if len(beta) != 2:
            parser.error("spike_slab --beta takes exactly two numbers")
        from .regression import SpikeSlabPrior, SpikeSlabTarget

        prior = SpikeSlabPrior()
        if args.normal_arg == "sd":
            # the stock numbers are read as sds instead of variances
            prior = SpikeSlabPrior(spike_var=0.1**2, slab_var=100.0**2, spike_prob=0.1)
        data_target = SpikeSlabTarget(
            simulate_spike_slab(args.seed, n=val("n", 10), beta_true=beta), prior
        )
    elif target == "adaptive_lasso":
        beta = val("beta", [5.0])
        if len(beta) != 1:
            parser.error("adaptive_lasso --beta takes exactly one number")
        from .lasso import LassoTarget

        data_target = LassoTarget(
            simulate_lasso(args.seed, n=val("n", 5), beta_true=beta[0],
                           sigma=val("sigma", 8.0))
        )
    elif target == "iv":
        beta = val("beta", [0.1])
        if len(beta) != 1:
            parser.error("iv --beta takes exactly one number")
        s = val("sigma_matrix", [1.0, 0.0, 1.0])
        sigma = np.array([[s[0], s[1]], [s[1], s[2]]])
        from .iv import IVTarget

        data_target = IVTarget(
            simulate_iv(args.seed, n=val("n", 50), beta=beta[0], pi=val("pi", 0.1),
                        sigma=sigma, instrument_prob=val("instrument_prob", 0.75))
        )
    elif target == "stoch_vol":
        from .stochvol import SVTarget

        data, _ = simulate_sv(args.seed, T=val("horizon", 5), mu=val("mu", -1.02),
                              phi=val("phi", -0.95), sigma=val("sigma", 0.1))
        data_target = SVTarget(data)
    else:  # pragma: no cover
        parser.error(f"unknown target {target!r}")

    out = args.out or f"{target}_data.json"
    payload = dataset_payload(data_target)
    save_dataset(out, payload)
    params = {k: getattr(args, k) for k in _SIM_FLAGS if getattr(args, k, None) is not None}
    _write_manifest(out, _manifest(args, params, {}, {"dataset": str(out)}))
    print(f"wrote {out}")
    return 0


def _sim_nmixture(args, val):
    from .nmixture import NMixtureTarget

    return NMixtureTarget(
        simulate_nmixture(
            args.seed,
            n_sites=val("sites", 20),
            n_repeats=val("repeats", 5),
            lam=val("lam", 30.0),
            p=val("p", 0.1),
            prior_shape=val("prior_shape", 1.0),
            prior_rate=val("prior_rate", 0.01),
        )
    )


def _sim_occupancy(args, val):
    from .occupancy import OccupancyTarget

    return OccupancyTarget(
        simulate_occupancy(
            args.seed,
            n_sites=val("sites", 100),
            n_repeats=val("repeats", 8),
            psi=val("psi", 0.1),
            p=val("p", 0.1),
        )
    )


def _load_matching_target(parser, args) -> Target:
    payload = load_dataset(args.data)
    if payload.get("target") != args.target:
        parser.error(
            f"dataset at {args.data} is for target {payload.get('target')!r}, "
            f"not {args.target!r}"
        )
    convention = "rate" if getattr(args, "laplace_rate", False) else "scale"
    return build_target(payload, lasso_convention=convention)


def _cmd_grid(parser, args) -> int:
    if args.target == "stoch_vol":
        parser.error(
            "stoch_vol is a sample-based target (no 2-D grid exists); use `sample`"
        )
    target = _load_matching_target(parser, args)
    dx, x_range_d, dy, y_range_d = DEFAULT_GRIDS[args.target]
    x_param = args.x_param or dx
    y_param = args.y_param or dy
    defaults_line = (
        f"defaults for {args.target}: --x-param {dx} --x-range {x_range_d[0]} "
        f"{x_range_d[1]} --y-param {dy} --y-range {y_range_d[0]} {y_range_d[1]}"
    )
    if args.x_range is None and x_param != dx:
        parser.error(f"--x-range is required for a non-stock axis; {defaults_line}")
    if args.y_range is None and y_param != dy:
        parser.error(f"--y-range is required for a non-stock axis; {defaults_line}")
    x_range = tuple(args.x_range) if args.x_range else x_range_d
    y_range = tuple(args.y_range) if args.y_range else y_range_d

    fixed = {}
    for item in args.fixed:
        if "=" not in item:
            parser.error(f"--fixed expects NAME=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        try:
            fixed[key] = float(value)
        except ValueError:
            parser.error(f"--fixed value for {key!r} is not a number: {value!r}")

    spec = GridSpec(x_param=x_param, y_param=y_param, x_range=x_range,
                    y_range=y_range, nx=args.nx, ny=args.ny, fixed=fixed)
    try:
        grid = evaluate_grid(target, spec)
    except ValueError as exc:
        parser.error(str(exc))
    out_csv = args.out_csv or f"{args.target}_grid.csv"
    metadata = {}
    if args.target == "adaptive_lasso":
        metadata["laplace_convention"] = "rate" if args.laplace_rate else "scale"
    write_grid(grid, out_csv, args.out_pgm, metadata=metadata or None)
    params = {
        "x_param": x_param, "y_param": y_param,
        "x_range": list(x_range), "y_range": list(y_range),
        "nx": args.nx, "ny": args.ny, "fixed": fixed,
    }
    params.update(metadata)
    outputs = {"csv": str(out_csv), "sidecar": f"{out_csv}.json"}
    if args.out_pgm:
        outputs["pgm"] = str(args.out_pgm)
    _write_manifest(out_csv, _manifest(args, params, {"dataset": args.data}, outputs))
    print(f"wrote {out_csv}" + (f" and {args.out_pgm}" if args.out_pgm else ""))
    return 0


def _cmd_sample(parser, args) -> int:
    target = _load_matching_target(parser, args)
    config = SamplerConfig(
        seed=args.seed,
        algorithm=args.sampler,
        chains=args.chains,
        warmup=args.warmup,
        iters=args.iters,
        target_accept=args.target_accept,
        leapfrog_steps=args.leapfrog_steps,
    )
    try:
        chains = sample(target, config)
    except SamplerInitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = args.out or f"{args.target}_draws.csv"
    write_draws_csv(chains, out)
    diag_path = f"{out}.diag.json"
    write_diagnostics_json(chains, diag_path)
    params = {
        "sampler": args.sampler, "chains": args.chains, "warmup": args.warmup,
        "iters": args.iters, "target_accept": config.accept_goal,
        "leapfrog_steps": args.leapfrog_steps,
    }
    if args.target == "adaptive_lasso":
        params["laplace_convention"] = "rate" if args.laplace_rate else "scale"
    _write_manifest(
        out,
        _manifest(args, params, {"dataset": args.data},
                  {"draws": str(out), "diagnostics": diag_path}),
    )
    print(f"wrote {out}")
    return 0


def _cmd_check(args) -> int:
    results = run_checks(args.target)
    all_passed = all(r.passed for r in results)
    if args.json:
        print(json.dumps(
            {
                "all_passed": all_passed,
                "results": [
                    {"name": r.name, "passed": r.passed, "metric": r.metric,
                     "threshold": r.threshold}
                    for r in results
                ],
            },
            indent=2,
        ))
    else:
        for r in results:
            print(r.line())
    return 0 if all_passed else 1


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "list":
        return _cmd_list()
    if args.command == "simulate":
        return _cmd_simulate(parser, args)
    if args.command == "grid":
        return _cmd_grid(parser, args)
    if args.command == "sample":
        return _cmd_sample(parser, args)
    if args.command == "check":
        return _cmd_check(args)
    parser.error(f"unknown command {args.command!r}")  # pragma: no cover
    return 2  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
