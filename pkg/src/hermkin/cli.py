"""Command-line entry points: tensor precomputation, scenario runs, and
moment-profile export.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

try:
    import tomllib as tomli
except ImportError:
    import tomli

from . import scenarios as scen
from .collision import CollisionModel
from .frames import CoeffVector, Frame, InadmissibleState, moments
from .kernels import GasSpec, KernelSpec
from .solver import (
    CellField,
    ConvergenceError,
    max_dt,
    run_steady_sgs,
    run_transient,
)
from .storage import CacheError, load_snapshot, load_tensor, save_snapshot, save_tensor
from .tensor import assemble_tensor

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


class ConfigError(ValueError):
    pass


def _kernel_from_args(args) -> KernelSpec:
    if args.kernel == "ipl":
        if args.eta is None:
            raise ConfigError("ipl kernel needs --eta")
        return KernelSpec.ipl(args.eta, args.kappa)
    if args.kernel == "vhs":
        return KernelSpec.vhs(args.d_ref, args.g_ref, args.nu)
    if args.kernel == "hs":
        return KernelSpec.hard_sphere(args.d_ref)
    raise ConfigError(f"unknown kernel {args.kernel!r}")


def cmd_coeffs(args) -> int:
    kernel = _kernel_from_args(args)
    if args.m0 is None:
        raise ConfigError("coeffs needs --m0")
    tensor = assemble_tensor(
        kernel, args.m0, threshold=args.threshold, workers=args.threads
    )
    save_tensor(tensor, args.out)
    print(f"entries: {len(tensor)}")
    print(f"max |A|: {tensor.max_abs():.17g}")
    print(f"decay rate: {tensor.nu:.17g}")
    print(f"wrote {args.out}")
    return EXIT_OK


def _require(config: dict, section: str, key: str):
    try:
        return config[section][key]
    except KeyError:
        raise ConfigError(f"config is missing [{section}] {key}") from None


def _load_config(path) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomli.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file {path} not found") from None
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid TOML: {exc}") from None


def _gas_from_config(config: dict) -> GasSpec:
    gas = config.get("gas", {})
    variant = gas.get("kernel", "ipl")
    if variant == "ipl":
        kernel = KernelSpec.ipl(_require(config, "gas", "eta"), gas.get("kappa", 1.0))
    elif variant == "vhs":
        kernel = KernelSpec.vhs(
            _require(config, "gas", "d_ref"),
            gas.get("g_ref", 1.0),
            _require(config, "gas", "nu"),
        )
    elif variant == "hs":
        kernel = KernelSpec.hard_sphere(_require(config, "gas", "d"))
    else:
        raise ConfigError(f"unknown [gas] kernel {variant!r}")
    return GasSpec(
        mass=gas.get("mass", 6.63e-26),
        kernel=kernel,
        d_ref=gas.get("d_ref", 4.17e-10),
        t_ref=gas.get("t_ref", 273.15),
        mu_ref=gas.get("mu_ref"),
    )


def build_run(config: dict):
    """(scenario, gas, model inputs) from a parsed run configuration."""
    disc = config.get("discretization", {})
    m = _require(config, "discretization", "m")
    m0 = _require(config, "discretization", "m0")
    if not (m >= m0 >= 2):
        raise ConfigError(f"need m >= m0 >= 2, got m={m} m0={m0}")
    if m < 3:
        raise ConfigError("need m >= 3 (heat flux uses degree-3 coefficients)")
    sc = config.get("scenario", {})
    name = _require(config, "scenario", "name")
    kn = _require(config, "scenario", "kn")
    kwargs = {}
    if name in ("couette", "fourier"):
        kwargs["accommodation"] = sc.get("accommodation", 1.0)
    if "gas" in config:
        kwargs["gas"] = _gas_from_config(config)
    setup = scen.scenario(name, kn, m, cells=disc.get("cells"), **kwargs)

    frame_cfg = config.get("frame", {})
    if "u" in frame_cfg or "theta" in frame_cfg:
        frame = Frame(
            tuple(frame_cfg.get("u", setup.field.frame.u)),
            frame_cfg.get("theta", setup.field.frame.theta),
        )
        if not frame.close_to(setup.field.frame):
            from .frames import change_frame_batch
            from .indexing import layout as _layout

            lay = _layout(m)
            du = np.asarray(setup.field.frame.u) - np.asarray(frame.u)
            dtheta = setup.field.frame.theta - frame.theta
            vals = change_frame_batch(setup.field.values, lay, du, dtheta)
            setup.field = CellField(setup.field.grid, frame, m, vals)
    return setup, m, m0


def cmd_run(args, steady_alias: bool = False) -> int:
    config = _load_config(args.config)
    setup, m, m0 = build_run(config)
    gas = setup.gas

    if args.tensor is None:
        raise ConfigError("run needs --tensor (precomputed coefficient cache)")
    tensor = load_tensor(args.tensor, expect_kernel=gas.kernel)
    if tensor.m0 != m0:
        raise ConfigError(
            f"cache truncation m0={tensor.m0} does not match config m0={m0}"
        )

    model_cfg = config.get("collision", {})
    model = CollisionModel(
        tensor,
        gas,
        quadratic=model_cfg.get("quadratic", True),
        tail_density=model_cfg.get("tail_density", True),
    )

    mode = config.get("mode", "steady")
    if steady_alias:
        mode = "steady"
    out_cfg = config.get("output", {})
    out_path = args.out or out_cfg.get("path")
    if out_path is None:
        raise ConfigError("no output path (set --out or [output] path)")

    field = setup.field
    if mode == "steady":
        tol = config.get("tolerance", 1e-8)
        field, info = run_steady_sgs(field, model, gas, tolerance=tol)
        print(f"steady after {info['sweeps']} sweeps (change {info['change']:.3e})")
    elif mode == "transient":
        t_end = config.get("t_end")
        if t_end is None:
            raise ConfigError("transient mode needs t_end")
        cfl = config.get("discretization", {}).get("cfl", 0.45)
        stride = out_cfg.get("stride", 0)
        snap_base = out_cfg.get("snapshot")
        counter = {"n": 0}

        def callback(fld):
            counter["n"] += 1
            if stride and snap_base and counter["n"] % stride == 0:
                save_snapshot(fld, f"{snap_base}.{counter['n']:06d}.bhsf")

        field = run_transient(field, model, gas, t_end, cfl=cfl, callback=callback)
        print(f"transient run to t = {field.time:.6e} s")
    else:
        raise ConfigError(f"unknown mode {mode!r}")

    if out_cfg.get("snapshot"):
        save_snapshot(field, out_cfg["snapshot"])
    write_moment_csv(field, gas, out_path)
    print(f"wrote {out_path}")
    return EXIT_OK


def cmd_moments(args) -> int:
    field = load_snapshot(args.snapshot)
    write_moment_csv(field, None if args.no_gas else _default_gas(), args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def _default_gas() -> GasSpec:
    return GasSpec(mass=6.63e-26, kernel=KernelSpec.ipl(10.0), t_ref=273.15,
                   d_ref=4.17e-10)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_moment_csv(field: CellField, gas, path) -> None:
    """Moment profiles, one row per cell.

    1D columns: x, rho, u1, u2, u3, T, sigma11, sigma12, q1.
    2D inserts y after x and adds sigma22 and q2.
    """
    lay = field.layout
    dims = field.grid.dims
    rows = []
    if dims == 1:
        header = ["x", "rho", "u1", "u2", "u3", "T", "sigma11", "sigma12", "q1"]
        xs = field.grid.centers(0)
        for j in range(field.grid.shape[0]):
            state = CoeffVector(field.frame, field.m, field.values[j])
            mom = moments(state, gas)
            temp = mom.temperature if mom.temperature is not None else mom.theta
            rows.append(
                [xs[j], mom.rho, *mom.u, temp, mom.sigma[0, 0], mom.sigma[0, 1],
                 mom.q[0]]
            )
    else:
        header = ["x", "y", "rho", "u1", "u2", "u3", "T", "sigma11", "sigma12",
                  "sigma22", "q1", "q2"]
        xs = field.grid.centers(0)
        ys = field.grid.centers(1)
        for i in range(field.grid.shape[0]):
            for j in range(field.grid.shape[1]):
                state = CoeffVector(field.frame, field.m, field.values[i, j])
                mom = moments(state, gas)
                temp = mom.temperature if mom.temperature is not None else mom.theta
                rows.append(
                    [xs[i], ys[j], mom.rho, *mom.u, temp, mom.sigma[0, 0],
                     mom.sigma[0, 1], mom.sigma[1, 1], mom.q[0], mom.q[1]]
                )
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hermkin",
        description="Hermite spectral kinetic gas solver",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_coeffs = sub.add_parser("coeffs", help="precompute a collision tensor")
    p_coeffs.add_argument("--kernel", default="ipl", choices=["hs", "vhs", "ipl"])
    p_coeffs.add_argument("--eta", type=float, default=None)
    p_coeffs.add_argument("--kappa", type=float, default=1.0)
    p_coeffs.add_argument("--d-ref", dest="d_ref", type=float, default=1.0)
    p_coeffs.add_argument("--g-ref", dest="g_ref", type=float, default=1.0)
    p_coeffs.add_argument("--nu", type=float, default=1.0)
    p_coeffs.add_argument("--m0", type=int, default=None)
    p_coeffs.add_argument("--threshold", type=float, default=None)
    p_coeffs.add_argument("--threads", type=int, default=1)
    p_coeffs.add_argument("--out", required=True)

    for name, alias in (("run", False), ("steady", True)):
        p = sub.add_parser(
            name,
            help="run a configured scenario"
            + (" to steady state" if alias else ""),
        )
        p.add_argument("--config", required=True)
        p.add_argument("--tensor", required=True)
        p.add_argument("--out", default=None)
        p.add_argument("--threads", type=int, default=1)

    p_m = sub.add_parser("moments", help="export moment profiles from a snapshot")
    p_m.add_argument("snapshot")
    p_m.add_argument("--out", required=True)
    p_m.add_argument("--no-gas", action="store_true",
                     help="report theta instead of temperature")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "coeffs":
            return cmd_coeffs(args)
        if args.command == "run":
            return cmd_run(args)
        if args.command == "steady":
            return cmd_run(args, steady_alias=True)
        if args.command == "moments":
            return cmd_moments(args)
        parser.error(f"unknown command {args.command}")
    except (InadmissibleState, ConvergenceError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (CacheError, OSError) as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
