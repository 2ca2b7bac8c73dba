"""Benchmark microflow configurations: planar Couette flow, Fourier heat
transfer, and the lid-driven cavity.

All three use argon and start from a uniform equilibrium.  The Knudsen
number fixes the plate distance (1D) or the fill density (2D) through
the reference mean free path of the standard setups.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import WallSpec
from .frames import Frame, maxwellian_coeffs
from .kernels import GasSpec, KernelSpec
from .solver import CellField, Grid

# reference mean free path of the plate problems at their quoted Knudsen
# numbers (argon at 9.282e-6 kg/m^3 with the 4.17e-10 m diameter)
_PLATE_LAMBDA = 9.2456e-3
_PLATE_RHO = 9.282e-6
_PLATE_T = 273.15
_COUETTE_SPEED = 119.25

_CAVITY_L = 1.25e-6
_CAVITY_T = 273.0
_CAVITY_RHO_KN01 = 0.891
_CAVITY_LID = (50.0, 0.0, 0.0)
_CAVITY_MU_REF = 2.117e-5
_CAVITY_ETA = 7.45


@dataclass
class Scenario:
    """A configured benchmark: grid with walls, initial field, and gas."""

    name: str
    grid: Grid
    field: CellField
    gas: GasSpec
    knudsen: float


def _argon(eta: float, t_ref: float, mu_ref: float | None = None) -> GasSpec:
    return GasSpec(
        mass=6.63e-26,
        kernel=KernelSpec.ipl(eta),
        d_ref=4.17e-10,
        t_ref=t_ref,
        mu_ref=mu_ref,
    )


def _uniform_field(grid: Grid, frame: Frame, m: int, rho: float, u,
                   theta: float) -> CellField:
    state = maxwellian_coeffs(rho, u, theta, frame, m)
    values = np.broadcast_to(
        state.values, tuple(grid.shape) + (state.values.size,)
    ).copy()
    return CellField(grid, frame, m, values)


def couette(kn: float, m: int, cells: int = 256, eta: float = 10.0,
            accommodation: float = 1.0, gas: GasSpec | None = None) -> Scenario:
    """Gas sheared between plates moving oppositely along the second axis."""
    if kn <= 0:
        raise ValueError("Knudsen number must be positive")
    if gas is None:
        gas = _argon(eta, _PLATE_T)
    distance = _PLATE_LAMBDA / kn
    theta_bar = gas.kb * _PLATE_T / gas.mass
    walls = {
        "xlo": WallSpec(0, -1, _PLATE_T, (0.0, -_COUETTE_SPEED, 0.0),
                        accommodation),
        "xhi": WallSpec(0, +1, _PLATE_T, (0.0, +_COUETTE_SPEED, 0.0),
                        accommodation),
    }
    grid = Grid((cells,), (distance / cells,), (-0.5 * distance,), walls)
    frame = Frame((0.0, 0.0, 0.0), theta_bar)
    fld = _uniform_field(grid, frame, m, _PLATE_RHO, (0.0, 0.0, 0.0), theta_bar)
    return Scenario("couette", grid, fld, gas, kn)


def fourier(kn: float, m: int, cells: int = 256, eta: float = 10.0,
            accommodation: float = 1.0, hot_ratio: float = 4.0,
            gas: GasSpec | None = None) -> Scenario:
    """Stationary plates at different temperatures (heat-transfer flow).

    The expansion temperature follows the hot plate so the fattest
    Maxwellian in the domain stays resolvable.
    """
    if kn <= 0:
        raise ValueError("Knudsen number must be positive")
    if gas is None:
        gas = _argon(eta, _PLATE_T)
    distance = _PLATE_LAMBDA / kn
    t_hot = hot_ratio * _PLATE_T
    theta_bar = gas.kb * t_hot / gas.mass
    walls = {
        "xlo": WallSpec(0, -1, _PLATE_T, (0.0, 0.0, 0.0), accommodation),
        "xhi": WallSpec(0, +1, t_hot, (0.0, 0.0, 0.0), accommodation),
    }
    grid = Grid((cells,), (distance / cells,), (-0.5 * distance,), walls)
    frame = Frame((0.0, 0.0, 0.0), theta_bar)
    theta_init = gas.kb * _PLATE_T / gas.mass
    fld = _uniform_field(grid, frame, m, _PLATE_RHO, (0.0, 0.0, 0.0), theta_init)
    return Scenario("fourier", grid, fld, gas, kn)


def cavity(kn: float, m: int, cells: int = 100,
           gas: GasSpec | None = None) -> Scenario:
    """Square cavity driven by its top lid moving along +x."""
    if kn <= 0:
        raise ValueError("Knudsen number must be positive")
    if gas is None:
        gas = _argon(_CAVITY_ETA, _CAVITY_T, mu_ref=_CAVITY_MU_REF)
    rho = _CAVITY_RHO_KN01 * (0.1 / kn)
    theta_bar = gas.kb * _CAVITY_T / gas.mass
    walls = {
        "xlo": WallSpec(0, -1, _CAVITY_T),
        "xhi": WallSpec(0, +1, _CAVITY_T),
        "ylo": WallSpec(1, -1, _CAVITY_T),
        "yhi": WallSpec(1, +1, _CAVITY_T, _CAVITY_LID),
    }
    dx = _CAVITY_L / cells
    grid = Grid((cells, cells), (dx, dx), (0.0, 0.0), walls)
    frame = Frame((0.0, 0.0, 0.0), theta_bar)
    fld = _uniform_field(grid, frame, m, rho, (0.0, 0.0, 0.0), theta_bar)
    return Scenario("cavity", grid, fld, gas, kn)


def scenario(name: str, kn: float, m: int, cells: int | None = None,
             **kwargs) -> Scenario:
    """Build a named benchmark configuration."""
    builders = {"couette": couette, "fourier": fourier, "cavity": cavity}
    if name not in builders:
        raise ValueError(f"unknown scenario {name!r}; choose from {sorted(builders)}")
    if cells is None:
        return builders[name](kn, m, **kwargs)
    return builders[name](kn, m, cells, **kwargs)
