"""Hermite spectral solver for kinetic gas flows with a truncated
quadratic collision operator."""

from ._core import BACKEND
from .boundary import (
    HalfSpaceTables,
    WallSpec,
    boundary_condition_count,
    build_tables,
    ghost_state,
    odd_set,
    wall_closure,
)
from .collision import CollisionModel, apply_linearized, apply_qstar, quadratic_rhs
from .frames import (
    CoeffVector,
    Frame,
    InadmissibleState,
    MomentSet,
    change_frame,
    maxwellian_coeffs,
    moments,
    nondimensionalize,
    redimensionalize,
)
from .indexing import IndexLayout, index_count, layout
from .kernels import GasSpec, KernelSpec, argon, viscosity
from .scenarios import Scenario, cavity, couette, fourier, scenario
from .solver import (
    CellField,
    Grid,
    block_spectrum,
    convection_flux,
    hll_flux,
    max_dt,
    reconstruct,
    run_steady_sgs,
    run_transient,
    step,
)
from .storage import load_snapshot, load_tensor, save_snapshot, save_tensor
from .tensor import (
    CollisionTensor,
    assemble_tensor,
    conservation_defect,
    decay_rate,
    equilibrium_defect,
    gamma_coeff,
    linearized_matrix,
    sparsify,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CellField",
    "CoeffVector",
    "CollisionModel",
    "CollisionTensor",
    "Frame",
    "GasSpec",
    "Grid",
    "IndexLayout",
    "InadmissibleState",
    "KernelSpec",
    "MomentSet",
    "Scenario",
    "WallSpec",
    "HalfSpaceTables",
    "boundary_condition_count",
    "build_tables",
    "apply_linearized",
    "apply_qstar",
    "argon",
    "assemble_tensor",
    "block_spectrum",
    "cavity",
    "change_frame",
    "conservation_defect",
    "convection_flux",
    "couette",
    "decay_rate",
    "equilibrium_defect",
    "fourier",
    "gamma_coeff",
    "ghost_state",
    "hll_flux",
    "index_count",
    "layout",
    "linearized_matrix",
    "load_snapshot",
    "load_tensor",
    "max_dt",
    "maxwellian_coeffs",
    "moments",
    "nondimensionalize",
    "odd_set",
    "quadratic_rhs",
    "reconstruct",
    "redimensionalize",
    "run_steady_sgs",
    "run_transient",
    "save_snapshot",
    "save_tensor",
    "scenario",
    "sparsify",
    "step",
    "viscosity",
    "wall_closure",
    "__version__",
]
