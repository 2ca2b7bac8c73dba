"""Evaluation of the truncated quadratic collision operator.

The operator acts in the state's own frame (local velocity and
temperature), where the low-degree coefficients feed the precomputed
quadratic table and every higher coefficient is damped at the fixed rate
given by the linearized spectrum.  Wrapping frame changes make the result
available in the global expansion frame of the solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._core import change_frame_core, quadratic_contract
from .frames import CoeffVector, Frame, InadmissibleState
from .kernels import GasSpec, viscosity
from .tensor import CollisionTensor


@dataclass
class CollisionModel:
    """Bundles the tensor, gas data, and model switches for one run.

    ``quadratic`` selects the full bilinear table; otherwise the
    linearized matrix is used for the low degrees.  ``tail_density``
    keeps the density factor in the high-degree damping term (the
    physically consistent scaling); disabling it is exposed only as a
    model-variant switch.
    """

    tensor: CollisionTensor
    gas: GasSpec
    quadratic: bool = True
    tail_density: bool = True

    def __post_init__(self):
        self.m0 = self.tensor.m0
        self.n0 = self.tensor.layout.size
        self.nu = self.tensor.nu
        self.c_constant = self.tensor.c_constant
        self._rows = self.tensor.contraction_arrays()
        self._linmat = self.tensor.linearized.matrix

    def rate(self, rho: float, theta: float) -> float:
        """Leading collision frequency c * theta * rho / mu(T)."""
        temperature = self.gas.mass / self.gas.kb * theta
        mu = viscosity(self.gas, temperature)
        return self.c_constant * theta * rho / mu

    def dimensionless_rhs(self, h: np.ndarray) -> np.ndarray:
        """Quadratic (or linearized) contraction on the low-degree block."""
        out = np.empty(self.n0)
        if self.quadratic:
            row_ptr, ib, ig, vals = self._rows
            quadratic_contract(row_ptr, ib, ig, vals, h[: self.n0].copy(), out)
        else:
            out[:] = self._linmat @ h[: self.n0]
        return out


def quadratic_rhs(h: np.ndarray, tensor: CollisionTensor) -> np.ndarray:
    """Low-degree collision coefficients for normalized coefficients h."""
    n0 = tensor.layout.size
    row_ptr, ib, ig, vals = tensor.contraction_arrays()
    out = np.empty(n0)
    return quadratic_contract(row_ptr, ib, ig, vals, np.ascontiguousarray(h[:n0]), out)


def collision_source_single(values: np.ndarray, lay, frame: Frame,
                            model: CollisionModel) -> np.ndarray:
    """Collision source for one coefficient vector (hot path).

    Same pipeline as :func:`apply_qstar` on raw arrays, routed through
    the compiled kernels; used cell-by-cell inside steady sweeps.
    """
    rho = values[0]
    if rho <= 0.0 or not np.isfinite(rho):
        raise InadmissibleState(f"non-physical density {rho}")
    u = np.array(frame.u)
    u[0] += values[lay.rank((1, 0, 0))] / rho
    u[1] += values[lay.rank((0, 1, 0))] / rho
    u[2] += values[lay.rank((0, 0, 1))] / rho
    trace = (
        values[lay.rank((2, 0, 0))]
        + values[lay.rank((0, 2, 0))]
        + values[lay.rank((0, 0, 2))]
    )
    du = np.array(frame.u) - u
    theta = frame.theta + (2.0 * trace / rho - float(du @ du)) / 3.0
    if theta <= 0.0 or not np.isfinite(theta):
        raise InadmissibleState(f"non-physical temperature parameter {theta}")

    m = lay.max_degree
    f_self = np.empty_like(values)
    change_frame_core(
        np.ascontiguousarray(values), lay.shift_down, lay.shift_down2,
        (du[0], du[1], du[2]), frame.theta - theta, m, f_self,
    )
    powers = theta ** (0.5 * lay.degrees)
    h = f_self / (rho * powers)

    qhat = np.empty_like(h)
    qhat[: model.n0] = model.dimensionless_rhs(h)
    tail_scale = model.nu if model.tail_density else model.nu / rho
    qhat[model.n0 :] = -tail_scale * h[model.n0 :]

    rate = model.rate(rho, theta)
    q_self = qhat * (rate * rho * powers)
    out = np.empty_like(values)
    change_frame_core(
        q_self, lay.shift_down, lay.shift_down2,
        (-du[0], -du[1], -du[2]), theta - frame.theta, m, out,
    )
    return out


def apply_qstar(c: CoeffVector, model: CollisionModel) -> CoeffVector:
    """Collision source for one state, in the state's expansion frame.

    Pipeline: project to the self frame, normalize, contract the
    low-degree block and damp the tail, restore dimensions, and project
    back.  Cost O(m0^9 + m^4).
    """
    out = collision_source_single(c.values, c.layout, c.frame, model)
    return CoeffVector(c.frame, c.m, out)


def apply_linearized(c: CoeffVector, model: CollisionModel) -> CoeffVector:
    """Collision source with the linearized low-degree block."""
    if model.quadratic:
        model = CollisionModel(
            model.tensor, model.gas, quadratic=False, tail_density=model.tail_density
        )
    return apply_qstar(c, model)
