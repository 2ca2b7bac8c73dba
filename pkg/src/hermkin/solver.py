"""Finite-volume spatial discretization and time integration.

The moment system is hyperbolic with a block-tridiagonal convection
matrix per axis whose spectrum is known in closed form, so the HLL flux
uses the global extreme wave speeds.  Fields store one coefficient
vector per cell in a single shared expansion frame; walls enter through
mirrored ghost states only, which keeps the interior update identical in
every cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .boundary import ghost_values_batch
from .collision import CollisionModel, collision_source_single
from .frames import (
    CoeffVector,
    Frame,
    InadmissibleState,
    change_frame_batch,
)
from .indexing import IndexLayout, layout
from .kernels import GasSpec, viscosity_batch
from .polynomials import hermite_roots, max_hermite_root


@dataclass(frozen=True)
class Grid:
    """Uniform grid in 1 or 2 spatial dimensions.

    ``walls`` maps face names ('xlo', 'xhi', 'ylo', 'yhi') to wall
    specifications; axes with no walls are periodic.
    """

    shape: tuple[int, ...]
    spacing: tuple[float, ...]
    origin: tuple[float, ...] = None
    walls: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.shape) not in (1, 2):
            raise ValueError("grid supports 1 or 2 spatial dimensions")
        if any(n < 2 for n in self.shape):
            raise ValueError("need at least 2 cells per axis")
        if len(self.spacing) != len(self.shape):
            raise ValueError("spacing must match shape")
        if self.origin is None:
            object.__setattr__(self, "origin", (0.0,) * len(self.shape))
        for name in self.walls:
            if name not in ("xlo", "xhi", "ylo", "yhi"):
                raise ValueError(f"unknown wall face {name!r}")

    @property
    def dims(self) -> int:
        return len(self.shape)

    def centers(self, axis: int) -> np.ndarray:
        n = self.shape[axis]
        dx = self.spacing[axis]
        return self.origin[axis] + (np.arange(n) + 0.5) * dx

    def is_periodic(self, axis: int) -> bool:
        lo, hi = ("xlo", "xhi") if axis == 0 else ("ylo", "yhi")
        return lo not in self.walls and hi not in self.walls


@dataclass
class CellField:
    """Per-cell coefficient vectors in one shared frame."""

    grid: Grid
    frame: Frame
    m: int
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        lay = layout(self.m)
        expected = tuple(self.grid.shape) + (lay.size,)
        if self.values.shape != expected:
            raise ValueError(f"field shape {self.values.shape} != {expected}")

    @property
    def layout(self) -> IndexLayout:
        return layout(self.m)

    def cell(self, *idx) -> CoeffVector:
        return CoeffVector(self.frame, self.m, self.values[idx].copy())

    def copy(self) -> "CellField":
        return CellField(self.grid, self.frame, self.m, self.values.copy(), self.time)

    def total_mass(self) -> float:
        vol = math.prod(self.grid.spacing)
        return float(self.values[..., 0].sum()) * vol


def convection_apply(values: np.ndarray, lay: IndexLayout, frame: Frame,
                     axis: int) -> np.ndarray:
    """Matrix-free convection operator along one axis; out-of-range
    neighbor indices contribute zero."""
    u_d = frame.u[axis]
    out = u_d * values
    up = lay.shift_up[axis]
    ok = up >= 0
    out[..., ok] += (lay.alphas[ok, axis] + 1.0) * values[..., up[ok]]
    dn = lay.shift_down[axis]
    ok = dn >= 0
    out[..., ok] += frame.theta * values[..., dn[ok]]
    return out


def convection_flux(state: CoeffVector, axis: int) -> CoeffVector:
    """Convection flux of a single state along one axis."""
    vals = convection_apply(state.values[None, :], state.layout, state.frame, axis)
    return CoeffVector(state.frame, state.m, vals[0])


def block_spectrum(m: int, transverse_degree: int, frame: Frame,
                   axis: int) -> np.ndarray:
    """Wave speeds of one convection block: the frame velocity plus the
    scaled roots of the next-degree Hermite polynomial."""
    if transverse_degree > m:
        raise ValueError("transverse degree exceeds expansion degree")
    roots = hermite_roots(m + 1 - transverse_degree)
    return frame.u[axis] + math.sqrt(frame.theta) * roots


def wave_speed(m: int, frame: Frame) -> float:
    """Largest signal-speed offset: max Hermite root times sqrt(theta)."""
    return max_hermite_root(m + 1) * math.sqrt(frame.theta)


def hll_flux(left: np.ndarray, right: np.ndarray, lay: IndexLayout, frame: Frame,
             axis: int, lam_max: float) -> np.ndarray:
    """Two-wave flux with prescribed extreme speeds u_d -/+ lam_max."""
    lam_l = frame.u[axis] - lam_max
    lam_r = frame.u[axis] + lam_max
    if lam_l >= 0.0:
        return convection_apply(left, lay, frame, axis)
    if lam_r <= 0.0:
        return convection_apply(right, lay, frame, axis)
    al = convection_apply(left, lay, frame, axis)
    ar = convection_apply(right, lay, frame, axis)
    return (lam_r * al - lam_l * ar + lam_r * lam_l * (right - left)) / (lam_r - lam_l)


def reconstruct(values: np.ndarray, axis: int = 0,
                periodic: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Second-order face states from central slopes.

    Returns per-cell (minus-face, plus-face) states along ``axis``.
    Boundary cells of a walled axis use the one-sided slope, which keeps
    the stencil inside the nearest neighbor and the wall trace second
    order (a zero-slope fallback leaves a first-order kink in the stress
    at the wall cells).
    """
    v = np.moveaxis(values, axis, 0)
    slope = np.empty_like(v)
    slope[1:-1] = 0.5 * (v[2:] - v[:-2])
    if periodic:
        slope[0] = 0.5 * (v[1] - v[-1])
        slope[-1] = 0.5 * (v[0] - v[-2])
    else:
        slope[0] = v[1] - v[0]
        slope[-1] = v[-1] - v[-2]
    lo = v - 0.5 * slope
    hi = v + 0.5 * slope
    return np.moveaxis(lo, 0, axis), np.moveaxis(hi, 0, axis)


def max_dt(field: CellField, cfl: float) -> float:
    """Largest stable explicit step for the convection part."""
    if not 0.0 < cfl < 1.0:
        raise ValueError("cfl must lie in (0, 1)")
    lam = wave_speed(field.m, field.frame)
    total = sum(
        (abs(field.frame.u[d]) + lam) / field.grid.spacing[d]
        for d in range(field.grid.dims)
    )
    return cfl / total


def field_moments(values: np.ndarray, lay: IndexLayout, frame: Frame):
    """(rho, u, theta) arrays for a batch of coefficient vectors."""
    rho = values[..., 0]
    if np.any(rho <= 0.0) or not np.all(np.isfinite(rho)):
        raise InadmissibleState("non-physical density in field")
    e_ranks = [lay.rank((1, 0, 0)), lay.rank((0, 1, 0)), lay.rank((0, 0, 1))]
    u = frame.u_array + np.stack(
        [values[..., r] for r in e_ranks], axis=-1
    ) / rho[..., None]
    d2 = [lay.rank((2, 0, 0)), lay.rank((0, 2, 0)), lay.rank((0, 0, 2))]
    trace = sum(values[..., r] for r in d2)
    du2 = ((u - frame.u_array) ** 2).sum(axis=-1)
    theta = frame.theta + (2.0 * trace / rho - du2) / 3.0
    if np.any(theta <= 0.0) or not np.all(np.isfinite(theta)):
        raise InadmissibleState("non-physical temperature in field")
    return rho, u, theta


def collision_source(values: np.ndarray, lay: IndexLayout, frame: Frame,
                     model: CollisionModel) -> np.ndarray:
    """Vectorized collision source for a batch of states (shape (..., N))."""
    lead = values.shape[:-1]
    flat = values.reshape(-1, values.shape[-1])
    rho, u, theta = field_moments(flat, lay, frame)

    du = frame.u_array[None, :] - u
    dtheta = frame.theta - theta
    f_self = change_frame_batch(flat, lay, du, dtheta)

    degs = lay.degrees
    h = f_self * theta[:, None] ** (-0.5 * degs[None, :]) / rho[:, None]

    n0 = model.n0
    qhat = np.empty_like(h)
    if model.quadratic:
        row_ptr, ib, ig, vals = model.tensor.contraction_arrays()
        if vals.size:
            prod = vals[None, :] * h[:, ib] * h[:, ig]
            starts = np.minimum(row_ptr[:-1], vals.size - 1)
            sums = np.add.reduceat(prod, starts, axis=1)
            sums[:, row_ptr[1:] == row_ptr[:-1]] = 0.0
        else:
            sums = np.zeros((flat.shape[0], n0))
        qhat[:, :n0] = sums
    else:
        qhat[:, :n0] = h[:, :n0] @ model.tensor.linearized.matrix.T
    if model.tail_density:
        qhat[:, n0:] = -model.nu * h[:, n0:]
    else:
        qhat[:, n0:] = -(model.nu / rho[:, None]) * h[:, n0:]

    rate = collision_rate(model, rho, theta)
    scale = (rate * rho)[:, None] * theta[:, None] ** (0.5 * degs[None, :])
    out = change_frame_batch(qhat * scale, lay, -du, -dtheta)
    return out.reshape(lead + (values.shape[-1],))


def collision_rate(model: CollisionModel, rho, theta):
    """Collision frequency c rho theta / mu(T), vectorized over states."""
    temperature = model.gas.mass / model.gas.kb * np.asarray(theta)
    mu = viscosity_batch(model.gas, temperature)
    return model.c_constant * np.asarray(theta) * np.asarray(rho) / mu


def _face_fluxes(grid: Grid, frame: Frame, m: int, values: np.ndarray,
                 gas: GasSpec, axis: int, lam: float) -> np.ndarray:
    """Fluxes on all faces along ``axis``; face index leads the result."""
    lay = layout(m)
    periodic = grid.is_periodic(axis)
    lo, hi = reconstruct(values, axis, periodic)
    v = np.moveaxis(values, axis, 0)
    lo = np.moveaxis(lo, axis, 0)
    hi = np.moveaxis(hi, axis, 0)
    n = v.shape[0]

    left_states = np.empty((n + 1,) + v.shape[1:])
    right_states = np.empty_like(left_states)
    left_states[1:] = hi
    right_states[:-1] = lo

    if periodic:
        left_states[0] = hi[-1]
        right_states[-1] = lo[0]
    else:
        # the wall condition acts on the second-order trace at the face
        lo_name, hi_name = ("xlo", "xhi") if axis == 0 else ("ylo", "yhi")
        left_states[0] = ghost_values_batch(
            lo[0].reshape(-1, lay.size), lay, frame, grid.walls[lo_name], gas
        ).reshape(v.shape[1:])
        right_states[-1] = ghost_values_batch(
            hi[-1].reshape(-1, lay.size), lay, frame, grid.walls[hi_name], gas
        ).reshape(v.shape[1:])

    return hll_flux(left_states, right_states, lay, frame, axis, lam)


def flux_divergence(grid: Grid, frame: Frame, m: int, values: np.ndarray,
                    gas: GasSpec, lam: float) -> np.ndarray:
    """Sum over axes of per-cell flux differences divided by spacing."""
    out = np.zeros_like(values)
    for axis in range(grid.dims):
        fluxes = _face_fluxes(grid, frame, m, values, gas, axis, lam)
        diff = (fluxes[1:] - fluxes[:-1]) / grid.spacing[axis]
        out += np.moveaxis(diff, 0, axis)
    return out


def step(field: CellField, dt: float, model: CollisionModel, gas: GasSpec,
         scheme: str = "euler") -> CellField:
    """One explicit time step (forward Euler or two-stage SSP RK)."""
    lam = wave_speed(field.m, field.frame)
    lay = layout(field.m)
    grid, frame = field.grid, field.frame

    def rhs(vals):
        conv = flux_divergence(grid, frame, field.m, vals, gas, lam)
        src = collision_source(vals, lay, frame, model)
        return src - conv

    if scheme == "euler":
        new_vals = field.values + dt * rhs(field.values)
    elif scheme == "ssprk2":
        stage = field.values + dt * rhs(field.values)
        new_vals = 0.5 * (field.values + stage + dt * rhs(stage))
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return CellField(grid, frame, field.m, new_vals, field.time + dt)


def run_transient(field: CellField, model: CollisionModel, gas: GasSpec,
                  t_end: float, cfl: float = 0.45, scheme: str = "euler",
                  callback=None) -> CellField:
    """March to a fixed physical time with CFL-limited steps."""
    while field.time < t_end * (1.0 - 1e-12):
        dt = min(max_dt(field, cfl), t_end - field.time)
        field = step(field, dt, model, gas, scheme)
        if callback is not None:
            callback(field)
    return field


class ConvergenceError(RuntimeError):
    pass


def run_steady_sgs(field: CellField, model: CollisionModel, gas: GasSpec,
                   tolerance: float = 1e-8, max_sweeps: int = 100_000,
                   relax: float = 0.9, log=None) -> tuple[CellField, dict]:
    """Symmetric cell-by-cell Gauss-Seidel iteration to steady state (1D).

    Each sweep visits the cells forward then backward, recomputing the
    local steady residual with the freshest neighbor values and applying
    a point-implicit update preconditioned by the wave-speed and
    collision-rate diagonal.  Convergence is the largest coefficient
    update scaled by a per-degree magnitude reference.
    """
    if field.grid.dims != 1:
        raise ValueError("the steady iteration is one-dimensional")
    lay = layout(field.m)
    lam = wave_speed(field.m, field.frame)
    frame = field.frame
    dx = field.grid.spacing[0]
    nx = field.grid.shape[0]
    grid = field.grid
    work = field.values.copy()

    degs = lay.degrees
    scale = max(float(np.abs(work[:, 0]).max()), 1e-300) * (
        frame.theta ** (0.5 * degs)
    )

    rho0, _, theta0 = field_moments(work, lay, frame)
    rate0 = float(np.max(collision_rate(model, rho0, theta0)))
    diag = lam / dx + rate0 * max(model.nu, 1.0)

    wall_lo = grid.walls.get("xlo")
    wall_hi = grid.walls.get("xhi")
    periodic = grid.is_periodic(0)

    def slope(j):
        if 0 < j < nx - 1:
            return 0.5 * (work[j + 1] - work[j - 1])
        if periodic:
            return 0.5 * (work[(j + 1) % nx] - work[(j - 1) % nx])
        return (work[1] - work[0]) if j == 0 else (work[-1] - work[-2])

    def face_flux(jface):
        # face between cells jface-1 and jface (walls at 0 and nx)
        if jface == 0:
            right = work[0] - 0.5 * slope(0)
            if periodic:
                left = work[-1] + 0.5 * slope(nx - 1)
            else:
                left = ghost_values_batch(right[None, :], lay, frame,
                                          wall_lo, gas)[0]
        elif jface == nx:
            left = work[-1] + 0.5 * slope(nx - 1)
            if periodic:
                right = work[0] - 0.5 * slope(0)
            else:
                right = ghost_values_batch(left[None, :], lay, frame,
                                           wall_hi, gas)[0]
        else:
            left = work[jface - 1] + 0.5 * slope(jface - 1)
            right = work[jface] - 0.5 * slope(jface)
        return hll_flux(left[None, :], right[None, :], lay, frame, 0, lam)[0]

    def cell_residual(j):
        conv = (face_flux(j + 1) - face_flux(j)) / dx
        src = collision_source_single(work[j], lay, frame, model)
        return src - conv

    max_res0 = 0.0
    for j in range(nx):
        res = cell_residual(j)
        max_res0 = max(max_res0, float(np.max(np.abs(res) / (diag * scale))))
    if max_res0 < tolerance:
        return (
            CellField(grid, frame, field.m, work, field.time),
            {"sweeps": 0, "change": max_res0},
        )

    # the steady equations fix the profile but not the total mass (walls
    # pass none), so each sweep projects back onto the initial mass
    mass0 = float(work[:, 0].sum())

    for sweep in range(1, max_sweeps + 1):
        max_change = 0.0
        for j in list(range(nx)) + list(range(nx - 1, -1, -1)):
            update = relax / diag * cell_residual(j)
            work[j] += update
            change = float(np.max(np.abs(update) / scale))
            if change > max_change:
                max_change = change
        work *= mass0 / float(work[:, 0].sum())
        if log is not None:
            log(sweep, max_change)
        if max_change < tolerance:
            out = CellField(grid, frame, field.m, work, field.time)
            field_moments(work, lay, frame)  # admissibility check
            return out, {"sweeps": sweep, "change": max_change}
    raise ConvergenceError(
        f"steady iteration did not reach {tolerance:g} in {max_sweeps} sweeps"
    )
