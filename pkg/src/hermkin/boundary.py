"""Maxwell wall boundary closure for axis-aligned walls.

The wall condition replaces the coefficients whose normal-axis exponent
is odd by linear combinations of the even ones, built from half-space
moments of the wall Maxwellian and of the specularly reflected state.
Those moments satisfy two-term recursions evaluated here exactly.

The finite-volume embedding uses ghost states: the exterior value at a
wall face mirrors the interior so that the face-averaged trace satisfies
the closure.  In particular the trace's normal-flux coefficient vanishes
identically, which keeps the mass flux through every wall face at zero
each step (and makes the accommodation-zero limit the exact specular
reflection).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .frames import CoeffVector, moments
from .indexing import MultiIndex, layout
from .kernels import GasSpec


@dataclass(frozen=True)
class WallSpec:
    """Axis-aligned wall: outward normal sign * e_axis, temperature in K,
    wall velocity (normal component must match the expansion frame), and
    accommodation in [0, 1]."""

    axis: int
    side: int
    temperature: float
    velocity: tuple[float, float, float] = (0.0, 0.0, 0.0)
    accommodation: float = 1.0

    def __post_init__(self):
        if self.axis not in (0, 1, 2) or self.side not in (-1, 1):
            raise ValueError("wall needs axis in {0,1,2} and side in {-1,+1}")
        if self.temperature <= 0:
            raise ValueError("wall temperature must be positive")
        if not 0.0 <= self.accommodation <= 1.0:
            raise ValueError("accommodation must lie in [0, 1]")
        object.__setattr__(self, "velocity", tuple(float(v) for v in self.velocity))

    @property
    def tangential_axes(self) -> tuple[int, int]:
        return tuple(d for d in range(3) if d != self.axis)


def odd_set(m: int, axis: int = 0) -> list[MultiIndex]:
    """All indices of degree <= m whose component along ``axis`` is odd."""
    if m < 1:
        raise ValueError("need m >= 1")
    return [alpha for alpha in layout(m) if alpha[axis] % 2 == 1]


def boundary_condition_count(m: int) -> int:
    """Number of inflow characteristics: the ceiling sum over transverse
    index pairs of half the remaining degree."""
    total = 0
    for a2 in range(m + 1):
        for a3 in range(m + 1 - a2):
            total += math.ceil((m - a2 - a3) / 2)
    return total


class HalfSpaceTables:
    """Half-space moment recursions for one wall and one expansion frame.

    ``j_tan`` accepts per-point tangential slip, so the same table
    machinery serves a whole row of boundary cells at once.
    """

    def __init__(self, theta_bar: float, theta_w: float, m: int):
        self.theta_bar = theta_bar
        self.theta_w = theta_w
        self.m = m
        n = m + 2
        s_seq = np.zeros(n)
        s_seq[1] = math.sqrt(theta_w / (2.0 * math.pi))
        for r in range(2, n):
            s_seq[r] = -(r - 2) / (r * (r - 1)) * theta_bar * s_seq[r - 2]
        self.s_seq = s_seq

        j_hat = np.zeros(n)
        j_hat[0] = 0.5
        if n > 1:
            j_hat[1] = -s_seq[1]
        for r in range(2, n):
            j_hat[r] = (theta_w - theta_bar) / r * j_hat[r - 2] - s_seq[r]
        self.j_hat = j_hat

        # the closed form equals -1/r! times the half-range product moment
        # of He_r and He_s; the prefactor is 1/sqrt(2 pi), pinned by the
        # half-space quadrature oracle
        k_tab = np.zeros((n, n))
        for r in range(1, n, 2):
            for s in range(0, n, 2):
                dfact = math.prod(range(s - 1, 0, -2)) if s > 1 else 1
                k_tab[r, s] = (
                    (-1.0) ** ((r + s - 1) // 2)
                    / math.sqrt(2.0 * math.pi)
                    * dfact
                    / (r * 2.0 ** ((r - 1) / 2.0) * math.factorial((r - 1) // 2))
                )
        self.k_tab = k_tab

        s_tab = np.zeros((n, n))
        s_tab[0, 0] = 0.5
        for s in range(1, n):
            s_tab[0, s] = k_tab[1, s - 1]
        for r in range(1, n):
            s_tab[r, 0] = k_tab[r, 0]
            for s in range(1, n):
                s_tab[r, s] = k_tab[r, s] + s_tab[r - 1, s - 1] * s / r
        self.s_tab = s_tab

    def j_tan(self, slip) -> np.ndarray:
        """J_r at tangential slip values; shape (npoints, m+2)."""
        slip = np.atleast_1d(np.asarray(slip, dtype=float))
        n = self.m + 2
        out = np.zeros((slip.size, n))
        out[:, 0] = 1.0
        if n > 1:
            out[:, 1] = slip
        for r in range(2, n):
            out[:, r] = (
                (self.theta_w - self.theta_bar) * out[:, r - 2] + slip * out[:, r - 1]
            ) / r
        return out


def build_tables(theta_bar: float, theta_w: float, slip, m: int) -> HalfSpaceTables:
    """Half-space tables for one wall, with the tangential moment rows
    evaluated at the two slip components and attached as ``j1``, ``j2``."""
    tables = HalfSpaceTables(theta_bar, theta_w, m)
    slip = tuple(float(s) for s in slip)
    tables.j1 = tables.j_tan(slip[0])[0]
    tables.j2 = tables.j_tan(slip[1])[0]
    return tables


def _closure_batch(values, lay, frame, wall, gas):
    """Closure values for the odd-normal coefficients of a batch of
    states; ``values`` has shape (ncells, N).  Returns (odd ranks, array
    (ncells, n_odd))."""
    axis = wall.axis
    t1, t2 = wall.tangential_axes
    m = lay.max_degree
    theta_bar = frame.theta
    theta_w = gas.kb * wall.temperature / gas.mass
    if abs(frame.u[axis] - wall.velocity[axis]) > 1e-9 * math.sqrt(theta_bar):
        raise ValueError(
            "expansion frame normal velocity must match the wall velocity"
        )
    tables = HalfSpaceTables(theta_bar, theta_w, m)

    ncells = values.shape[0]
    # tangential slip is taken against the expansion frame velocity: the
    # wall condition only involves the wall Maxwellian and the frame
    # basis, so the half-space quadrature fixes this argument
    j1 = tables.j_tan(wall.velocity[t1] - frame.u[t1])[0]
    j2 = tables.j_tan(wall.velocity[t2] - frame.u[t2])[0]

    # shared first sum: sqrt(2 pi / theta_w) * sum_k S(1,2k) theta^(1/2-k) f_{2k e}
    shared = np.zeros(ncells)
    for k in range(m // 2 + 1):
        idx = [0, 0, 0]
        idx[axis] = 2 * k
        shared += (
            tables.s_tab[1, 2 * k]
            * theta_bar ** (0.5 - k)
            * values[:, lay.rank(tuple(idx))]
        )
    shared *= math.sqrt(2.0 * math.pi / theta_w)

    omega = wall.accommodation
    prefactor = 2.0 * omega / (2.0 - omega)
    ranks = []
    cols = []
    for alpha in odd_set(m, axis):
        a1 = alpha[axis]
        a2 = alpha[t1]
        a3 = alpha[t2]
        col = tables.j_hat[a1] * j1[a2] * j2[a3] * shared
        k_max = (m - a2 - a3) // 2
        for k in range(k_max + 1):
            idx = list(alpha)
            idx[axis] = 2 * k
            col = col + (
                tables.s_tab[a1, 2 * k]
                * theta_bar ** (0.5 * a1 - k)
                * values[:, lay.rank(tuple(idx))]
            )
        cols.append(prefactor * wall.side * col)
        ranks.append(lay.rank(alpha))
    out = np.stack(cols, axis=1) if cols else np.zeros((ncells, 0))
    return np.array(ranks, dtype=np.int64), out


def wall_closure(interior: CoeffVector, wall: WallSpec, gas: GasSpec) -> dict:
    """Odd-normal coefficient values imposed by the wall, as a map from
    multi-index to value.  Even coefficients are untouched."""
    ranks, vals = _closure_batch(
        interior.values[None, :], interior.layout, interior.frame, wall, gas
    )
    return {interior.layout.unrank(int(r)): float(v) for r, v in zip(ranks, vals[0])}


def apply_closure(interior: CoeffVector, wall: WallSpec, gas: GasSpec) -> CoeffVector:
    """Interior state with its odd-normal coefficients replaced by the
    wall closure values."""
    ranks, vals = _closure_batch(
        interior.values[None, :], interior.layout, interior.frame, wall, gas
    )
    out = interior.values.copy()
    out[ranks] = vals[0]
    return CoeffVector(interior.frame, interior.m, out)


def ghost_state(interior: CoeffVector, wall: WallSpec, gas: GasSpec) -> CoeffVector:
    """Exterior state for the wall-face flux.

    Mirrors the interior through the closure: even coefficients copied,
    odd-normal coefficients set to (2 * closure - interior) so the face
    average satisfies the wall condition exactly.  At zero accommodation
    this is the exact specular reflection of the interior state.
    """
    ranks, vals = _closure_batch(
        interior.values[None, :], interior.layout, interior.frame, wall, gas
    )
    out = interior.values.copy()
    out[ranks] = 2.0 * vals[0] - out[ranks]
    return CoeffVector(interior.frame, interior.m, out)


def ghost_values_batch(values, lay, frame, wall, gas) -> np.ndarray:
    """Vectorized :func:`ghost_state` for a row of boundary cells."""
    ranks, vals = _closure_batch(values, lay, frame, wall, gas)
    out = values.copy()
    out[:, ranks] = 2.0 * vals - out[:, ranks]
    return out
