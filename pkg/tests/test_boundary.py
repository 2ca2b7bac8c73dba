import math

import numpy as np
import pytest

from oracles import boundary_closure_oracle

from hermkin.boundary import (
    HalfSpaceTables,
    WallSpec,
    apply_closure,
    boundary_condition_count,
    ghost_state,
    odd_set,
    wall_closure,
)
from hermkin.frames import CoeffVector, Frame, maxwellian_coeffs
from hermkin.indexing import layout
from hermkin.kernels import argon
from hermkin.solver import hll_flux, wave_speed


def test_wall_spec_validation():
    with pytest.raises(ValueError):
        WallSpec(3, 1, 300.0)
    with pytest.raises(ValueError):
        WallSpec(0, 1, -5.0)
    with pytest.raises(ValueError):
        WallSpec(0, 1, 300.0, accommodation=1.5)


def test_odd_set_small():
    assert odd_set(1) == [(1, 0, 0)]
    assert set(odd_set(2)) == {(1, 0, 0), (1, 1, 0), (1, 0, 1)}


def test_odd_set_count_identity():
    for m in range(1, 21):
        assert len(odd_set(m)) == boundary_condition_count(m)


def test_odd_set_other_axes():
    assert set(odd_set(2, axis=1)) == {(0, 1, 0), (1, 1, 0), (0, 1, 1)}


def test_tables_reference_values():
    theta_bar, theta_w = 2.0, 3.0
    t = HalfSpaceTables(theta_bar, theta_w, 6)
    assert t.s_seq[1] == pytest.approx(math.sqrt(theta_w / (2 * math.pi)))
    assert t.s_seq[2] == 0.0
    assert t.s_seq[3] == pytest.approx(-theta_bar * t.s_seq[1] / 6.0)
    assert t.j_hat[0] == 0.5
    assert t.j_hat[1] == pytest.approx(-t.s_seq[1])
    # half-range first product moment of the frame Gaussian
    assert t.s_tab[1, 0] == pytest.approx(1.0 / math.sqrt(2 * math.pi))
    assert t.k_tab[2, 0] == 0.0
    assert t.k_tab[2, 2] == 0.0


def test_j_recursion():
    t = HalfSpaceTables(2.0, 3.0, 5)
    u = 0.7
    j = t.j_tan(u)[0]
    assert j[0] == 1.0
    assert j[1] == pytest.approx(u)
    for r in range(2, 6):
        assert j[r] == pytest.approx(((3.0 - 2.0) * j[r - 2] + u * j[r - 1]) / r)


def _random_state(rng, m, frame):
    base = maxwellian_coeffs(
        9.28e-6, (0.0, 30.0, -10.0), 1.2 * frame.theta, frame, m
    )
    vals = base.values * (1 + 0.05 * rng.standard_normal(base.values.size))
    return CoeffVector(frame, m, vals)


def test_normal_flux_coefficient_vanishes(rng, argon_gas):
    frame = Frame((0.0, 0.0, 0.0), argon_gas.kb * 273.15 / argon_gas.mass)
    c = _random_state(rng, 5, frame)
    for omega in (0.0, 0.4, 1.0):
        wall = WallSpec(0, +1, 300.0, (0.0, 50.0, 0.0), omega)
        closure = wall_closure(c, wall, argon_gas)
        assert closure[(1, 0, 0)] == pytest.approx(0.0, abs=1e-18)


def test_specular_limit_zeroes_closure(rng, argon_gas):
    frame = Frame((0.0, 0.0, 0.0), argon_gas.kb * 273.15 / argon_gas.mass)
    c = _random_state(rng, 4, frame)
    wall = WallSpec(0, +1, 400.0, (0.0, 80.0, 0.0), 0.0)
    closure = wall_closure(c, wall, argon_gas)
    assert all(v == 0.0 for v in closure.values())


def test_closure_matches_half_space_oracle(rng, argon_gas):
    # coefficients of different degree carry different theta powers, so
    # deviations are scaled per degree
    frame = Frame((0.0, 0.0, 0.0), argon_gas.kb * 273.15 / argon_gas.mass)
    for m, tol in ((4, 1e-8), (5, 1e-8), (7, 1e-8)):
        c = _random_state(rng, m, frame)
        for side, omega, t_w, u_w in [
            (+1, 1.0, 300.0, (0.0, 50.0, 0.0)),
            (+1, 0.6, 500.0, (0.0, -80.0, 25.0)),
            (-1, 1.0, 273.15, (0.0, 119.25, 0.0)),
            (-1, 0.3, 350.0, (0.0, 10.0, -5.0)),
        ]:
            wall = WallSpec(0, side, t_w, u_w, omega)
            got = wall_closure(c, wall, argon_gas)
            ref = boundary_closure_oracle(c.values, c.layout, frame, wall,
                                          argon_gas)
            rho = c.values[0]
            for alpha, val in ref.items():
                scale = rho * frame.theta ** (0.5 * sum(alpha))
                assert abs(got[alpha] - val) < tol * scale


def test_closure_permutes_axes(rng, argon_gas):
    # a y-axis wall must equal the x-axis closure of the axis-swapped state
    frame = Frame((0.0, 0.0, 0.0), argon_gas.kb * 273.15 / argon_gas.mass)
    m = 4
    lay = layout(m)
    c = _random_state(rng, m, frame)
    wall_y = WallSpec(1, +1, 320.0, (40.0, 0.0, -10.0), 0.8)
    got = wall_closure(c, wall_y, argon_gas)
    swapped = np.empty_like(c.values)
    for i, a in enumerate(lay):
        swapped[lay.rank((a[1], a[0], a[2]))] = c.values[i]
    wall_x = WallSpec(0, +1, 320.0, (0.0, 40.0, -10.0), 0.8)
    ref = wall_closure(CoeffVector(frame, m, swapped), wall_x, argon_gas)
    for alpha, val in got.items():
        assert val == pytest.approx(ref[(alpha[1], alpha[0], alpha[2])],
                                    rel=1e-12, abs=1e-300)


def test_frame_velocity_must_match_wall():
    gas = argon()
    frame = Frame((5.0, 0.0, 0.0), gas.kb * 273.15 / gas.mass)
    c = maxwellian_coeffs(1e-5, (5.0, 0.0, 0.0), frame.theta, frame, 3)
    wall = WallSpec(0, +1, 273.15)
    with pytest.raises(ValueError):
        wall_closure(c, wall, gas)


def test_ghost_of_wall_equilibrium_is_interior(argon_gas):
    # a Maxwellian at exactly the wall state is already in equilibrium
    # with the wall, so the mirrored ghost equals the interior
    t_w = 300.0
    theta_w = argon_gas.kb * t_w / argon_gas.mass
    frame = Frame((0.0, 20.0, 0.0), theta_w)
    c = maxwellian_coeffs(2e-5, (0.0, 20.0, 0.0), theta_w, frame, 5)
    wall = WallSpec(0, +1, t_w, (0.0, 20.0, 0.0), 1.0)
    ghost = ghost_state(c, wall, argon_gas)
    scale = c.values[0] * theta_w ** (0.5 * c.layout.degrees)
    assert np.abs((ghost.values - c.values) / scale).max() < 1e-10


def test_ghost_specular_is_reflection(rng, argon_gas):
    frame = Frame((0.0, 0.0, 0.0), argon_gas.kb * 273.15 / argon_gas.mass)
    c = _random_state(rng, 4, frame)
    wall = WallSpec(0, -1, 273.15, (0.0, 0.0, 0.0), 0.0)
    ghost = ghost_state(c, wall, argon_gas)
    lay = c.layout
    for i, a in enumerate(lay):
        sign = -1.0 if a[0] % 2 else 1.0
        assert ghost.values[i] == pytest.approx(sign * c.values[i])


def test_ghost_wall_face_mass_flux_zero(rng, argon_gas):
    frame = Frame((0.0, 0.0, 0.0), argon_gas.kb * 273.15 / argon_gas.mass)
    m = 5
    lay = layout(m)
    lam = wave_speed(m, frame)
    for side in (+1, -1):
        wall = WallSpec(0, side, 350.0, (0.0, -60.0, 0.0), 1.0)
        for _ in range(5):
            c = _random_state(rng, m, frame)
            ghost = ghost_state(c, wall, argon_gas)
            if side > 0:
                flux = hll_flux(c.values[None, :], ghost.values[None, :],
                                lay, frame, 0, lam)[0]
            else:
                flux = hll_flux(ghost.values[None, :], c.values[None, :],
                                lay, frame, 0, lam)[0]
            scale = np.abs(flux).max()
            assert abs(flux[0]) < 1e-12 * scale


def test_ghost_continuous_in_accommodation(rng, argon_gas):
    frame = Frame((0.0, 0.0, 0.0), argon_gas.kb * 273.15 / argon_gas.mass)
    c = _random_state(rng, 4, frame)
    wall = lambda w: WallSpec(0, +1, 300.0, (0.0, 30.0, 0.0), w)
    g0 = ghost_state(c, wall(0.0), argon_gas).values
    geps = ghost_state(c, wall(1e-8), argon_gas).values
    assert np.abs(geps - g0).max() < 1e-6 * np.abs(g0).max()


def test_apply_closure_touches_only_odd(rng, argon_gas):
    frame = Frame((0.0, 0.0, 0.0), argon_gas.kb * 273.15 / argon_gas.mass)
    c = _random_state(rng, 4, frame)
    wall = WallSpec(0, +1, 300.0, (0.0, 30.0, 0.0), 1.0)
    closed = apply_closure(c, wall, argon_gas)
    lay = c.layout
    for i, a in enumerate(lay):
        if a[0] % 2 == 0:
            assert closed.values[i] == c.values[i]


def test_build_tables_bundles_slip_rows():
    from hermkin.boundary import build_tables

    t = build_tables(2.0, 3.0, (0.7, -1.2), 5)
    assert t.j1[0] == 1.0 and t.j1[1] == pytest.approx(0.7)
    assert t.j2[1] == pytest.approx(-1.2)
    assert np.array_equal(t.j1, t.j_tan(0.7)[0])
