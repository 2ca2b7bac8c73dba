import math

import numpy as np
import pytest

from hermkin.indexing import layout
from hermkin.polynomials import (
    basis_eval,
    gauss_hermite_nodes,
    hermite_eval,
    hermite_roots,
    ikenberry_eval,
    laguerre_eval,
    legendre_eval,
)


def test_hermite_degree_zero_constant():
    assert hermite_eval(0, 7.3) == 1.0


def test_hermite_low_degrees():
    # He_2 = x^2 - 1, He_3 = x^3 - 3x
    assert hermite_eval(2, 2.0) == pytest.approx(3.0)
    assert hermite_eval(3, 1.0) == pytest.approx(-2.0)


def test_hermite_roots_small_degrees():
    assert hermite_roots(1) == pytest.approx([0.0])
    assert hermite_roots(2) == pytest.approx([-1.0, 1.0])
    assert hermite_roots(3) == pytest.approx([-math.sqrt(3), 0.0, math.sqrt(3)])


def test_hermite_roots_symmetric_and_sorted():
    for n in (5, 12, 26, 41):
        r = hermite_roots(n)
        assert np.all(np.diff(r) > 0)
        assert np.abs(r + r[::-1]).max() == 0.0


def test_hermite_roots_match_library_rule():
    for n in (6, 15, 30):
        lib, _ = np.polynomial.hermite_e.hermegauss(n)
        assert np.abs(hermite_roots(n) - lib).max() < 1e-12 * (1 + lib.max())


def test_laguerre_values():
    assert laguerre_eval(0, 0.7, 5.0) == 1.0
    assert laguerre_eval(1, 0.5, 2.0) == pytest.approx(-0.5)
    assert laguerre_eval(2, 0.5, 0.0) == pytest.approx(1.875)


def test_laguerre_matches_scipy():
    from scipy.special import eval_genlaguerre

    rng = np.random.default_rng(3)
    for m in range(8):
        a = 0.5 + m
        x = rng.uniform(0, 10, 5)
        assert np.allclose(laguerre_eval(m, a, x), eval_genlaguerre(m, a, x),
                           rtol=1e-12)


def test_legendre_values():
    assert legendre_eval(4, 1.0) == pytest.approx(1.0)
    assert legendre_eval(2, 0.5) == pytest.approx(-0.125)
    x = np.linspace(-1, 1, 7)
    assert np.allclose(legendre_eval(1, x), x)


def test_basis_eval_peak_and_odd_zero():
    u = np.array([5.0, -2.0, 1.0])
    theta = 3.0
    mass = 2.5
    peak = basis_eval((0, 0, 0), u, theta, mass, u)
    assert peak == pytest.approx(1.0 / (mass * (2 * math.pi * theta) ** 1.5))
    assert basis_eval((1, 0, 0), u, theta, mass, u) == pytest.approx(0.0)


def test_hermite_orthogonality_constant():
    # the normalization every projection formula relies on:
    # int He_a He_b exp(-|v|^2/2) dv = a! (2 pi)^{3/2} delta_ab
    lay = layout(6)
    x, w = gauss_hermite_nodes(14)
    xi = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1).reshape(-1, 3)
    wt = (w[:, None, None] * w[None, :, None] * w[None, None, :]).ravel()
    from hermkin.polynomials import hermite_eval_all

    herm = [hermite_eval_all(6, xi[:, d]) for d in range(3)]
    rng = np.random.default_rng(11)
    idx = rng.integers(0, lay.size, size=(40, 2))
    idx[:5, 1] = idx[:5, 0]
    for ia, ib in idx:
        alpha, beta = lay.unrank(int(ia)), lay.unrank(int(ib))
        ha = herm[0][alpha[0]] * herm[1][alpha[1]] * herm[2][alpha[2]]
        hb = herm[0][beta[0]] * herm[1][beta[1]] * herm[2][beta[2]]
        got = float((ha * hb) @ wt)
        fact = math.prod(math.factorial(k) for k in alpha)
        expected = fact * (2 * math.pi) ** 1.5 if alpha == beta else 0.0
        assert got == pytest.approx(expected, abs=1e-10 * fact * (2 * math.pi) ** 1.5)


def test_basis_eval_consistent_with_orthogonality():
    # projecting the basis function against its own polynomial recovers
    # the coefficient normalization used by the transforms
    mass = 6.63e-26
    u = np.array([10.0, 0.0, -4.0])
    theta = 2.4
    x, w = gauss_hermite_nodes(12)
    xi = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1).reshape(-1, 3)
    wt = (w[:, None, None] * w[None, :, None] * w[None, None, :]).ravel()
    v = u[None, :] + math.sqrt(theta) * xi
    gauss = np.exp(-0.5 * (xi**2).sum(axis=1))
    from hermkin.polynomials import hermite_eval_all

    herm = [hermite_eval_all(4, xi[:, d]) for d in range(3)]
    for alpha in [(0, 0, 0), (1, 0, 0), (2, 1, 0), (0, 2, 2)]:
        vals = basis_eval(alpha, u, theta, mass, v)
        hb = herm[0][alpha[0]] * herm[1][alpha[1]] * herm[2][alpha[2]]
        got = float(((vals * hb * theta**1.5 / gauss) @ wt))
        fact = math.prod(math.factorial(k) for k in alpha)
        expected = fact / mass * theta ** (-0.5 * sum(alpha))
        assert got == pytest.approx(expected, rel=1e-10)


def test_ikenberry_low_order():
    pts = np.array([[0.3, -1.2, 2.0], [1.0, 0.0, 0.0]])
    assert np.allclose(ikenberry_eval((0, 0, 0), pts), 1.0)
    assert np.allclose(ikenberry_eval((1, 0, 0), pts), pts[:, 0])
    r2 = (pts**2).sum(axis=1)
    assert np.allclose(ikenberry_eval((2, 0, 0), pts), pts[:, 0] ** 2 - r2 / 3.0)


def test_ikenberry_harmonic():
    # second-difference Laplacian vanishes for every component
    rng = np.random.default_rng(5)
    pts = rng.normal(size=(20, 3))
    h = 1e-4
    lay = layout(5)
    for kappa in lay:
        if sum(kappa) < 2:
            continue
        lap = np.zeros(pts.shape[0])
        for d in range(3):
            ep = pts.copy()
            em = pts.copy()
            ep[:, d] += h
            em[:, d] -= h
            lap += (
                ikenberry_eval(kappa, ep)
                - 2 * ikenberry_eval(kappa, pts)
                + ikenberry_eval(kappa, em)
            ) / h**2
        scale = np.abs(ikenberry_eval(kappa, pts)).max() + 1.0
        assert np.abs(lap).max() < 1e-6 * scale / h**0  # h^2 scheme, tol absorbs


def test_ikenberry_homogeneous():
    rng = np.random.default_rng(8)
    pts = rng.normal(size=(10, 3))
    for kappa in [(2, 1, 0), (1, 1, 1), (3, 0, 2)]:
        k = sum(kappa)
        left = ikenberry_eval(kappa, 1.7 * pts)
        assert np.allclose(left, 1.7**k * ikenberry_eval(kappa, pts))
