import math

import numpy as np
import pytest

from oracles import sphere_quadrature

from hermkin.harmonic import (
    PairTable,
    hermite_to_harmonic,
    pair_coeff,
    sphere_integral,
)
from hermkin.indexing import layout
from hermkin.polynomials import hermite_product_eval, ikenberry_eval, laguerre_eval


def test_pair_coeff_trivial():
    assert pair_coeff(0, 0, 0, 0) == 1.0


def test_pair_coeff_degree_conservation():
    assert pair_coeff(2, 1, 1, 1) == 0.0


def test_pair_coeff_known_values():
    assert pair_coeff(1, 0, 1, 0) == pytest.approx(1.0 / math.sqrt(2.0))
    # single-polynomial split: 2^{-k/2} k!/(kp! lp!)
    assert pair_coeff(2, 0, 1, 1) == pytest.approx(1.0)
    for k in range(5):
        for kp in range(k + 1):
            expected = 2.0 ** (-0.5 * k) * math.factorial(k) / (
                math.factorial(kp) * math.factorial(k - kp)
            )
            assert pair_coeff(k, 0, kp, k - kp) == pytest.approx(expected)


def test_pair_coeff_reconstructs_product():
    # He_k(h + g/2) He_l(h - g/2) expanded over He(sqrt2 h) He(g/sqrt2)
    rng = np.random.default_rng(2)
    from hermkin.polynomials import hermite_eval

    for _ in range(30):
        k, l = rng.integers(0, 6, 2)
        h, g = rng.normal(size=2) * 1.5
        direct = hermite_eval(int(k), h + 0.5 * g) * hermite_eval(int(l), h - 0.5 * g)
        total = 0.0
        for kp in range(k + l + 1):
            lp = k + l - kp
            total += (
                pair_coeff(int(k), int(l), kp, lp)
                * hermite_eval(kp, math.sqrt(2.0) * h)
                * hermite_eval(lp, g / math.sqrt(2.0))
            )
        assert total == pytest.approx(direct, rel=1e-11, abs=1e-11)


def test_pair_table_matches_function():
    table = PairTable(6)
    for k in range(4):
        for l in range(3):
            for kp in range(k + l + 1):
                assert table.get(k, l, kp) == pytest.approx(
                    pair_coeff(k, l, kp, k + l - kp)
                )


def test_hermite_to_harmonic_trivial():
    terms = hermite_to_harmonic((0, 0, 0))
    assert terms == (((0, 0, 0), 1.0),)


def test_hermite_to_harmonic_degree_two():
    terms = dict(hermite_to_harmonic((2, 0, 0)))
    assert terms[(0, 0, 0)] == pytest.approx(1.0)
    assert terms[(1, 0, 0)] == pytest.approx(-2.0 / 3.0)


def test_hermite_to_harmonic_reconstruction():
    # pointwise: He^kappa(v) = sum coeff * Laguerre(|v|^2/2) * Y(v)
    rng = np.random.default_rng(4)
    pts = rng.normal(size=(20, 3)) * 1.3
    r2 = (pts**2).sum(axis=1)
    lay = layout(5)
    for kappa in lay:
        k = sum(kappa)
        direct = hermite_product_eval(kappa, pts)
        total = np.zeros(pts.shape[0])
        for m_idx, coeff in hermite_to_harmonic(kappa):
            mbar = sum(m_idx)
            rest = tuple(kappa[d] - 2 * m_idx[d] for d in range(3))
            total += (
                coeff
                * laguerre_eval(mbar, k - 2 * mbar + 0.5, 0.5 * r2)
                * ikenberry_eval(rest, pts)
            )
        scale = np.abs(direct).max() + 1.0
        assert np.abs(total - direct).max() < 1e-10 * scale


def test_sphere_integral_trivial():
    assert sphere_integral((0, 0, 0), (0, 0, 0)) == pytest.approx(4 * math.pi)
    assert sphere_integral((1, 0, 0), (1, 0, 0)) == pytest.approx(4 * math.pi / 3)
    assert sphere_integral((1, 0, 0), (0, 1, 0)) == pytest.approx(0.0)


def test_sphere_integral_degree_mismatch_zero():
    assert sphere_integral((2, 0, 0), (1, 0, 0)) == 0.0
    assert sphere_integral((3, 1, 0), (1, 0, 0)) == 0.0


def test_sphere_integral_matches_quadrature():
    lay = layout(5)
    rng = np.random.default_rng(9)
    picks = rng.integers(0, lay.size, size=(40, 2))
    for ia, ib in picks:
        kappa, lam = lay.unrank(int(ia)), lay.unrank(int(ib))
        got = sphere_integral(kappa, lam)
        ref = sphere_quadrature(
            lambda p: ikenberry_eval(kappa, p) * ikenberry_eval(lam, p)
        )
        assert got == pytest.approx(ref, abs=1e-10 * (abs(ref) + 1.0))
