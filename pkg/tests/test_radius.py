import math

import numpy as np
import pytest
from hypothesis import given, settings

from numrad import matrix as mx
from numrad.errors import DimensionError
from numrad.radius import (
    golden_max,
    numerical_radius,
    numerical_radius_gridsearch,
    numerical_range_boundary,
    rayleigh,
    rotated_real_part,
)

from conftest import complex_gaussian, random_unitary, square_matrices


def sphere_oracle(t, steps=1500):
    """sup |<Tx, x>| over x = (cos a, e^{ib} sin a), brute force on a grid (2x2 only)."""
    a = np.linspace(0, np.pi / 2, steps)[:, None]
    b = np.linspace(0, 2 * np.pi, 2 * steps, endpoint=False)[None, :]
    x0, x1 = np.cos(a), np.exp(1j * b) * np.sin(a)
    q = (np.conj(x0) * (t[0, 0] * x0 + t[0, 1] * x1)
         + np.conj(x1) * (t[1, 0] * x0 + t[1, 1] * x1))
    return float(np.abs(q).max())


def test_sphere_oracle_values():
    # oracle-derived values frozen below
    assert sphere_oracle(np.array([[0, 1], [2, 0]], complex)) == pytest.approx(1.5, abs=1e-6)
    assert sphere_oracle(np.array([[0, 1], [0, 0]], complex)) == pytest.approx(0.5, abs=1e-6)
    assert sphere_oracle(np.array([[0.01, 1], [0, 0.01]], complex)) == pytest.approx(0.51, abs=1e-6)


def test_rotated_real_part_examples(rng):
    t = complex_gaussian(rng, 3, 3)
    t1, t2 = mx.cartesian_parts(t)
    np.testing.assert_allclose(rotated_real_part(t, 0.0), t1, atol=1e-15)
    np.testing.assert_allclose(rotated_real_part(t, 3 * math.pi / 2), t2, atol=1e-15)
    np.testing.assert_allclose(rotated_real_part(t, math.pi), -t1, atol=1e-15)
    h = rotated_real_part(t, 0.7)
    np.testing.assert_array_equal(h, h.conj().T)
    with pytest.raises(DimensionError):
        rotated_real_part(np.ones((2, 3)), 0.0)


def test_numerical_radius_examples():
    est = numerical_radius(np.eye(3))
    assert est.value == pytest.approx(1.0, abs=1e-12)
    assert numerical_radius([[0, 1], [0, 0]]).value == pytest.approx(0.5, abs=1e-12)
    assert numerical_radius([[0, 1], [2, 0]]).value == pytest.approx(1.5, abs=1e-12)
    assert numerical_radius([[0.01, 1], [0, 0.01]]).value == pytest.approx(0.51, abs=1e-12)
    assert numerical_radius([[3 - 4j]]).value == pytest.approx(5.0, abs=1e-12)


def test_numerical_radius_matches_sphere_oracle(rng):
    for _ in range(5):
        t = complex_gaussian(rng, 2, 2)
        assert numerical_radius(t).value == pytest.approx(sphere_oracle(t), abs=2e-5)


def test_normal_radius_equals_norm(rng):
    for n in (2, 4, 6):
        u = random_unitary(rng, n)
        t = (u * complex_gaussian(rng, n)) @ u.conj().T
        assert abs(numerical_radius(t).value - mx.operator_norm(t)) <= 1e-9


def test_estimate_certificate(rng):
    for n in (1, 2, 3, 5, 8):
        t = complex_gaussian(rng, n, n)
        est = numerical_radius(t)
        assert 0 <= est.theta_star < 2 * math.pi
        assert np.linalg.norm(est.witness) == pytest.approx(1.0, abs=1e-12)
        assert abs(abs(rayleigh(t, est.witness)) - est.value) <= 1e-9 * max(1.0, est.value)
        norm = mx.operator_norm(t)
        assert norm / 2 - 1e-9 <= est.value <= norm + 1e-9
        assert est.grid_points == 512 and est.refined


def test_coarse_grid_grows_with_dimension(rng):
    assert numerical_radius(complex_gaussian(rng, 33, 33)).grid_points == 1024
    assert numerical_radius(complex_gaussian(rng, 4, 4), coarse=64).grid_points == 64
    with pytest.raises(ValueError):
        numerical_radius(np.eye(2), coarse=4)


def test_gridsearch_examples():
    assert numerical_radius_gridsearch(np.eye(2), 16) == pytest.approx(1.0)
    assert numerical_radius_gridsearch([[0, 1], [0, 0]], 1024) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(ValueError):
        numerical_radius_gridsearch(np.eye(2), 8)


def test_gridsearch_odd_grid_matches_even(rng):
    t = complex_gaussian(rng, 4, 4)
    a = numerical_radius_gridsearch(t, 4097)
    b = numerical_radius_gridsearch(t, 4096)
    assert a == pytest.approx(b, abs=1e-5)


def test_gridsearch_agrees_with_refined(rng):
    for n in (2, 3, 5):
        t = complex_gaussian(rng, n, n)
        w = numerical_radius(t).value
        assert abs(numerical_radius_gridsearch(t, 1 << 17) - w) <= 1e-7 * max(1.0, w)


def test_gridsearch_nested_grids_monotone(rng):
    t = complex_gaussian(rng, 4, 4)
    vals = [numerical_radius_gridsearch(t, 16 << k) for k in range(8)]
    assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))
    w = numerical_radius(t).value
    assert all(w >= v - 1e-10 for v in vals)


def test_boundary_examples():
    b = numerical_range_boundary(np.eye(2), 16)
    np.testing.assert_allclose(b.points, 1.0, atol=1e-14)
    assert len(b.points) == len(b.thetas) == 16
    b = numerical_range_boundary(np.diag([0.0, 1.0]), 64)
    assert np.all(np.abs(b.points.imag) <= 1e-10)
    assert np.all((b.points.real >= -1e-12) & (b.points.real <= 1 + 1e-12))
    t = np.array([[0, 1], [2, 0]], complex)
    b = numerical_range_boundary(t, 720)
    assert np.abs(b.points).max() == pytest.approx(numerical_radius_gridsearch(t, 720), abs=1e-8)
    with pytest.raises(ValueError):
        numerical_range_boundary(np.eye(2), 2)


def test_boundary_points_inside_radius_disk(rng):
    for n in (2, 5):
        t = complex_gaussian(rng, n, n)
        w = numerical_radius(t).value
        b = numerical_range_boundary(t, 200)
        assert np.abs(b.points).max() <= w + 1e-8


def test_boundary_of_offdiag_is_ellipse():
    # W([[0,1],[2,0]]) is the ellipse with semi-axes 3/2 (real) and 1/2 (imaginary)
    b = numerical_range_boundary(np.array([[0, 1], [2, 0]], complex), 90)
    z = b.points
    np.testing.assert_allclose((z.real / 1.5) ** 2 + (z.imag / 0.5) ** 2, 1.0, atol=1e-10)


def test_rayleigh_examples(rng):
    x = complex_gaussian(rng, 3)
    assert rayleigh(np.eye(3), x) == pytest.approx(1.0)
    assert rayleigh(np.diag([1, 2]), [0, 1]) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        rayleigh(np.eye(2), [0, 0])
    with pytest.raises(DimensionError):
        rayleigh(np.eye(2), [1, 0, 0])


def test_golden_max_on_parabola():
    x, fx = golden_max(lambda z: -(z - 0.3) ** 2, 0.0, 1.0, 1e-10)
    assert x == pytest.approx(0.3, abs=1e-9)
    assert fx == pytest.approx(0.0, abs=1e-18)


@settings(max_examples=40, deadline=None)
@given(square_matrices(max_dim=4))
def test_sandwich_property(t):
    w = numerical_radius(t).value
    norm = mx.operator_norm(t)
    assert norm / 2 - 1e-9 * max(1, norm) <= w <= norm + 1e-9 * max(1, norm)


def test_berger_power_inequality(rng):
    for n in (2, 3, 4):
        t = complex_gaussian(rng, n, n)
        w = numerical_radius(t).value
        for k in (2, 3):
            wk = numerical_radius(np.linalg.matrix_power(t, k)).value
            assert wk <= w ** k + 1e-8 * w ** k


def test_unitary_invariance_and_scaling(rng):
    for n in (2, 4):
        t = complex_gaussian(rng, n, n)
        u = random_unitary(rng, n)
        w = numerical_radius(t).value
        assert abs(numerical_radius(u.conj().T @ t @ u).value - w) <= 1e-8 * max(1, w)
        c = complex(-1.7, 0.4)
        assert numerical_radius(c * t).value == pytest.approx(abs(c) * w, rel=1e-10)


def test_direct_sum_radius(rng):
    r, s = complex_gaussian(rng, 2, 2), complex_gaussian(rng, 3, 3)
    w = numerical_radius(mx.direct_sum(r, s)).value
    assert abs(w - max(numerical_radius(r).value, numerical_radius(s).value)) <= 1e-9


def test_gridsearch_pruning_matches_exhaustive_grid(rng):
    from numrad.radius import TWO_PI, _hermitian_pair, _top_values
    cases = [complex_gaussian(rng, n, n) for n in (2, 3, 5)]
    cases += [np.array([[0, 1], [0, 0]]), np.eye(3), np.diag([1.0, -1.0, 1j])]
    for t in cases:
        m = 1 << 12
        re, im = _hermitian_pair(mx.as_matrix(t))
        full = max(float(np.max(_top_values(re, im, TWO_PI * np.arange(m) / m))), 0.0)
        assert numerical_radius_gridsearch(t, m) == full
