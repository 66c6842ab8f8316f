import numpy as np
import pytest
from hypothesis import given, settings

from numrad import matrix as mx
from numrad.errors import ConvergenceError, DimensionError, NotFiniteError, NotInvertibleError

from conftest import complex_gaussian, random_unitary, square_matrices


def quadratic_eigs(h):
    # roots of det(H - lambda I) for 2x2 Hermitian H
    a, d = h[0, 0].real, h[1, 1].real
    b = abs(h[0, 1])
    mid, rad = (a + d) / 2, np.sqrt(((a - d) / 2) ** 2 + b * b)
    return np.array([mid - rad, mid + rad])


def test_adjoint_examples():
    a = np.array([[1, 1j], [0, 2]])
    np.testing.assert_array_equal(mx.adjoint(a), [[1, 0], [-1j, 2]])
    h = np.array([[2, 1 - 1j], [1 + 1j, -3]])
    np.testing.assert_array_equal(mx.adjoint(h), h)
    r = np.array([[1 + 2j, 3], [4j, 5], [6, 7 - 1j]])
    assert mx.adjoint(r).shape == (2, 3)
    np.testing.assert_array_equal(mx.adjoint(mx.adjoint(r)), r)


def test_arith_examples(rng):
    a = complex_gaussian(rng, 3, 3)
    np.testing.assert_array_equal(mx.arith(a, np.zeros((3, 3)), "add"), a)
    np.testing.assert_array_equal(mx.arith(np.eye(3), a, "mul"), a)
    np.testing.assert_array_equal(mx.arith(None, np.eye(2), "scale", 2), np.diag([2, 2]))
    np.testing.assert_array_equal(mx.arith(a, a, "sub"), np.zeros((3, 3)))


def test_arith_dimension_mismatch_names_shapes():
    with pytest.raises(DimensionError, match=r"\(2, 3\).*\(2, 3\)"):
        mx.arith(np.ones((2, 3)), np.ones((2, 3)), "mul")
    with pytest.raises(DimensionError, match="add"):
        mx.arith(np.ones((2, 2)), np.ones((3, 3)), "add")


def test_cartesian_parts_examples():
    t1, t2 = mx.cartesian_parts([[0, 1], [0, 0]])
    np.testing.assert_array_equal(t1, [[0, 0.5], [0.5, 0]])
    np.testing.assert_array_equal(t2, [[0, -0.5j], [0.5j, 0]])
    h = np.array([[1, 2 - 1j], [2 + 1j, 0]])
    t1, t2 = mx.cartesian_parts(h)
    np.testing.assert_array_equal(t1, h)
    np.testing.assert_array_equal(t2, 0)
    t1, t2 = mx.cartesian_parts(1j * h)
    np.testing.assert_array_equal(t1, 0)
    np.testing.assert_allclose(t2, h, atol=0)


def test_cartesian_parts_rejects_rectangular():
    with pytest.raises(DimensionError):
        mx.cartesian_parts(np.ones((2, 3)))


@given(square_matrices())
def test_cartesian_round_trip_and_hermitian(t):
    t1, t2 = mx.cartesian_parts(t)
    np.testing.assert_array_equal(t1, t1.conj().T)
    np.testing.assert_array_equal(t2, t2.conj().T)
    np.testing.assert_allclose(t1 + 1j * t2, t, rtol=0, atol=1e-15 * max(1.0, np.abs(t).max()))


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_hermitian_eigen_examples(method):
    np.testing.assert_allclose(mx.hermitian_eigen(np.diag([3, 1, 2]), method=method).values, [1, 2, 3])
    np.testing.assert_allclose(mx.hermitian_eigen([[0, 0.5], [0.5, 0]], method=method).values,
                               [-0.5, 0.5], atol=1e-15)


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_hermitian_eigen_matches_quadratic_oracle(rng, method):
    for _ in range(50):
        g = complex_gaussian(rng, 2, 2) * 3
        h = (g + g.conj().T) / 2
        got = mx.hermitian_eigen(h, method=method).values
        np.testing.assert_allclose(got, quadratic_eigs(h), rtol=0, atol=1e-10)


@pytest.mark.parametrize("n", [1, 3, 8, 20])
def test_jacobi_residuals_and_unitarity(rng, n):
    g = complex_gaussian(rng, n, n)
    h = (g + g.conj().T) / 2
    res = mx.jacobi_eigh(h)
    assert np.all(np.diff(res.values) >= 0)
    v = res.vectors
    np.testing.assert_allclose(v.conj().T @ v, np.eye(n), atol=1e-12)
    scale = max(1.0, mx.operator_norm(h))
    for k in range(n):
        assert np.linalg.norm(h @ v[:, k] - res.values[k] * v[:, k]) <= 1e-10 * scale
    np.testing.assert_allclose(res.values, np.linalg.eigvalsh(h), atol=1e-12 * scale)


def test_jacobi_reports_nonconvergence():
    h = np.array([[1, 2j, 0], [-2j, 0, 1], [0, 1, 3]])
    with pytest.raises(ConvergenceError) as info:
        mx.jacobi_eigh(h, max_sweeps=0)
    assert info.value.residual > 0


def test_hermitian_eigen_symmetrizes_input():
    h = np.array([[1.0, 2.0 + 1e-13], [2.0, 1.0]])
    np.testing.assert_allclose(mx.hermitian_eigen(h).values, [-1, 3], atol=1e-12)


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eigenvalues_unitarily_invariant(rng, method):
    for n in (2, 4, 7):
        g = complex_gaussian(rng, n, n)
        h = (g + g.conj().T) / 2
        u = random_unitary(rng, n)
        a = mx.hermitian_eigen(h, method=method).values
        b = mx.hermitian_eigen(u.conj().T @ h @ u, method=method).values
        np.testing.assert_allclose(a, b, atol=1e-9)


def test_singular_values_examples(rng):
    np.testing.assert_allclose(mx.singular_values([[0, 1], [2, 0]]), [2, 1])
    np.testing.assert_allclose(mx.singular_values(random_unitary(rng, 5)), np.ones(5), atol=1e-12)
    x, y = complex_gaussian(rng, 4), complex_gaussian(rng, 4)
    rank1 = np.outer(x, y.conj())
    # for rank one, ||A||_F^2 = tr(A*A) = sigma_1^2
    frob = np.sqrt(np.trace(rank1.conj().T @ rank1).real)
    sv = mx.singular_values(rank1)
    np.testing.assert_allclose(sv[0], frob, rtol=1e-12)
    np.testing.assert_allclose(sv[0], np.linalg.norm(x) * np.linalg.norm(y), rtol=1e-12)
    np.testing.assert_allclose(sv[1:], 0, atol=1e-12 * sv[0])


def test_operator_norm_examples(rng):
    assert mx.operator_norm(np.eye(3)) == pytest.approx(1.0, abs=1e-15)
    assert mx.operator_norm([[0, 1], [0, 0]]) == pytest.approx(1.0, abs=1e-15)
    r, s = complex_gaussian(rng, 3, 3), complex_gaussian(rng, 3, 3)
    assert mx.operator_norm(mx.off_diag_block(r, s)) == pytest.approx(
        max(mx.operator_norm(r), mx.operator_norm(s)), rel=1e-12)


def test_alpha_examples(rng):
    assert mx.alpha(np.eye(4)) == pytest.approx(1.0)
    assert mx.alpha([[1, 2], [2, 4]]) == pytest.approx(0.0, abs=1e-28)
    r = complex_gaussian(rng, 4, 4)
    inv_norm = mx.operator_norm(np.linalg.inv(r))
    assert mx.alpha(r) == pytest.approx(inv_norm ** -2, rel=1e-10)


def test_inverse_examples():
    np.testing.assert_allclose(mx.inverse(np.diag([2, 4])), np.diag([0.5, 0.25]))
    np.testing.assert_allclose(mx.inverse(np.eye(3)), np.eye(3))
    np.testing.assert_allclose(mx.inverse([[0, 1], [2, 0]]), [[0, 0.5], [1, 0]])


def test_inverse_residual_is_condition_scaled(rng):
    for n in (2, 5, 9):
        a = complex_gaussian(rng, n, n)
        sv = mx.singular_values(a)
        cond = sv[0] / sv[-1]
        assert np.abs(a @ mx.inverse(a) - np.eye(n)).max() <= 1e-9 * cond


def test_inverse_rejects_singular():
    with pytest.raises(NotInvertibleError, match="not invertible at tolerance"):
        mx.inverse([[1, 2], [2, 4]])
    with pytest.raises(NotInvertibleError):
        mx.inverse([[1, 0], [0, 1e-12]])
    assert mx.is_invertible([[1, 0], [0, 1e-9]])


def test_direct_sum_examples(rng):
    np.testing.assert_array_equal(mx.direct_sum([[2]], [[3]]), np.diag([2, 3]))
    r, s = complex_gaussian(rng, 2, 2), complex_gaussian(rng, 3, 3)
    ds = mx.direct_sum(r, s)
    assert ds.shape == (5, 5)
    assert mx.operator_norm(ds) == pytest.approx(max(mx.operator_norm(r), mx.operator_norm(s)), rel=1e-12)
    with pytest.raises(DimensionError):
        mx.direct_sum(np.ones((2, 3)), np.eye(2))


def test_off_diag_block_examples(rng):
    np.testing.assert_array_equal(mx.off_diag_block([[1]], [[2]]), [[0, 1], [2, 0]])
    np.testing.assert_array_equal(mx.off_diag_block(np.zeros((2, 2)), np.zeros((2, 2))), np.zeros((4, 4)))
    r, s = complex_gaussian(rng, 2, 3), complex_gaussian(rng, 3, 2)
    t = mx.off_diag_block(r, s)
    assert t.shape == (5, 5)
    np.testing.assert_array_equal(mx.adjoint(t), mx.off_diag_block(s.conj().T, r.conj().T))
    with pytest.raises(DimensionError, match="conformable"):
        mx.off_diag_block(np.ones((2, 3)), np.ones((2, 3)))


def test_input_validation():
    with pytest.raises(NotFiniteError):
        mx.operator_norm([[np.nan, 0], [0, 1]])
    with pytest.raises(NotFiniteError):
        mx.alpha([[np.inf]])
    with pytest.raises(DimensionError, match="256"):
        mx.as_matrix(np.zeros((257, 257)))
    with pytest.raises(DimensionError):
        mx.as_matrix(np.zeros((0, 3)))
    assert mx.as_matrix(5).shape == (1, 1)


def test_parallelogram_identity(rng):
    for _ in range(200):
        n = int(rng.integers(2, 33))
        a, b = complex_gaussian(rng, n), complex_gaussian(rng, n)
        lhs = np.linalg.norm(a) ** 2 + np.linalg.norm(b) ** 2
        rhs = (np.linalg.norm(a - b) ** 2 + np.linalg.norm(a + b) ** 2) / 2
        assert abs(lhs - rhs) <= 1e-12 * lhs


@settings(max_examples=60, deadline=None)
@given(square_matrices(max_dim=6))
def test_singular_values_of_adjoint(t):
    a, b = mx.singular_values(t), mx.singular_values(t.conj().T)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-10 * max(1.0, a[0]))


def test_alpha_of_adjoint_and_inverse_relation(rng):
    for _ in range(50):
        n = int(rng.integers(1, 8))
        r = complex_gaussian(rng, n, n)
        a = mx.alpha(r)
        assert abs(a - mx.alpha(r.conj().T)) <= 1e-10 * a
        assert abs(a - mx.operator_norm(mx.inverse(r)) ** -2) <= 1e-8 * a


def test_rayleigh_spot_checks(rng):
    for _ in range(50):
        n = int(rng.integers(1, 7))
        t = complex_gaussian(rng, n, n)
        x = complex_gaussian(rng, n)
        x /= np.linalg.norm(x)
        tx2 = np.linalg.norm(t @ x) ** 2
        assert mx.alpha(t) * (1 - 1e-12) <= tx2 <= mx.operator_norm(t) ** 2 * (1 + 1e-12)


def test_is_normal():
    assert mx.is_normal(np.diag([1, 1j]))
    assert not mx.is_normal([[0, 1], [0, 0]])
    assert mx.commutator_norm([[0, 1], [0, 0]], np.eye(2)) == 0
