"""Dense complex matrix primitives.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Every public
function validates its operands through :func:`as_matrix`, which rejects
non-finite entries and dimensions above :data:`MAX_DIM`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, DimensionError, NotFiniteError, NotInvertibleError

MAX_DIM = 256
INVERTIBILITY_RTOL = 1e-10
JACOBI_RTOL = 1e-14
JACOBI_MAX_SWEEPS = 100


class CartesianPair(NamedTuple):
    """Hermitian real and imaginary parts, ``t = t1 + 1j * t2``."""

    t1: np.ndarray
    t2: np.ndarray


@dataclass(frozen=True)
class EigenResult:
    values: np.ndarray
    vectors: np.ndarray | None = None


def as_matrix(a, *, square: bool = False, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if max(m.shape) > MAX_DIM:
        raise DimensionError(f"{name} has shape {m.shape}; maximum supported dimension is {MAX_DIM}")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NotFiniteError(f"{name} has non-finite entries")
    return m


def as_vector(x, *, name: str = "vector") -> np.ndarray:
    v = np.asarray(x, dtype=np.complex128).reshape(-1)
    if v.size == 0:
        raise DimensionError(f"{name} is empty")
    if not np.all(np.isfinite(v)):
        raise NotFiniteError(f"{name} has non-finite entries")
    return v


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T.copy()


def arith(a, b, op: str, c: complex | None = None) -> np.ndarray:
    """Matrix arithmetic: ``op`` is one of ``add``, ``sub``, ``mul`` or ``scale``.

    ``scale`` multiplies ``b`` by the scalar ``c`` and ignores ``a``
    (``a`` may be ``None``).
    """
    if op == "scale":
        if c is None:
            raise ValueError("scale requires a scalar c")
        return complex(c) * as_matrix(b)
    a = as_matrix(a, name="left operand")
    b = as_matrix(b, name="right operand")
    if op in ("add", "sub"):
        if a.shape != b.shape:
            raise DimensionError(f"cannot {op} shapes {a.shape} and {b.shape}")
        return a + b if op == "add" else a - b
    if op == "mul":
        if a.shape[1] != b.shape[0]:
            raise DimensionError(f"cannot multiply shapes {a.shape} and {b.shape}")
        return a @ b
    raise ValueError(f"unknown op {op!r}")


def cartesian_parts(t) -> CartesianPair:
    t = as_matrix(t, square=True)
    ts = t.conj().T
    return CartesianPair((t + ts) / 2, (t - ts) / 2j)


def _symmetrize(h) -> np.ndarray:
    h = as_matrix(h, square=True)
    return (h + h.conj().T) / 2


def jacobi_eigh(h, want_vectors: bool = True, *, rtol: float = JACOBI_RTOL,
                max_sweeps: int = JACOBI_MAX_SWEEPS) -> EigenResult:
    """Cyclic Jacobi eigensolver for complex Hermitian matrices.

    Each rotation ``G = [[c, s e^{i phi}], [-s e^{-i phi}, c]]`` on the (p, q)
    plane annihilates ``a[p, q] = r e^{i phi}``. Converged when the
    off-diagonal Frobenius norm is at most ``rtol * ||h||_F``.
    """
    a = _symmetrize(h)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(a)
    target = rtol * scale

    mask = ~np.eye(n, dtype=bool)

    def off(m):
        return float(np.linalg.norm(m[mask]))

    residual = off(a)
    sweeps = 0
    while residual > target:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {residual:.3e})",
                residual=residual,
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                app, aqq = a[p, p].real, a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                g = np.array([[c, s * phase], [-s * np.conj(phase), c]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if want_vectors:
                    v[:, idx] = v[:, idx] @ g
        sweeps += 1
        residual = off(a)

    values = np.diag(a).real.copy()
    order = np.argsort(values, kind="stable")
    return EigenResult(values[order], v[:, order] if want_vectors else None)


def hermitian_eigen(h, want_vectors: bool = False, method: str = "lapack") -> EigenResult:
    """Eigenvalues (ascending) of the Hermitian part of ``h``.

    ``method="lapack"`` uses ``numpy.linalg.eigh``; ``method="jacobi"`` uses
    :func:`jacobi_eigh`.
    """
    if method == "jacobi":
        return jacobi_eigh(h, want_vectors)
    if method != "lapack":
        raise ValueError(f"unknown eigen method {method!r}")
    a = _symmetrize(h)
    try:
        if want_vectors:
            w, v = np.linalg.eigh(a)
            return EigenResult(w, v)
        return EigenResult(np.linalg.eigvalsh(a))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver failed: {exc}") from exc


def singular_values(a) -> np.ndarray:
    """Singular values in descending order."""
    a = as_matrix(a)
    try:
        return np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD failed: {exc}") from exc


def operator_norm(a) -> float:
    return float(singular_values(a)[0])


def alpha(a) -> float:
    """inf over unit x of ||a x||^2, i.e. the smallest singular value squared."""
    a = as_matrix(a, square=True)
    return float(singular_values(a)[-1] ** 2)


def is_invertible(a, rtol: float = INVERTIBILITY_RTOL) -> bool:
    sv = singular_values(as_matrix(a, square=True))
    return bool(sv[-1] > rtol * sv[0])


def inverse(a, rtol: float = INVERTIBILITY_RTOL) -> np.ndarray:
    a = as_matrix(a, square=True)
    sv = singular_values(a)
    if not sv[-1] > rtol * sv[0]:
        raise NotInvertibleError(
            f"not invertible at tolerance: sigma_min={sv[-1]:.3e}, sigma_max={sv[0]:.3e}"
        )
    return np.linalg.inv(a)


def direct_sum(r, s) -> np.ndarray:
    r = as_matrix(r, square=True, name="R")
    s = as_matrix(s, square=True, name="S")
    p, q = r.shape[0], s.shape[0]
    out = np.zeros((p + q, p + q), dtype=np.complex128)
    out[:p, :p] = r
    out[p:, p:] = s
    return out


def off_diag_block(r, s) -> np.ndarray:
    """The block operator [[0, R], [S, 0]]; R is p x q and S is q x p."""
    r = as_matrix(r, name="R")
    s = as_matrix(s, name="S")
    p, q = r.shape
    if s.shape != (q, p):
        raise DimensionError(f"blocks not conformable: R is {r.shape}, S must be {(q, p)} but is {s.shape}")
    if p + q > MAX_DIM:
        raise DimensionError(f"block operator dimension {p + q} exceeds {MAX_DIM}")
    out = np.zeros((p + q, p + q), dtype=np.complex128)
    out[:p, p:] = r
    out[p:, :p] = s
    return out


def commutator_norm(r, s) -> float:
    r = as_matrix(r, square=True)
    s = as_matrix(s, square=True)
    return operator_norm(r @ s - s @ r)


def is_normal(t, rtol: float = 1e-10) -> bool:
    t = as_matrix(t, square=True)
    ts = t.conj().T
    return operator_norm(t @ ts - ts @ t) <= rtol * max(1.0, operator_norm(t) ** 2)
