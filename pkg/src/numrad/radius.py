"""Numerical radius by angular maximization of the top eigenvalue.

For a square ``T`` let ``H(theta) = (e^{i theta} T + e^{-i theta} T^*) / 2``.
Then ``w(T) = max_theta lambda_max(H(theta))``. The function
``f(theta) = lambda_max(H(theta))`` is continuous and Lipschitz with
constant ``||T||``; its kinks (eigenvalue crossings) are convex corners, so
maxima sit at smooth points and a bracketing search converges to them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NotFiniteError
from .matrix import as_matrix, as_vector, cartesian_parts, operator_norm

TWO_PI = 2.0 * math.pi
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
MAX_COARSE = 8192
MAX_REFINED_CANDIDATES = 32
GRID_BLOCK = 64
# entries per batched eigen call; keeps temporaries around 64 MB
_BATCH_ENTRIES = 1 << 22


@dataclass(frozen=True)
class RadiusEstimate:
    value: float
    theta_star: float
    witness: np.ndarray
    grid_points: int
    refined: bool


@dataclass(frozen=True)
class RangeBoundary:
    points: np.ndarray
    thetas: np.ndarray


def rotated_real_part(t, theta: float) -> np.ndarray:
    t = as_matrix(t, square=True)
    z = complex(math.cos(theta), math.sin(theta))
    h = z * t
    return (h + h.conj().T) / 2


def _hermitian_pair(t):
    # H(theta) = cos(theta) * Re T - sin(theta) * Im T
    p = cartesian_parts(t)
    return p.t1, p.t2


def _stack(re, im, thetas):
    c = np.cos(thetas)[:, None, None]
    s = np.sin(thetas)[:, None, None]
    return c * re - s * im


def _grid_values(re, im, m: int) -> np.ndarray:
    """f on the uniform grid 2*pi*k/m, k = 0..m-1.

    For even m only the first half is diagonalized: H(theta + pi) = -H(theta),
    so f(theta + pi) = -lambda_min(H(theta)).
    """
    n = re.shape[0]
    half = m // 2 if m % 2 == 0 else m
    thetas = TWO_PI * np.arange(half) / m
    chunk = max(1, _BATCH_ENTRIES // (n * n))
    top = np.empty(half)
    bottom = np.empty(half)
    for start in range(0, half, chunk):
        w = np.linalg.eigvalsh(_stack(re, im, thetas[start:start + chunk]))
        top[start:start + chunk] = w[:, -1]
        bottom[start:start + chunk] = w[:, 0]
    if half == m:
        return top
    return np.concatenate([top, -bottom])


def _top_eigenvalue(re, im, theta: float) -> float:
    return float(np.linalg.eigvalsh(math.cos(theta) * re - math.sin(theta) * im)[-1])


def golden_max(f, a: float, b: float, tol: float):
    """Golden-section search for a maximum of ``f`` on ``[a, b]``.

    Returns ``(x, f(x))`` for the best point evaluated; stops once the
    bracket is no wider than ``tol``.
    """
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    best = (c, fc) if fc >= fd else (d, fd)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
            if fc > best[1]:
                best = (c, fc)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
            if fd > best[1]:
                best = (d, fd)
        if c >= d:
            # bracket collapsed below float resolution
            break
    return best


def _coarse_size(coarse: int, n: int) -> int:
    m = coarse
    while n > 32 * (m // coarse) and m < MAX_COARSE:
        m *= 2
    return min(max(m, coarse), max(coarse, MAX_COARSE))


def numerical_radius(t, coarse: int = 512, tol: float = 1e-12) -> RadiusEstimate:
    """Numerical radius with a certificate.

    A coarse uniform sweep of ``f`` is followed by golden-section refinement
    of every grid-local maximum that could still beat the incumbent: its
    value must be within ``max(1e-9, ||T|| * h)`` of the best grid value,
    ``h`` being the grid spacing (the Lipschitz bound on ``f``).
    """
    t = as_matrix(t, square=True)
    if coarse < 8:
        raise ValueError(f"coarse grid must have at least 8 points, got {coarse}")
    n = t.shape[0]
    m = _coarse_size(coarse, n)
    re, im = _hermitian_pair(t)
    f = _grid_values(re, im, m)
    h = TWO_PI / m
    k_best = int(np.argmax(f))
    best_theta, best_val = k_best * h, float(f[k_best])

    margin = max(1e-9, operator_norm(t) * h)
    left, right = np.roll(f, 1), np.roll(f, -1)
    is_peak = (f >= left) & (f >= right) & (f >= best_val - margin)
    candidates = np.flatnonzero(is_peak)
    if candidates.size > MAX_REFINED_CANDIDATES:
        # only near-flat f produces this many; keep the highest
        order = np.argsort(-f[candidates], kind="stable")
        candidates = candidates[order[:MAX_REFINED_CANDIDATES]]
    if candidates.size == 0:
        candidates = np.array([k_best])

    def objective(theta):
        return _top_eigenvalue(re, im, theta)

    for k in candidates:
        theta, val = golden_max(objective, (k - 1) * h, (k + 1) * h, tol)
        if val > best_val:
            best_theta, best_val = theta, val

    best_theta = best_theta % TWO_PI
    w, v = np.linalg.eigh(math.cos(best_theta) * re - math.sin(best_theta) * im)
    witness = v[:, -1]
    witness = witness / np.linalg.norm(witness)
    return RadiusEstimate(
        value=max(float(w[-1]), 0.0),
        theta_star=float(best_theta),
        witness=witness,
        grid_points=m,
        refined=True,
    )


def _top_values(re, im, thetas) -> np.ndarray:
    n = re.shape[0]
    chunk = max(1, _BATCH_ENTRIES // (n * n))
    out = np.empty(len(thetas))
    for start in range(0, len(thetas), chunk):
        out[start:start + chunk] = np.linalg.eigvalsh(_stack(re, im, thetas[start:start + chunk]))[:, -1]
    return out


def numerical_radius_gridsearch(t, m: int) -> float:
    """Max of ``f`` over ``m`` equally spaced angles, no refinement.

    The result is the exact grid maximum, but not every grid point is
    diagonalized. ``f'(theta)`` is a Rayleigh quotient of ``H(theta + pi/2)``,
    so ``f`` is ``||T||``-Lipschitz. The grid is first sampled every
    ``GRID_BLOCK`` points. A block of fine points is only evaluated when its
    Lipschitz upper bound reaches the best sampled value.
    """
    t = as_matrix(t, square=True)
    if m < 16:
        raise ValueError(f"grid must have at least 16 points, got {m}")
    re, im = _hermitian_pair(t)
    blocks = m // GRID_BLOCK
    if blocks < 16:
        return max(float(np.max(_grid_values(re, im, m))), 0.0)

    centers = np.arange(blocks) * GRID_BLOCK
    coarse = _top_values(re, im, TWO_PI * centers / m)
    best = float(np.max(coarse))
    # every fine index lies within GRID_BLOCK/2 + 1 steps of some center
    lip = operator_norm(t) * (1.0 + 1e-9)
    reach = lip * TWO_PI * (GRID_BLOCK // 2 + 1) / m + 1e-15 * lip
    live = np.flatnonzero(coarse + reach >= best)
    offsets = np.arange(-(GRID_BLOCK // 2), GRID_BLOCK - GRID_BLOCK // 2)
    idx = np.unique((centers[live, None] + offsets[None, :]).reshape(-1) % m)
    if idx.size:
        best = max(best, float(np.max(_top_values(re, im, TWO_PI * idx / m))))
    return max(best, 0.0)


def numerical_range_boundary(t, m: int) -> RangeBoundary:
    """Boundary samples ``<T x, x>`` with ``x`` the top eigenvector of ``H(theta)``."""
    t = as_matrix(t, square=True)
    if m < 3:
        raise ValueError(f"need at least 3 boundary points, got {m}")
    re, im = _hermitian_pair(t)
    thetas = TWO_PI * np.arange(m) / m
    _, v = np.linalg.eigh(_stack(re, im, thetas))
    x = v[:, :, -1]
    points = np.einsum("ki,ij,kj->k", x.conj(), t, x)
    return RangeBoundary(points=points, thetas=thetas)


def rayleigh(t, x) -> complex:
    """The quotient ``<T x, x> / <x, x>``."""
    t = as_matrix(t, square=True)
    x = as_vector(x)
    if x.shape[0] != t.shape[0]:
        raise DimensionError(f"vector length {x.shape[0]} does not match matrix {t.shape}")
    xx = np.vdot(x, x).real
    if xx == 0.0:
        raise ValueError("rayleigh quotient of the zero vector")
    if not math.isfinite(xx):
        raise NotFiniteError("vector norm overflowed")
    return complex(np.vdot(x, t @ x) / xx)
