"""Seeded random ensembles and batch verification of every check.

Each sample is a deterministic function of ``(seed, index)`` (see
:mod:`numrad.rng`), so samples can be generated and checked in any order or
in parallel; reductions always run in index order.
"""

from __future__ import annotations

import hashlib
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Collection

import numpy as np

from . import bounds as bd
from . import matrix as mx
from .errors import InequalityViolation
from .rng import Xoshiro256

MAX_ENSEMBLE_DIM = 64
HISTOGRAM_BINS = 32
SINGLE_KINDS = ("ginibre", "hermitian", "normal", "unitary", "nilpotent_perturbed", "invertible_shifted")
PAIR_KINDS = ("off_diag_pair", "scalar_pair", "commuting_poly_pair")
KINDS = SINGLE_KINDS + PAIR_KINDS
PAIR_CHECKS = frozenset({
    bd.CheckId.HOLBROOK_4, bd.CheckId.DIRECT_SUM, bd.CheckId.EQ_1_5, bd.CheckId.FAREI,
    bd.CheckId.COR_2_5, bd.CheckId.COR_2_3_PRODUCT, bd.CheckId.SCALAR_COND,
})


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str
    dim: int
    seed: int
    count: int
    epsilon: float = 1e-2

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}; choose from {', '.join(KINDS)}")
        if not 1 <= self.dim <= MAX_ENSEMBLE_DIM:
            raise ValueError(f"dim must be in 1..{MAX_ENSEMBLE_DIM}, got {self.dim}")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.count < 1:
            raise ValueError(f"count must be positive, got {self.count}")
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")

    @classmethod
    def from_kind(cls, kind: str, dim: int, seed: int, count: int) -> "EnsembleSpec":
        """Accepts ``nilpotent_perturbed:<epsilon>`` as well as plain kind names."""
        name, _, eps = kind.partition(":")
        if eps:
            if name != "nilpotent_perturbed":
                raise ValueError(f"only nilpotent_perturbed takes a parameter, got {kind!r}")
            return cls(name, dim, seed, count, float(eps))
        return cls(name, dim, seed, count)

    @property
    def is_pair(self) -> bool:
        return self.kind in PAIR_KINDS

    @property
    def tag(self) -> str:
        return f"nilpotent_perturbed:{self.epsilon!r}" if self.kind == "nilpotent_perturbed" else self.kind


@dataclass(frozen=True)
class VerificationRecord:
    sample_index: int
    checks: list
    matrix_digest: str


@dataclass
class SuiteSummary:
    spec: EnsembleSpec
    tol: float
    records: list
    counts: dict
    min_slack: dict
    max_negative_slack: float
    failed: bool
    violations: list = field(default_factory=list)


@dataclass(frozen=True)
class CounterexampleReport:
    found: bool
    matrix: np.ndarray | None
    norm: float
    radius: float
    dee: float
    inv_norm_sq_recip: float
    samples_tried: int
    sample_index: int | None = None


# ---- samplers -------------------------------------------------------------

def ginibre(rng: Xoshiro256, n: int) -> np.ndarray:
    return np.array([rng.complex_normal() for _ in range(n * n)]).reshape(n, n)


def gram_schmidt(a: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt on the columns of ``a``."""
    q = np.array(a, dtype=np.complex128)
    n = q.shape[1]
    for j in range(n):
        for k in range(j):
            q[:, j] -= np.vdot(q[:, k], q[:, j]) * q[:, k]
        q[:, j] /= np.linalg.norm(q[:, j])
    return q


def _nilpotent_perturbed(rng: Xoshiro256, n: int, eps: float) -> np.ndarray:
    a = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(i + 1, n):
            a[i, j] = rng.complex_normal()
    return a + eps * np.eye(n)


def _invertible_shifted(rng: Xoshiro256, n: int) -> np.ndarray:
    g = ginibre(rng, n)
    sv = mx.singular_values(g)
    if sv[-1] > 1e-3 * max(1.0, sv[0]):
        return g
    shift = 1e-3 + float(np.max(np.abs(np.linalg.eigvals(g))))
    return g + shift * np.eye(n)


def _poly(rng: Xoshiro256, t: np.ndarray) -> np.ndarray:
    degree = 1 + rng.integer(3)
    out = np.zeros_like(t)
    power = np.eye(t.shape[0], dtype=np.complex128)
    for _ in range(degree + 1):
        out = out + rng.complex_normal() * power
        power = power @ t
    return out


def generate(spec: EnsembleSpec, index: int):
    """Sample ``index`` of the ensemble: a matrix, or an ``(R, S)`` pair for pair kinds."""
    if not 0 <= index < spec.count:
        raise IndexError(f"sample index {index} outside 0..{spec.count - 1}")
    rng = Xoshiro256.for_sample(spec.seed, index)
    n, kind = spec.dim, spec.kind
    if kind == "ginibre":
        return ginibre(rng, n)
    if kind == "hermitian":
        g = ginibre(rng, n)
        return (g + g.conj().T) / 2
    if kind == "unitary":
        return gram_schmidt(ginibre(rng, n))
    if kind == "normal":
        u = gram_schmidt(ginibre(rng, n))
        z = np.array([rng.complex_normal() for _ in range(n)])
        return (u * z) @ u.conj().T
    if kind == "nilpotent_perturbed":
        return _nilpotent_perturbed(rng, n, spec.epsilon)
    if kind == "invertible_shifted":
        return _invertible_shifted(rng, n)
    if kind == "off_diag_pair":
        return ginibre(rng, n), ginibre(rng, n)
    if kind == "scalar_pair":
        r, s = rng.normal(), rng.normal()
        return r * np.eye(n, dtype=np.complex128), s * np.eye(n, dtype=np.complex128)
    # commuting_poly_pair
    t = ginibre(rng, n)
    return _poly(rng, t), _poly(rng, t)


def digest(sample) -> str:
    parts = sample if isinstance(sample, tuple) else (sample,)
    h = hashlib.sha256()
    for m in parts:
        m = np.ascontiguousarray(m, dtype="<c16")
        h.update(f"{m.shape[0]}x{m.shape[1]};".encode())
        h.update(m.tobytes())
    return h.hexdigest()


# ---- verification -----------------------------------------------------------

def sample_checks(spec: EnsembleSpec, sample, tol: float, checks: Collection | None = None) -> list:
    """All verdicts for one sample.

    Single kinds get :func:`bounds_report` checks on the matrix. Pair kinds get
    the pair checks on ``(R, S)`` plus the single-operator checks on the block
    ``[[0, R], [S, 0]]``.
    """
    if not spec.is_pair:
        return bd.bounds_report(sample, tol, checks).checks
    r, s = sample
    wanted = None if checks is None else {bd.CheckId(c) for c in checks}
    single = None if wanted is None else wanted - PAIR_CHECKS
    pair = None if wanted is None else wanted & (PAIR_CHECKS | {bd.CheckId.HOLBROOK_COMM_2})
    out = []
    if single is None or single:
        out.extend(bd.bounds_report(mx.off_diag_block(r, s), tol, single).checks)
    if pair is None or pair:
        commuting = True if spec.kind == "commuting_poly_pair" else None
        out.extend(bd.pair_report(r, s, tol, commuting=commuting, checks=pair).checks)
    return out


def _evaluate(args) -> VerificationRecord:
    spec, tol, checks, index = args
    sample = generate(spec, index)
    return VerificationRecord(index, sample_checks(spec, sample, tol, checks), digest(sample))


def worker_count(workers: int | None = None) -> int:
    """Requested workers, capped by ``NUMRAD_THREADS`` and the CPU count."""
    n = workers if workers is not None else (os.cpu_count() or 1)
    cap = os.environ.get("NUMRAD_THREADS")
    if cap:
        try:
            cap_n = int(cap)
        except ValueError:
            raise ValueError(f"NUMRAD_THREADS must be a positive integer, got {cap!r}") from None
        if cap_n < 1:
            raise ValueError(f"NUMRAD_THREADS must be a positive integer, got {cap!r}")
        n = min(n, cap_n)
    return max(1, n)


def run_suite(spec: EnsembleSpec, tol: float = bd.DEFAULT_TOL, *, checks: Collection | None = None,
              workers: int | None = None, fail_fast: bool = False) -> SuiteSummary:
    """Verify every sample of ``spec``.

    Binding violations mark the summary as failed and are listed with the
    offending sample. With ``fail_fast`` the first one raises
    :class:`InequalityViolation` instead.
    """
    jobs = [(spec, tol, checks, i) for i in range(spec.count)]
    n_workers = min(worker_count(workers), spec.count)
    if n_workers == 1:
        records = [_evaluate(job) for job in jobs]
    else:
        chunk = max(1, spec.count // (4 * n_workers))
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            records = list(pool.map(_evaluate, jobs, chunksize=chunk))

    counts: dict = {}
    min_slack: dict = {}
    violations = []
    worst = 0.0
    for rec in records:
        for v in rec.checks:
            c = counts.setdefault(v.label, {s.value: 0 for s in bd.Status})
            c[v.status.value] += 1
            min_slack[v.label] = min(min_slack.get(v.label, math.inf), v.slack)
            if v.binding and v.status is not bd.Status.VACUOUS:
                worst = min(worst, v.slack)
            if v.failed:
                sample = generate(spec, rec.sample_index)
                if fail_fast:
                    raise InequalityViolation(
                        f"{v.label} violated on sample {rec.sample_index} (slack {v.slack:.3e})",
                        matrix=sample, verdict=v)
                violations.append({"sample_index": rec.sample_index, "verdict": v, "sample": sample})
    return SuiteSummary(
        spec=spec,
        tol=tol,
        records=records,
        counts=dict(sorted(counts.items())),
        min_slack=dict(sorted(min_slack.items())),
        max_negative_slack=worst,
        failed=bool(violations),
        violations=violations,
    )


def slack_statistics(records) -> dict:
    """Per check label: count, min, max, mean and a 32-bin slack histogram.

    Bin edges split ``[min, max]`` evenly; a zero-width range puts every
    sample in the first bin.
    """
    records = list(records)
    if not records:
        raise ValueError("slack_statistics needs at least one record")
    by_label: dict = {}
    for rec in records:
        for v in rec.checks:
            by_label.setdefault(v.label, []).append(v.slack)
    out = {}
    for label in sorted(by_label):
        x = np.array(by_label[label])
        lo, hi = float(x.min()), float(x.max())
        edges = np.linspace(lo, hi, HISTOGRAM_BINS + 1)
        if hi > lo:
            idx = np.minimum(((x - lo) / (hi - lo) * HISTOGRAM_BINS).astype(int), HISTOGRAM_BINS - 1)
        else:
            idx = np.zeros(x.size, dtype=int)
        hist = np.bincount(idx, minlength=HISTOGRAM_BINS)
        out[label] = {
            "count": int(x.size),
            "min": lo,
            "max": hi,
            "mean": float(math.fsum(x) / x.size),
            "bin_edges": edges.tolist(),
            "histogram": hist.tolist(),
        }
    return out


# ---- counterexample search --------------------------------------------------

def search_sqrt2_counterexample(dim: int, budget: int, seed: int, *,
                                hermitian_only: bool = False) -> CounterexampleReport:
    """Random search for an invertible A with ||A|| > sqrt(2) w(A).

    Even sample indices draw from the nilpotent-perturbed family with
    epsilon log-uniform in [1e-4, 1e-1]; odd indices draw Ginibre matrices.
    ``hermitian_only`` restricts the search to Hermitian samples. Every hit
    is checked to fail the invertible-case hypothesis D(A) <= ||A^{-1}||^{-2};
    a hit that satisfies it raises :class:`InequalityViolation`.
    """
    if budget < 1:
        raise ValueError(f"budget must be at least 1, got {budget}")
    if not 1 <= dim <= MAX_ENSEMBLE_DIM:
        raise ValueError(f"dim must be in 1..{MAX_ENSEMBLE_DIM}, got {dim}")
    for i in range(budget):
        rng = Xoshiro256.for_sample(seed, i)
        if hermitian_only:
            g = ginibre(rng, dim)
            a = (g + g.conj().T) / 2
        elif i % 2 == 0:
            a = _nilpotent_perturbed(rng, dim, rng.log_uniform(1e-4, 1e-1))
        else:
            a = ginibre(rng, dim)
        d = bd.OperatorData(a)
        if not d.invertible:
            continue
        if d.norm > bd.SQRT2 * d.radius * (1.0 + 1e-9):
            h = d.inv_norm_sq_recip
            if d.dee <= h:
                raise InequalityViolation(
                    "sqrt(2) bound hypothesis holds on a violator: implementation bug "
                    f"(D={d.dee:.17g}, ||A^-1||^-2={h:.17g})", matrix=a)
            return CounterexampleReport(True, a, d.norm, d.radius, d.dee, h, i + 1, i)
    return CounterexampleReport(False, None, math.nan, math.nan, math.nan, math.nan, budget)
