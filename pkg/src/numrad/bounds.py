"""Machine-checkable verdicts for numerical radius inequalities.

Every check returns a :class:`CheckVerdict` whose ``slack`` is
``right-hand side - left-hand side``; a negative slack beyond the scaled
tolerance ``tol * max(1, scale)`` is a violation. Checks with a hypothesis
(the two corollaries) become ``vacuous`` when the hypothesis slack is below
its own scaled tolerance. Equality checks report ``-|residual|``.

Quantities derived from a matrix (norm, radius, alpha, ...) are computed
lazily and cached by :class:`OperatorData`, so a batch of checks on one
matrix shares a single radius evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Collection, Iterable

import numpy as np

from . import matrix as mx
from .errors import DimensionError, HypothesisError
from .radius import RadiusEstimate, numerical_radius

DEFAULT_TOL = 1e-9
SQRT2 = math.sqrt(2.0)
COMMUTING_RTOL = 1e-10
NORMAL_RTOL = 1e-10


class CheckId(str, Enum):
    EQ_1_1 = "EQ_1_1"
    BERGER = "BERGER"
    NORMAL_EQ = "NORMAL_EQ"
    HOLBROOK_4 = "HOLBROOK_4"
    HOLBROOK_COMM_2 = "HOLBROOK_COMM_2"
    DIRECT_SUM = "DIRECT_SUM"
    EQ_1_5 = "EQ_1_5"
    FAREI = "FAREI"
    THM_2_1 = "THM_2_1"
    PROP_2_2 = "PROP_2_2"
    EQ_3 = "EQ_3"
    EQ_1_FALSE = "EQ_1_FALSE"
    COR_2_3_NORM = "COR_2_3_NORM"
    COR_2_3_PRODUCT = "COR_2_3_PRODUCT"
    COR_2_5 = "COR_2_5"
    SCALAR_COND = "SCALAR_COND"


class Status(str, Enum):
    HOLDS = "holds"
    VACUOUS = "vacuous"
    VIOLATION = "violation"


HYPOTHESIS_CHECKS = frozenset({CheckId.COR_2_3_NORM, CheckId.COR_2_3_PRODUCT, CheckId.COR_2_5})


@dataclass(frozen=True)
class CheckVerdict:
    check_id: CheckId
    status: Status
    slack: float
    hypothesis_slack: float | None = None
    n: int | None = None
    # False for checks whose violation is information, not failure
    binding: bool = True
    details: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        return self.check_id.value if self.n is None else f"{self.check_id.value}(n={self.n})"

    @property
    def failed(self) -> bool:
        return self.binding and self.status is Status.VIOLATION


@dataclass(frozen=True)
class BoundsReport:
    norm: float
    radius: float
    alpha_t: float
    alpha_tstar: float
    dee: float
    gee: float
    checks: list

    @property
    def failures(self) -> list:
        return [c for c in self.checks if c.failed]


@dataclass(frozen=True)
class PairReport:
    norm_r: float
    norm_s: float
    radius_r: float | None
    radius_s: float | None
    radius_block: float
    half_sum: float
    gee_block: float
    checks: list

    @property
    def failures(self) -> list:
        return [c for c in self.checks if c.failed]


class OperatorData:
    """Lazily evaluated quantities of one square matrix."""

    def __init__(self, t, coarse: int = 512):
        self.matrix = mx.as_matrix(t, square=True)
        self.coarse = coarse
        self._powers = {1: self}

    @cached_property
    def singular_values(self) -> np.ndarray:
        return mx.singular_values(self.matrix)

    @cached_property
    def norm(self) -> float:
        return float(self.singular_values[0])

    @cached_property
    def estimate(self) -> RadiusEstimate:
        return numerical_radius(self.matrix, coarse=self.coarse)

    @cached_property
    def radius(self) -> float:
        return self.estimate.value

    @cached_property
    def alpha_t(self) -> float:
        return float(self.singular_values[-1] ** 2)

    @cached_property
    def alpha_tstar(self) -> float:
        return mx.alpha(self.matrix.conj().T)

    @cached_property
    def max_alpha(self) -> float:
        return max(self.alpha_t, self.alpha_tstar)

    @cached_property
    def cartesian(self) -> mx.CartesianPair:
        return mx.cartesian_parts(self.matrix)

    @cached_property
    def dee(self) -> float:
        n1 = mx.operator_norm(self.cartesian.t1)
        n2 = mx.operator_norm(self.cartesian.t2)
        return 2.0 * min(n1 * n1, n2 * n2)

    @cached_property
    def dee_via_sums(self) -> float:
        t, ts = self.matrix, self.matrix.conj().T
        return min(mx.operator_norm(t - ts) ** 2, mx.operator_norm(t + ts) ** 2) / 2.0

    @cached_property
    def gee(self) -> float:
        return self.norm ** 2 + self.max_alpha - self.dee

    @cached_property
    def invertible(self) -> bool:
        sv = self.singular_values
        return bool(sv[-1] > mx.INVERTIBILITY_RTOL * sv[0])

    @cached_property
    def inv_norm_sq_recip(self) -> float | None:
        """||T^{-1}||^{-2}, or None when T is singular at tolerance."""
        if not self.invertible:
            return None
        return mx.operator_norm(mx.inverse(self.matrix)) ** -2

    @cached_property
    def normal(self) -> bool:
        t, ts = self.matrix, self.matrix.conj().T
        return mx.operator_norm(t @ ts - ts @ t) <= NORMAL_RTOL * max(1.0, self.norm ** 2)

    def power(self, n: int) -> "OperatorData":
        if n < 1:
            raise ValueError(f"power must be positive, got {n}")
        if n not in self._powers:
            self._powers[n] = OperatorData(np.linalg.matrix_power(self.matrix, n), self.coarse)
        return self._powers[n]


def operator_data(t) -> OperatorData:
    return t if isinstance(t, OperatorData) else OperatorData(t)


def _verdict(check_id, slack, scale, tol, *, hypothesis_slack=None, hypothesis_scale=1.0,
             has_hypothesis=False, n=None, binding=True, details=None) -> CheckVerdict:
    slack = float(slack)
    if has_hypothesis and (hypothesis_slack is None
                           or hypothesis_slack < -tol * max(1.0, hypothesis_scale)):
        status = Status.VACUOUS
    elif slack < -tol * max(1.0, scale):
        status = Status.VIOLATION
    else:
        status = Status.HOLDS
    return CheckVerdict(
        check_id=check_id,
        status=status,
        slack=slack,
        hypothesis_slack=None if hypothesis_slack is None else float(hypothesis_slack),
        n=n,
        binding=binding,
        details={k: float(v) for k, v in (details or {}).items()},
    )


def dee(t) -> float:
    """2 min(||Re T||^2, ||Im T||^2)."""
    return operator_data(t).dee


def dee_via_sums(t) -> float:
    """min(||T - T*||^2, ||T + T*||^2) / 2, equal to :func:`dee` in exact arithmetic."""
    return operator_data(t).dee_via_sums


def gee(t) -> float:
    """||T||^2 + max(alpha(T), alpha(T*)) - D(T)."""
    return operator_data(t).gee


def check_thm_2_1(t, tol: float = DEFAULT_TOL) -> CheckVerdict:
    """||T||^2 + max(alpha(T), alpha(T*)) <= 2 w(T)^2 + D(T)."""
    d = operator_data(t)
    lhs = d.norm ** 2 + d.max_alpha
    rhs = 2.0 * d.radius ** 2 + d.dee
    return _verdict(CheckId.THM_2_1, rhs - lhs, d.norm ** 2, tol,
                    details={"lhs": lhs, "rhs": rhs})


def check_prop_2_2(t, tol: float = DEFAULT_TOL) -> CheckVerdict:
    """||T|| <= sqrt(2 w^2 - max(alpha, alpha*) + D) <= 2 w; slack is the worse link."""
    d = operator_data(t)
    radicand = 2.0 * d.radius ** 2 - d.max_alpha + d.dee
    middle = math.sqrt(max(radicand, 0.0))
    lower = middle - d.norm
    upper = 2.0 * d.radius - middle
    return _verdict(CheckId.PROP_2_2, min(lower, upper), d.norm, tol,
                    details={"middle": middle, "radicand": radicand,
                             "lower_slack": lower, "upper_slack": upper})


def check_eq_3(t, tol: float = DEFAULT_TOL) -> CheckVerdict:
    """D(T) <= 2 w(T)^2."""
    d = operator_data(t)
    return _verdict(CheckId.EQ_3, 2.0 * d.radius ** 2 - d.dee, d.radius ** 2, tol)


def _invertible_hypothesis(d: OperatorData):
    h = d.inv_norm_sq_recip
    return None if h is None else h - d.dee


def check_cor_2_3(r, s=None, tol: float = DEFAULT_TOL) -> CheckVerdict:
    """If D(R) <= ||R^{-1}||^{-2} then ||R|| <= sqrt(2) w(R).

    With ``s`` given and the same hypothesis on S, checks
    ``w(RS) <= 2 w(R) w(S)`` instead. A singular operand makes the verdict
    vacuous with ``hypothesis_slack=None``.
    """
    dr = operator_data(r)
    hr = _invertible_hypothesis(dr)
    if s is None:
        return _verdict(
            CheckId.COR_2_3_NORM, SQRT2 * dr.radius - dr.norm, dr.norm, tol,
            hypothesis_slack=hr, hypothesis_scale=dr.norm ** 2, has_hypothesis=True,
            details={"norm": dr.norm, "radius": dr.radius, "dee": dr.dee},
        )
    ds = operator_data(s)
    if dr.matrix.shape != ds.matrix.shape:
        raise DimensionError(f"R {dr.matrix.shape} and S {ds.matrix.shape} must share a shape")
    hs = _invertible_hypothesis(ds)
    hyp = None if hr is None or hs is None else min(hr, hs)
    bound = 2.0 * dr.radius * ds.radius
    prod = OperatorData(dr.matrix @ ds.matrix, dr.coarse).radius
    return _verdict(
        CheckId.COR_2_3_PRODUCT, bound - prod, bound, tol,
        hypothesis_slack=hyp, hypothesis_scale=max(dr.norm, ds.norm) ** 2, has_hypothesis=True,
        details={"radius_product": prod, "bound": bound},
    )


def _scalar_of(a) -> complex | None:
    """The scalar c when ``a == c * I``, else None."""
    a = mx.as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return None
    c = a[0, 0]
    if np.array_equal(a, c * np.eye(a.shape[0])):
        return complex(c)
    return None


def check_scalar_cond(r: complex, s: complex, tol: float = DEFAULT_TOL) -> CheckVerdict:
    """min(|r - conj(s)|^2, |r + conj(s)|^2) <= (|r| - |s|)^2.

    Binding only when both scalars are real, where the inequality always
    holds; for complex scalars a violation just means the off-diagonal
    equality hypothesis is unavailable.
    """
    r, s = complex(r), complex(s)
    rhs = (abs(r) - abs(s)) ** 2
    lhs = min(abs(r - s.conjugate()) ** 2, abs(r + s.conjugate()) ** 2)
    real = r.imag == 0.0 and s.imag == 0.0
    return _verdict(CheckId.SCALAR_COND, rhs - lhs, max(abs(r), abs(s)) ** 2, tol,
                    binding=real, details={"lhs": lhs, "rhs": rhs})


def check_cor_2_5(r, s, tol: float = DEFAULT_TOL, *, block: OperatorData | None = None) -> CheckVerdict:
    """If (||R|| + ||S||)^2 <= 2 g(T) for T = [[0, R], [S, 0]] then w(T) = (||R|| + ||S||)/2.

    The equality residual ``w(T) - (||R|| + ||S||)/2`` is recorded in
    ``details`` even when the verdict is vacuous.
    """
    t = block if block is not None else OperatorData(mx.off_diag_block(r, s))
    nr, ns = mx.operator_norm(r), mx.operator_norm(s)
    total = nr + ns
    hyp = 2.0 * t.gee - total ** 2
    residual = t.radius - total / 2.0
    return _verdict(
        CheckId.COR_2_5, 0.0 - abs(residual), total, tol,
        hypothesis_slack=hyp, hypothesis_scale=total ** 2, has_hypothesis=True,
        details={"radius": t.radius, "half_sum": total / 2.0, "residual": residual},
    )


def check_farei(r, s, n: int = 1, tol: float = DEFAULT_TOL, *,
                block: OperatorData | None = None) -> CheckVerdict:
    """max(w((RS)^n), w((SR)^n))^(1/2n) <= w([[0, R], [S, 0]]) <= (||R|| + ||S||)/2."""
    if not 1 <= n <= 3:
        raise ValueError(f"order n must be in 1..3, got {n}")
    r = mx.as_matrix(r, name="R")
    s = mx.as_matrix(s, name="S")
    t = block if block is not None else OperatorData(mx.off_diag_block(r, s))
    rs = OperatorData(r @ s, t.coarse).power(n).radius
    sr = OperatorData(s @ r, t.coarse).power(n).radius
    lower = max(rs, sr) ** (1.0 / (2 * n))
    upper = (mx.operator_norm(r) + mx.operator_norm(s)) / 2.0
    low_slack = t.radius - lower
    up_slack = upper - t.radius
    return _verdict(CheckId.FAREI, min(low_slack, up_slack), upper, tol, n=n,
                    details={"lower": lower, "radius": t.radius, "upper": upper,
                             "lower_slack": low_slack, "upper_slack": up_slack})


def _same_square(dr: OperatorData, ds: OperatorData, what: str):
    if dr.matrix.shape != ds.matrix.shape:
        raise DimensionError(f"{what} needs R and S of one shape, got {dr.matrix.shape} and {ds.matrix.shape}")


def check_background(which, *operands, n: int | None = None, tol: float = DEFAULT_TOL) -> CheckVerdict:
    """Classical inequalities quoted as background.

    Single-operator checks (``EQ_1_1``, ``BERGER``, ``NORMAL_EQ``,
    ``EQ_1_FALSE``) take ``t``; pair checks (``HOLBROOK_4``,
    ``HOLBROOK_COMM_2``, ``DIRECT_SUM``, ``EQ_1_5``) take ``r, s``.
    ``EQ_1_FALSE`` tests the false bound ||A|| <= sqrt(2) w(A) and is never
    binding: its sign is what counterexample harvesting looks at.
    """
    which = CheckId(which)
    single = {CheckId.EQ_1_1, CheckId.BERGER, CheckId.NORMAL_EQ, CheckId.EQ_1_FALSE}
    pair = {CheckId.HOLBROOK_4, CheckId.HOLBROOK_COMM_2, CheckId.DIRECT_SUM, CheckId.EQ_1_5}
    expected = 1 if which in single else 2 if which in pair else None
    if expected is None:
        raise ValueError(f"{which.value} is not a background check")
    if len(operands) != expected:
        raise TypeError(f"{which.value} takes {expected} operand(s), got {len(operands)}")

    if which is CheckId.EQ_1_1:
        d = operator_data(operands[0])
        lower = d.radius - d.norm / 2.0
        upper = d.norm - d.radius
        return _verdict(which, min(lower, upper), d.norm, tol,
                        details={"lower_slack": lower, "upper_slack": upper})
    if which is CheckId.BERGER:
        if n is None or n < 1:
            raise ValueError("BERGER needs a positive power n")
        d = operator_data(operands[0])
        bound = d.radius ** n
        return _verdict(which, bound - d.power(n).radius, bound, tol, n=n,
                        details={"radius_power": d.power(n).radius, "power_radius": bound})
    if which is CheckId.NORMAL_EQ:
        d = operator_data(operands[0])
        if not d.normal:
            raise HypothesisError("NORMAL_EQ requires a normal operator (TT* = T*T)")
        return _verdict(which, 0.0 - abs(d.radius - d.norm), d.norm, tol)
    if which is CheckId.EQ_1_FALSE:
        d = operator_data(operands[0])
        return _verdict(which, SQRT2 * d.radius - d.norm, d.norm, tol, binding=False,
                        details={"invertible": d.invertible})

    dr, ds = operator_data(operands[0]), operator_data(operands[1])
    if which is CheckId.HOLBROOK_4 or which is CheckId.HOLBROOK_COMM_2:
        _same_square(dr, ds, which.value)
        factor = 4.0
        if which is CheckId.HOLBROOK_COMM_2:
            comm = mx.commutator_norm(dr.matrix, ds.matrix)
            if comm > COMMUTING_RTOL * max(dr.norm * ds.norm, np.finfo(float).tiny):
                raise HypothesisError(f"not commuting: ||RS - SR|| = {comm:.3e}")
            factor = 2.0
        bound = factor * dr.radius * ds.radius
        prod = OperatorData(dr.matrix @ ds.matrix, dr.coarse).radius
        return _verdict(which, bound - prod, bound, tol,
                        details={"radius_product": prod, "bound": bound})
    if which is CheckId.DIRECT_SUM:
        top = max(dr.radius, ds.radius)
        w = OperatorData(mx.direct_sum(dr.matrix, ds.matrix), dr.coarse).radius
        return _verdict(which, 0.0 - abs(w - top), top, tol, details={"radius": w, "max_radius": top})
    # EQ_1_5
    _same_square(dr, ds, which.value)
    top = max(dr.norm, ds.norm)
    n_sum = mx.operator_norm(mx.direct_sum(dr.matrix, ds.matrix))
    n_off = mx.operator_norm(mx.off_diag_block(dr.matrix, ds.matrix))
    return _verdict(which, 0.0 - max(abs(n_sum - top), abs(n_off - top)), top, tol,
                    details={"direct_sum_norm": n_sum, "off_diag_norm": n_off, "max_norm": top})


def _wanted(checks: Collection | None, cid: CheckId) -> bool:
    return checks is None or cid in checks or cid.value in checks


def bounds_report(t, tol: float = DEFAULT_TOL, checks: Collection | None = None) -> BoundsReport:
    """All single-operator quantities and verdicts for one square matrix.

    ``HOLBROOK_COMM_2`` uses the commuting pair ``(T, T^2)``; ``NORMAL_EQ``
    runs only when T is normal. ``checks`` restricts which verdicts are
    produced (all by default).
    """
    d = operator_data(t)
    out = []
    if _wanted(checks, CheckId.EQ_1_1):
        out.append(check_background(CheckId.EQ_1_1, d, tol=tol))
    if _wanted(checks, CheckId.BERGER):
        out.extend(check_background(CheckId.BERGER, d, n=k, tol=tol) for k in (2, 3))
    if _wanted(checks, CheckId.NORMAL_EQ) and d.normal:
        out.append(check_background(CheckId.NORMAL_EQ, d, tol=tol))
    if _wanted(checks, CheckId.HOLBROOK_COMM_2):
        out.append(check_background(CheckId.HOLBROOK_COMM_2, d, d.power(2), tol=tol))
    if _wanted(checks, CheckId.THM_2_1):
        out.append(check_thm_2_1(d, tol))
    if _wanted(checks, CheckId.PROP_2_2):
        out.append(check_prop_2_2(d, tol))
    if _wanted(checks, CheckId.EQ_3):
        out.append(check_eq_3(d, tol))
    if _wanted(checks, CheckId.COR_2_3_NORM):
        out.append(check_cor_2_3(d, tol=tol))
    if _wanted(checks, CheckId.EQ_1_FALSE):
        out.append(check_background(CheckId.EQ_1_FALSE, d, tol=tol))
    return BoundsReport(
        norm=d.norm,
        radius=d.radius,
        alpha_t=d.alpha_t,
        alpha_tstar=d.alpha_tstar,
        dee=d.dee,
        gee=d.gee,
        checks=out,
    )


def pair_report(r, s, tol: float = DEFAULT_TOL, *, farei_orders: Iterable[int] = (1, 2, 3),
                commuting: bool | None = None, checks: Collection | None = None) -> PairReport:
    """Verdicts that involve two operators R and S.

    The block ``T = [[0, R], [S, 0]]`` always gets ``COR_2_5`` and ``FAREI``.
    When R and S are square of one shape, ``HOLBROOK_4``, ``DIRECT_SUM``,
    ``EQ_1_5`` and ``COR_2_3_PRODUCT`` run too. ``HOLBROOK_COMM_2`` runs when
    ``commuting`` is True (an error if they do not commute) or, with
    ``commuting=None``, when they happen to commute. ``SCALAR_COND`` runs when
    R and S are scalar multiples of the identity.
    """
    r = mx.as_matrix(r, name="R")
    s = mx.as_matrix(s, name="S")
    block = OperatorData(mx.off_diag_block(r, s))
    nr, ns = mx.operator_norm(r), mx.operator_norm(s)
    out = []
    square = r.shape[0] == r.shape[1] and r.shape == s.shape
    dr = OperatorData(r) if square else None
    ds = OperatorData(s) if square else None
    if square:
        if _wanted(checks, CheckId.HOLBROOK_4):
            out.append(check_background(CheckId.HOLBROOK_4, dr, ds, tol=tol))
        if _wanted(checks, CheckId.HOLBROOK_COMM_2) and commuting is not False:
            comm = mx.commutator_norm(r, s)
            if commuting or comm <= COMMUTING_RTOL * max(nr * ns, np.finfo(float).tiny):
                out.append(check_background(CheckId.HOLBROOK_COMM_2, dr, ds, tol=tol))
        if _wanted(checks, CheckId.DIRECT_SUM):
            out.append(check_background(CheckId.DIRECT_SUM, dr, ds, tol=tol))
        if _wanted(checks, CheckId.EQ_1_5):
            out.append(check_background(CheckId.EQ_1_5, dr, ds, tol=tol))
        if _wanted(checks, CheckId.COR_2_3_PRODUCT):
            out.append(check_cor_2_3(dr, ds, tol))
    if _wanted(checks, CheckId.FAREI):
        out.extend(check_farei(r, s, k, tol, block=block) for k in farei_orders)
    if _wanted(checks, CheckId.COR_2_5):
        out.append(check_cor_2_5(r, s, tol, block=block))
    if _wanted(checks, CheckId.SCALAR_COND):
        cr, cs = _scalar_of(r), _scalar_of(s)
        if cr is not None and cs is not None:
            out.append(check_scalar_cond(cr, cs, tol))
    return PairReport(
        norm_r=nr,
        norm_s=ns,
        radius_r=dr.radius if dr is not None else None,
        radius_s=ds.radius if ds is not None else None,
        radius_block=block.radius,
        half_sum=(nr + ns) / 2.0,
        gee_block=block.gee,
        checks=out,
    )
