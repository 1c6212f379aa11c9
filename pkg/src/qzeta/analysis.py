"""Analytic building blocks behind the depth-2 continuation, and their checks.

The integral representation of zeta_q(s-alpha, alpha) rests on a handful of
elementary facts: a telescoping identity for reciprocal q-brackets, exact
piecewise integrals against the q-floor ramp u - floor_q(u), pointwise kernel
bounds, and decay estimates in alpha.  This module implements each one as a
numerical check.

Two versions of the representation appear:

  * ``ramp_representation`` is the single-kernel form as printed in the source
    material.  Its alpha-derivative decomposes exactly into the three ramp
    moments (``check_alpha_derivative``), and its moments obey the documented
    decay rates, but as an identity for zeta_q(s-alpha, alpha) it fails
    numerically: the q-power bookkeeping of the series terms never enters it.
  * ``weighted_ramp_representation`` carries the weight
    psi_alpha(x) = q (1-(1-q)x)^{alpha-2} x^{-alpha} that the q-measure forces,
    and reproduces zeta_q(s-alpha, alpha) to machine precision for Re(s) > 2
    (``check_pole_term_split`` is the series-level statement of the same
    correction).  Splitting off the pole term then yields
    q zeta_q(s-1)/(alpha-1), with the extra factor q.

Neither form converges in the strip Re(s) <= 2; the production continuation in
:mod:`qzeta.qmzf` therefore uses the rearranged series instead.  The checks
here pin down the analytic facts on their own terms.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .qcore import (DEFAULT_POLICY, DomainError, PoleProximityError,
                    SummationResult, TruncationPolicy, as_q, q_int, q_int_log,
                    series_sum)
from .qmzf import zeta_q, zeta_q_depth1_continued, zeta_q_two_cont
from .sumformula import SumFormulaReport


@dataclass(frozen=True)
class DecayFit:
    """Least-squares power-law fit of a decaying quantity."""

    exponent: float
    amplitude: float
    r_squared: float
    window: tuple[float, float]


# ---------------------------------------------------------------------------
# piecewise ramp quadrature
# ---------------------------------------------------------------------------

def ramp_quadrature(f, q, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """integral over [0, 1/(1-q)) of f(u) (u - floor_q(u)) du.

    The q-line splits into pieces [[n]_q, [n+1]_q); substituting
    u = [n]_q + q^n v maps each onto v in [0, 1] with ramp q^n v and Jacobian
    q^n, so the integral is sum_n q^{2n} int_0^1 v f(n, v, u) dv, one fixed
    Gauss-Legendre rule per piece (the integrand is smooth there and the ramp
    is linear).  ``f`` receives the piece index and numpy node vectors; pieces
    stop once relatively negligible, capped at ceil(log tol / log q).
    """
    qp = as_q(q)
    nodes, weights = leggauss(policy.quad_order)
    v = 0.5 * (nodes + 1.0)
    w = 0.5 * weights
    cap = max(8, math.ceil(math.log(policy.tol) / qp.log))
    total = 0.0 + 0.0j
    for n in range(cap):
        qn = qp.q**n
        u = (1.0 - qn) / (1.0 - qp.q) + qn * v
        piece = qn * qn * complex(np.sum(w * v * f(n, v, u)))
        total += piece
        if n > 4 and abs(piece) < policy.tol * max(1e-300, abs(total)):
            break
    return total


# ---------------------------------------------------------------------------
# telescoping identity for reciprocal q-brackets
# ---------------------------------------------------------------------------

def check_reciprocal_telescoping(m1: int, q,
                                 policy: TruncationPolicy = DEFAULT_POLICY) -> SumFormulaReport:
    """sum_{m>0} (1/[m] - 1/[m+m1]) against its closed form.

    The closed form is the first m1 reciprocal q-brackets minus m1 (1-q);
    the series terms decay like q^m, so the stall rule stops quickly.
    """
    qp = as_q(q)
    if m1 < 1:
        raise ValueError("m1 must be a positive integer")

    def terms():
        m = 1
        while True:
            yield 1.0 / q_int(m, qp) - 1.0 / q_int(m + m1, qp)
            m += 1

    res = series_sum(terms(), policy)
    rhs = sum(1.0 / q_int(j, qp) for j in range(1, m1 + 1)) - m1 * (1.0 - qp.q)
    return SumFormulaReport(lhs=res.value, rhs=rhs,
                            abs_diff=abs(res.value - rhs),
                            terms_used=res.terms_used,
                            tail_estimate=res.abs_error_estimate)


# ---------------------------------------------------------------------------
# exact piece integrals
# ---------------------------------------------------------------------------

def inner_integral(m2: int, alpha: complex, q) -> complex:
    """int_0^{q^{m2-1}} dt/([m2]_q - t)^alpha in closed form.

    The antiderivative plus [m2]_q - q^{m2-1} = [m2-1]_q gives
    ([m2-1]^{1-alpha} - [m2]^{1-alpha})/(alpha - 1); no quadrature involved.
    """
    qp = as_q(q)
    alpha = complex(alpha)
    if m2 < 2:
        raise ValueError("m2 must be at least 2 (the lower bracket must be positive)")
    if abs(alpha - 1.0) < 1e-12:
        raise PoleProximityError("inner_integral has a pole at alpha = 1")
    one_m_a = 1.0 - alpha
    return (cmath.exp(one_m_a * q_int_log(m2 - 1, qp))
            - cmath.exp(one_m_a * q_int_log(m2, qp))) / (alpha - 1.0)


def weighted_piece_integral(m2: int, alpha: complex, q) -> complex:
    """int over [[m2-1]_q, [m2]_q] of psi_alpha(x) dx in closed form.

    psi_alpha(x) = q (1-(1-q)x)^{alpha-2} x^{-alpha} is the weight under which
    the q-series terms q^{(alpha-1)m}/[m]^alpha become a Stieltjes integral
    against the q-floor; its antiderivative is
    -q (1-(1-q)x)^{alpha-1} x^{1-alpha}/(alpha-1).
    """
    qp = as_q(q)
    alpha = complex(alpha)
    if m2 < 2:
        raise ValueError("m2 must be at least 2")
    if abs(alpha - 1.0) < 1e-12:
        raise PoleProximityError("weighted_piece_integral has a pole at alpha = 1")

    def anti(mm: int) -> complex:
        return -qp.q * cmath.exp((alpha - 1.0) * mm * qp.log
                                 + (1.0 - alpha) * q_int_log(mm, qp)) / (alpha - 1.0)

    return anti(m2) - anti(m2 - 1)


def check_pole_term_split(s: complex, alpha: complex, q,
                          policy: TruncationPolicy = DEFAULT_POLICY) -> SumFormulaReport:
    """Series-level split of zeta_q(s-alpha, alpha) into a tail and a pole term.

    Verified identity (q-weighted reading):

        zeta_q(s-alpha, alpha)
          = sum_{m1} q^{(s-alpha-1)m1}/[m1]^{s-alpha}
              sum_{m2>m1} ( q^{(alpha-1)m2}/[m2]^alpha - W(m2, alpha) )
            + q zeta_q(s-1)/(alpha-1),

    with W the closed-form psi_alpha piece integral.  The unweighted reading
    (piece integrals of plain x^{-alpha} and no q prefactor on the pole term)
    has inner terms approaching (1-q)^Re(alpha) > 0 and diverges; the note
    records that limit as the evidence.  Requires Re(s) > 2, Re(alpha) > 1 so
    the left side has a direct-series oracle.
    """
    qp = as_q(q)
    s, alpha = complex(s), complex(alpha)
    if abs(alpha - 1.0) < 1e-9:
        raise PoleProximityError("alpha = 1 is the pole of the split term")
    if not (s.real > 2.0 and alpha.real > 1.0):
        raise DomainError("pole-term split check needs Re(s) > 2 and Re(alpha) > 1")
    lhs = zeta_q((s - alpha, alpha), qp, policy)
    lq = qp.log
    used = [lhs.terms_used]

    def outer_terms():
        for m1 in range(1, policy.max_outer + 1):
            def inner_terms():
                for m2 in range(m1 + 1, m1 + 1 + policy.max_outer):
                    yield (cmath.exp((alpha - 1.0) * m2 * lq - alpha * q_int_log(m2, qp))
                           - weighted_piece_integral(m2, alpha, qp))

            inner = series_sum(inner_terms(), policy)
            used[0] += inner.terms_used
            yield cmath.exp((s - alpha - 1.0) * m1 * lq
                            - (s - alpha) * q_int_log(m1, qp)) * inner.value

    tail_part = series_sum(outer_terms(), policy)
    pole_part = qp.q * zeta_q((s - 1.0,), qp, policy).value / (alpha - 1.0)
    rhs = tail_part.value + pole_part
    unweighted_limit = (1.0 - qp.q) ** alpha.real
    note = ("q-weighted reading with pole term q zeta_q(s-1)/(alpha-1); "
            f"unweighted reading diverges, inner terms -> (1-q)^Re(alpha) = "
            f"{unweighted_limit:.3e}")
    return SumFormulaReport(lhs=lhs.value, rhs=rhs,
                            abs_diff=abs(lhs.value - rhs),
                            terms_used=used[0] + tail_part.terms_used,
                            tail_estimate=lhs.abs_error_estimate
                            + tail_part.abs_error_estimate,
                            convention_note=note)


# ---------------------------------------------------------------------------
# ramp moments and the alpha-derivative identity
# ---------------------------------------------------------------------------

def ramp_moment(kind: int, s: complex, alpha: complex, q,
                policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """The three building blocks of the alpha-derivative of the representation.

    kind 1:  sum_m q^{2(m-1)}/[m]^{s+1} int ramp(u) ([m]/([m]+q^{m-1}u))^{alpha+1} du
    kind 2:  the same with an extra factor log(([m]+q^{m-1}u)/[m])
    kind 3:  zeta_q(s-1)/(alpha-1)^2, with the depth-1 value continued for
             Re(s) <= 2.

    Kinds 1 and 2 share the piecewise ramp quadrature engine.
    """
    qp = as_q(q)
    s, alpha = complex(s), complex(alpha)
    if kind not in (1, 2, 3):
        raise ValueError("kind must be 1, 2 or 3")
    if not alpha.real > 1.0:
        raise DomainError("ramp moments need Re(alpha) > 1")
    if not s.real > 1.0:
        raise DomainError("ramp moments need Re(s) > 1")
    if kind == 3:
        if abs(alpha - 1.0) < 1e-9:
            raise PoleProximityError("kind 3 has a pole at alpha = 1")
        return zeta_q_depth1_continued(s - 1.0, qp) / (alpha - 1.0) ** 2

    total = 0.0 + 0.0j
    for m in range(1, policy.max_outer + 1):
        qm1 = qp.q ** (m - 1)
        lgm = q_int_log(m, qp)
        cm = math.exp(lgm)

        def integrand(n, v, u):
            ratio_log = np.log1p(qm1 * u / cm)
            out = np.exp(-(alpha + 1.0) * ratio_log)
            if kind == 2:
                out = out * ratio_log
            return out

        piece = ramp_quadrature(integrand, qp, policy)
        term = qp.q ** (2 * (m - 1)) * cmath.exp(-(s + 1.0) * lgm) * piece
        total += term
        if m > 4 and abs(term) < policy.tol * 1e-2 * max(1e-300, abs(total)):
            break
    return total


def ramp_representation(s: complex, alpha: complex, q,
                        policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Single-kernel ramp functional: -alpha * moment_1 + zeta_q(s-1)/(alpha-1).

    This is the printed form of the depth-2 representation.  It is a
    well-defined analytic function of alpha whose derivative the ramp moments
    reproduce exactly, but it does not equal zeta_q(s-alpha, alpha); see the
    module docstring and ``weighted_ramp_representation``.
    """
    qp = as_q(q)
    s, alpha = complex(s), complex(alpha)
    if abs(alpha - 1.0) < 1e-9:
        raise PoleProximityError("representation has a pole at alpha = 1")
    m1 = ramp_moment(1, s, alpha, qp, policy)
    return -alpha * m1 + zeta_q_depth1_continued(s - 1.0, qp) / (alpha - 1.0)


def weighted_ramp_representation(s: complex, alpha: complex, q,
                                 policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """q-weighted ramp representation of zeta_q(s-alpha, alpha), Re(s) > 2.

        q zeta_q(s-1)/(alpha-1)
        - q sum_m q^{(s-2)m} [m]^{alpha-s}
            int ramp(u) c(u)^{alpha-3} (alpha-2+2q^m c(u)) ([m]+q^m u)^{-(alpha+1)} du

    with c(u) = 1-(1-q)u (= q^n (1-(1-q)v) on piece n, evaluated in log form).
    Agrees with the direct series to machine precision; the m-sum stops
    converging once Re(s) <= 2, which is why the production continuation uses
    the rearranged series instead.
    """
    qp = as_q(q)
    s, alpha = complex(s), complex(alpha)
    if not s.real > 2.0:
        raise DomainError("weighted representation converges for Re(s) > 2 only")
    if not alpha.real > 1.0:
        raise DomainError("weighted representation needs Re(alpha) > 1")
    if abs(alpha - 1.0) < 1e-9:
        raise PoleProximityError("representation has a pole at alpha = 1")
    lq = qp.log
    total = 0.0 + 0.0j
    for m in range(1, policy.max_outer + 1):
        qm = qp.q**m
        lgm = q_int_log(m, qp)
        cm = math.exp(lgm)

        def integrand(n, v, u):
            logc = n * lq + np.log1p(-(1.0 - qp.q) * v)
            c = np.exp(logc)
            return (np.exp((alpha - 3.0) * logc) * (alpha - 2.0 + 2.0 * qm * c)
                    * np.exp(-(alpha + 1.0) * np.log(cm + qm * u)))

        piece = ramp_quadrature(integrand, qp, policy)
        term = -qp.q * cmath.exp((s - 2.0) * m * lq + (alpha - s) * lgm) * piece
        total += term
        if m > 4 and abs(term) < policy.tol * 1e-2 * max(1e-300, abs(total)):
            break
    return total + qp.q * zeta_q((s - 1.0,), qp, policy).value / (alpha - 1.0)


def check_alpha_derivative(s: complex, alpha: complex, q,
                           policy: TruncationPolicy = DEFAULT_POLICY) -> SumFormulaReport:
    """Derivative of the ramp functional against its moment decomposition.

    lhs: central finite difference of ``ramp_representation`` in alpha, step
    1e-4 max(1, |alpha|), no extrapolation.  rhs: -moment_1 + alpha moment_2
    - moment_3.  abs_diff is reported relative to |rhs|.  The note also
    records the finite difference of the true continuation, which differs:
    the printed functional is not zeta_q(s-alpha, alpha).
    """
    qp = as_q(q)
    s, alpha = complex(s), complex(alpha)
    h = 1e-4 * max(1.0, abs(alpha))
    fd = (ramp_representation(s, alpha + h, qp, policy)
          - ramp_representation(s, alpha - h, qp, policy)) / (2.0 * h)
    rhs = (-ramp_moment(1, s, alpha, qp, policy)
           + alpha * ramp_moment(2, s, alpha, qp, policy)
           - ramp_moment(3, s, alpha, qp, policy))
    rel = abs(fd - rhs) / abs(rhs)
    true_fd = (zeta_q_two_cont(s, alpha + h, qp, policy).value
               - zeta_q_two_cont(s, alpha - h, qp, policy).value) / (2.0 * h)
    note = (f"relative residual {rel:.3e}; finite difference of the true "
            f"continuation differs from rhs by {abs(true_fd - rhs):.3e} "
            "(the single-kernel functional is not the continuation)")
    return SumFormulaReport(lhs=fd, rhs=rhs, abs_diff=rel, terms_used=0,
                            tail_estimate=0.0, convention_note=note)


# ---------------------------------------------------------------------------
# pointwise kernel bounds
# ---------------------------------------------------------------------------

def check_pointwise_bounds(m: int, u: float, alpha: float, s: float, q
                           ) -> tuple[bool, bool]:
    """Pointwise kernel bounds against their classical (q = 1) majorants.

    First bound:  [m]^{alpha+1} q^{2(m-1)} / ([m]^{s+1} ([m]+q^{m-1}u)^{alpha+1})
                  <= m^{alpha+1} / (m^{s+1} (m+u)^{alpha+1})
    Second bound: the same comparison with both sides weighted by their
    logarithmic factors log(1 + q^{m-1}u/[m]) resp. log(1 + u/m).

    Both are evaluated in log space; a 1e-12 additive slack absorbs rounding.
    """
    qp = as_q(q)
    if m < 1 or u < 0.0 or not (alpha > 1.0 and s > 1.0):
        raise ValueError("need m >= 1, u >= 0, alpha > 1, s > 1")
    lgm = q_int_log(m, qp)
    qm1 = qp.q ** (m - 1)
    lhs = ((alpha + 1.0) * lgm + 2.0 * (m - 1) * qp.log
           - (s + 1.0) * lgm - (alpha + 1.0) * (lgm + math.log1p(qm1 * u / math.exp(lgm))))
    rhs = ((alpha + 1.0) * math.log(m) - (s + 1.0) * math.log(m)
           - (alpha + 1.0) * (math.log(m) + math.log1p(u / m)))
    plain = lhs <= rhs + 1e-12
    if u == 0.0:
        return plain, True
    log_q = math.log(math.log1p(qm1 * u / math.exp(lgm)))
    log_c = math.log(math.log1p(u / m))
    weighted = (lhs + log_q) <= (rhs + log_c) + 1e-12
    return plain, weighted


# ---------------------------------------------------------------------------
# decay fits
# ---------------------------------------------------------------------------

_FIT_KINDS = ("ramp1_alpha", "ramp2_alpha", "interp_terms")


def tail_decay_fit(kind: str, s: complex, q, window: tuple[int, int],
                   policy: TruncationPolicy = DEFAULT_POLICY,
                   points: int = 10) -> DecayFit:
    """Least-squares power-law fit of a decaying family.

    kind "ramp1_alpha"/"ramp2_alpha": ramp moment 1 resp. 2 sampled at
    ``points`` log-spaced alpha in [window]; the stated rates are O(alpha^-s)
    and O(alpha^-(s+1)) for real s in (1, 2), and the fitted exponent is
    expected at or below them (the q-deformation decays faster).

    kind "interp_terms": magnitude of the interpolated sum-formula summand at
    integer n in [window]; the stated rate is O(n^-(1+delta)), and the actual
    decay is geometric, so fits only make sense on moderate windows.
    """
    qp = as_q(q)
    s = complex(s)
    if kind not in _FIT_KINDS:
        raise ValueError(f"kind must be one of {_FIT_KINDS}")
    lo, hi = window
    if not lo < hi:
        raise ValueError("window must be an increasing pair")
    if kind in ("ramp1_alpha", "ramp2_alpha"):
        if s.imag != 0.0 or not (1.0 < s.real < 2.0):
            raise DomainError("ramp decay fits are stated for real s in (1, 2)")
        xs = np.exp(np.linspace(math.log(lo), math.log(hi), points))
        which = 1 if kind == "ramp1_alpha" else 2
        ys = np.array([abs(ramp_moment(which, s, a, qp, policy)) for a in xs])
    else:
        if not s.real > 1.0:
            raise DomainError("interpolated-term fits need Re(s) > 1")
        if abs(s.imag) > 3.0:
            raise DomainError("interpolated-term fits are restricted to |Im(s)| <= 3")
        xs = np.arange(lo, hi + 1, dtype=float)
        ys = np.array([abs(zeta_q_two_cont(s, n + 2.0, qp, policy).value
                           - zeta_q_two_cont(s, s + n, qp, policy).value)
                       for n in range(lo, hi + 1)])
    mask = ys > 0.0
    x, y = np.log(xs[mask]), np.log(ys[mask])
    if len(x) < 3:
        raise DomainError("too few positive samples for a decay fit")
    slope, intercept = np.polyfit(x, y, 1)
    r2 = float(np.corrcoef(x, y)[0, 1] ** 2)
    return DecayFit(exponent=float(slope), amplitude=float(math.exp(intercept)),
                    r_squared=r2, window=(float(lo), float(hi)))
