"""Evaluation of the q-deformed Euler-Zagier multiple zeta function.

The nested series

    zeta_q(s_1, ..., s_r) = sum_{0 < n_1 < ... < n_r} prod_j q^{(s_j-1) n_j} / [n_j]_q^{s_j}

converges absolutely on the domain Re(s_{r-k+1} + ... + s_r) > k (k = 1..r) and
continues meromorphically with simple poles on an explicit lattice whose
imaginary period is 2*pi/|log q|.  This module provides

  * domain and pole diagnostics (``convergence_margin``, ``pole_distance``),
  * the in-domain evaluator ``zeta_q`` (prefix-sum dynamic programming with
    scaled accumulators so that very negative leading entries cannot overflow),
  * the depth-2 continuation ``zeta_q_two_cont`` for 1 < Re(s) <= 2, built on a
    stable series rearrangement plus the binomially continued twisted tail
    ``twisted_tail``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qcore import (DEFAULT_POLICY, DomainError, PoleProximityError, QParam,
                    SummationResult, TruncationPolicy, as_q, q_int_log,
                    series_sum)

#: evaluations closer than this to the pole lattice are refused
POLE_GUARD_RADIUS = 1e-6

MultiIndex = Sequence[complex]


@dataclass(frozen=True)
class DomainReport:
    """Convergence diagnostics for one multi-index."""

    in_domain: bool
    margin: float
    pole_distance: float
    admissible_integer: bool


def validate_index(index: MultiIndex) -> tuple[complex, ...]:
    entries = tuple(complex(s) for s in index)
    if len(entries) < 1:
        raise ValueError("multi-index must have depth >= 1")
    for s in entries:
        if not (math.isfinite(s.real) and math.isfinite(s.imag)):
            raise ValueError("multi-index entries must be finite")
    return entries


def is_admissible(index: MultiIndex) -> bool:
    """Positive integer entries with the last one at least 2."""
    entries = validate_index(index)
    ok = all(abs(s.imag) == 0.0 and s.real == int(s.real) and s.real >= 1
             for s in entries)
    return ok and entries[-1].real >= 2


def _imag_period(qp: QParam) -> float:
    return 2.0 * math.pi / abs(qp.log)


def _dist_depth1(s: complex, qp: QParam) -> float:
    """Distance from s to {1 + iP Z} union {Z_{<=0} + iP Z_{!=0}}, P = 2 pi/|log q|."""
    P = _imag_period(qp)
    x, y = s.real, s.imag
    dy0 = y - P * round(y / P)
    d_one = math.hypot(x - 1.0, dy0)
    nearest_nonpos = min(round(x), 0.0)
    k = round(y / P)
    if k == 0:
        dy_nz = min(abs(y - P), abs(y + P))
    else:
        dy_nz = abs(y - k * P)
    d_ray = math.hypot(x - nearest_nonpos, dy_nz)
    return min(d_one, d_ray)


def _dist_partial(s: complex, cap: int, qp: QParam) -> float:
    """Distance from s to Z_{<= cap} + iP Z."""
    P = _imag_period(qp)
    x, y = s.real, s.imag
    nearest = min(round(x), float(cap))
    dy = y - P * round(y / P)
    return math.hypot(x - nearest, dy)


def pole_distance(index: MultiIndex, q) -> float:
    """Euclidean distance from the index to the pole lattice of the continuation.

    The last entry is checked against the depth-1 pole set; every proper
    partial sum s_j + ... + s_r (j < r) against Z_{<= r-j+1} + iP Z.
    """
    qp = as_q(q)
    entries = validate_index(index)
    r = len(entries)
    best = _dist_depth1(entries[-1], qp)
    running = entries[-1]
    for j in range(r - 1, 0, -1):
        # one-based slot j carries the pole ray Z_{<= r-j+1} for its suffix sum
        running += entries[j - 1]
        best = min(best, _dist_partial(running, r - j + 1, qp))
    return best


def convergence_margin(index: MultiIndex, q) -> DomainReport:
    """Margin min_k (Re(s_{r-k+1} + ... + s_r) - k); positive means in-domain."""
    qp = as_q(q)
    entries = validate_index(index)
    margin = math.inf
    acc = 0.0
    for k, s in enumerate(reversed(entries), start=1):
        acc += s.real
        margin = min(margin, acc - k)
    return DomainReport(in_domain=margin > 0.0, margin=margin,
                        pole_distance=pole_distance(entries, qp),
                        admissible_integer=is_admissible(entries))


def _dp_outer_increments(entries, qp, max_outer):
    """Yield t_r(M) * S_{r-1}(M), the outer terms of the prefix-sum DP.

    Each prefix sum S_j(M) = sum_{n<M} t_j(n) S_{j-1}(n) is held as
    mantissa * exp(scale) so that entries with very negative real part (whose
    inner prefix sums grow like q^{-|Re s| n}) cannot overflow; the outer
    increment itself is bounded whenever the index is in-domain.
    """
    r = len(entries)
    lq = qp.log
    man = [0.0 + 0.0j] * max(r - 1, 0)
    ls = [0.0] * max(r - 1, 0)
    # increments for M < r vanish structurally (n_r must admit r-1 predecessors),
    # so they are not emitted; the stall rule must only see actual series terms
    for M in range(1, max_outer + r):
        lgm = q_int_log(M, qp)
        zs = [(entries[j] - 1.0) * M * lq - entries[j] * lgm for j in range(r)]
        if r == 1:
            yield cmath.exp(zs[0])
        elif M >= r:
            yield cmath.exp(zs[r - 1] + ls[r - 2]) * man[r - 2]
        # update prefixes descending so each level sees the previous level's
        # value from before this outer step
        for j in range(r - 2, -1, -1):
            if j == 0:
                c_scale, c_man = zs[0].real, cmath.exp(1j * zs[0].imag)
            else:
                if man[j - 1] == 0.0:
                    continue
                z = zs[j] + ls[j - 1]
                c_scale, c_man = z.real, cmath.exp(1j * z.imag) * man[j - 1]
            if man[j] == 0.0:
                man[j], ls[j] = c_man, c_scale
            else:
                lnew = max(ls[j], c_scale)
                man[j] = man[j] * math.exp(ls[j] - lnew) \
                    + c_man * math.exp(c_scale - lnew)
                ls[j] = lnew
            a = abs(man[j])
            if a > 1e30 or (0.0 < a < 1e-30):
                ls[j] += math.log(a)
                man[j] /= a


def zeta_q(index: MultiIndex, q,
           policy: TruncationPolicy = DEFAULT_POLICY) -> SummationResult:
    """Evaluate zeta_q at a multi-index inside the convergence domain.

    Dynamic programming over the outermost summation variable n_r: the inner
    sums are exact prefix sums, so each outer step costs O(depth).  Stopping
    and the error estimate follow the ``series_sum`` contract applied to the
    outer increments.

    Raises DomainError outside the convergence domain and PoleProximityError
    within ``POLE_GUARD_RADIUS`` of the pole lattice.
    """
    qp = as_q(q)
    entries = validate_index(index)
    report = convergence_margin(entries, qp)
    if not report.in_domain:
        raise DomainError(
            f"index {entries} is outside the convergence domain "
            f"(margin {report.margin:.6g})")
    if report.pole_distance < POLE_GUARD_RADIUS:
        raise PoleProximityError(
            f"index {entries} is within {report.pole_distance:.3g} of the pole lattice")
    return series_sum(_dp_outer_increments(entries, qp, policy.max_outer), policy)


# ---------------------------------------------------------------------------
# continuation machinery
# ---------------------------------------------------------------------------

def twisted_tail(w: complex, v: complex, q, tol: float = 1e-16,
                 max_terms: int = 4000) -> complex:
    """Continued value of tau(w; v) = sum_{m>=1} q^{w m} [m]_q^{-v}.

    Binomial expansion of [m]_q^{-v} turns the sum into
    (1-q)^v sum_{j>=0} C(v+j-1, j) q^{w+j}/(1-q^{w+j}), which converges
    geometrically for every w with Re(w) > -1 and continues the direct series
    (valid for Re(w) > 0) across the strip.  Poles sit at w in -j + iP Z; for
    Re(w) > -1 only the j = 0 copy w in iP Z is reachable.
    """
    qp = as_q(q)
    w, v = complex(w), complex(v)
    if w.real <= -1.0:
        raise DomainError("twisted_tail is restricted to Re(w) > -1")
    lq = qp.log
    total = 0.0 + 0.0j
    binom = 1.0 + 0.0j
    for j in range(max_terms):
        a = cmath.exp((w + j) * lq)
        denom = 1.0 - a
        if abs(denom) < 1e-13:
            raise PoleProximityError(
                f"twisted_tail pole: q^(w+{j}) within {abs(denom):.2g} of 1")
        total += binom * a / denom
        binom *= (v + j) / (j + 1)
        if j > 8 and abs(binom) * abs(a) * qp.q < tol * max(1e-300, abs(total)):
            break
    return cmath.exp(v * cmath.log(1.0 - qp.q)) * total


def zeta_q_depth1_continued(w: complex, q, tol: float = 1e-16) -> complex:
    """Depth-1 zeta_q(w) continued to Re(w) > 0 (direct series needs Re(w) > 1)."""
    w = complex(w)
    if w.real <= 0.0:
        raise DomainError("depth-1 continuation implemented for Re(w) > 0 only")
    return twisted_tail(w - 1.0, w, q, tol=tol)


def _expm1_vec(z: np.ndarray) -> np.ndarray:
    """exp(z) - 1 for complex arrays, accurate near zero."""
    small = np.abs(z) < 1e-4
    out = np.where(small,
                   z * (1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0))),
                   np.exp(np.where(small, 0.0, z)) - 1.0)
    return out


def _strip_correction_terms(s1, s2, qp, max_outer):
    """Yield the m-terms of the rearranged depth-2 series.

    Writing the inner depth-1 prefix as q^{(s1-1)m} [m]^{-s1} rho(m) with
    rho(m) = sum_{k=1}^{m-1} q^{(1-s1)k} ([m-k]/[m])^{-s1}, the full series is

        sum_{m>=2} q^{w m} [m]^{-v} (rho(m) - rho_inf) + rho_inf (tau(w; v) - q^w)

    with w = s1+s2-2, v = s1+s2 and rho_inf = q^{1-s1}/(1-q^{1-s1}).  This
    generator produces the correction terms; the caller adds the tau part.
    """
    q = qp.q
    lq = qp.log
    w = s1 + s2 - 2.0
    v = s1 + s2
    one_minus_s1 = 1.0 - s1
    geom = cmath.exp(one_minus_s1 * lq)
    for m in range(2, max_outer + 2):
        qm = q**m
        k = np.arange(1, m)
        # log([m-k]/[m]) = log1p(-q^{m-k} (1-q^k)/(1-q^m)), stable for large m
        lr = np.log1p(-(q ** (m - k)) * (1.0 - q**k) / (1.0 - qm))
        zk = np.exp(one_minus_s1 * lq * k) * _expm1_vec(-s1 * lr)
        acc = zk.sum() - cmath.exp(one_minus_s1 * m * lq) / (1.0 - geom)
        yield cmath.exp(w * m * lq - v * q_int_log(m, qp)) * acc


def _zeta2_strip(s1: complex, s2: complex, qp: QParam,
                 policy: TruncationPolicy) -> SummationResult:
    """Depth-2 evaluation for Re(s2) > 1, Re(s1) < 1, Re(s1+s2) > 1.

    Valid on both sides of the Re(s1+s2) = 2 boundary, which is what makes it
    a continuation: for Re(s1+s2) > 2 it agrees with the direct series, and the
    rearranged form stays convergent down to Re(s1+s2) > 1.
    """
    if not s2.real > 1.0:
        raise DomainError("strip evaluator needs Re(s2) > 1")
    if not s1.real < 1.0:
        raise DomainError("strip evaluator needs Re(s1) < 1")
    v = s1 + s2
    w = v - 2.0
    if not v.real > 1.0:
        raise DomainError("strip evaluator needs Re(s1+s2) > 1")
    geom = cmath.exp((1.0 - s1) * qp.log)
    if abs(1.0 - geom) < 1e-13:
        raise PoleProximityError("q^(1-s1) too close to 1")
    res = series_sum(_strip_correction_terms(s1, s2, qp, policy.max_outer), policy)
    rho_inf = geom / (1.0 - geom)
    tail = twisted_tail(w, v, qp, tol=min(policy.tol * 1e-3, 1e-16))
    value = res.value + rho_inf * (tail - cmath.exp(w * qp.log))
    return SummationResult(value=value,
                           abs_error_estimate=res.abs_error_estimate,
                           terms_used=res.terms_used, converged=res.converged)


def zeta_q_two_cont(s: complex, alpha: complex, q,
                    policy: TruncationPolicy = DEFAULT_POLICY) -> SummationResult:
    """zeta_q(s - alpha, alpha) for Re(s) > 1, Re(alpha) > 1.

    For Re(s - alpha) >= 1 the pair is inside the convergence domain and the
    direct evaluator is used.  Otherwise the stable rearrangement of
    ``_zeta2_strip`` applies; it needs no regularity from s beyond staying off
    the pole set s in 2 + iP Z (equivalently, s-1 off the depth-1 pole set).
    """
    qp = as_q(q)
    s, alpha = complex(s), complex(alpha)
    if not s.real > 1.0:
        raise DomainError("zeta_q_two_cont needs Re(s) > 1")
    if not alpha.real > 1.0:
        raise DomainError("zeta_q_two_cont needs Re(alpha) > 1")
    if _dist_partial(s, 2, qp) < POLE_GUARD_RADIUS:
        raise PoleProximityError(f"s = {s} is within the guard of the pair-sum pole set")
    if _dist_depth1(s - 1.0, qp) < POLE_GUARD_RADIUS:
        raise PoleProximityError(f"s - 1 = {s - 1} is within the depth-1 pole guard")
    s1 = s - alpha
    if s1.real < 1.0:
        return _zeta2_strip(s1, alpha, qp, policy)
    return zeta_q((s1, alpha), qp, policy)
