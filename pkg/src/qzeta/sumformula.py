"""Sum-formula identities and their complex interpolation.

Three layers of the same identity family:

  * the integer sum formula: summing zeta_q over all admissible compositions
    of a fixed weight and depth reproduces the depth-1 value,
  * its depth-2 complex interpolation: the series over n of
    zeta_q(s-n-2, n+2) - zeta_q(-n, s+n) equals zeta_q(s) for Re(s) > 1 off
    the pole copies of s = 2,
  * the arbitrary-depth interpolation: a recursively defined combination of
    depth-(a+b) values that telescopes, via the auxiliary chain series, into a
    closed form one chain shorter, collapsing to zeta_q(s) when a = 0.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, replace

import numpy as np

from .auxseries import _ChainCache
from .qcore import (DEFAULT_POLICY, DomainError, NeumaierSum,
                    PoleProximityError, SummationResult, TruncationPolicy,
                    as_q, q_int_log, series_sum)
from .qmzf import POLE_GUARD_RADIUS, _dist_partial, zeta_q, zeta_q_two_cont


@dataclass
class SumFormulaReport:
    """Two sides of one identity instance, with truncation bookkeeping."""

    lhs: complex
    rhs: complex
    abs_diff: float
    terms_used: int
    tail_estimate: float
    convention_note: str = ""


@dataclass(frozen=True)
class InterpSpec:
    """Arguments of the order-(a, b) interpolation of the sum formula.

    ``prefix`` holds the a fixed leading arguments; ``s`` is interpolated over
    the trailing b slots.  The stated domain is Re(s) > b together with
    Re(s + s_{a-k+1} + ... + s_a) > k + b for k = 1..a.
    """

    a: int
    b: int
    prefix: tuple[complex, ...]
    s: complex

    def __post_init__(self):
        if self.a < 0 or self.b < 1:
            raise ValueError("need a >= 0 and b >= 1")
        if len(self.prefix) != self.a:
            raise ValueError("prefix length must equal a")
        s = complex(self.s)
        if not s.real > self.b:
            raise DomainError(f"interpolation requires Re(s) > b = {self.b}")
        acc = s
        for k in range(1, self.a + 1):
            acc = acc + complex(self.prefix[self.a - k])
            if not acc.real > k + self.b:
                raise DomainError(
                    f"interpolation requires Re(s + trailing prefix sum) > {k + self.b}")


def admissible_compositions(k: int, r: int) -> list[tuple[int, ...]]:
    """All compositions of k into r positive parts with last part >= 2.

    Lexicographic order; the count is binom(k-2, r-1).
    """
    if r < 1 or r > k - 1:
        raise ValueError(f"need 1 <= r <= k - 1, got r={r}, k={k}")

    out: list[tuple[int, ...]] = []

    def build(remaining: int, slots: int, acc: tuple[int, ...]):
        if slots == 1:
            if remaining >= 2:
                out.append(acc + (remaining,))
            return
        for first in range(1, remaining - (slots - 1) - 1 + 1):
            build(remaining - first, slots - 1, acc + (first,))

    build(k, r, ())
    return out


def check_sum_formula(k: int, r: int, q,
                      policy: TruncationPolicy = DEFAULT_POLICY) -> SumFormulaReport:
    """Compare the composition sum of weight k, depth r against zeta_q(k)."""
    qp = as_q(q)
    lhs = NeumaierSum()
    used = 0
    err = 0.0
    for comp in admissible_compositions(k, r):
        res = zeta_q(comp, qp, policy)
        lhs.add(res.value)
        used += res.terms_used
        err += res.abs_error_estimate
    rhs = zeta_q((k,), qp, policy)
    used += rhs.terms_used
    err += rhs.abs_error_estimate
    return SumFormulaReport(lhs=lhs.value, rhs=rhs.value,
                            abs_diff=abs(lhs.value - rhs.value),
                            terms_used=used, tail_estimate=err)


def _power_tail_model(ns, mags, s_real, n_last, window):
    """Fit |term_n| ~ c n^{-(1+delta)} on the trailing window.

    Returns (tail_bound, fitted_exponent); delta is pinned to
    min(1, Re(s)-1) * (1 - 1e-3) and only the amplitude is fitted, so the
    bound stays a conservative model even though the actual decay of the
    interpolated terms is geometric.
    """
    delta = min(1.0, s_real - 1.0) * (1.0 - 1e-3)
    pts = [(n, m) for n, m in zip(ns, mags) if n >= 1 and m > 0.0]
    pts = pts[-window:]
    if len(pts) < 2:
        return 0.0, None
    amp = float(np.median([m * n ** (1.0 + delta) for n, m in pts]))
    tail = amp * n_last ** (-delta) / delta
    x = np.log([n for n, _ in pts])
    y = np.log([m for _, m in pts])
    exponent = float(np.polyfit(x, y, 1)[0])
    return tail, exponent


def interpolated_sum_depth2(s: complex, q,
                            policy: TruncationPolicy = DEFAULT_POLICY,
                            n_max: int = 400) -> SummationResult:
    """Series over n of zeta_q(s-n-2, n+2) - zeta_q(-n, s+n).

    For Re(s) > 2 every summand is inside the convergence domain and evaluated
    by the direct series; for 1 < Re(s) <= 2 both pieces go through the depth-2
    continuation.  The error estimate carries an additional power-law tail
    bound c n^{-delta}/delta at the stopping index, and the fitted tail
    exponent is reported for the decay tests.
    """
    qp = as_q(q)
    s = complex(s)
    if not s.real > 1.0:
        raise DomainError("interpolated sum requires Re(s) > 1")
    if _dist_partial(s, 2, qp) < POLE_GUARD_RADIUS:
        raise PoleProximityError(f"s = {s} is within the pole guard")
    direct = s.real > 2.0
    ns: list[int] = []
    mags: list[float] = []
    sub_err = [0.0]

    def terms():
        for n in itertools.count(0):
            if direct:
                r1 = zeta_q((s - n - 2, n + 2), qp, policy)
                r2 = zeta_q((-n, s + n), qp, policy)
            else:
                r1 = zeta_q_two_cont(s, n + 2, qp, policy)
                r2 = zeta_q_two_cont(s, s + n, qp, policy)
            sub_err[0] += r1.abs_error_estimate + r2.abs_error_estimate
            val = r1.value - r2.value
            ns.append(n)
            mags.append(abs(val))
            yield val

    local = replace(policy, max_outer=min(policy.max_outer, n_max))
    res = series_sum(terms(), local)
    tail, exponent = _power_tail_model(ns, mags, s.real, max(ns[-1], 1),
                                       policy.tail_fit_window)
    res.abs_error_estimate += tail + sub_err[0]
    res.tail_exponent = exponent
    return res


# ---------------------------------------------------------------------------
# order-(a, b) interpolation: literal recursion and closed form
# ---------------------------------------------------------------------------

RECURSION_MAX_B = 3


def interp_recursive(spec: InterpSpec, q,
                     policy: TruncationPolicy = DEFAULT_POLICY,
                     n_max: int = 400) -> SummationResult:
    """Evaluate the interpolation by its defining recursion.

    Base case b = 1 is a single zeta_q value of depth a + 1; each further level
    adds one stall-truncated n sum, so the cost grows like n_max^(b-1).  The
    recursion exists to validate the closed form and is capped at
    b <= RECURSION_MAX_B.
    """
    if spec.b > RECURSION_MAX_B:
        raise ValueError(
            f"recursive evaluation is capped at b <= {RECURSION_MAX_B} "
            "(cost grows geometrically); use interp_closed_form")
    qp = as_q(q)
    if spec.b == 1:
        return zeta_q(spec.prefix + (spec.s,), qp, policy)
    sub_err = [0.0]
    sub_terms = [0]

    def terms():
        for n in itertools.count(0):
            child1 = InterpSpec(spec.a + 1, spec.b - 1,
                                spec.prefix + (spec.s - n - spec.b,), n + spec.b)
            child2 = InterpSpec(spec.a + 1, spec.b - 1,
                                spec.prefix + (-n + 0.0j,), spec.s + n)
            r1 = interp_recursive(child1, qp, policy, n_max)
            r2 = interp_recursive(child2, qp, policy, n_max)
            sub_err[0] += r1.abs_error_estimate + r2.abs_error_estimate
            sub_terms[0] += r1.terms_used + r2.terms_used
            yield r1.value - r2.value

    local = replace(policy, max_outer=min(policy.max_outer, n_max))
    res = series_sum(terms(), local)
    res.abs_error_estimate += sub_err[0]
    res.terms_used += sub_terms[0]
    return res


def _closed_form_terms(spec: InterpSpec, qp, policy, cache: _ChainCache):
    """Outer terms of the closed form.

    Over the outer variable m the term is

        q^{(s-b)m}/[m]^{s-b+1} * sum_{m_a < m} t_a(m_a) S_{a-1}(m_a) C_{b-1}(m - m_a, m)

    with the chain convention: length b-1, lower bound m - m_a, read as m when
    a = 0 (so the chain collapses to (q^m/[m])^{b-1}).  Prefix sums over the
    first a-1 slots are maintained in scaled form exactly as in the direct
    evaluator.
    """
    a, b, s = spec.a, spec.b, complex(spec.s)
    prefix = tuple(complex(p) for p in spec.prefix)
    lq = qp.log
    if a == 0:
        for m in itertools.count(1):
            lgm = q_int_log(m, qp)
            yield cmath.exp((s - b) * m * lq - (s - b + 1) * lgm
                            + (b - 1) * (m * lq - lgm))
        return

    # prefix history: scaled S_{a-1}(m_a) for every m_a seen so far
    hist: list[tuple[complex, float]] = []
    man = [0.0 + 0.0j] * (a - 1)
    ls = [0.0] * (a - 1)
    for m in itertools.count(1):
        lgm = q_int_log(m, qp)
        if a == 1:
            hist.append((1.0 + 0.0j, 0.0))
        else:
            hist.append((man[a - 2], ls[a - 2]))
        if m > a:
            # emitted outer indices start at m = a + 1; earlier terms vanish
            acc_man = 0.0 + 0.0j
            acc_ls = 0.0
            for ma in range(a, m):
                h_man, h_ls = hist[ma - 1]
                if h_man == 0.0:
                    continue
                ch = cache.value(m - ma, m, b - 1)
                if ch == 0.0:
                    continue
                z = (prefix[a - 1] - 1.0) * ma * lq \
                    - prefix[a - 1] * q_int_log(ma, qp) + h_ls
                c_scale = z.real + math.log(ch)
                c_man = cmath.exp(1j * z.imag) * h_man
                if acc_man == 0.0:
                    acc_man, acc_ls = c_man, c_scale
                else:
                    lnew = max(acc_ls, c_scale)
                    acc_man = acc_man * math.exp(acc_ls - lnew) \
                        + c_man * math.exp(c_scale - lnew)
                    acc_ls = lnew
                aa = abs(acc_man)
                if aa > 1e30 or (0.0 < aa < 1e-30):
                    acc_ls += math.log(aa)
                    acc_man /= aa
            w = (s - b) * m * lq - (s - b + 1) * lgm
            if acc_man == 0.0:
                yield 0.0 + 0.0j
            else:
                yield cmath.exp(w + acc_ls) * acc_man
        # update prefix levels for slots 1..a-1, descending
        for j in range(a - 2, -1, -1):
            zj = (prefix[j] - 1.0) * m * lq - prefix[j] * q_int_log(m, qp)
            if j == 0:
                c_scale, c_man = zj.real, cmath.exp(1j * zj.imag)
            else:
                pman, pls = man[j - 1], ls[j - 1]
                if pman == 0.0:
                    continue
                c_scale, c_man = zj.real + pls, cmath.exp(1j * zj.imag) * pman
            if man[j] == 0.0:
                man[j], ls[j] = c_man, c_scale
            else:
                lnew = max(ls[j], c_scale)
                man[j] = man[j] * math.exp(ls[j] - lnew) + c_man * math.exp(c_scale - lnew)
                ls[j] = lnew
            aa = abs(man[j])
            if aa > 1e30 or (0.0 < aa < 1e-30):
                ls[j] += math.log(aa)
                man[j] /= aa


def interp_closed_form(spec: InterpSpec, q,
                       policy: TruncationPolicy = DEFAULT_POLICY) -> SummationResult:
    """Closed form of the interpolation (requires b >= 2).

    Single series over the outer variable with an inner weakly increasing
    chain of length b-1 starting at m - m_a, the form into which the recursion
    telescopes.  This is the production path for all b.
    """
    if spec.b < 2:
        raise ValueError("closed form requires b >= 2; b = 1 is a plain zeta_q value")
    qp = as_q(q)
    cache = _ChainCache(qp)
    return series_sum(_closed_form_terms(spec, qp, policy, cache), policy)


def check_interp_collapse(b: int, s: complex, q,
                          policy: TruncationPolicy = DEFAULT_POLICY) -> SumFormulaReport:
    """Verify that the order-(0, b) interpolation collapses to zeta_q(s).

    For b <= RECURSION_MAX_B the literal recursion is also evaluated and its
    agreement with the closed form recorded in the convention note.
    """
    qp = as_q(q)
    s = complex(s)
    if b < 1:
        raise ValueError("b must be a positive integer")
    if not s.real > b:
        raise DomainError(f"collapse check requires Re(s) > b = {b}")
    rhs = zeta_q((s,), qp, policy)
    if b == 1:
        lhs = zeta_q((s,), qp, policy)
        note = "b = 1 is the defining base case"
        rec_diff = 0.0
    else:
        spec = InterpSpec(0, b, (), s)
        lhs = interp_closed_form(spec, qp, policy)
        note = "chain convention: length b-1, lower bound m - m_a (= m at a = 0)"
        rec_diff = None
        if b <= RECURSION_MAX_B:
            rec = interp_recursive(spec, qp, policy)
            rec_diff = abs(rec.value - lhs.value)
            note += f"; recursion vs closed form diff = {rec_diff:.3e}"
    return SumFormulaReport(lhs=lhs.value, rhs=rhs.value,
                            abs_diff=abs(lhs.value - rhs.value),
                            terms_used=lhs.terms_used + rhs.terms_used,
                            tail_estimate=lhs.abs_error_estimate + rhs.abs_error_estimate,
                            convention_note=note)
