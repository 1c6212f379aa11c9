"""q-analog primitives and compensated series summation.

Everything downstream is built from four ingredients kept here: the q-bracket
[m]_q = (1-q^m)/(1-q), log-space evaluation of the series terms
q^{(s-1)n}/[n]_q^s, the q-floor step function, and a stall-based compensated
summation driver shared by every series in the package.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from scipy.special import loggamma


class QZetaError(Exception):
    """Base class for numerical-domain failures."""


class DomainError(QZetaError):
    """Argument lies outside the convergence domain of the requested series."""


class PoleProximityError(QZetaError):
    """Argument is too close to the pole lattice for a double-precision value."""


@dataclass(frozen=True)
class QParam:
    """Deformation parameter, restricted to the open interval (0, 1)."""

    q: float

    def __post_init__(self):
        if not (0.0 < self.q < 1.0):
            raise ValueError(f"q must satisfy 0 < q < 1, got {self.q}")

    @property
    def log(self) -> float:
        return math.log(self.q)

    @property
    def qline_sup(self) -> float:
        """Supremum 1/(1-q) of the q-brackets [m]_q."""
        return 1.0 / (1.0 - self.q)


def as_q(q) -> QParam:
    """Coerce a float or QParam to a validated QParam."""
    return q if isinstance(q, QParam) else QParam(float(q))


@dataclass(frozen=True)
class TruncationPolicy:
    """Stopping and quadrature knobs used by every series and integral.

    tol                absolute tolerance target for stall-based stopping
    max_outer          hard cap on the number of outer-index terms
    stall_window       consecutive below-tolerance terms required to stop
    quad_order         Gauss-Legendre nodes per quadrature piece
    tail_fit_window    trailing terms used for tail-ratio and tail-exponent fits
    """

    tol: float = 1e-12
    max_outer: int = 200_000
    stall_window: int = 4
    quad_order: int = 16
    tail_fit_window: int = 8

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not (self.max_outer >= self.stall_window >= 1):
            raise ValueError("need max_outer >= stall_window >= 1")
        if self.quad_order < 2:
            raise ValueError("quad_order must be at least 2")
        if self.tail_fit_window < 2:
            raise ValueError("tail_fit_window must be at least 2")


DEFAULT_POLICY = TruncationPolicy()


@dataclass
class SummationResult:
    """Value of a truncated series together with its stopping diagnostics.

    ``converged`` means the stall rule fired; hitting ``max_outer`` reports
    ``converged=False`` but still returns the partial value.  When the caller
    attaches a power-law tail model, its fitted exponent lands in
    ``tail_exponent``.
    """

    value: complex
    abs_error_estimate: float
    terms_used: int
    converged: bool
    tail_exponent: Optional[float] = None


class NeumaierSum:
    """Kahan-Neumaier compensated accumulator for complex values.

    Compensation runs independently on the real and imaginary components.
    This class is the single swap point for the scalar model: an
    extended-precision build only has to replace it.
    """

    __slots__ = ("_sr", "_si", "_cr", "_ci")

    def __init__(self):
        self._sr = self._si = 0.0
        self._cr = self._ci = 0.0

    def add(self, z: complex) -> None:
        x, y = z.real, z.imag
        t = self._sr + x
        if abs(self._sr) >= abs(x):
            self._cr += (self._sr - t) + x
        else:
            self._cr += (x - t) + self._sr
        self._sr = t
        t = self._si + y
        if abs(self._si) >= abs(y):
            self._ci += (self._si - t) + y
        else:
            self._ci += (y - t) + self._si
        self._si = t

    @property
    def value(self) -> complex:
        return complex(self._sr + self._cr, self._si + self._ci)


def q_int(m: int, q) -> float:
    """q-bracket [m]_q = (1-q^m)/(1-q), the q-analog of the integer m.

    Strictly increasing in m (until q^m underflows) and bounded by 1/(1-q).
    """
    qp = as_q(q)
    if m < 1:
        raise ValueError("m must be a positive integer")
    return (1.0 - qp.q**m) / (1.0 - qp.q)


def q_int_log(m: int, q) -> float:
    """log [m]_q, computed as log1p(-q^m) - log1p(-q) to stay exact for large m."""
    qp = as_q(q)
    if m < 1:
        raise ValueError("m must be a positive integer")
    return math.log1p(-qp.q**m) - math.log1p(-qp.q)


def q_term(s: complex, n: int, q) -> complex:
    """Single series term q^{(s-1)n}/[n]_q^s, evaluated in log space.

    exp((s-1) n log q - s log [n]_q) avoids overflow and underflow for large
    |Re(s)| n; powers use the principal branch on the positive reals.
    """
    qp = as_q(q)
    if n < 1:
        raise ValueError("n must be a positive integer")
    s = complex(s)
    return cmath.exp((s - 1.0) * n * qp.log - s * q_int_log(n, qp))


def q_floor(x: float, q) -> float:
    """The q-floor: returns [n]_q for x in [[n]_q, [n+1]_q).

    The piece index comes from the closed-form floor
    n = floor(log(1-(1-q)x)/log q), with a one-step neighbor correction to
    absorb floating-point boundary error.
    """
    qp = as_q(q)
    if x < 0.0 or x >= qp.qline_sup:
        raise DomainError(f"q-floor domain is [0, {qp.qline_sup}), got {x}")
    if x < 1.0:
        return 0.0
    inner = 1.0 - (1.0 - qp.q) * x
    if inner > 0.0:
        n = int(math.floor(math.log(inner) / qp.log))
    else:
        # x rounds onto the sup; deepest piece resolvable in double precision
        n = int(math.ceil(math.log(2.3e-16) / qp.log))
    n = max(n, 1)
    for cand in (n - 1, n, n + 1):
        if cand >= 1 and q_int(cand, qp) <= x < q_int(cand + 1, qp):
            return q_int(cand, qp)
    # rounding pushed the estimate further off; rescan locally
    while n > 1 and q_int(n, qp) > x:
        n -= 1
    while q_int(n + 1, qp) <= x:
        n += 1
    return q_int(n, qp)


def _tail_ratio(tail: list[float]) -> float:
    """Geometric ratio estimated from trailing term magnitudes, clamped to [0, 0.99]."""
    pts = [t for t in tail if t > 0.0]
    if len(pts) < 2:
        return 0.0
    rho = (pts[-1] / pts[0]) ** (1.0 / (len(pts) - 1))
    if not math.isfinite(rho) or rho < 0.0:
        return 0.0
    return min(rho, 0.99)


def series_sum(term_source: Iterable[complex],
               policy: TruncationPolicy = DEFAULT_POLICY) -> SummationResult:
    """Sum a series given by its outer terms for indices 1, 2, 3, ...

    Accumulation is Kahan-Neumaier compensated in fixed ascending order.
    Stops once |term| < tol * max(1, |partial|) held for ``stall_window``
    consecutive terms, or at ``max_outer`` (reported as converged=False,
    never an exception).  The error bar is |last term| * rho/(1-rho) with rho
    the tail ratio fitted on the last ``tail_fit_window`` magnitudes.
    """
    acc = NeumaierSum()
    tail: list[float] = []
    stall = 0
    used = 0
    last_mag = 0.0
    converged = False
    it: Iterator[complex] = iter(term_source)
    for term in it:
        term = complex(term)
        acc.add(term)
        used += 1
        last_mag = abs(term)
        tail.append(last_mag)
        if len(tail) > policy.tail_fit_window:
            tail.pop(0)
        if last_mag < policy.tol * max(1.0, abs(acc.value)):
            stall += 1
            if stall >= policy.stall_window:
                converged = True
                break
        else:
            stall = 0
        if used >= policy.max_outer:
            break
    rho = _tail_ratio(tail)
    err = last_mag * rho / (1.0 - rho) if last_mag > 0.0 else 0.0
    return SummationResult(value=acc.value, abs_error_estimate=err,
                           terms_used=used, converged=converged)


def beta_fn(x: complex, y: complex) -> complex:
    """Euler beta function B(x, y) = Gamma(x)Gamma(y)/Gamma(x+y) via log-gamma.

    Restricted to Re(x) > 0, Re(y) > 0, which is all the bound checks need.
    """
    x, y = complex(x), complex(y)
    if x.real <= 0.0 or y.real <= 0.0:
        raise DomainError("beta_fn requires Re(x) > 0 and Re(y) > 0")
    out = cmath.exp(loggamma(x) + loggamma(y) - loggamma(x + y))
    return out
