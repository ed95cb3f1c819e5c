"""The shift-invariant covariance Q and its certification.

Diagonal values (before scaling by C)

    d_0 = 1,   d_k = -3i / (pi^2 k^2)  (k > 0),   d_-k = conj(d_k)

with symbol  S(theta) = sum_k d_k e^{i k theta} = 1 + (6/pi^2) Cl_2(theta),
where Cl_2 is the Clausen function.  C = 1 / max S normalizes Q to norm one.

Orientation: ``cov(m, n) = <a_m^dag a_n>`` and for m > n it equals
``+3iC / (pi^2 (m - n)^2)``, i.e. ``cov(m, n) = C d_{n - m}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import bernoulli

from .errors import BudgetExceeded, ValidationError

TRUNCATION_CAP = 256

_B = bernoulli(64)
# |B_2k| / (2k (2k+1) (2k)!) for the Clausen power series
_CL2_COEFFS = np.array(
    [abs(_B[2 * k]) / (2 * k * (2 * k + 1) * math.factorial(2 * k)) for k in range(1, 30)]
)


def diag_value(k: int) -> complex:
    """Unscaled value d_k on the k-th diagonal."""
    if k == 0:
        return 1.0 + 0j
    mag = 3.0 / (math.pi**2 * k * k)
    return complex(0.0, -mag) if k > 0 else complex(0.0, mag)


def clausen2(theta):
    """Cl_2(theta) = sum_{k>=1} sin(k theta)/k^2, vectorized, to ~1e-15."""
    t = np.asarray(theta, dtype=float)
    x = np.mod(t + math.pi, 2 * math.pi) - math.pi  # into [-pi, pi)
    sign = np.sign(x)
    a = np.abs(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        base = np.where(a > 0, a - a * np.log(np.where(a > 0, a, 1.0)), 0.0)
    a2 = a * a
    poly = np.zeros_like(a)
    for c in _CL2_COEFFS[::-1]:
        poly = poly * a2 + c
    out = sign * (base + a * a2 * poly)
    return out if out.ndim else float(out)


def symbol(theta):
    """S(theta) = 1 + (6/pi^2) sum_k sin(k theta)/k^2."""
    return 1.0 + 6.0 / math.pi**2 * clausen2(theta)


def symbol_partial_sum(theta: float, terms: int) -> float:
    """Direct truncated series; the tail is bounded by 6 / (pi^2 terms)."""
    k = np.arange(1, terms + 1, dtype=float)
    return 1.0 + 6.0 / math.pi**2 * float(np.sum(np.sin(k * theta) / (k * k)))


def _slope_bound(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # S'(t) = -(6/pi^2) log(2 sin(t/2)); log(2 sin(t/2)) is concave on (0, 2 pi)
    # with maximum log 2 at pi, so |S'| on [a, b] peaks at an endpoint or at pi.
    fa = np.abs(np.log(2 * np.sin(a / 2)))
    fb = np.abs(np.log(2 * np.sin(b / 2)))
    m = np.maximum(fa, fb)
    m = np.where((a <= math.pi) & (math.pi <= b), np.maximum(m, math.log(2)), m)
    return 6.0 / math.pi**2 * m


@dataclass(frozen=True)
class NormCertificate:
    """Symbol extrema with a certified enclosure.

    The true max lies in [opnorm, opnorm + error] and the true min in
    [min_symbol - error, min_symbol].
    """

    opnorm: float
    min_symbol: float
    argmax: float
    argmin: float
    error: float
    edge: float

    @property
    def scale(self) -> float:
        return 1.0 / self.opnorm


def _edge_deviation(eps: float) -> float:
    # |S - 1| <= (6/pi^2) |Cl_2(t)| <= (6/pi^2) t (1 + log(pi / (2t))) on (0, eps]
    return 6.0 / math.pi**2 * eps * (1.0 + math.log(math.pi / (2 * eps)))


def _branch_and_bound(sign: float, eps: float, tol: float, cells: int) -> tuple[float, float, float]:
    # maximize sign * S over [eps, 2 pi - eps]
    edges = np.linspace(eps, 2 * math.pi - eps, cells + 1)
    a, b = edges[:-1], edges[1:]
    for _ in range(200):
        fa, fb = sign * symbol(a), sign * symbol(b)
        width = b - a
        upper = 0.5 * (fa + fb) + 0.5 * _slope_bound(a, b) * width
        best_i = int(np.argmax(np.maximum(fa, fb)))
        best = max(fa[best_i], fb[best_i])
        arg = a[best_i] if fa[best_i] >= fb[best_i] else b[best_i]
        top = float(np.max(upper))
        if top - best <= tol:
            return float(best), float(arg), top - float(best)
        keep = upper > best + tol
        a, b = a[keep], b[keep]
        mid = 0.5 * (a + b)
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
    raise RuntimeError("symbol branch-and-bound did not converge")


def certify_norm(tol: float = 1e-9, eps: float = 1e-4, cells: int = 4096) -> NormCertificate:
    """Certified max and min of the symbol; max is the operator norm of Q.

    Fails if the minimum is not strictly positive.
    """
    hi, argmax, err_hi = _branch_and_bound(1.0, eps, tol, cells)
    lo, argmin, err_lo = _branch_and_bound(-1.0, eps, tol, cells)
    lo = -lo
    edge = _edge_deviation(eps)
    if not (1 + edge < hi and 1 - edge > lo):
        raise AssertionError("extremum may lie in the excluded neighbourhood of 0")
    if lo - err_lo <= 0:
        raise AssertionError(f"symbol minimum {lo} is not positive")
    return NormCertificate(hi, lo, argmax, argmin, max(err_hi, err_lo), edge)


@lru_cache(maxsize=1)
def default_certificate() -> NormCertificate:
    return certify_norm()


@dataclass(frozen=True)
class ToeplitzCovariance:
    """Covariance ``cov(m, n) = scale * d_{n - m}`` of the stationary quasi-free state."""

    scale: float = field(default_factory=lambda: default_certificate().scale)

    def diag(self, k: int) -> complex:
        return self.scale * diag_value(k)

    def __call__(self, m: int, n: int) -> complex:
        return self.scale * diag_value(n - m)

    def matrix(self, sites) -> np.ndarray:
        s = np.asarray(list(sites), dtype=np.int64)
        diff = s[None, :] - s[:, None]
        out = np.empty(diff.shape, dtype=complex)
        out[diff == 0] = self.scale
        nz = diff != 0
        k = diff[nz].astype(float)
        out[nz] = -1j * np.sign(k) * 3.0 * self.scale / (math.pi**2 * k * k)
        return out

    def truncation(self, m_lo: int, m_hi: int) -> np.ndarray:
        """Matrix [cov(m, n)] for m, n in m_lo..m_hi."""
        if m_hi < m_lo:
            raise ValidationError("empty truncation window")
        size = m_hi - m_lo + 1
        if size > TRUNCATION_CAP:
            raise BudgetExceeded("truncation size", size, TRUNCATION_CAP)
        return self.matrix(range(m_lo, m_hi + 1))


def cov(m: int, n: int) -> complex:
    return ToeplitzCovariance()(m, n)


def truncation(m_lo: int, m_hi: int) -> np.ndarray:
    return ToeplitzCovariance().truncation(m_lo, m_hi)


def min_eigenvalue(M: np.ndarray, herm_tol: float = 1e-12) -> float:
    """Smallest eigenvalue of a Hermitian matrix (LAPACK ``eigvalsh``)."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError("expected a square matrix")
    if M.shape[0] > TRUNCATION_CAP:
        raise BudgetExceeded("eigenvalue problem size", M.shape[0], TRUNCATION_CAP)
    if np.max(np.abs(M - M.conj().T), initial=0.0) > herm_tol * max(1.0, np.max(np.abs(M))):
        raise ValidationError("matrix is not Hermitian")
    return float(np.linalg.eigvalsh(M)[0])


def off_diagonal_mass(terms: int) -> tuple[float, float]:
    """Partial sum of sum_{k != 0} |d_k| over |k| <= terms and its tail bound 6/(pi^2 terms)."""
    k = np.arange(1, terms + 1, dtype=float)
    partial = float(np.sum(6.0 / (math.pi**2 * k[::-1] ** 2)))
    return partial, 6.0 / (math.pi**2 * terms)
