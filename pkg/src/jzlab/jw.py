"""Finite Jordan-Wigner representation used as an independent numerical oracle.

Basis convention: the window's first site is the leftmost tensor factor,
single-mode basis (|0>, |1>) = (empty, occupied), and

    a_p = Z x ... x Z x [[0, 1], [0, 0]] x I x ... x I      (p-th factor)

so a_p^dag a_p = diag(0, 1) on its own factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .car import CarOp, CarPolynomial, Covariance, Monomial, eval_quasifree, random_word
from .errors import BudgetExceeded, ValidationError
from .toeplitz import ToeplitzCovariance

WINDOW_CAP = 10
EIG_TOL = 1e-10

_I2 = np.eye(2, dtype=complex)
_Z = np.diag([1.0, -1.0]).astype(complex)
_LOWER = np.array([[0, 1], [0, 0]], dtype=complex)


@dataclass(frozen=True)
class JwWindow:
    sites: tuple[int, ...]

    def __post_init__(self):
        if len(self.sites) > WINDOW_CAP:
            raise BudgetExceeded("Jordan-Wigner window", len(self.sites), WINDOW_CAP)
        if len(set(self.sites)) != len(self.sites):
            raise ValidationError("window sites must be distinct")

    @classmethod
    def range(cls, lo: int, hi: int) -> "JwWindow":
        return cls(tuple(range(lo, hi + 1)))

    @property
    def dim(self) -> int:
        return 2 ** len(self.sites)

    def position_of(self, site: int) -> int:
        try:
            return self.sites.index(site)
        except ValueError:
            raise ValidationError(f"site {site} outside window {self.sites}") from None


def _kron_all(factors) -> np.ndarray:
    return reduce(np.kron, factors, np.eye(1, dtype=complex))


def jw_op(w: JwWindow, op: CarOp) -> np.ndarray:
    p = w.position_of(op.site)
    k = len(w.sites)
    factors = [_Z] * p + [_LOWER] + [_I2] * (k - p - 1)
    a = _kron_all(factors)
    return a.conj().T if op.dagger else a


def jw_monomial(w: JwWindow, m: Monomial) -> np.ndarray:
    out = np.eye(w.dim, dtype=complex)
    for op in m:
        out = out @ jw_op(w, op)
    return out


def jw_polynomial(w: JwWindow, p: CarPolynomial) -> np.ndarray:
    out = np.zeros((w.dim, w.dim), dtype=complex)
    for mono, c in p.terms.items():
        out += c * jw_monomial(w, mono)
    return out


def car_residuals(w: JwWindow) -> float:
    """Max-norm deviation from the anticommutation relations over all pairs in the window."""
    ops = [jw_op(w, CarOp(s, d)) for s in w.sites for d in (False, True)]
    labels = [(s, d) for s in w.sites for d in (False, True)]
    eye = np.eye(w.dim)
    worst = 0.0
    for (s1, d1), A in zip(labels, ops):
        for (s2, d2), B in zip(labels, ops):
            expected = eye if (s1 == s2 and d1 != d2) else 0.0
            worst = max(worst, float(np.max(np.abs(A @ B + B @ A - expected))))
    return worst


def covariance_matrix(w: JwWindow, cov: Covariance) -> np.ndarray:
    """Compressed covariance G[i, j] = cov(s_i, s_j) = <a_i^dag a_j>."""
    return np.array([[cov(i, j) for j in w.sites] for i in w.sites], dtype=complex)


def quasifree_density(w: JwWindow, cov: Covariance) -> np.ndarray:
    """Density matrix of the gauge-invariant quasi-free state on the window.

    With G = U diag(lam) U^*, the modes b_k = sum_j U[j, k] a_j satisfy
    <b_k^dag b_l> = lam_k delta_kl, and rho = prod_k (lam_k n_k + (1 - lam_k)(1 - n_k)).
    """
    G = covariance_matrix(w, cov)
    lam, U = np.linalg.eigh(G)
    if lam.min() < -EIG_TOL or lam.max() > 1 + EIG_TOL:
        raise ValidationError(f"covariance eigenvalues {lam.min():.3g}..{lam.max():.3g} outside [0, 1]")
    lam = np.clip(lam, 0.0, 1.0)
    a = [jw_op(w, CarOp(s, False)) for s in w.sites]
    eye = np.eye(w.dim, dtype=complex)
    factors = []
    for k in range(len(w.sites)):
        b = sum(U[j, k] * a[j] for j in range(len(a)))
        num = b.conj().T @ b
        factors.append(lam[k] * num + (1 - lam[k]) * (eye - num))
    return reduce(np.matmul, factors, eye)


def factor_commutator(w: JwWindow, cov: Covariance) -> float:
    """Largest commutator among the rotated number-operator factors (should vanish)."""
    G = covariance_matrix(w, cov)
    _, U = np.linalg.eigh(G)
    a = [jw_op(w, CarOp(s, False)) for s in w.sites]
    nums = []
    for k in range(len(w.sites)):
        b = sum(U[j, k] * a[j] for j in range(len(a)))
        nums.append(b.conj().T @ b)
    return max(
        (float(np.max(np.abs(x @ y - y @ x))) for i, x in enumerate(nums) for y in nums[i + 1 :]),
        default=0.0,
    )


def oracle_expectation(w: JwWindow, cov: Covariance, m: Monomial | CarPolynomial,
                       rho: np.ndarray | None = None) -> complex:
    """Tr(rho M) for a word or polynomial supported in the window."""
    if rho is None:
        rho = quasifree_density(w, cov)
    M = jw_polynomial(w, m) if isinstance(m, CarPolynomial) else jw_monomial(w, m)
    return complex(np.trace(rho @ M))


def sum_position_norm(n: int) -> float:
    """Operator norm of x_1 + ... + x_n on n modes."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    if n > WINDOW_CAP:
        raise BudgetExceeded("position-sum window", n, WINDOW_CAP)
    w = JwWindow.range(1, n)
    X = sum(jw_op(w, CarOp(j, False)) + jw_op(w, CarOp(j, True)) for j in w.sites)
    return float(np.max(np.abs(np.linalg.eigvalsh(X))))


@dataclass(frozen=True)
class OracleCheck:
    window: int
    samples: int
    seed: int
    car_residual: float
    max_wick_residual: float
    max_unordered_residual: float
    min_density_eigenvalue: float
    trace_error: float
    max_odd_expectation: float


def oracle_check(window: int = 6, samples: int = 200, seed: int = 0, max_degree: int = 6,
                 cov: Covariance | None = None) -> OracleCheck:
    """Compare determinant evaluation against the trace oracle on random words.

    ``samples`` Wick-ordered words plus ``samples // 2`` unordered words
    (routed through normal ordering) are drawn from sites 1..window.
    """
    cov = cov or ToeplitzCovariance()
    rng = np.random.default_rng(seed)
    w = JwWindow.range(1, window)
    rho = quasifree_density(w, cov)
    sites = list(w.sites)
    wick_res = 0.0
    odd = 0.0
    for _ in range(samples):
        word = random_word(rng, sites, max_degree, wick=True)
        det_val = eval_quasifree(CarPolynomial({word: 1.0}, ordered=True), cov)
        tr_val = oracle_expectation(w, cov, word, rho)
        wick_res = max(wick_res, abs(det_val - tr_val))
        if len(word) % 2:
            odd = max(odd, abs(tr_val))
    unordered = 0.0
    for _ in range(samples // 2):
        word = random_word(rng, sites, max_degree, wick=False)
        det_val = eval_quasifree(CarPolynomial.monomial(word), cov)
        tr_val = oracle_expectation(w, cov, word, rho)
        unordered = max(unordered, abs(det_val - tr_val))
        if len(word) % 2:
            odd = max(odd, abs(tr_val))
    return OracleCheck(
        window=window,
        samples=samples,
        seed=seed,
        car_residual=car_residuals(w),
        max_wick_residual=wick_res,
        max_unordered_residual=unordered,
        min_density_eigenvalue=float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]),
        trace_error=abs(complex(np.trace(rho)) - 1.0),
        max_odd_expectation=odd,
    )
