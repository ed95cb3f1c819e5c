import numpy as np
import pytest

from jzlab.car import CarOp, CarPolynomial, MatrixCovariance, eval_quasifree, parse_monomial
from jzlab.errors import BudgetExceeded, ValidationError
from jzlab.jw import (
    JwWindow,
    car_residuals,
    factor_commutator,
    jw_op,
    oracle_check,
    oracle_expectation,
    quasifree_density,
    sum_position_norm,
)
from jzlab.spread import vacuum
from jzlab.toeplitz import ToeplitzCovariance

COV = ToeplitzCovariance()


def test_single_site_number_operator():
    w = JwWindow((1,))
    a = jw_op(w, CarOp(1, False))
    assert np.allclose(a.conj().T @ a, np.diag([0, 1]))


def test_anticommutators():
    w = JwWindow.range(1, 2)
    cre1, ann1, ann2 = (jw_op(w, CarOp(s, d)) for s, d in [(1, True), (1, False), (2, False)])
    assert np.max(np.abs(cre1 @ ann2 + ann2 @ cre1)) <= 1e-12
    assert np.allclose(cre1 @ ann1 + ann1 @ cre1, np.eye(4))
    assert car_residuals(JwWindow.range(1, 6)) <= 1e-12


def test_window_errors():
    with pytest.raises(BudgetExceeded):
        JwWindow.range(1, 11)
    with pytest.raises(ValidationError):
        jw_op(JwWindow.range(1, 2), CarOp(5, True))
    with pytest.raises(ValidationError):
        quasifree_density(JwWindow.range(1, 2), MatrixCovariance([1, 2], 2 * np.eye(2)))


def test_vacuum_and_full_densities():
    w = JwWindow.range(1, 3)
    rho = quasifree_density(w, vacuum)
    assert rho[0, 0] == pytest.approx(1) and np.allclose(rho @ rho, rho)
    full = quasifree_density(w, MatrixCovariance(w.sites, np.eye(3)))
    assert full[-1, -1] == pytest.approx(1) and np.trace(full) == pytest.approx(1)


def test_density_reproduces_covariance():
    w = JwWindow.range(1, 4)
    rho = quasifree_density(w, COV)
    assert np.trace(rho) == pytest.approx(1, abs=1e-10)
    assert np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0] >= -1e-10
    assert factor_commutator(w, COV) <= 1e-12
    for m in w.sites:
        for n in w.sites:
            mono = (CarOp(m, True), CarOp(n, False))
            assert oracle_expectation(w, COV, mono, rho) == pytest.approx(COV(m, n), abs=1e-10)


def test_oracle_examples():
    w = JwWindow.range(1, 4)
    assert oracle_expectation(w, COV, ()) == pytest.approx(1)
    p = parse_monomial("a+[1]*a+[2]*a[2]*a[1]")
    assert oracle_expectation(w, COV, p) == pytest.approx(eval_quasifree(p, COV), abs=1e-10)
    assert abs(oracle_expectation(w, COV, (CarOp(2, True),))) <= 1e-10


@pytest.mark.parametrize("seed", [0, 7])
def test_oracle_equivalence(seed):
    chk = oracle_check(window=6, samples=200, seed=seed)
    assert chk.max_wick_residual <= 1e-10
    assert chk.max_unordered_residual <= 1e-10
    assert chk.min_density_eigenvalue >= -1e-10
    assert chk.trace_error <= 1e-10
    assert chk.max_odd_expectation <= 1e-10


def test_general_covariance_oracle(rng):
    # random covariance with spectrum inside [0, 1]
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    U, _ = np.linalg.qr(A)
    G = U @ np.diag([0.1, 0.4, 0.7, 0.95]) @ U.conj().T
    cov = MatrixCovariance(range(1, 5), G)
    chk = oracle_check(window=4, samples=60, seed=3, cov=cov)
    assert chk.max_wick_residual <= 1e-10 and chk.max_unordered_residual <= 1e-10


@pytest.mark.parametrize("n, expected", [(1, 1.0), (4, 2.0), (9, 3.0)])
def test_sum_position_norm(n, expected):
    assert sum_position_norm(n) == pytest.approx(expected, abs=1e-10)


def test_sum_position_norm_cap():
    with pytest.raises(BudgetExceeded):
        sum_position_norm(11)
