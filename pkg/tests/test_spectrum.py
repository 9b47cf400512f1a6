import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from whp.channel import product_output
from whp.errors import DegenerateClassError
from whp.linalg import eigvalsh
from whp.spectrum import (
    analytic_spectrum,
    pnorm_decomposition,
    pnorm_power,
    s_hat,
    solve_secular,
    symmetric_polynomials,
)

dims = st.tuples(st.integers(2, 6), st.integers(2, 6)).map(sorted)


def test_vertex_classes():
    c = analytic_spectrum([1, 0, 0], 3, 3)
    assert np.allclose(np.sort(c.e_pairs), [0, 0, 0, 0, 0.25, 0.25], atol=1e-15)
    assert np.allclose(c.gamma, [1, 1, 0], atol=1e-14)
    assert np.allclose(c.g_vals, [0.25, 0.25, 0], atol=1e-14)
    assert c.h_vals.size == 3 and c.h_multiplicity == 0


def test_barycenter_classes():
    c = analytic_spectrum([1 / 3] * 3, 3, 3)
    assert np.allclose(c.e_pairs, [1 / 12] * 6, atol=1e-15)
    assert np.allclose(c.gamma, [4 / 3, 1 / 3, 1 / 3], atol=1e-14)
    assert np.allclose(c.g_vals, [1 / 3, 1 / 12, 1 / 12], atol=1e-14)


def test_unequal_dims_against_dense():
    c = analytic_spectrum([0.5, 0.5], 2, 4)
    assert np.allclose(c.e_pairs, [0, 0])
    assert np.allclose(c.h_vals, [1 / 6, 1 / 6]) and c.h_multiplicity == 2
    dense = eigvalsh(product_output([0.5, 0.5], 2, 4))
    assert np.allclose(c.flatten(), dense, atol=1e-12)


@pytest.mark.parametrize(
    "lam, expected",
    [([1, 0, 0], [1, 1, 0]), ([0.5, 0.5], [1, 0]), ([1 / 3] * 3, [4 / 3, 1 / 3, 1 / 3])],
)
@pytest.mark.parametrize("method", ["eigen", "bisect"])
def test_secular_roots_closed_form(lam, expected, method):
    assert np.allclose(solve_secular(lam, method=method), expected, atol=1e-14)


def secular_lhs(lam, gamma):
    # left-hand side of the secular equation, multiplied out to stay finite at poles
    lam = np.asarray(lam)
    mu = 1 - 2 * lam
    total = np.prod(mu - gamma)
    for a in range(lam.size):
        total += lam[a] * np.prod(np.delete(mu, a) - gamma)
    return total


@settings(max_examples=50, deadline=None)
@given(d=st.integers(2, 6), seed=st.integers(0, 2**32 - 1))
def test_secular_roots_are_rank_one_update_eigenvalues(d, seed):
    lam = np.random.default_rng(seed).dirichlet(np.ones(d))
    root = np.sqrt(lam)
    oracle = np.sort(np.linalg.eigvalsh(np.diag(1 - 2 * lam) + np.outer(root, root)))[::-1]
    gamma = solve_secular(lam)
    assert np.allclose(gamma, oracle, atol=1e-12)
    assert np.allclose(solve_secular(lam, method="bisect"), oracle, atol=1e-12)
    assert abs(gamma.sum() - (d - 1)) < 1e-10
    assert gamma.min() >= -1e-12
    for g in gamma:
        assert abs(secular_lhs(lam, g)) < 1e-12


def test_secular_repeated_and_zero_weights():
    lam = [0.4, 0.4, 0.2, 0.0]
    gamma = solve_secular(lam)
    assert np.allclose(solve_secular(lam, method="bisect"), gamma, atol=1e-13)
    # repeated weight -> its pole is a root; zero weight -> pole 1 is a root
    assert np.any(np.isclose(gamma, 0.2)) and np.any(np.isclose(gamma, 1.0))


@settings(max_examples=50, deadline=None)
@given(d=st.integers(2, 6), seed=st.integers(0, 2**32 - 1))
def test_roots_interlace_distinct_poles(d, seed):
    lam = np.random.default_rng(seed).dirichlet(np.ones(d))
    poles = np.sort(1 - 2 * lam)
    gamma = np.sort(solve_secular(lam))
    assert np.all(gamma[:-1] > poles[:-1]) and np.all(gamma[:-1] < poles[1:])
    assert gamma[-1] > poles[-1]


@settings(max_examples=100, deadline=None)
@given(dd=dims, seed=st.integers(0, 2**32 - 1), sparse=st.booleans())
def test_class_sums_and_dense_oracle(dd, seed, sparse):
    d1, d2 = dd
    rng = np.random.default_rng(seed)
    lam = rng.dirichlet(np.ones(d1))
    if sparse:
        lam[rng.random(d1) < 0.3] = 0
        if lam.sum() == 0:
            lam[0] = 1
        lam /= lam.sum()
    c = analytic_spectrum(lam, d1, d2)
    assert abs(c.e_pairs.sum() - (d1 - 2) / (d2 - 1)) < 1e-10
    assert abs(c.h_vals.sum() - 1 / (d2 - 1)) < 1e-10
    assert abs(c.g_vals.sum() - 1 / (d2 - 1)) < 1e-10
    assert abs(c.e_pairs.sum() + (d2 - d1) * c.h_vals.sum() + c.g_vals.sum() - 1) < 1e-10
    assert c.flatten().size == d1 * d2
    assert np.allclose(c.flatten(), eigvalsh(product_output(lam, d1, d2)), atol=1e-9)
    if d1 == 2:
        assert np.all(np.abs(c.e_pairs) < 1e-15)


def test_decomposition_barycenter_p2():
    dec = pnorm_decomposition([1 / 3] * 3, 3, 3, 2.0)
    # six e-values 1/12 and g = {1/12, 1/12, 1/3}
    assert abs(dec.t1 - 6 / 144) < 1e-15
    assert dec.t2 == 0
    assert abs(dec.t3 - (2 / 144 + 1 / 9)) < 1e-15
    assert abs(dec.total - 1 / 6) < 1e-15


def test_decomposition_vertex_p2():
    assert abs(pnorm_decomposition([1, 0, 0], 3, 3, 2.0).total - 0.25) < 1e-15


def test_degenerate_flags():
    dec = pnorm_decomposition([0.7, 0.3], 2, 2, 1.5)
    assert dec.t1 == 0 and dec.t2 == 0 and dec.e_degenerate and dec.h_degenerate
    with pytest.raises(DegenerateClassError):
        dec.e_tilde
    with pytest.raises(DegenerateClassError):
        dec.h_tilde
    dec = pnorm_decomposition([0.6, 0.4], 2, 5, 1.3)
    assert dec.t1 == 0 and not dec.h_degenerate


@settings(max_examples=60, deadline=None)
@given(dd=dims, seed=st.integers(0, 2**32 - 1), p=st.floats(1.0, 3.0))
def test_decomposition_reproduces_pnorm(dd, seed, p):
    d1, d2 = dd
    lam = np.random.default_rng(seed).dirichlet(np.ones(d1))
    dec = pnorm_decomposition(lam, d1, d2, p)
    dense = np.clip(eigvalsh(product_output(lam, d1, d2)), 0, None)
    assert abs(dec.total - np.sum(dense**p)) < 1e-9
    assert abs(dec.total - pnorm_power(lam, d1, d2, p)) < 1e-12
    assert abs(dec.g_tilde.sum() - 1) < 1e-10
    if not dec.e_degenerate:
        assert abs(dec.e_tilde.sum() - 1) < 1e-10
    if not dec.h_degenerate:
        assert abs(dec.h_tilde.sum() - 1) < 1e-10
    assert dec.c3 == pytest.approx((d2 - 1) ** -p)


def brute_symmetric(x, k):
    return sum(np.prod(c) for c in itertools.combinations(x, k)) if k else 1.0


def test_symmetric_polynomials_examples():
    assert np.allclose(symmetric_polynomials([1, 1, 1]), [1, 3, 3, 1])
    assert np.allclose(symmetric_polynomials([2, 3]), [1, 5, 6])


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 7))
def test_symmetric_polynomials_brute_force_and_roots(seed, n):
    x = np.random.default_rng(seed).uniform(-1, 1, size=n)
    s = symmetric_polynomials(x)
    assert np.allclose(s, [brute_symmetric(x, k) for k in range(n + 1)], atol=1e-12)
    coeffs = [(-1) ** (n - k) * s[n - k] for k in range(n + 1)]
    for r in x:
        assert abs(sum(c * r**k for k, c in enumerate(coeffs))) < 1e-10


def test_s_hat_examples():
    assert s_hat([0.2, 0.3, 0.5], 0) == 1.0
    assert abs(s_hat([1 / 3] * 3, 2) - 1.0) < 1e-14
    with pytest.raises(ValueError):
        s_hat([0.5, 0.5], 3)


@settings(max_examples=40, deadline=None)
@given(d=st.integers(2, 6), seed=st.integers(0, 2**32 - 1))
def test_s_hat_one_is_constant(d, seed):
    lam = np.random.default_rng(seed).dirichlet(np.ones(d))
    assert abs(s_hat(lam, 1) - (d - 1)) < 1e-10
