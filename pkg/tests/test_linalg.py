import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from whp.errors import ConvergenceError, DimensionError, NotHermitianError, NotPSDError
from whp.linalg import (
    hermitian_eigenvalues,
    kron,
    partial_trace,
    pnorm_psd,
    transpose,
)


def random_hermitian(rng, n, complex_=True):
    x = rng.normal(size=(n, n))
    if complex_:
        x = x + 1j * rng.normal(size=(n, n))
    return (x + x.conj().T) / 2


def kron_by_loops(a, b):
    out = np.zeros((a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]), dtype=np.result_type(a, b))
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            for k in range(b.shape[0]):
                for l in range(b.shape[1]):
                    out[i * b.shape[0] + k, j * b.shape[1] + l] = a[i, j] * b[k, l]
    return out


def test_kron_identity_and_projector():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(kron(np.diag([1, 0]), np.diag([1, 0])), np.diag([1, 0, 0, 0]))


def test_kron_matches_index_formula_and_trace():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = rng.normal(size=(3, 2))
    assert np.allclose(kron(a, b), kron_by_loops(a, b), atol=0, rtol=0)
    b = rng.normal(size=(3, 3))
    expected = sum(a[i, i] for i in range(3)) * sum(b[k, k] for k in range(3))
    assert abs(np.trace(kron(a, b)) - expected) < 1e-12


def test_kron_resource_guard():
    with pytest.raises(DimensionError):
        kron(np.eye(70), np.eye(70))


def test_transpose_is_plain():
    u = np.array([[1, 2j], [0, 3]])
    t = transpose(u)
    assert t[1, 0] == 2j and t[0, 1] == 0
    assert np.array_equal(transpose(np.eye(3)), np.eye(3))
    rng = np.random.default_rng(0)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert np.array_equal(transpose(transpose(a)), a)


@pytest.mark.parametrize(
    "a, expected",
    [
        (np.diag([3.0, 1.0, 2.0]), [3.0, 2.0, 1.0]),
        (np.array([[0.0, 1.0], [1.0, 0.0]]), [1.0, -1.0]),
        (np.array([[0.0, -1j], [1j, 0.0]]), [1.0, -1.0]),
    ],
)
def test_eigenvalues_small(a, expected):
    res = hermitian_eigenvalues(a)
    assert np.allclose(res.eigenvalues, expected, atol=1e-14)
    assert res.residual < 1e-12


def test_eigenvalues_barycenter_closed_form():
    # expanding the product output at lambda = (1/d, ..., 1/d) gives
    # ((d-2) I + |Omega><Omega|) / (d (d-1)^2) with unnormalized |Omega> = sum_a |aa>
    d = 3
    omega = np.zeros(d * d)
    for a in range(d):
        omega[a * d + a] = 1.0
    sigma = ((d - 2) * np.eye(d * d) + np.outer(omega, omega)) / (d * (d - 1) ** 2)
    evals = hermitian_eigenvalues(sigma).eigenvalues
    assert np.allclose(evals, [1 / 3] + [1 / 12] * 8, atol=1e-14)


def test_non_hermitian_reports_pair():
    a = np.array([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(NotHermitianError) as info:
        hermitian_eigenvalues(a)
    assert {info.value.i, info.value.j} == {0, 1}


def test_sweep_limit():
    rng = np.random.default_rng(0)
    with pytest.raises(ConvergenceError):
        hermitian_eigenvalues(random_hermitian(rng, 6), max_sweeps=1)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 12), seed=st.integers(0, 2**32 - 1), complex_=st.booleans())
def test_eigensolver_trace_and_frobenius(n, seed, complex_):
    a = random_hermitian(np.random.default_rng(seed), n, complex_)
    res = hermitian_eigenvalues(a)
    assert abs(res.eigenvalues.sum() - np.trace(a).real) < 1e-10
    assert abs(np.sum(res.eigenvalues**2) - np.sum(np.abs(a) ** 2)) < 1e-10
    assert np.all(np.diff(res.eigenvalues) <= 0)
    assert res.residual <= 1e-12 * max(1.0, np.linalg.norm(a)) * n


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 8), seed=st.integers(0, 2**32 - 1))
def test_spectrum_invariant_under_permutation_similarity(n, seed):
    rng = np.random.default_rng(seed)
    a = random_hermitian(rng, n)
    perm = np.eye(n)[rng.permutation(n)]
    e1 = hermitian_eigenvalues(a).eigenvalues
    e2 = hermitian_eigenvalues(perm @ a @ perm.T).eigenvalues
    assert np.allclose(e1, e2, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 4), m=st.integers(1, 4), seed=st.integers(0, 2**32 - 1))
def test_kron_spectrum_is_pairwise_products(n, m, seed):
    rng = np.random.default_rng(seed)
    a, b = random_hermitian(rng, n), random_hermitian(rng, m)
    ea, eb = hermitian_eigenvalues(a).eigenvalues, hermitian_eigenvalues(b).eigenvalues
    expected = np.sort(np.outer(ea, eb).ravel())
    got = np.sort(hermitian_eigenvalues(kron(a, b)).eigenvalues)
    assert np.allclose(got, expected, atol=1e-10)


def test_partial_trace_examples():
    assert np.allclose(partial_trace(np.eye(4) / 4, 2, 2, "first"), np.eye(2) / 2)
    rng = np.random.default_rng(1)
    rho, sig = random_hermitian(rng, 2), random_hermitian(rng, 3)
    assert np.allclose(partial_trace(kron(rho, sig), 2, 3, "second"), rho * np.trace(sig))
    assert np.allclose(partial_trace(kron(rho, sig), 2, 3, "first"), sig * np.trace(rho))


def test_partial_trace_bell_state_by_index_contraction():
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    proj = np.outer(bell, bell)
    expected = np.zeros((2, 2))
    for i in range(2):
        for k in range(2):
            expected[i, k] = sum(proj[i * 2 + j, k * 2 + j] for j in range(2))
    assert np.allclose(partial_trace(proj, 2, 2, "second"), expected)
    assert np.allclose(expected, np.eye(2) / 2)


def test_partial_trace_dimension_mismatch():
    with pytest.raises(DimensionError):
        partial_trace(np.eye(5), 2, 3)


@settings(max_examples=30, deadline=None)
@given(d1=st.integers(1, 4), d2=st.integers(1, 4), seed=st.integers(0, 2**32 - 1))
def test_partial_trace_preserves_trace_and_positivity(d1, d2, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(d1 * d2, d1 * d2)) + 1j * rng.normal(size=(d1 * d2, d1 * d2))
    psd = x @ x.conj().T
    for side in ("first", "second"):
        red = partial_trace(psd, d1, d2, side)
        assert abs(np.trace(red) - np.trace(psd)) < 1e-10
        assert hermitian_eigenvalues(red).eigenvalues.min() > -1e-10


def test_pnorm_examples():
    assert pnorm_psd([1.0], 3.7) == 1.0
    assert abs(pnorm_psd([0.5, 0.5], 2) - 1 / np.sqrt(2)) < 1e-15
    expected = (8 * 12.0**-5 + 3.0**-5) ** (1 / 5)
    assert abs(pnorm_psd([1 / 12] * 8 + [1 / 3], 5) - expected) < 1e-15
    assert abs(expected - 0.3338525466504175) < 1e-15


def test_pnorm_rejects_negative_spectrum():
    with pytest.raises(NotPSDError):
        pnorm_psd([1.1, -0.1], 2)
    assert pnorm_psd([1.0, -1e-14], 2) == 1.0


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 8))
def test_pnorm_monotone_in_p(seed, n):
    x = np.random.default_rng(seed).dirichlet(np.ones(n))
    norms = [pnorm_psd(x, p) for p in (1, 1.5, 2, 3)]
    assert all(b <= a + 1e-15 for a, b in zip(norms, norms[1:]))
