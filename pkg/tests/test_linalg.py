import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semiclassical import linalg, models
from semiclassical.errors import NearDegenerate, NotHermitian, NotReflectionSymmetric, SizeExceeded
from semiclassical.linalg import SymTridiag


def laplacian(n):
    return SymTridiag(np.full(n, 2.0), np.full(n - 1, -1.0))


def test_sturm_count_small_examples():
    T = SymTridiag([1.0, 2.0, 3.0], [0.0, 0.0])
    assert [linalg.sturm_count(T, x) for x in (0.5, 1.5, 2.5, 3.5)] == [0, 1, 2, 3]
    # an eigenvalue exactly at x is not counted
    assert linalg.sturm_count(T, 2.0) == 1


def test_laplacian_eigenvalues_analytic():
    n = 3
    vals = linalg.tridiag_eigs(laplacian(n), k=n).values
    exact = 2.0 - 2.0 * np.cos(np.arange(1, n + 1) * math.pi / (n + 1))
    assert np.allclose(vals, exact, atol=1e-13)


def test_laplacian_large_matches_formula():
    n = 200
    vals = linalg.tridiag_eigs(laplacian(n), k=5).values
    exact = 2.0 - 2.0 * np.cos(np.arange(1, 6) * math.pi / (n + 1))
    assert np.max(np.abs(vals - exact)) < 1e-13


def test_cw_n2_ground_energy():
    T = models.build_cw_dicke(models.CurieWeissConfig(N=2, B=0.5, J=1.0))
    g = linalg.ground_pair(T)
    assert g.value == pytest.approx((-1.0 - math.sqrt(5.0)) / 2.0, abs=1e-13)


def test_cw_n1_ground_pair():
    T = models.build_cw_dicke(models.CurieWeissConfig(N=1, B=1.0, J=1.0))
    g = linalg.ground_pair(T)
    assert g.value == pytest.approx(-1.5, abs=1e-13)
    assert np.allclose(g.vector, np.array([1.0, 1.0]) / math.sqrt(2.0), atol=1e-12)
    assert g.residual < 1e-12


def test_bh_printed_n1_ground_energy():
    T = models.build_bh(models.BoseHubbardConfig(N=1, convention="printed"))
    assert linalg.ground_pair(T).value == pytest.approx(-1.25, abs=1e-13)


def test_ground_vector_normalized_and_positive_major():
    T = SymTridiag(np.linspace(-1, 1, 40), -np.ones(39))
    g = linalg.ground_pair(T)
    assert np.linalg.norm(g.vector) == pytest.approx(1.0, abs=1e-14)
    assert g.vector[np.argmax(np.abs(g.vector))] > 0
    assert g.residual < 1e-10


def test_near_degenerate_raises():
    T = SymTridiag([0.0, 0.0], [0.0])
    with pytest.raises(NearDegenerate):
        linalg.ground_pair(T)


def test_parity_fold_matches_full_problem():
    for n in (6, 7):
        d = np.array([3.0, 1.0, 0.5, 0.5, 1.0, 3.0, 9.0][:n])
        d = 0.5 * (d + d[::-1])
        e = -np.linspace(1.0, 2.0, n - 1)
        e = 0.5 * (e + e[::-1])
        T = SymTridiag(d, e)
        g = linalg.ground_pair(T)
        gp = linalg.ground_pair_parity(T)
        assert gp.value == pytest.approx(g.value, abs=1e-13)
        assert np.allclose(gp.vector, g.vector, atol=1e-10)


def test_fold_rejects_asymmetric():
    with pytest.raises(NotReflectionSymmetric):
        linalg.fold_even(SymTridiag([0.0, 1.0], [1.0]))


def test_dense_eigen_matches_numpy():
    rng = np.random.default_rng(3)
    A = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    H = A + A.conj().T
    spec = linalg.dense_eigen(H)
    assert np.allclose(spec.values, np.linalg.eigvalsh(H), atol=1e-11)
    V = spec.vectors
    assert np.allclose(H @ V, V * spec.values, atol=1e-10)


def test_dense_eigen_size_limit():
    with pytest.raises(SizeExceeded):
        linalg.dense_eigen(np.broadcast_to(0.0, (linalg.MAX_DENSE + 1, linalg.MAX_DENSE + 1)))


def test_operator_norm_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        linalg.operator_norm(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_operator_norm_symmetries():
    rng = np.random.default_rng(7)
    A = rng.normal(size=(8, 8))
    M = A + A.T
    n = linalg.operator_norm(M)
    assert n == pytest.approx(np.max(np.abs(np.linalg.eigvalsh(M))), rel=1e-12)
    assert linalg.operator_norm(-M) == pytest.approx(n, rel=1e-12)
    assert linalg.operator_norm(-2.5 * M) == pytest.approx(2.5 * n, rel=1e-12)
    U, _ = np.linalg.qr(rng.normal(size=(8, 8)))
    assert linalg.operator_norm(U @ M @ U.T) == pytest.approx(n, rel=1e-10)
    T = laplacian(10)
    assert linalg.operator_norm(T) == pytest.approx(np.max(np.abs(np.linalg.eigvalsh(T.to_dense()))), rel=1e-12)


finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=2, max_value=30).flatmap(
    lambda n: st.tuples(st.lists(finite, min_size=n, max_size=n), st.lists(finite, min_size=n - 1, max_size=n - 1))
))
def test_bisection_agrees_with_numpy(de):
    d, e = de
    T = SymTridiag(np.array(d), np.array(e))
    k = min(3, T.n)
    vals = linalg.tridiag_eigs(T, k=k).values
    ref = np.linalg.eigvalsh(T.to_dense())[:k]
    assert np.allclose(vals, ref, atol=1e-11 * max(1.0, T.norm_bound))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=40), st.floats(min_value=-5, max_value=5))
def test_sturm_count_monotone(n, x):
    T = SymTridiag(np.sin(np.arange(n)), np.cos(np.arange(n - 1)))
    ref = int(np.sum(np.linalg.eigvalsh(T.to_dense()) < x - 1e-9))
    c = linalg.sturm_count(T, x)
    assert ref <= c <= int(np.sum(np.linalg.eigvalsh(T.to_dense()) < x + 1e-9))
    assert linalg.sturm_count(T, x + 1.0) >= c
