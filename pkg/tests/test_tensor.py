import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semiclassical import tensor
from semiclassical.errors import DegreeExceeded, SectorLeak, SizeExceeded
from semiclassical.tensor import X, Y, Z, Poly3

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2)


def kron(*ops):
    out = np.eye(1)
    for op in ops:
        out = np.kron(out, op)
    return out


def test_site_embed_examples():
    assert np.allclose(tensor.site_embed("x", 1, 2), kron(SX, I2))
    assert np.allclose(tensor.site_embed("z", 2, 2), kron(I2, SZ))
    assert np.allclose(tensor.site_embed("y", 2, 3), kron(I2, SY, I2))
    with pytest.raises(ValueError):
        tensor.site_embed("x", 0, 3)
    with pytest.raises(ValueError):
        tensor.site_embed("x", 4, 3)
    with pytest.raises(SizeExceeded):
        tensor.site_embed("x", 1, tensor.MAX_SITES + 1)


@pytest.mark.parametrize("labels", [("x", "y", "z"), ("z", "I", "x"), ("y", "y", "I"), ("I", "I", "I")])
def test_pauli_string_matches_kron(labels):
    ops = {"I": I2, "x": SX, "y": SY, "z": SZ}
    assert np.allclose(tensor.pauli_string(labels), kron(*[ops[l] for l in labels]))


@pytest.mark.parametrize("factors,N", [(["z"], 3), (["x", "z"], 3), (["x", "y"], 4), (["z", "z", "x"], 4)])
def test_symmetrizer_placement_equals_full_average(factors, N):
    labels = list(factors) + ["I"] * (N - len(factors))
    A = tensor.pauli_string(labels)
    assert np.allclose(tensor.symmetrize_place(factors, N), tensor.full_symmetrizer(A, N), atol=1e-14)


def test_full_symmetrizer_idempotent():
    rng = np.random.default_rng(1)
    A = rng.normal(size=(8, 8))
    S = tensor.full_symmetrizer(A, 3)
    assert np.allclose(tensor.full_symmetrizer(S, 3), S, atol=1e-14)
    with pytest.raises(SizeExceeded):
        tensor.full_symmetrizer(np.eye(32), 5)


def test_quantize_poly_examples():
    assert np.allclose(tensor.quantize_poly(Z, 1), SZ)
    assert np.allclose(tensor.quantize_poly(Z * Z, 2), kron(SZ, SZ))
    assert np.allclose(tensor.quantize_poly(X, 2), 0.5 * (kron(SX, I2) + kron(I2, SX)))
    # degree above N quantizes to zero
    assert np.allclose(tensor.quantize_poly(Z * Z, 1), 0.0)
    assert np.allclose(tensor.quantize_poly(Poly3.const(2.0), 2), 2.0 * np.eye(4))


def test_poly_degree_cap():
    with pytest.raises(DegreeExceeded):
        X * X * Y * Z * Z


def test_poly_evaluation_and_diff():
    p = X * Z + Y.scale(3.0) - Poly3.const(1.0)
    assert p(1.0, 2.0, 3.0) == pytest.approx(3.0 + 6.0 - 1.0)
    assert p.diff(0)(0.3, 0.0, 0.7) == pytest.approx(0.7)
    assert p.diff(2)(0.3, 0.0, 0.7) == pytest.approx(0.3)


@pytest.mark.parametrize("N", [2, 3, 5, 6])
@pytest.mark.parametrize("name", ["x", "y", "z", "xx", "yy", "zz", "xz", "xy", "yz"])
def test_dicke_closed_forms(N, name):
    p = Poly3.const(1.0)
    for ch in name:
        p = p * {"x": X, "y": Y, "z": Z}[ch]
    full = tensor.dicke_project(tensor.quantize_poly(p, N), N)
    closed = tensor.quantize_poly_dicke(p, N)
    assert np.allclose(full, closed, atol=1e-13)


def test_dicke_project_detects_leak():
    with pytest.raises(SectorLeak):
        tensor.dicke_project(tensor.site_embed("z", 1, 3), 3)


def test_collective_spin_algebra():
    J1, J2, J3 = (A.toarray() for A in tensor.collective_spin(5))
    assert np.allclose(J1 @ J2 - J2 @ J1, 1j * J3)
    casimir = J1 @ J1 + J2 @ J2 + J3 @ J3
    assert np.allclose(casimir, 2.5 * 3.5 * np.eye(6))


def test_product_state_expectations_are_exact():
    n = np.array([0.0, 0.0, 0.5])
    rho = 0.5 * (I2 + n[0] * SX + n[1] * SY + n[2] * SZ)
    R = kron(rho, rho, rho)
    assert np.trace(R @ tensor.quantize_poly(Z * Z, 3)).real == pytest.approx(0.25, abs=1e-14)
    n = np.array([0.36, -0.48, 0.8])
    rho = 0.5 * (I2 + n[0] * SX + n[1] * SY + n[2] * SZ)
    R = kron(rho, rho, rho)
    p = X * Z - Y * Y + X.scale(2.0)
    assert np.trace(R @ tensor.quantize_poly(p, 3)).real == pytest.approx(p(*n), abs=1e-13)


@pytest.mark.parametrize("N", range(2, 9))
def test_qnh_closed_form(N):
    assert tensor.verify_qnh(N) == pytest.approx(tensor.verify_qnh_closed_form(N), abs=1e-13)


def test_qnh_independent_of_field_and_bounded():
    for N in (3, 4):
        a = tensor.verify_qnh(N, J=1.0, B=0.0)
        b = tensor.verify_qnh(N, J=1.0, B=1.7)
        assert a == pytest.approx(b, abs=1e-13)
    for N in range(2, 9):
        assert 1 / 3 - 1e-12 <= N * tensor.verify_qnh(N, J=1.0) <= 1.0 + 1e-12


def test_quantization_hermitian():
    p = X * Y + Z * Z * X - Y.scale(0.4)
    M = tensor.quantize_poly(p, 4)
    assert np.allclose(M, M.conj().T, atol=1e-14)


def test_tensor_dgr_convention():
    q = lambda h, N: tensor.quantize_poly(h, N)
    s, c = tensor.measure_dgr_convention(q, X, Z, tensor.ball_bracket(X, Z), sizes=(4,))
    assert (s, c) == (-1, pytest.approx(2.0, abs=1e-12))


def test_ball_bracket_structure():
    assert tensor.ball_bracket(X, Y) == Z
    assert tensor.ball_bracket(Y, Z) == X
    assert tensor.ball_bracket(Z, X) == Y


coef = st.floats(min_value=-2, max_value=2, allow_nan=False)
mono = st.sampled_from([(1, 0, 0), (0, 1, 0), (0, 0, 1), (2, 0, 0), (1, 1, 0), (0, 1, 1), (0, 0, 2)])


@settings(max_examples=30, deadline=None)
@given(st.dictionaries(mono, coef, max_size=4), st.dictionaries(mono, coef, max_size=4))
def test_bracket_antisymmetric_and_quantization_linear(tf, tg):
    f, g = Poly3(tf), Poly3(tg)
    s = tensor.ball_bracket(f, g) + tensor.ball_bracket(g, f)
    assert all(abs(v) < 1e-12 for v in s.terms.values())
    lhs = tensor.quantize_poly(f + g.scale(2.0), 3)
    rhs = tensor.quantize_poly(f, 3) + 2.0 * tensor.quantize_poly(g, 3)
    assert np.allclose(lhs, rhs, atol=1e-12)
