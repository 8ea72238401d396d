import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semiclassical import quantize as qz
from semiclassical import tensor
from semiclassical.errors import QuadratureTooCoarse, TailEscape, WindowTooSmall
from semiclassical.quantize import PhasePoint, SpherePoint
from semiclassical.tensor import X, Y, Z, Poly3


def test_sphere_point_canonical():
    assert SpherePoint(0.0, 1.3).phi == 0.0
    assert SpherePoint(1.0, -0.5).phi == pytest.approx(2 * math.pi - 0.5)
    with pytest.raises(ValueError):
        SpherePoint(4.0)


def test_coherent_coeffs_examples():
    c = qz.spin_coherent_coeffs(3, SpherePoint(0.0))
    assert np.allclose(c, [0, 0, 0, 1])
    c = qz.spin_coherent_coeffs(3, SpherePoint(math.pi))
    assert np.allclose(c, [1, 0, 0, 0])
    c = qz.spin_coherent_coeffs(2, SpherePoint(math.pi / 2, 0.0))
    assert np.allclose(c, [0.5, math.sqrt(0.5), 0.5])


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 300), st.floats(0, math.pi), st.floats(0, 2 * math.pi))
def test_coherent_coeffs_normalized(N, theta, phi):
    c = qz.spin_coherent_coeffs(N, SpherePoint(theta, phi))
    assert np.linalg.norm(c) == pytest.approx(1.0, abs=1e-12)


def test_coherent_state_mean_spin():
    N, w = 6, SpherePoint(0.7, 1.1)
    c = qz.spin_coherent_coeffs(N, w)
    Sx, Sy, Sz = qz.spin_operators(N)
    mean = [np.vdot(c, S @ c).real for S in (Sx, Sy, Sz)]
    assert np.allclose(mean, 0.5 * N * np.array(w.cartesian()), atol=1e-12)


def test_quadrature_integrals():
    q = qz.sphere_quadrature(8)
    x, y, z = q.cartesian()
    assert q.integrate(np.ones_like(x)) == pytest.approx(4 * math.pi, rel=1e-14)
    assert q.integrate(z**2) == pytest.approx(4 * math.pi / 3, rel=1e-13)
    assert q.integrate(x**2 * y**2) == pytest.approx(4 * math.pi / 15, rel=1e-13)
    assert q.integrate(x**4 * z**4) == pytest.approx(4 * math.pi * 3 * 3 / (9 * 7 * 5 * 3), rel=1e-12)
    assert abs(q.integrate(x * y**3 * z)) < 1e-14


def test_berezin_identity_and_spin_z():
    N = 7
    assert np.allclose(qz.berezin_spin_matrix(N, Poly3.const(1.0)), np.eye(N + 1), atol=1e-13)
    _, _, Sz = qz.spin_operators(N)
    Qz = qz.berezin_spin_matrix(N, Z)
    assert np.allclose(Qz, 2.0 * Sz / (N + 2), atol=1e-13)
    assert np.max(np.abs(np.linalg.eigvalsh(Qz))) == pytest.approx(N / (N + 2), abs=1e-13)


def test_berezin_callable_matches_poly():
    N = 5
    A = qz.berezin_spin_matrix(N, X * Z)
    B = qz.berezin_spin_matrix(N, lambda t, p: np.sin(t) * np.cos(p) * np.cos(t), f_degree=2)
    assert np.allclose(A, B, atol=1e-13)


def test_quadrature_too_coarse():
    with pytest.raises(QuadratureTooCoarse):
        qz.berezin_spin_matrix(10, Z, quad=qz.sphere_quadrature(10))


def test_berezin_positive_and_contractive():
    N = 8
    f = Poly3.const(1.0) + X.scale(0.5) + Z * Z.scale(-0.3)
    ev = np.linalg.eigvalsh(qz.berezin_spin_matrix(N, f))
    assert ev.min() >= 0.0
    assert np.max(np.abs(ev)) <= qz._sup_on_sphere(f) + 1e-12
    g = X * Y - Z
    assert np.max(np.abs(np.linalg.eigvalsh(qz.berezin_spin_matrix(N, g)))) <= qz._sup_on_sphere(g) + 1e-12


def test_husimi_consistency():
    rng = np.random.default_rng(5)
    N = 12
    psi = rng.normal(size=N + 1) + 1j * rng.normal(size=N + 1)
    psi /= np.linalg.norm(psi)
    dens = qz.husimi_spin_density(psi)
    assert dens.normalization == pytest.approx(1.0, abs=1e-12)
    assert np.all(dens.values >= 0)
    f = X * Z + Y.scale(0.3)
    direct = np.vdot(psi, qz.berezin_spin_matrix(N, f) @ psi).real
    assert qz.husimi_spin_expect(psi, f) == pytest.approx(direct, abs=1e-12)


def test_table_rows_reproduce_spin_operators():
    err = qz.table_reconstruction(12)
    for name in ("S_z", "S_z^2", "S_x", "S_y", "S_x^2 squared", "S_y^2 squared"):
        assert err[name] < 1e-10, name


def test_sphere_bracket_orientation():
    assert qz.sphere_bracket(X, Y) == tensor.ball_bracket(Y, X)


def test_schrodinger_coherent_norm_overlap_mean():
    hbar = 0.05
    grid = np.linspace(-4, 4, 4001)
    a = qz.schrodinger_coherent(PhasePoint(-1.0, 0.0), hbar, grid)
    b = qz.schrodinger_coherent(PhasePoint(1.0, 0.0), hbar, grid)
    assert np.linalg.norm(a) == pytest.approx(1.0, abs=1e-12)
    assert abs(np.vdot(a, b)) == pytest.approx(math.exp(-20.0), rel=1e-6)
    c = qz.schrodinger_coherent(PhasePoint(0.4, 0.7), hbar, grid)
    assert float(np.sum(grid * np.abs(c) ** 2)) == pytest.approx(0.4, abs=1e-12)


def test_schrodinger_tail_escape():
    grid = np.linspace(-3, 3, 2001)
    with pytest.raises(TailEscape):
        qz.schrodinger_coherent(PhasePoint(2.9, 0.0), 0.05, grid)


def test_husimi_plane_moments_of_coherent_state():
    hbar = 0.1
    grid = np.linspace(-4, 4, 1601)
    psi = qz.schrodinger_coherent(PhasePoint(0.5, 0.3), hbar, grid)
    one = qz.husimi_schrodinger_expect(psi, hbar, lambda q, p: np.ones_like(q), grid, window=2.5)
    mq = qz.husimi_schrodinger_expect(psi, hbar, lambda q, p: q, grid, window=2.5)
    mp = qz.husimi_schrodinger_expect(psi, hbar, lambda q, p: p, grid, window=2.5)
    q2 = qz.husimi_schrodinger_expect(psi, hbar, lambda q, p: q * q, grid, window=2.5)
    assert one == pytest.approx(1.0, abs=1e-6)
    assert mq == pytest.approx(0.5, abs=1e-6)
    assert mp == pytest.approx(0.3, abs=1e-6)
    # anti-normal ordering adds hbar/2 on top of the state's own variance hbar/2
    assert q2 == pytest.approx(0.25 + hbar, abs=1e-6)


def test_husimi_window_too_small():
    grid = np.linspace(-4, 4, 1601)
    psi = qz.schrodinger_coherent(PhasePoint(1.0, 0.0), 0.1, grid)
    with pytest.raises(WindowTooSmall):
        qz.husimi_schrodinger_expect(psi, 0.1, lambda q, p: q, grid, window=0.5)


def test_phase_mesh_spacing_guard():
    with pytest.raises(ValueError):
        qz.phase_mesh(0.01, spacing=0.1)
    m = qz.phase_mesh(0.04)
    assert m[1] - m[0] <= 0.05 + 1e-15


def test_von_neumann_defect_n2():
    out = qz.quantization_diagnostics([2], {"zz": (Z, Z)}, convention=(1, 2.0), which=("von_neumann",))
    assert out["rows"][0].von_neumann_defect == pytest.approx(0.2, abs=1e-13)


def test_sphere_convention_measured():
    s, c = qz.measure_sphere_convention(X, Z)
    assert s == 1
    assert c == pytest.approx(2.0, abs=1e-6)


def test_spectral_norm_non_hermitian():
    M = np.array([[0.0, 2.0], [0.0, 0.0]])
    assert qz.spectral_norm(M) == pytest.approx(2.0)


def test_fit_rate():
    N = np.array([8, 16, 32])
    assert qz.fit_rate(N, 3.0 / N) == pytest.approx(1.0)
