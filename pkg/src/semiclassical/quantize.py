"""Coherent states, Husimi densities and Berezin quantization.

Spin side: coherent states |Omega> on Sym^N(C^2) = C^{N+1} in the Dicke basis and the
map Q'(f) = ((N+1)/4pi) int f(Omega) |Omega><Omega| dOmega, evaluated with a product
Gauss-Legendre x trapezoid rule that is exact for the polynomial integrands involved.
Plane side: Gaussian coherent states sampled on the finite-difference grid and the
Husimi expectation (1/2pi hbar) int f(q,p) |<Psi^(q,p), psi>|^2 dq dp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import gammaln, roots_legendre, xlogy

from .errors import QuadratureTooCoarse, SizeExceeded, TailEscape, WindowTooSmall
from .linalg import operator_norm
from .tensor import Poly3, ball_bracket, collective_spin, commutator, measure_dgr_convention

MAX_SPIN_N = 10**6
MAX_QUAD_DEGREE = 5000
FOUR_PI = 4.0 * math.pi

SphereFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SpherePoint:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        th, ph = float(self.theta), float(self.phi)
        if not (0.0 <= th <= math.pi) or not math.isfinite(ph):
            raise ValueError(f"theta={th} outside [0, pi] or non-finite phi")
        ph = ph % (2.0 * math.pi)
        if th in (0.0, math.pi):
            ph = 0.0
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "phi", ph)

    def cartesian(self) -> tuple[float, float, float]:
        st = math.sin(self.theta)
        return st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)


@dataclass(frozen=True)
class PhasePoint:
    q: float
    p: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.q) and math.isfinite(self.p)):
            raise ValueError("phase-space point must be finite")


@dataclass(frozen=True)
class SphereQuad:
    """Product rule: Gauss-Legendre in u = cos(theta) times a uniform phi grid."""

    theta: np.ndarray  # per node, flattened with phi fastest
    phi: np.ndarray
    weights: np.ndarray
    max_degree: int
    n_theta: int
    n_phi: int

    @property
    def nodes(self) -> list[tuple[SpherePoint, float]]:
        return [(SpherePoint(t, p), w) for t, p, w in zip(self.theta, self.phi, self.weights)]

    def integrate(self, values: np.ndarray) -> float:
        return float(np.sum(self.weights * values))

    def cartesian(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        st = np.sin(self.theta)
        return st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)


@dataclass
class HusimiDensity:
    values: np.ndarray
    normalization: float
    weights: np.ndarray = field(repr=False)

    def integrate(self, f_values) -> float:
        return float(np.sum(self.weights * self.values * f_values))


def spin_coherent_coeffs(N: int, omega: SpherePoint) -> np.ndarray:
    """Dicke coefficients c_k = sqrt(C(N,k)) cos^k(theta/2) (e^{i phi} sin(theta/2))^{N-k}."""
    if N > MAX_SPIN_N:
        raise SizeExceeded(f"N={N} exceeds {MAX_SPIN_N}")
    k = np.arange(N + 1)
    amp = _coherent_amplitudes(N, np.array([omega.theta]))[0]
    return amp * np.exp(1j * omega.phi * (N - k))


def _coherent_amplitudes(N: int, theta: np.ndarray) -> np.ndarray:
    # |c_k| for each theta, via log-binomials so large N neither overflows nor underflows early
    k = np.arange(N + 1, dtype=float)
    logc = 0.5 * (gammaln(N + 1.0) - gammaln(k + 1.0) - gammaln(N - k + 1.0))
    cos_h = np.cos(theta / 2.0)[:, None]
    sin_h = np.sin(theta / 2.0)[:, None]
    log_amp = logc[None, :] + xlogy(k[None, :], np.abs(cos_h)) + xlogy(N - k[None, :], np.abs(sin_h))
    zero = ((cos_h == 0) & (k[None, :] > 0)) | ((sin_h == 0) & (k[None, :] < N))
    return np.where(zero, 0.0, np.exp(log_amp))


def sphere_quadrature(max_degree: int) -> SphereQuad:
    """Rule exact for polynomials of total degree <= max_degree in (x, y, z) on S^2."""
    if max_degree > MAX_QUAD_DEGREE:
        raise SizeExceeded(f"quadrature degree {max_degree} exceeds {MAX_QUAD_DEGREE}")
    if max_degree < 0:
        raise ValueError("degree must be non-negative")
    n_u = math.ceil((max_degree + 2) / 2)
    n_phi = max_degree + 2
    u, wu = roots_legendre(n_u)
    theta = np.arccos(u)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    T, P = np.meshgrid(theta, phi, indexing="ij")
    W = np.repeat(wu * (2.0 * math.pi / n_phi), n_phi)
    return SphereQuad(T.ravel(), P.ravel(), W, int(max_degree), n_u, n_phi)


def default_quadrature(N: int, f_degree: int = 2) -> SphereQuad:
    return sphere_quadrature(max(2 * N + 8, 2 * N + f_degree))


def _check_quad(N: int, quad: SphereQuad, f_degree: int) -> None:
    if quad.max_degree < 2 * N + f_degree:
        raise QuadratureTooCoarse(
            f"quadrature degree {quad.max_degree} < 2N + deg f = {2 * N + f_degree}"
        )


def _coherent_matrix(N: int, quad: SphereQuad) -> np.ndarray:
    """Row j is the coherent vector at node j."""
    amp = _coherent_amplitudes(N, quad.theta)
    k = np.arange(N + 1)
    return amp * np.exp(1j * np.outer(quad.phi, N - k))


def _eval_sphere(f, quad: SphereQuad) -> np.ndarray:
    if isinstance(f, Poly3):
        return f(*quad.cartesian())
    return np.broadcast_to(np.asarray(f(quad.theta, quad.phi), dtype=float), quad.theta.shape)


def berezin_spin_matrix(N: int, f, quad: SphereQuad | None = None, f_degree: int | None = None) -> np.ndarray:
    """Q'_{1/N}(f) as an (N+1) x (N+1) matrix in the Dicke basis.

    ``f`` is a Poly3 (restricted to the sphere) or a vectorized function of
    (theta, phi); for the latter ``f_degree`` declares its polynomial degree.
    """
    if f_degree is None:
        f_degree = f.degree if isinstance(f, Poly3) else 2
    if quad is None:
        quad = default_quadrature(N, f_degree)
    _check_quad(N, quad, f_degree)
    C = _coherent_matrix(N, quad)
    fw = quad.weights * _eval_sphere(f, quad)
    M = ((N + 1) / FOUR_PI) * (C.T @ (fw[:, None] * C.conj()))
    return 0.5 * (M + M.conj().T)


def _overlaps_fft(psi: np.ndarray, quad: SphereQuad) -> np.ndarray:
    # <Omega|psi> = sum_m a_{N-m}(theta) psi_{N-m} e^{-i phi m}; phi on a uniform grid -> one FFT per theta row
    N = psi.size - 1
    theta_rows = quad.theta.reshape(quad.n_theta, quad.n_phi)[:, 0]
    amp = _coherent_amplitudes(N, theta_rows)
    if quad.n_phi < N + 1:
        raise QuadratureTooCoarse("phi grid too coarse for the state dimension")
    b = (amp * psi[None, :])[:, ::-1]
    return np.fft.fft(b, n=quad.n_phi, axis=1).ravel()


def husimi_spin_density(psi: np.ndarray, quad: SphereQuad | None = None) -> HusimiDensity:
    psi = np.asarray(psi)
    N = psi.size - 1
    if quad is None:
        quad = default_quadrature(N)
    _check_quad(N, quad, 0)
    vals = np.abs(_overlaps_fft(psi.astype(complex), quad)) ** 2
    vals = np.where(vals < 0.0, 0.0, vals)
    w = ((N + 1) / FOUR_PI) * quad.weights
    return HusimiDensity(vals, float(np.sum(w * vals)), w)


def husimi_spin_expect(psi: np.ndarray, f, quad: SphereQuad | None = None, f_degree: int | None = None) -> float:
    """<psi, Q'(f) psi> computed as a Husimi integral, without forming Q'(f)."""
    psi = np.asarray(psi)
    N = psi.size - 1
    if f_degree is None:
        f_degree = f.degree if isinstance(f, Poly3) else 2
    if quad is None:
        quad = default_quadrature(N, f_degree)
    _check_quad(N, quad, f_degree)
    dens = husimi_spin_density(psi, quad)
    return dens.integrate(_eval_sphere(f, quad))


def spin_operators(N: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Dense (S_x, S_y, S_z) on C^{N+1}, basis ordered by k = number of up spins."""
    return tuple(J.toarray() for J in collective_spin(N))


@dataclass(frozen=True)
class SymbolRow:
    name: str
    symbol: SphereFunction
    degree: int
    operator: np.ndarray
    printed: bool = True


def table_rows(N: int, include_corrected: bool = True) -> list[SymbolRow]:
    """Tabulated upper symbols of the spin operators, plus squared-trig variants of S_x^2, S_y^2."""
    Sx, Sy, Sz = spin_operators(N)
    a, b, c = 0.5 * (N + 2), 0.25 * (N + 2) * (N + 3), 0.25 * (N + 2)
    rows = [
        SymbolRow("S_z", lambda t, p: a * np.cos(t), 1, Sz),
        SymbolRow("S_z^2", lambda t, p: b * np.cos(t) ** 2 - c, 2, Sz @ Sz),
        SymbolRow("S_x", lambda t, p: a * np.sin(t) * np.cos(p), 1, Sx),
        SymbolRow("S_x^2", lambda t, p: b * np.cos(p) * np.sin(t) - c, 1, Sx @ Sx),
        SymbolRow("S_y", lambda t, p: a * np.sin(t) * np.sin(p), 1, Sy),
        SymbolRow("S_y^2", lambda t, p: b * np.sin(p) * np.sin(t) - c, 1, (Sy @ Sy).real + 0j),
    ]
    if include_corrected:
        rows += [
            SymbolRow("S_x^2 squared", lambda t, p: b * (np.sin(t) * np.cos(p)) ** 2 - c, 2, Sx @ Sx, False),
            SymbolRow("S_y^2 squared", lambda t, p: b * (np.sin(t) * np.sin(p)) ** 2 - c, 2, (Sy @ Sy).real + 0j, False),
        ]
    return rows


def table_reconstruction(N: int, include_corrected: bool = True) -> dict[str, float]:
    """Max entrywise |Q'(G) - S| for each row."""
    out = {}
    for row in table_rows(N, include_corrected):
        M = berezin_spin_matrix(N, row.symbol, default_quadrature(N, row.degree), f_degree=row.degree)
        out[row.name] = float(np.max(np.abs(M - row.operator)))
    return out


def sphere_bracket(f: Poly3, g: Poly3) -> Poly3:
    """{f, g} = (1/sin theta)(d_phi f d_theta g - d_theta f d_phi g) for polynomials restricted to S^2.

    With this orientation the sphere bracket is minus the ball bracket x . (grad f x grad g).
    """
    return ball_bracket(g, f)


# Schrodinger side


def schrodinger_coherent(qp: PhasePoint, hbar: float, grid: np.ndarray, half_width: float | None = None) -> np.ndarray:
    """Gaussian coherent state sampled on a uniform grid, weighted by sqrt(dx)."""
    grid = np.asarray(grid, dtype=float)
    if half_width is None:
        half_width = 0.5 * (grid[-1] - grid[0]) + (grid[1] - grid[0])
    if abs(qp.q) > half_width - 5.0 * math.sqrt(hbar):
        raise TailEscape(f"|q|={abs(qp.q)} exceeds L - 5 sqrt(hbar) = {half_width - 5 * math.sqrt(hbar):.4g}")
    dx = grid[1] - grid[0]
    phase = np.exp(1j * qp.p * (grid - 0.5 * qp.q) / hbar)
    env = (math.pi * hbar) ** -0.25 * np.exp(-((grid - qp.q) ** 2) / (2.0 * hbar))
    return math.sqrt(dx) * phase * env


def phase_mesh(hbar: float, window: float = 2.0, spacing: float | None = None) -> np.ndarray:
    """Uniform mesh on [-window, window] with spacing at most sqrt(hbar)/4."""
    h_max = math.sqrt(hbar) / 4.0
    if spacing is None:
        spacing = h_max
    if spacing > h_max * (1 + 1e-12):
        raise ValueError(f"mesh spacing {spacing:.4g} exceeds sqrt(hbar)/4 = {h_max:.4g}")
    n = int(math.ceil(2.0 * window / spacing)) + 1
    return np.linspace(-window, window, n)


def _trapezoid_weights(t: np.ndarray) -> np.ndarray:
    w = np.full(t.size, t[1] - t[0])
    w[0] = w[-1] = 0.5 * (t[1] - t[0])
    return w


def husimi_schrodinger_density(psi: np.ndarray, hbar: float, grid: np.ndarray, q: np.ndarray, p: np.ndarray) -> np.ndarray:
    """(1/2 pi hbar) |<Psi^(q,p), psi>|^2 on the (q, p) mesh, shape (len(q), len(p))."""
    grid = np.asarray(grid, dtype=float)
    dx = grid[1] - grid[0]
    pref = math.sqrt(dx) * (math.pi * hbar) ** -0.25
    G = np.exp(-((grid[None, :] - q[:, None]) ** 2) / (2.0 * hbar)) * np.asarray(psi)[None, :]
    E = np.exp(-1j * np.outer(grid, p) / hbar)
    ov = pref * (G @ E)
    return np.abs(ov) ** 2 / (2.0 * math.pi * hbar)


def husimi_schrodinger_expect(
    psi: np.ndarray,
    hbar: float,
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    grid: np.ndarray,
    window: float = 2.0,
    spacing: float | None = None,
    tail_min: float = 0.999,
) -> float:
    """Husimi expectation of f(q, p) by the trapezoid rule on [-window, window]^2."""
    q = phase_mesh(hbar, window, spacing)
    p = q
    dens = husimi_schrodinger_density(psi, hbar, grid, q, p)
    W = np.outer(_trapezoid_weights(q), _trapezoid_weights(p))
    mass = float(np.sum(W * dens))
    if mass < tail_min:
        raise WindowTooSmall(f"Husimi mass {mass:.6f} inside [-{window}, {window}]^2 is below {tail_min}")
    Q, P = np.meshgrid(q, p, indexing="ij")
    fv = np.broadcast_to(np.asarray(f(Q, P), dtype=float), Q.shape)
    return float(np.sum(W * dens * fv))


# deformation-condition diagnostics


@dataclass(frozen=True)
class DiagnosticsRow:
    N: int
    pair: str
    norm_f: float
    sup_f: float
    rieffel_defect: float
    von_neumann_defect: float
    dgr_defect: float


def spectral_norm(M: np.ndarray) -> float:
    """Largest singular value; Hermitian input goes straight to the eigen route."""
    M = np.asarray(M)
    if np.allclose(M, M.conj().T, rtol=0.0, atol=1e-13 * max(1.0, float(np.max(np.abs(M))))):
        return operator_norm(0.5 * (M + M.conj().T))
    G = M.conj().T @ M
    return math.sqrt(max(operator_norm(0.5 * (G + G.conj().T)), 0.0))


def _sup_on_sphere(f: Poly3, n: int = 401) -> float:
    # closed theta grid so the poles are included
    t, p = np.meshgrid(np.linspace(0.0, math.pi, n), np.linspace(0.0, 2.0 * math.pi, 2 * n - 1), indexing="ij")
    st = np.sin(t)
    return float(np.max(np.abs(f(st * np.cos(p), st * np.sin(p), np.cos(t)))))


def measure_sphere_convention(f: Poly3, g: Poly3, sizes=(8, 16)) -> tuple[int, float]:
    return measure_dgr_convention(lambda h, N: berezin_spin_matrix(N, h), f, g, sphere_bracket(f, g), sizes)


def quantization_diagnostics(
    N_list,
    pairs,
    convention: tuple[int, float] | None = None,
    convention_sizes=(8, 16),
    which=("rieffel", "von_neumann", "dgr"),
) -> dict:
    """Rieffel, von Neumann and Dirac-Groenewold-Rieffel defects of Q' for each N and pair.

    ``pairs`` maps a label to (f, g) with f, g Poly3 of degree <= 4 read on S^2.  The
    DGR constants (s, c) are measured once on the first pair and frozen.  Defects not
    listed in ``which`` are reported as nan.
    """
    pairs = dict(pairs)
    for f, g in pairs.values():
        if f.degree > 4 or g.degree > 4:
            raise ValueError("diagnostics take polynomials of degree <= 4")
    if convention is None:
        f0, g0 = next(iter(pairs.values()))
        convention = measure_sphere_convention(f0, g0, convention_sizes)
    s, c = convention
    nan = float("nan")
    rows = []
    for label, (f, g) in pairs.items():
        sup_f = _sup_on_sphere(f)
        fg = sphere_bracket(f, g)
        for N in N_list:
            Qf, Qg = berezin_spin_matrix(N, f), berezin_spin_matrix(N, g)
            nf = operator_norm(Qf) if "rieffel" in which else nan
            vn = nan
            if "von_neumann" in which and (f * g).degree <= 4:
                vn = spectral_norm(Qf @ Qg - berezin_spin_matrix(N, f * g))
            dgr = nan
            if "dgr" in which:
                D = (s * 1j * N / c) * commutator(Qf, Qg) - berezin_spin_matrix(N, fg)
                dgr = operator_norm(0.5 * (D + D.conj().T))
            rows.append(DiagnosticsRow(int(N), label, nf, sup_f, abs(nf - sup_f), vn, dgr))
    return {"convention": {"s": int(s), "c": float(c)}, "rows": rows}


def fit_rate(N_list, defects) -> float:
    """Exponent r of a power law defect ~ N^-r, by least squares in log-log."""
    x = np.log(np.asarray(N_list, dtype=float))
    y = np.log(np.asarray(defects, dtype=float))
    slope = np.polyfit(x, y, 1)[0]
    return float(-slope)
