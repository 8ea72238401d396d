"""Small-N tensor-product machinery on (C^2)^{tensor N}.

Site embeddings, the permutation symmetrizers, the polynomial quantization maps on
the Bloch ball, and projection onto the symmetric (Dicke) sector.  Tensor slot 0 is
the leftmost Kronecker factor; the single-site basis is (|up>, |down>) with
s3|up> = |up>.  Dicke states are indexed by k = number of up spins.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import DegreeExceeded, SectorLeak, SizeExceeded

MAX_SITES = 10
MAX_FULL_SYMMETRIZER = 4
MAX_DEGREE = 4

PAULI = {
    "I": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_ALIASES = {"0": "I", "1": "x", "2": "y", "3": "z", "X": "x", "Y": "y", "Z": "z", "i": "I"}


def _label(op) -> str:
    op = str(op)
    op = _ALIASES.get(op, op)
    if op not in PAULI:
        raise ValueError(f"unknown Pauli label {op!r}")
    return op


def _check_sites(N: int) -> None:
    if N > MAX_SITES:
        raise SizeExceeded(f"N={N} exceeds {MAX_SITES} sites (dimension 2^N)")
    if N < 1:
        raise ValueError("N must be positive")


def add_pauli_string(M: np.ndarray, labels, coef) -> None:
    # Pauli strings are monomial matrices: |b> -> val(b) |b ^ flip>
    N = len(labels)
    b = np.arange(2**N)
    flip = 0
    val = np.ones(2**N, dtype=complex)
    for s, op in enumerate(labels):
        op = _label(op)
        if op == "I":
            continue
        shift = N - 1 - s
        bit = (b >> shift) & 1
        if op in ("x", "y"):
            flip |= 1 << shift
        if op == "y":
            val *= np.where(bit == 0, 1j, -1j)
        elif op == "z":
            val *= np.where(bit == 0, 1.0, -1.0)
    if np.isrealobj(M):
        M[b ^ flip, b] += coef * val.real
    else:
        M[b ^ flip, b] += coef * val


def pauli_string(labels) -> np.ndarray:
    """Kronecker product of single-site Paulis, one label per slot."""
    N = len(labels)
    _check_sites(N)
    M = np.zeros((2**N, 2**N), dtype=complex)
    add_pauli_string(M, labels, 1.0)
    return M


def site_embed(op, i: int, N: int) -> np.ndarray:
    """``op`` in slot ``i`` (1-based, slot 1 is the leftmost factor), identities elsewhere."""
    _check_sites(N)
    if not 1 <= i <= N:
        raise ValueError(f"site {i} outside 1..{N}")
    labels = ["I"] * N
    labels[i - 1] = _label(op)
    return pauli_string(labels)


def symmetrize_place(factors, N: int) -> np.ndarray:
    """S_{L,N} of a product of L Pauli factors.

    Averages the factors over all injective placements into N slots; the N!-term
    permutation average of factors padded with identities reduces to this.
    """
    _check_sites(N)
    factors = [_label(f) for f in factors]
    L = len(factors)
    if L > N:
        raise ValueError(f"{L} factors do not fit into {N} sites")
    M = np.zeros((2**N, 2**N), dtype=complex)
    count = 0
    for slots in itertools.permutations(range(N), L):
        labels = ["I"] * N
        for f, s in zip(factors, slots):
            labels[s] = f
        add_pauli_string(M, labels, 1.0)
        count += 1
    return M / count


def full_symmetrizer(A: np.ndarray, N: int) -> np.ndarray:
    """Exact N!-term permutation average of an operator on (C^2)^{tensor N}, N <= 4."""
    if N > MAX_FULL_SYMMETRIZER:
        raise SizeExceeded(f"full symmetrizer limited to N <= {MAX_FULL_SYMMETRIZER}")
    A = np.asarray(A)
    if A.shape != (2**N, 2**N):
        raise ValueError(f"operator shape {A.shape} does not match N={N}")
    T = A.reshape((2,) * (2 * N))
    out = np.zeros_like(T, dtype=complex)
    perms = list(itertools.permutations(range(N)))
    for perm in perms:
        out += T.transpose(list(perm) + [N + p for p in perm])
    return (out / len(perms)).reshape(2**N, 2**N)


@dataclass(frozen=True)
class Poly3:
    """Real polynomial sum c_abc x^a y^b z^c on the Bloch ball, total degree <= 4."""

    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for exps, c in dict(self.terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != 3 or min(exps) < 0:
                raise ValueError(f"bad exponent triple {exps}")
            if sum(exps) > MAX_DEGREE:
                raise DegreeExceeded(f"monomial {exps} exceeds degree {MAX_DEGREE}")
            if c != 0:
                clean[exps] = clean.get(exps, 0.0) + float(c)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def const(cls, c: float) -> "Poly3":
        return cls({(0, 0, 0): c})

    @classmethod
    def monomial(cls, a: int, b: int, c: int, coef: float = 1.0) -> "Poly3":
        return cls({(a, b, c): coef})

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __call__(self, x, y, z):
        x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
        out = np.zeros(np.broadcast(x, y, z).shape)
        for (a, b, c), coef in self.terms.items():
            out = out + coef * x**a * y**b * z**c
        return out

    def __add__(self, other: "Poly3") -> "Poly3":
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0.0) + c
        return Poly3(t)

    def __sub__(self, other: "Poly3") -> "Poly3":
        return self + other.scale(-1.0)

    def __mul__(self, other) -> "Poly3":
        if not isinstance(other, Poly3):
            return self.scale(float(other))
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                t[e] = t.get(e, 0.0) + c1 * c2
        return Poly3(t)

    __rmul__ = __mul__

    def scale(self, s: float) -> "Poly3":
        return Poly3({e: s * c for e, c in self.terms.items()})

    def diff(self, axis: int) -> "Poly3":
        t = {}
        for e, c in self.terms.items():
            if e[axis] > 0:
                ne = list(e)
                ne[axis] -= 1
                t[tuple(ne)] = t.get(tuple(ne), 0.0) + c * e[axis]
        return Poly3(t)


X = Poly3.monomial(1, 0, 0)
Y = Poly3.monomial(0, 1, 0)
Z = Poly3.monomial(0, 0, 1)


def ball_bracket(f: Poly3, g: Poly3) -> Poly3:
    """{f, g} = sum_abc eps_abc x_c d_a f d_b g, i.e. x . (grad f x grad g)."""
    coords = (X, Y, Z)
    out = Poly3()
    for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        out = out + coords[c] * (f.diff(a) * g.diff(b) - f.diff(b) * g.diff(a))
    return out


def cw_classical_poly(J: float = 1.0, B: float = 0.5) -> Poly3:
    return Poly3({(0, 0, 2): -J / 2.0, (1, 0, 0): -B})


def _factors(exps) -> list[str]:
    a, b, c = exps
    return ["x"] * a + ["y"] * b + ["z"] * c


def quantize_poly(p: Poly3, N: int) -> np.ndarray:
    """Q_{1/N}(p) on (C^2)^{tensor N}: monomials map to symmetrized Pauli products, zero if N < degree."""
    _check_sites(N)
    M = np.zeros((2**N, 2**N), dtype=complex)
    for exps, coef in p.terms.items():
        L = sum(exps)
        if L == 0:
            M += coef * np.eye(2**N)
        elif L <= N:
            M += coef * symmetrize_place(_factors(exps), N)
    return M


def collective_spin(N: int) -> tuple[sp.csr_matrix, sp.csr_matrix, sp.csr_matrix]:
    """(J1, J2, J3) on the Dicke basis k = 0..N, with J3 = k - N/2."""
    k = np.arange(N + 1, dtype=float)
    up = np.sqrt((N - k[:-1]) * (k[:-1] + 1.0))
    Jp = sp.diags(up, -1, shape=(N + 1, N + 1), format="csr")  # |k> -> |k+1>
    Jm = Jp.T.tocsr()
    J1 = ((Jp + Jm) * 0.5).tocsr()
    J2 = ((Jp - Jm) * (-0.5j)).tocsr()
    J3 = sp.diags(k - N / 2.0, 0, format="csr")
    return J1, J2, J3


def quantize_poly_dicke(p: Poly3, N: int, sparse: bool = False):
    """Q_{1/N}(p) restricted to the symmetric sector, degree <= 2, from collective spins.

    Q(x_a) = 2 J_a / N, Q(x_a^2) = (4 J_a^2 - N) / (N(N-1)) and for a != b
    Q(x_a x_b) = 2 (J_a J_b + J_b J_a) / (N(N-1)).
    """
    if p.degree > 2:
        raise DegreeExceeded("Dicke closed forms cover degree <= 2 only")
    Js = collective_spin(N)
    eye = sp.identity(N + 1, format="csr")
    M = sp.csr_matrix((N + 1, N + 1), dtype=complex)
    for exps, coef in p.terms.items():
        L = sum(exps)
        if L > N:
            continue
        axes = [ax for ax, e in enumerate(exps) for _ in range(e)]
        if L == 0:
            term = eye
        elif L == 1:
            term = Js[axes[0]] * (2.0 / N)
        elif axes[0] == axes[1]:
            Ja = Js[axes[0]]
            term = (Ja @ Ja * 4.0 - eye * N) / (N * (N - 1.0))
        else:
            Ja, Jb = Js[axes[0]], Js[axes[1]]
            term = (Ja @ Jb + Jb @ Ja) * (2.0 / (N * (N - 1.0)))
        M = M + term * coef
    if not any(exps[1] % 2 for exps in p.terms):
        M = M.real
    M = M.tocsr()
    return M if sparse else M.toarray()


def dicke_basis(N: int) -> np.ndarray:
    """Columns are the normalized Dicke vectors |k>, k = number of up spins."""
    _check_sites(N)
    b = np.arange(2**N)
    downs = np.array([bin(v).count("1") for v in b])
    k = N - downs
    V = np.zeros((2**N, N + 1))
    V[b, k] = 1.0 / np.sqrt([math.comb(N, kk) for kk in k])
    return V


def dicke_project(A: np.ndarray, N: int, atol: float = 1e-12) -> np.ndarray:
    """Matrix of A on the symmetric sector; raises SectorLeak if A leaves the sector."""
    V = dicke_basis(N)
    A = np.asarray(A)
    AV = A @ V
    P = V.T @ AV
    leak = float(np.max(np.abs(AV - V @ P))) if A.size else 0.0
    if leak > atol * max(1.0, float(np.max(np.abs(A)))):
        raise SectorLeak(f"operator leaks out of the symmetric sector by {leak:.3g}")
    return P


def verify_qnh(N: int, J: float = 1.0, B: float = 0.5) -> float:
    """||H_CW / N - Q_{1/N}(h_CW)|| in operator norm, exact on the full tensor space."""
    from .linalg import operator_norm
    from .models import CurieWeissConfig, build_cw_tensor

    if N < 2:
        raise ValueError("N >= 2 required")
    _check_sites(N)
    H = build_cw_tensor(CurieWeissConfig(N=N, B=B, J=J))
    D = H / N - quantize_poly(cw_classical_poly(J, B), N)
    if np.max(np.abs(D.imag)) < 1e-15:
        D = D.real
    return operator_norm(D)


def verify_qnh_closed_form(N: int, J: float = 1.0) -> float:
    if N % 2 == 0:
        return J / (2.0 * (N - 1))
    return J * (N + 1) / (2.0 * N**2)


def commutator(A, B):
    return A @ B - B @ A


def measure_dgr_convention(quantize, f, g, bracket_fg, sizes) -> tuple[int, float]:
    """Measure (s, c) with s i N/c [Q(f), Q(g)] ~ Q({f, g}).

    For each N the least-squares ratio lam_N = <K, T> / <K, K> is formed from
    K = i[Q(f), Q(g)] and T = Q({f, g}); s is the sign of lam_N.  With one size,
    c = N / |lam_N|.  With two sizes, 1/hbar_N = |lam_N| is taken to grow as N / c
    and c is the inverse slope between them, which removes O(1) offsets in |lam_N|.
    """
    lams = []
    for N in sizes:
        K = 1j * commutator(quantize(f, N), quantize(g, N))
        T = quantize(bracket_fg, N)
        lams.append(float(np.real(np.vdot(K, T)) / np.real(np.vdot(K, K))))
    s = 1 if lams[0] > 0 else -1
    if len(sizes) == 1:
        return s, sizes[0] / abs(lams[0])
    n1, n2 = sizes[0], sizes[-1]
    slope = (abs(lams[-1]) - abs(lams[0])) / (n2 - n1)
    c = 1.0 / slope if slope > 0 else n1 / abs(lams[0])
    return s, c


def dgr_defect(Qf, Qg, Qfg, N: int, s: int, c: float) -> float:
    from .linalg import operator_norm

    D = (s * 1j * N / c) * commutator(Qf, Qg) - Qfg
    D = 0.5 * (D + D.conj().T)
    return operator_norm(D)


def tensor_dgr(f: Poly3, g: Poly3, N: int, s: int, c: float) -> float:
    return dgr_defect(quantize_poly(f, N), quantize_poly(g, N), quantize_poly(ball_bracket(f, g), N), N, s, c)
