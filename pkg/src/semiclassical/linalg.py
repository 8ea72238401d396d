"""Real symmetric eigensolvers written from scratch.

Tridiagonal matrices are handled with Sturm-sequence bisection followed by
inverse iteration; small dense Hermitian matrices with cyclic Jacobi rotations.
Every model Hamiltonian in the package ends up as a :class:`SymTridiag`, so the
ground-state machinery below is the numerical core of everything else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    IterationLimit,
    NearDegenerate,
    NotHermitian,
    NotReflectionSymmetric,
    SizeExceeded,
)

PIVOT_FLOOR = 1e-300
MAX_BISECTION_STEPS = 200
MAX_INVERSE_ITERATIONS = 8
MAX_DENSE = 4096
MAX_TRIDIAG = 10**6


@dataclass(frozen=True)
class SymTridiag:
    """Real symmetric tridiagonal matrix stored as its diagonal and first off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.array(self.diag, dtype=float)
        e = np.array(self.offdiag, dtype=float)
        if d.ndim != 1 or e.ndim != 1 or d.size < 1 or e.size != d.size - 1:
            raise ValueError(f"inconsistent lengths: diag {d.shape}, offdiag {e.shape}")
        if d.size > MAX_TRIDIAG:
            raise SizeExceeded(f"tridiagonal dimension {d.size} > {MAX_TRIDIAG}")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ValueError("non-finite matrix entries")
        d.flags.writeable = False
        e.flags.writeable = False
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def n(self) -> int:
        return self.diag.size

    @cached_property
    def _lists(self):
        # plain floats make the scalar recurrences several times faster than numpy scalars
        return self.diag.tolist(), self.offdiag.tolist(), (self.offdiag**2).tolist()

    @cached_property
    def gershgorin(self) -> tuple[float, float]:
        radius = np.zeros(self.n)
        a = np.abs(self.offdiag)
        radius[:-1] += a
        radius[1:] += a
        return float(np.min(self.diag - radius)), float(np.max(self.diag + radius))

    @cached_property
    def norm_bound(self) -> float:
        """Gershgorin upper bound on the operator norm (cheap scale for tolerances)."""
        lo, hi = self.gershgorin
        return max(abs(lo), abs(hi))

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def __neg__(self) -> "SymTridiag":
        return SymTridiag(-self.diag, -self.offdiag)


@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: np.ndarray
    residual: float


@dataclass(frozen=True)
class Spectrum:
    values: np.ndarray
    vectors: np.ndarray | None = field(default=None, repr=False)


def sturm_count(T: SymTridiag, x: float) -> int:
    """Number of eigenvalues of ``T`` strictly below ``x``.

    Counts negative pivots of the LDL^T factorisation of ``T - x I``. Pivots whose
    magnitude falls under 1e-300 are replaced by +1e-300, which evaluates the count
    at ``x - 0`` and therefore excludes an eigenvalue sitting exactly at ``x``.
    """
    d, _, e2 = T._lists
    count = 0
    q = d[0] - x
    if abs(q) < PIVOT_FLOOR:
        q = PIVOT_FLOOR
    if q < 0.0:
        count += 1
    for i in range(1, len(d)):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < PIVOT_FLOOR:
            q = PIVOT_FLOOR
        if q < 0.0:
            count += 1
    return count


def _default_tol(T: SymTridiag) -> float:
    return 1e-14 * max(1.0, T.norm_bound)


def tridiag_eigs(T: SymTridiag, k: int = 1, tol: float | None = None) -> Spectrum:
    """The ``k`` lowest eigenvalues of ``T`` by bisection, each bracketed to width ``tol``."""
    if not 1 <= k <= T.n:
        raise ValueError(f"k must lie in [1, {T.n}], got {k}")
    if tol is None:
        tol = _default_tol(T)
    if not tol > 0:
        raise ValueError("tol must be positive")
    glo, ghi = T.gershgorin
    pad = 1e-12 * max(1.0, T.norm_bound)
    lo0, hi0 = glo - pad, ghi + pad
    values = np.empty(k)
    for j in range(k):
        # lambda_j = sup{x : count(x) <= j}
        lo, hi = (lo0 if j == 0 else values[j - 1] - tol), hi0
        steps = 0
        while hi - lo > tol:
            steps += 1
            if steps > MAX_BISECTION_STEPS:
                raise IterationLimit(
                    f"bisection for eigenvalue {j} exceeded {MAX_BISECTION_STEPS} steps "
                    f"(tol={tol:g} below representable resolution?)"
                )
            mid = 0.5 * (lo + hi)
            if sturm_count(T, mid) <= j:
                lo = mid
            else:
                hi = mid
        values[j] = 0.5 * (lo + hi)
    return Spectrum(values)


def _ldl_solve(T: SymTridiag, sigma: float, rhs: list[float]) -> list[float] | None:
    """Solve (T - sigma I) y = rhs; ``None`` signals a singular pivot."""
    d, e, _ = T._lists
    n = len(d)
    piv = [0.0] * n
    mult = [0.0] * max(n - 1, 0)
    q = d[0] - sigma
    for i in range(n):
        if abs(q) < PIVOT_FLOOR:
            return None
        piv[i] = q
        if i < n - 1:
            mult[i] = e[i] / q
            q = d[i + 1] - sigma - mult[i] * e[i]
    z = rhs[:]
    for i in range(1, n):
        z[i] -= mult[i - 1] * z[i - 1]
    for i in range(n):
        z[i] /= piv[i]
    for i in range(n - 2, -1, -1):
        z[i] -= mult[i] * z[i + 1]
    return z


def _inverse_iteration(T: SymTridiag, lam: float, gap: float) -> np.ndarray:
    scale = max(1.0, T.norm_bound)
    # shift sits just above lam, but never nearer the next eigenvalue than lam itself
    offset = min(1e-12 * scale, 0.25 * gap) if gap > 0 else 1e-12 * scale
    sigma = lam + offset
    target = 1e-11 * scale
    v = [1.0] * T.n
    vec = np.ones(T.n) / math.sqrt(T.n)
    for _ in range(MAX_INVERSE_ITERATIONS):
        y = _ldl_solve(T, sigma, v)
        attempts = 0
        while y is None:
            attempts += 1
            if attempts > 8:
                raise IterationLimit("inverse iteration hit singular pivots repeatedly")
            sigma += offset * (1 + attempts)
            y = _ldl_solve(T, sigma, v)
        vec = np.asarray(y)
        vec /= np.linalg.norm(vec)
        v = vec.tolist()
        if np.linalg.norm(T.matvec(vec) - lam * vec) <= target:
            break
    return vec


def _fix_sign(v: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(v)))
    return -v if v[i] < 0 else v


def _pair(T: SymTridiag, lam: float, v: np.ndarray) -> EigenPair:
    v = _fix_sign(v / np.linalg.norm(v))
    v.flags.writeable = False
    res = float(np.linalg.norm(T.matvec(v) - lam * v))
    return EigenPair(float(lam), v, res)


def ground_pair(T: SymTridiag, tol: float | None = None) -> EigenPair:
    """Lowest eigenvalue and its unit eigenvector (largest component positive).

    Raises :class:`NearDegenerate` when the two lowest eigenvalues are closer than
    1e-13 ||T||; symmetric double-well problems should use
    :func:`ground_pair_parity` instead.
    """
    k = min(2, T.n)
    spec = tridiag_eigs(T, k, tol)
    lam = spec.values[0]
    gap = spec.values[1] - lam if k == 2 else math.inf
    if gap <= 1e-13 * T.norm_bound:
        raise NearDegenerate(
            f"lowest eigenvalues {spec.values[0]:.17g}, {spec.values[1]:.17g} are not resolvable"
        )
    if T.n == 1:
        return _pair(T, lam, np.ones(1))
    return _pair(T, lam, _inverse_iteration(T, lam, gap))


def is_reflection_symmetric(T: SymTridiag, rtol: float = 1e-12) -> bool:
    tol = rtol * max(1.0, T.norm_bound)
    return bool(
        np.all(np.abs(T.diag - T.diag[::-1]) <= tol)
        and np.all(np.abs(T.offdiag - T.offdiag[::-1]) <= tol)
    )


def fold_even(T: SymTridiag) -> SymTridiag:
    """Restriction of ``T`` to vectors with v[i] = v[n-1-i], in an orthonormal basis."""
    if not is_reflection_symmetric(T):
        raise NotReflectionSymmetric("matrix does not commute with index reversal")
    d = 0.5 * (T.diag + T.diag[::-1])
    e = 0.5 * (T.offdiag + T.offdiag[::-1])
    n = T.n
    h = n // 2
    if n == 1:
        return SymTridiag(d, e)
    if n % 2 == 0:
        dr = d[:h].copy()
        dr[-1] += e[h - 1]
        return SymTridiag(dr, e[: h - 1])
    er = e[:h].copy()
    er[-1] *= math.sqrt(2.0)
    return SymTridiag(d[: h + 1], er)


def unfold_even(u: np.ndarray, n: int) -> np.ndarray:
    h = n // 2
    if n == 1:
        return np.asarray(u, dtype=float).copy()
    if n % 2 == 0:
        half = u / math.sqrt(2.0)
        return np.concatenate([half, half[::-1]])
    half = u[:h] / math.sqrt(2.0)
    return np.concatenate([half, u[h : h + 1], half[::-1]])


def ground_pair_parity(T: SymTridiag, tol: float | None = None) -> EigenPair:
    """Ground pair inside the even sector of the index reflection i -> n-1-i.

    For reflection-symmetric matrices with negative off-diagonals the ground vector
    is positive, hence even; folding removes its odd partner, whose splitting in
    double wells is far below double precision.
    """
    R = fold_even(T)
    g = ground_pair(R, tol)
    return _pair(T, g.value, unfold_even(g.vector, T.n))


def _jacobi(A: np.ndarray, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    A = np.array(A, dtype=complex if np.iscomplexobj(A) else float)
    n = A.shape[0]
    V = np.eye(n, dtype=A.dtype)
    total = np.linalg.norm(A)
    if total == 0.0 or n == 1:
        return np.real(np.diag(A)).copy(), V
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off < 1e-14 * total:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r < PIVOT_FLOOR:
                    continue
                phase = apq / r
                tau = (A[q, q].real - A[p, p].real) / (2.0 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                cph = np.conj(phase)
                g_pp, g_pq, g_qp, g_qq = c, s, -s * cph, c * cph
                colp, colq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = colp * g_pp + colq * g_qp
                A[:, q] = colp * g_pq + colq * g_qq
                rowp, rowq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = np.conj(g_pp) * rowp + np.conj(g_qp) * rowq
                A[q, :] = np.conj(g_pq) * rowp + np.conj(g_qq) * rowq
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = vp * g_pp + vq * g_qp
                V[:, q] = vp * g_pq + vq * g_qq
    else:
        raise IterationLimit(f"Jacobi did not converge in {max_sweeps} sweeps")
    return np.real(np.diag(A)).copy(), V


def check_hermitian(M: np.ndarray, atol: float = 1e-12) -> None:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotHermitian(f"not a square matrix: shape {M.shape}")
    dev = float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0
    if dev > atol * max(1.0, float(np.max(np.abs(M))) if M.size else 1.0):
        raise NotHermitian(f"Hermiticity defect {dev:.3g}")


def dense_eigen(D: np.ndarray) -> Spectrum:
    """Full spectrum of a dense Hermitian (real symmetric or complex) matrix by cyclic Jacobi."""
    D = np.asarray(D)
    if D.shape[0] > MAX_DENSE:
        raise SizeExceeded(f"dense dimension {D.shape[0]} > {MAX_DENSE}")
    check_hermitian(D)
    values, V = _jacobi(D)
    order = np.argsort(values, kind="stable")
    return Spectrum(values[order], V[:, order])


def operator_norm(M) -> float:
    """Largest |eigenvalue| of a Hermitian operator (tridiagonal or dense)."""
    if isinstance(M, SymTridiag):
        lo = tridiag_eigs(M, 1).values[0]
        hi = -tridiag_eigs(-M, 1).values[0]
        return float(max(abs(lo), abs(hi)))
    M = np.asarray(M)
    check_hermitian(M)
    if M.size == 0:
        return 0.0
    return float(np.max(np.abs(dense_eigen(M).values)))
