"""Matrix forms of the three model Hamiltonians and their symmetry-breaking perturbations.

* double well  -hbar^2 d^2/dx^2 + (x^2 - 1)^2, central differences, Dirichlet walls at +-L
* Curie-Weiss  -(J/2N) sum_ij s3(i) s3(j) - B sum_j s1(j), in the Dicke basis or on the full tensor space
* Bose-Hubbard two sites, normalized by N+1, in the occupation basis |n1, N-n1>
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import KindMismatch, ResolutionGuard, SizeExceeded, UnsupportedParameters
from .linalg import SymTridiag
from . import tensor


def double_well_potential(x):
    return (np.asarray(x) ** 2 - 1.0) ** 2


@dataclass(frozen=True)
class DoubleWellConfig:
    hbar: float
    half_width: float = 3.0
    grid_points: int = 2048

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        if self.grid_points < 64:
            raise ValueError("grid_points must be at least 64")

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / (self.grid_points + 1)

    @property
    def grid(self) -> np.ndarray:
        return -self.half_width + self.dx * np.arange(1, self.grid_points + 1)


@dataclass(frozen=True)
class CurieWeissConfig:
    N: int
    B: float = 0.5
    J: float = 1.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError("N must be a positive integer")


@dataclass(frozen=True)
class BoseHubbardConfig:
    """Two-site Bose-Hubbard model at the fixed parameters T=1, U=-2, rho=-2.

    ``convention="spin"`` (default) reads the spin-operator form of the normalized
    Hamiltonian with the standard spin-N/2 operators S_z = (n1 - n2)/2,
    S_x = (a1^+ a2 + a2^+ a1)/2; its upper symbol converges to
    -(sin(theta)cos(phi) + cos(theta)^2)/2.  ``convention="printed"`` uses the
    tabulated tridiagonal entries, which carry the unhalved S_z, S_x and hence a
    different classical limit (minimum -17/8 at sin(theta) = 1/4).
    """

    N: int
    T: float = 1.0
    U: float = -2.0
    rho: float = -2.0
    convention: Literal["spin", "printed"] = "spin"

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError("N must be a positive integer")
        if self.convention not in ("spin", "printed"):
            raise ValueError(f"unknown convention {self.convention!r}")


@dataclass(frozen=True)
class Perturbation:
    kind: Literal["cw_field", "schrodinger_flea"]
    epsilon: float = 0.0
    amplitude: float = 0.0
    center: float = 1.0
    width: float = 0.2

    def __post_init__(self):
        if self.kind not in ("cw_field", "schrodinger_flea"):
            raise ValueError(f"unknown perturbation kind {self.kind!r}")
        if self.kind == "schrodinger_flea" and not self.width > 0:
            raise ValueError("flea width must be positive")


def build_double_well(cfg: DoubleWellConfig) -> tuple[SymTridiag, np.ndarray]:
    dx = cfg.dx
    if dx > math.sqrt(cfg.hbar) / 8:
        raise ResolutionGuard(
            f"grid spacing {dx:.4g} exceeds sqrt(hbar)/8 = {math.sqrt(cfg.hbar) / 8:.4g}; "
            "increase grid_points"
        )
    x = cfg.grid
    kin = cfg.hbar**2 / dx**2
    T = SymTridiag(2.0 * kin + double_well_potential(x), np.full(cfg.grid_points - 1, -kin))
    return T, x


def build_cw_dicke(cfg: CurieWeissConfig) -> SymTridiag:
    N, J, B = cfg.N, cfg.J, cfg.B
    k = np.arange(N + 1, dtype=float)
    diag = -(J / (2.0 * N)) * (2.0 * k - N) ** 2
    off = -B * np.sqrt((N - k[:-1]) * (k[:-1] + 1.0))
    return SymTridiag(diag, off)


def build_cw_tensor(cfg: CurieWeissConfig) -> np.ndarray:
    """The Curie-Weiss Hamiltonian as a dense 2^N x 2^N matrix (N <= 10)."""
    N, J, B = cfg.N, cfg.J, cfg.B
    if N > tensor.MAX_SITES:
        raise SizeExceeded(f"N={N} exceeds {tensor.MAX_SITES} sites")
    dim = 2**N
    H = np.zeros((dim, dim))
    # i == j terms are s3^2 = I
    H -= (J / (2.0 * N)) * N * np.eye(dim)
    for i in range(N):
        for j in range(N):
            if i != j:
                labels = ["I"] * N
                labels[i] = labels[j] = "z"
                tensor.add_pauli_string(H, labels, -J / (2.0 * N))
    for j in range(N):
        labels = ["I"] * N
        labels[j] = "x"
        tensor.add_pauli_string(H, labels, -B)
    return H


def build_bh(cfg: BoseHubbardConfig) -> SymTridiag:
    if (cfg.T, cfg.U, cfg.rho) != (1.0, -2.0, -2.0):
        raise UnsupportedParameters(
            f"only T=1, U=-2, rho=-2 are supported, got T={cfg.T}, U={cfg.U}, rho={cfg.rho}"
        )
    N = cfg.N
    n1 = np.arange(N + 1, dtype=float)
    ladder = np.sqrt((N - n1[:-1]) * (n1[:-1] + 1.0))
    if cfg.convention == "printed":
        diag = -(2.0 / (N + 1) ** 2) * ((2.0 * n1 - N) ** 2 + N - 0.5)
        off = -ladder / (N + 1)
    else:
        sz = n1 - N / 2.0
        diag = -(2.0 / (N + 1) ** 2) * (sz**2 - N + 0.5)
        off = -0.5 * ladder / (N + 1)
    return SymTridiag(diag, off)


def apply_perturbation(H: SymTridiag, p: Perturbation, cfg) -> SymTridiag:
    """Return a perturbed copy of ``H``; ``cfg`` is the config ``H`` was built from."""
    if p.kind == "cw_field":
        if not isinstance(cfg, CurieWeissConfig) or H.n != cfg.N + 1:
            raise KindMismatch("cw_field needs a Curie-Weiss Dicke matrix and its config")
        k = np.arange(cfg.N + 1, dtype=float)
        return SymTridiag(H.diag + p.epsilon * (2.0 * k - cfg.N), H.offdiag)
    if not isinstance(cfg, DoubleWellConfig) or H.n != cfg.grid_points:
        raise KindMismatch("schrodinger_flea needs a double-well matrix and its config")
    bump = p.amplitude * np.exp(-((cfg.grid - p.center) ** 2) / p.width**2)
    return SymTridiag(H.diag + bump, H.offdiag)
