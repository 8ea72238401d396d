"""Classical limits: Hamiltonians on the plane, the Bloch ball and the sphere, their
absolute minima, Poisson brackets, the Z2 actions and the symmetry-breaking classifier.

Only absolute minima count as classical ground states here; other stationary points
found during the search are returned separately as excluded stationary points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .errors import DomainMismatch, NotTransitive, RefinementDiverged, UnsupportedParameters
from .models import Perturbation, double_well_potential

ModelId = Literal["double_well", "curie_weiss", "bose_hubbard"]

SPHERE_ORIENTATION = "{f,g} = (1/sin theta)(d_phi f d_theta g - d_theta f d_phi g)"
GRID_POINTS = 201
NEWTON_TOL = 1e-12
MERGE_DIST = 1e-8
FD_STEP = 1e-6


@dataclass(frozen=True)
class BlochPoint:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.x**2 + self.y**2 + self.z**2 > 1.0 + 1e-12:
            raise DomainMismatch(f"({self.x}, {self.y}, {self.z}) lies outside the unit ball")

    def astuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class ClassicalModel:
    id: ModelId
    J: float = 1.0
    B: float = 0.5
    flea: Perturbation | None = None

    def __post_init__(self):
        if self.id not in ("double_well", "curie_weiss", "bose_hubbard"):
            raise ValueError(f"unknown model {self.id!r}")
        if self.flea is not None and (self.id != "double_well" or self.flea.kind != "schrodinger_flea"):
            raise DomainMismatch("only the double well takes a flea perturbation")
        if self.id == "curie_weiss" and not self.J > 0:
            raise UnsupportedParameters("J must be positive")

    @property
    def phase_space(self) -> str:
        return {"double_well": "plane", "curie_weiss": "ball", "bose_hubbard": "sphere"}[self.id]

    @property
    def symmetry(self) -> str:
        return {
            "plane": "Z2: (q, p) -> (-q, -p)",
            "ball": "Z2: (x, y, z) -> (x, -y, -z)",
            "sphere": "Z2: (theta, phi) -> (pi - theta, -phi)",
        }[self.phase_space]


def curie_weiss(J: float = 1.0, B: float = 0.5) -> ClassicalModel:
    return ClassicalModel("curie_weiss", J=J, B=B)


def bose_hubbard() -> ClassicalModel:
    return ClassicalModel("bose_hubbard")


def double_well(flea: Perturbation | None = None) -> ClassicalModel:
    return ClassicalModel("double_well", flea=flea)


# coordinates


def _coords(model: ClassicalModel, point) -> tuple[float, ...]:
    """Validate ``point`` for the model's phase space and return plain coordinates."""
    ps = model.phase_space
    if hasattr(point, "theta"):
        if ps != "sphere":
            raise DomainMismatch(f"sphere point given to a {ps} model")
        return (float(point.theta), float(point.phi))
    if isinstance(point, BlochPoint):
        if ps != "ball":
            raise DomainMismatch(f"ball point given to a {ps} model")
        return point.astuple()
    if hasattr(point, "q"):
        if ps != "plane":
            raise DomainMismatch(f"phase-plane point given to a {ps} model")
        return (float(point.q), float(point.p))
    pt = tuple(float(v) for v in point)
    want = 3 if ps == "ball" else 2
    if len(pt) != want:
        raise DomainMismatch(f"{ps} points have {want} coordinates, got {len(pt)}")
    if ps == "ball" and sum(v * v for v in pt) > 1.0 + 1e-12:
        raise DomainMismatch(f"{pt} lies outside the unit ball")
    if ps == "sphere" and not (-1e-12 <= pt[0] <= math.pi + 1e-12):
        raise DomainMismatch(f"theta={pt[0]} outside [0, pi]")
    return pt


def sphere_to_cartesian(theta, phi):
    st = np.sin(theta)
    return st * np.cos(phi), st * np.sin(phi), np.cos(theta)


# Hamiltonians.  The ball and sphere models share the quadratic form -(J/2) z^2 - B x;
# the sphere model reads it through the embedding theta, phi -> (x, y, z).


def _spin_params(model: ClassicalModel) -> tuple[float, float]:
    if model.id == "bose_hubbard":
        return 1.0, 0.5
    return model.J, model.B


def _cart_h(J, B, x, y, z):
    return -(0.5 * J * z * z + B * x)


def _cart_grad(J, B, x, y, z):
    return np.array([-B, 0.0, -J * z])


def _cart_hess(J, B):
    return np.diag([0.0, 0.0, -J])


def _plane_h(model, q, p):
    h = p * p + double_well_potential(q)
    if model.flea is not None:
        f = model.flea
        h = h + f.amplitude * np.exp(-((q - f.center) ** 2) / f.width**2)
    return h


def _plane_grad(model, q, p):
    g = np.array([4.0 * q * (q * q - 1.0), 2.0 * p])
    if model.flea is not None:
        f = model.flea
        g[0] += f.amplitude * np.exp(-((q - f.center) ** 2) / f.width**2) * (-2.0 * (q - f.center) / f.width**2)
    return g


def _plane_hess(model, q, p):
    H = np.array([[12.0 * q * q - 4.0, 0.0], [0.0, 2.0]])
    if model.flea is not None:
        f = model.flea
        u = (q - f.center) / f.width
        H[0, 0] += f.amplitude * math.exp(-u * u) * (4.0 * u * u - 2.0) / f.width**2
    return H


def _sphere_frame(theta, phi):
    st, ct, sp, cp = math.sin(theta), math.cos(theta), math.sin(phi), math.cos(phi)
    r_t = np.array([ct * cp, ct * sp, -st])
    r_p = np.array([-st * sp, st * cp, 0.0])
    r_tt = np.array([-st * cp, -st * sp, -ct])
    r_tp = np.array([-ct * sp, ct * cp, 0.0])
    r_pp = np.array([-st * cp, -st * sp, 0.0])
    return np.array([st * cp, st * sp, ct]), r_t, r_p, r_tt, r_tp, r_pp


def _sphere_grad_hess(J, B, theta, phi):
    r, r_t, r_p, r_tt, r_tp, r_pp = _sphere_frame(theta, phi)
    g = _cart_grad(J, B, *r)
    H = _cart_hess(J, B)
    grad = np.array([g @ r_t, g @ r_p])
    hess = np.array(
        [
            [r_t @ H @ r_t + g @ r_tt, r_t @ H @ r_p + g @ r_tp],
            [r_p @ H @ r_t + g @ r_tp, r_p @ H @ r_p + g @ r_pp],
        ]
    )
    return grad, hess


def classical_hamiltonian(model: ClassicalModel, point) -> float:
    c = _coords(model, point)
    ps = model.phase_space
    if ps == "plane":
        return float(_plane_h(model, *c))
    J, B = _spin_params(model)
    if ps == "sphere":
        return float(_cart_h(J, B, *sphere_to_cartesian(*c)))
    return float(_cart_h(J, B, *c))


def gradient(model: ClassicalModel, point) -> np.ndarray:
    c = _coords(model, point)
    ps = model.phase_space
    if ps == "plane":
        return _plane_grad(model, *c)
    J, B = _spin_params(model)
    if ps == "sphere":
        return _sphere_grad_hess(J, B, *c)[0]
    return _cart_grad(J, B, *c)


def hessian(model: ClassicalModel, point) -> np.ndarray:
    c = _coords(model, point)
    ps = model.phase_space
    if ps == "plane":
        return _plane_hess(model, *c)
    J, B = _spin_params(model)
    if ps == "sphere":
        return _sphere_grad_hess(J, B, *c)[1]
    return _cart_hess(J, B)


# minima


@dataclass
class MinimaSet:
    points: list[tuple[float, ...]]
    value: float
    excluded: list[tuple[tuple[float, ...], float]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.points)


def _grid_local_minima(values: np.ndarray, periodic_last: bool = False) -> list[tuple[int, int]]:
    """Indices of 2-D grid cells not exceeding any of their 8 neighbours."""
    n0, n1 = values.shape
    pad = np.pad(values, 1, mode="edge")
    if periodic_last:
        pad[:, 0] = pad[:, -3] if n1 > 1 else pad[:, 1]
        pad[:, -1] = pad[:, 2]
    centre = pad[1:-1, 1:-1]
    is_min = np.ones_like(centre, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                is_min &= centre <= pad[1 + di : n0 + 1 + di, 1 + dj : n1 + 1 + dj]
    return [tuple(ix) for ix in np.argwhere(is_min)]


def _newton(grad_hess: Callable, x0: np.ndarray, max_iter: int = 100) -> np.ndarray:
    x = np.array(x0, dtype=float)
    for _ in range(max_iter):
        g, H = grad_hess(x)
        if np.linalg.norm(g) <= NEWTON_TOL:
            return x
        try:
            step = np.linalg.solve(H, g)
        except np.linalg.LinAlgError as exc:
            raise RefinementDiverged(f"singular Hessian at {x}") from exc
        x = x - step
        if not np.all(np.isfinite(x)) or np.linalg.norm(x) > 1e6:
            break
    g, _ = grad_hess(x)
    if np.linalg.norm(g) <= NEWTON_TOL:
        return x
    raise RefinementDiverged(f"Newton stalled at {x} with gradient norm {np.linalg.norm(g):.3g}")


def _canonical_sphere(theta: float, phi: float) -> tuple[float, float]:
    # fold theta back into [0, pi] and phi into [0, 2 pi)
    theta = math.fmod(theta, 2.0 * math.pi)
    if theta < 0:
        theta += 2.0 * math.pi
    if theta > math.pi:
        theta = 2.0 * math.pi - theta
        phi += math.pi
    phi = phi % (2.0 * math.pi)
    if phi > 2.0 * math.pi - 1e-13:
        phi = 0.0
    return theta, phi


def _candidates(model: ClassicalModel) -> list[tuple[float, ...]]:
    """Deterministic grid scan followed by Newton refinement of every grid-local minimum."""
    n = GRID_POINTS
    ps = model.phase_space
    found: list[tuple[float, ...]] = []
    if ps == "plane":
        q = np.linspace(-2.0, 2.0, n)
        Q, P = np.meshgrid(q, q, indexing="ij")
        vals = _plane_h(model, Q, P)
        for i, j in _grid_local_minima(vals):
            x = _newton(lambda v: (_plane_grad(model, *v), _plane_hess(model, *v)), [q[i], q[j]])
            found.append(tuple(float(v) for v in x))
        return found
    J, B = _spin_params(model)
    theta = np.linspace(0.0, math.pi, n)
    phi = np.linspace(0.0, 2.0 * math.pi, n)[:-1]
    T, P = np.meshgrid(theta, phi, indexing="ij")
    vals = _cart_h(J, B, *sphere_to_cartesian(T, P))
    for i, j in _grid_local_minima(vals, periodic_last=True):
        if theta[i] in (0.0, math.pi):
            continue  # coordinate chart degenerates; poles are handled below
        x = _newton(lambda v: _sphere_grad_hess(J, B, *v), [theta[i], phi[j]])
        t, p = _canonical_sphere(float(x[0]), float(x[1]))
        found.append((t, p))
    for pole in (0.0, math.pi):
        r = np.array(sphere_to_cartesian(pole, 0.0))
        g = _cart_grad(J, B, *r)
        if np.linalg.norm(g - (g @ r) * r) <= NEWTON_TOL:
            found.append((pole, 0.0))
    if ps == "ball":
        found = [sphere_to_cartesian(*tp) for tp in found]
        # no interior stationary points: grad h = (-B, 0, -J z) never vanishes for B > 0,
        # so every minimum over the ball lies on the boundary sphere
        found = [tuple(float(v) for v in pt) for pt in found]
    return found


def _dist(a, b) -> float:
    return float(np.linalg.norm(np.subtract(a, b)))


def _merge(points: list[tuple[float, ...]], sphere: bool = False) -> list[tuple[float, ...]]:
    out: list[tuple[float, ...]] = []
    for pt in points:
        key = sphere_to_cartesian(*pt) if sphere else pt
        if not any(_dist(key, sphere_to_cartesian(*o) if sphere else o) <= MERGE_DIST for o in out):
            out.append(pt)
    return sorted(out)


def closed_form_minima(model: ClassicalModel) -> list[tuple[float, ...]]:
    if model.id == "double_well" and model.flea is None:
        return [(-1.0, 0.0), (1.0, 0.0)]
    if model.id == "curie_weiss":
        x = model.B / model.J
        z = math.sqrt(1.0 - x * x)
        return [(x, 0.0, -z), (x, 0.0, z)]
    if model.id == "bose_hubbard":
        return [(math.pi / 6.0, 0.0), (5.0 * math.pi / 6.0, 0.0)]
    return []


def find_minima(model: ClassicalModel) -> MinimaSet:
    """Absolute minima of h, via a 201-point grid per coordinate and Newton refinement."""
    if model.id == "curie_weiss" and not 0.0 < model.B / model.J < 1.0:
        raise UnsupportedParameters("Curie-Weiss minima need 0 < B/J < 1")
    sphere = model.phase_space == "sphere"
    cands = _merge(_candidates(model), sphere)
    vals = [classical_hamiltonian(model, c) for c in cands]
    hmin = min(vals)
    keep, excluded = [], []
    for c, v in zip(cands, vals):
        if v <= hmin + 1e-10:
            if np.min(np.linalg.eigvalsh(hessian(model, c))) < -1e-8 and model.phase_space != "ball":
                excluded.append((c, v))
            else:
                keep.append(c)
        else:
            excluded.append((c, v))
    return MinimaSet(points=keep, value=hmin, excluded=excluded)


# brackets and symmetry


def _d(f, pt, axis, h=FD_STEP):
    def central(step):
        a = list(pt)
        b = list(pt)
        a[axis] += step
        b[axis] -= step
        return (f(*a) - f(*b)) / (2.0 * step)

    return (4.0 * central(h / 2.0) - central(h)) / 3.0


def poisson_bracket(model: ClassicalModel, f: Callable, g: Callable, point) -> float:
    """{f, g} at ``point`` by Richardson-corrected central differences.

    ball: x . (grad f x grad g); sphere: (1/sin theta)(f_phi g_theta - f_theta g_phi);
    plane: f_q g_p - f_p g_q.
    """
    c = _coords(model, point)
    ps = model.phase_space
    if ps == "plane":
        return float(_d(f, c, 0) * _d(g, c, 1) - _d(f, c, 1) * _d(g, c, 0))
    if ps == "sphere":
        st = math.sin(c[0])
        if st == 0.0:
            raise DomainMismatch("the angular bracket is singular at the poles")
        return float((_d(f, c, 1) * _d(g, c, 0) - _d(f, c, 0) * _d(g, c, 1)) / st)
    gf = np.array([_d(f, c, a) for a in range(3)])
    gg = np.array([_d(g, c, a) for a in range(3)])
    return float(np.dot(c, np.cross(gf, gg)))


def symmetry_apply(model: ClassicalModel, point) -> tuple[float, ...]:
    c = _coords(model, point)
    ps = model.phase_space
    if ps == "plane":
        return (-c[0], -c[1])
    if ps == "ball":
        return (c[0], -c[1], -c[2])
    theta, phi = c
    return (math.pi - theta, (-phi) % (2.0 * math.pi) if phi != 0.0 else 0.0)


def _same_point(model: ClassicalModel, a, b, tol: float = MERGE_DIST) -> bool:
    if model.phase_space == "sphere":
        return _dist(sphere_to_cartesian(*a), sphere_to_cartesian(*b)) <= tol
    return _dist(a, b) <= tol


def symmetry_is_dynamical(model: ClassicalModel, n: int = 1000) -> bool:
    """h(gamma pt) == h(pt) on a deterministic grid of n points."""
    side = int(math.ceil(math.sqrt(n)))
    if model.phase_space == "plane":
        pts = [(a, b) for a in np.linspace(-2, 2, side) for b in np.linspace(-2, 2, side)]
    elif model.phase_space == "sphere":
        pts = [(a, b) for a in np.linspace(0, math.pi, side) for b in np.linspace(0, 2 * math.pi, side, endpoint=False)]
    else:
        pts = [sphere_to_cartesian(a, b) for a in np.linspace(0, math.pi, side) for b in np.linspace(0, 2 * math.pi, side, endpoint=False)]
    return all(
        abs(classical_hamiltonian(model, symmetry_apply(model, p)) - classical_hamiltonian(model, p)) <= 1e-12 for p in pts
    )


@dataclass(frozen=True)
class MixtureState:
    points: tuple[tuple[float, ...], ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        w = np.asarray(self.weights)
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-14:
            raise ValueError("mixture weights must be non-negative and sum to 1")

    def __call__(self, f: Callable) -> float:
        return float(sum(w * f(*pt) for pt, w in zip(self.points, self.weights)))


def limit_mixture(minima: MinimaSet, model: ClassicalModel) -> MixtureState:
    """Uniform mixture over the Z2 orbit of the minima; requires a transitive action."""
    if not minima.points:
        raise NotTransitive("no minima")
    orbit = [minima.points[0]]
    img = symmetry_apply(model, orbit[0])
    if not _same_point(model, img, orbit[0]):
        orbit.append(img)
    for pt in minima.points:
        if not any(_same_point(model, pt, o) for o in orbit):
            raise NotTransitive(f"minimum {pt} is not in the orbit of {orbit[0]}")
    for o in orbit:
        if not any(_same_point(model, o, pt) for pt in minima.points):
            raise NotTransitive(f"orbit point {o} is not a minimum; h is not symmetric")
    orbit = [next(pt for pt in minima.points if _same_point(model, pt, o)) for o in orbit]
    orbit.sort()
    w = 1.0 / len(orbit)
    return MixtureState(tuple(tuple(p) for p in orbit), tuple([w] * len(orbit)))


def _test_observables(model: ClassicalModel) -> list[Callable]:
    if model.phase_space == "plane":
        return [lambda q, p: q, lambda q, p: p, lambda q, p: q * q, lambda q, p: q * p + q**3]
    if model.phase_space == "sphere":
        return [
            lambda t, p: np.cos(t),
            lambda t, p: np.sin(t) * np.sin(p),
            lambda t, p: np.cos(t) ** 2,
            lambda t, p: np.sin(t) * np.cos(p) + np.cos(t) ** 3,
        ]
    return [lambda x, y, z: z, lambda x, y, z: y, lambda x, y, z: z * z, lambda x, y, z: x + y * z + z**3]


def ssb_verdict(model: ClassicalModel, minima: MinimaSet | None = None) -> dict:
    """Classify Z2 breaking among the classical ground states (absolute minima only)."""
    if minima is None:
        minima = find_minima(model)
    dynamical = symmetry_is_dynamical(model)
    dirac = []
    for pt in minima.points:
        dirac.append({"point": list(pt), "invariant": _same_point(model, symmetry_apply(model, pt), pt)})
    report = {
        "model": model.id,
        "phase_space": model.phase_space,
        "symmetry": model.symmetry,
        "symmetry_is_dynamical": dynamical,
        "minimum_value": minima.value,
        "minima": [list(p) for p in minima.points],
        "dirac_states": dirac,
        "excluded_stationary_points": [{"point": list(p), "value": v} for p, v in minima.excluded],
        "note": "only absolute minima are treated as classical ground states; "
        "other stationary points are listed as excluded",
    }
    if model.phase_space == "sphere":
        report["bracket_orientation"] = SPHERE_ORIENTATION
    if not dynamical:
        report.update(mixture=None, mixture_invariant=None, verdict="explicit")
        return report
    mix = limit_mixture(minima, model)
    sym = lambda f: (lambda *c: f(*symmetry_apply(model, c)))  # noqa: E731
    inv = all(abs(mix(sym(f)) - mix(f)) <= 1e-12 for f in _test_observables(model))
    report["mixture"] = {"points": [list(p) for p in mix.points], "weights": list(mix.weights)}
    report["mixture_invariant"] = inv
    report["verdict"] = "SSB" if not any(d["invariant"] for d in dirac) else "no SSB"
    cf = closed_form_minima(model)
    if cf:
        report["closed_form_minima"] = [list(p) for p in cf]
        report["closed_form_deviation"] = max(
            min(_dist(p, q) for q in minima.points) for p in cf
        ) if len(cf) == len(minima.points) else float("inf")
    return report
