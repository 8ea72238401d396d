"""Convergence sweeps in N and hbar, extrapolation, order-of-limits scans and the
acceptance harness.

Each sweep point builds its model, finds the ground pair and compares quantum
expectations of quantized observables with the classical limit mixture.  Points are
independent; with ``workers > 1`` they run in a process pool and are collected in
parameter order, so the output does not depend on the degree of concurrency.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import classical, linalg, models, quantize, tensor
from .errors import LabError, WindowTooSmall

CW_OBSERVABLES = ("x", "z", "z2", "energy_per_site")
BH_OBSERVABLES = ("sin_theta_cos_phi", "cos_theta", "cos2_theta", "energy")
DW_OBSERVABLES = ("q", "q2", "p2", "energy")
OBSERVABLES = {"curie_weiss": CW_OBSERVABLES, "bose_hubbard": BH_OBSERVABLES, "double_well": DW_OBSERVABLES}
PARAM_NAME = {"curie_weiss": "N", "bose_hubbard": "N", "double_well": "hbar"}
LIMITS = {"curie_weiss": 5000, "bose_hubbard": 2000}
HBAR_FLOOR = 0.01


@dataclass(frozen=True)
class SweepSpec:
    model: str
    params: tuple
    observables: tuple = ()
    J: float = 1.0
    B: float = 0.5
    convention: str = "spin"
    half_width: float = 3.0
    grid_points: int = 2048
    window: float = 2.0
    workers: int = 1
    output: str | None = None

    def __post_init__(self):
        if self.model not in OBSERVABLES:
            raise ValueError(f"unknown model {self.model!r}")
        params = tuple(self.params)
        if len(params) == 0:
            raise ValueError("empty parameter list")
        diffs = np.diff(np.asarray(params, dtype=float))
        if not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ValueError("parameter list must be strictly monotone")
        if self.model == "double_well":
            if min(params) < HBAR_FLOOR:
                raise ValueError(f"hbar below the floor {HBAR_FLOOR}")
        else:
            params = tuple(int(p) for p in params)
            if min(params) < 2 or max(params) > LIMITS[self.model]:
                raise ValueError(f"N outside 2..{LIMITS[self.model]} for {self.model}")
        object.__setattr__(self, "params", params)
        obs = tuple(self.observables) or OBSERVABLES[self.model]
        unknown = set(obs) - set(OBSERVABLES[self.model])
        if unknown:
            raise ValueError(f"observables {sorted(unknown)} do not live on the {self.model} phase space")
        object.__setattr__(self, "observables", obs)

    @property
    def param_name(self) -> str:
        return PARAM_NAME[self.model]


@dataclass(frozen=True)
class ConvergenceRecord:
    model: str
    param_name: str
    param_value: float
    observable: str
    quantum: float
    classical: float
    abs_error: float = field(default=float("nan"))

    def __post_init__(self):
        object.__setattr__(self, "abs_error", abs(self.quantum - self.classical))


@dataclass(frozen=True)
class LimitEstimate:
    value: float
    rate: float
    residual: float
    method: str = "power-law fit"


# classical side


def _classical_model(spec: SweepSpec) -> classical.ClassicalModel:
    if spec.model == "curie_weiss":
        return classical.curie_weiss(spec.J, spec.B)
    if spec.model == "bose_hubbard":
        return classical.bose_hubbard()
    return classical.double_well()


_CLASSICAL_FUNCS: dict[str, Callable] = {
    "x": lambda x, y, z: x,
    "z": lambda x, y, z: z,
    "z2": lambda x, y, z: z * z,
    "sin_theta_cos_phi": lambda t, p: math.sin(t) * math.cos(p),
    "cos_theta": lambda t, p: math.cos(t),
    "cos2_theta": lambda t, p: math.cos(t) ** 2,
    "q": lambda q, p: q,
    "q2": lambda q, p: q * q,
    "p2": lambda q, p: p * p,
}


def classical_predictions(spec: SweepSpec) -> dict[str, float]:
    model = _classical_model(spec)
    minima = classical.find_minima(model)
    mix = classical.limit_mixture(minima, model)
    out = {}
    for name in spec.observables:
        if name.startswith("energy"):
            out[name] = minima.value
        else:
            out[name] = mix(_CLASSICAL_FUNCS[name])
    return out


# quantum side

_CW_POLYS = {"x": tensor.X, "z": tensor.Z, "z2": tensor.Z * tensor.Z}
_SPHERE_FUNCS = {
    "sin_theta_cos_phi": (lambda t, p: np.sin(t) * np.cos(p), 1),
    "cos_theta": (lambda t, p: np.cos(t), 1),
    "cos2_theta": (lambda t, p: np.cos(t) ** 2, 2),
}
_PLANE_FUNCS = {"q": lambda q, p: q, "q2": lambda q, p: q * q, "p2": lambda q, p: p * p}


def ground_state(T: linalg.SymTridiag) -> linalg.EigenPair:
    """Parity-sector solve for reflection-symmetric matrices, plain solve otherwise."""
    if linalg.is_reflection_symmetric(T):
        return linalg.ground_pair_parity(T)
    return linalg.ground_pair(T)


def husimi_plane_expect(psi, hbar, f, grid, window: float = 2.0, max_window: float | None = None) -> tuple[float, float]:
    """Husimi expectation, widening the window by 0.5 until the tail check passes."""
    max_window = max_window if max_window is not None else window + 3.0
    w = window
    while True:
        try:
            return quantize.husimi_schrodinger_expect(psi, hbar, f, grid, window=w), w
        except WindowTooSmall:
            if w + 0.5 > max_window:
                raise
            w += 0.5


def _quantum_point(spec: SweepSpec, param) -> dict[str, float]:
    if spec.model == "curie_weiss":
        cfg = models.CurieWeissConfig(N=int(param), B=spec.B, J=spec.J)
        gp = ground_state(models.build_cw_dicke(cfg))
        out = {}
        for name in spec.observables:
            if name == "energy_per_site":
                out[name] = gp.value / cfg.N
            else:
                Q = tensor.quantize_poly_dicke(_CW_POLYS[name], cfg.N, sparse=True)
                out[name] = float(np.real(np.vdot(gp.vector, Q @ gp.vector)))
        return out
    if spec.model == "bose_hubbard":
        cfg = models.BoseHubbardConfig(N=int(param), convention=spec.convention)
        gp = ground_state(models.build_bh(cfg))
        quad = quantize.default_quadrature(cfg.N, 2)
        dens = quantize.husimi_spin_density(gp.vector, quad)
        out = {}
        for name in spec.observables:
            if name == "energy":
                out[name] = gp.value
            else:
                f, _ = _SPHERE_FUNCS[name]
                out[name] = dens.integrate(f(quad.theta, quad.phi))
        return out
    cfg = models.DoubleWellConfig(hbar=float(param), half_width=spec.half_width, grid_points=spec.grid_points)
    T, x = models.build_double_well(cfg)
    gp = ground_state(T)
    out = {}
    for name in spec.observables:
        if name == "energy":
            out[name] = gp.value
        else:
            out[name] = husimi_plane_expect(gp.vector, cfg.hbar, _PLANE_FUNCS[name], x, spec.window)[0]
    return out


def _run_point(args):
    spec, param = args
    try:
        return _quantum_point(spec, param)
    except LabError as exc:
        try:
            err = type(exc)(f"{spec.param_name}={param}: {exc}")
        except TypeError:
            raise exc
        raise err from exc


def run_limit_sweep(spec: SweepSpec) -> list[ConvergenceRecord]:
    """Quantum vs classical values for every (parameter, observable), sorted by parameter."""
    cl = classical_predictions(spec)
    tasks = [(spec, p) for p in spec.params]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            results = list(pool.map(_run_point, tasks))
    else:
        results = [_run_point(t) for t in tasks]
    records = []
    for p, res in zip(spec.params, results):
        for name in spec.observables:
            records.append(ConvergenceRecord(spec.model, spec.param_name, float(p), name, float(res[name]), float(cl[name])))
    return sort_records(records)


def sort_records(records: Sequence[ConvergenceRecord]) -> list[ConvergenceRecord]:
    return sorted(records, key=lambda r: (r.observable, r.param_value))


def select(records: Sequence[ConvergenceRecord], observable: str) -> list[ConvergenceRecord]:
    rs = [r for r in records if r.observable == observable]
    return sorted(rs, key=lambda r: r.param_value)


def endpoint_monotone(records: Sequence[ConvergenceRecord]) -> bool:
    """Error at the limit end of the sweep does not exceed the error at the far end."""
    rs = sorted(records, key=lambda r: _step(r))
    return rs[0].abs_error <= rs[-1].abs_error


def _step(r: ConvergenceRecord) -> float:
    return 1.0 / r.param_value if r.param_name == "N" else r.param_value


FIT_WINDOW = 4


def extrapolate(records: Sequence[ConvergenceRecord], window: int | None = FIT_WINDOW) -> LimitEstimate:
    """Fit v = v_inf + a h^r with h = 1/N or hbar.

    Only the ``window`` records nearest the limit enter the fit (all of them with
    ``window=None``), which keeps pre-asymptotic points such as hbar = 0.5 from
    dominating a three-parameter model.  For each trial r the pair (v_inf, a) is a linear least-squares problem; r is
    chosen in [0.05, 4] by a bounded scalar minimization of the residual.  A
    constant sequence returns the constant; if the optimum sits on a bound the
    Richardson estimate with r = 1 over the last two points is returned instead.
    Fewer than four records give the last value with an infinite residual.
    """
    rs = sorted(records, key=_step, reverse=True)
    if len(rs) < 4:
        return LimitEstimate(rs[-1].quantum if rs else float("nan"), float("nan"), float("inf"), "degenerate")
    if window is not None:
        rs = rs[-max(window, 4):]
    h = np.array([_step(r) for r in rs])
    v = np.array([r.quantum for r in rs])
    if np.ptp(v) <= 1e-14 * max(1.0, float(np.max(np.abs(v)))):
        return LimitEstimate(float(v[-1]), float("nan"), 0.0, "constant")

    def fit(r):
        A = np.column_stack([np.ones_like(h), h**r])
        coef, *_ = np.linalg.lstsq(A, v, rcond=None)
        res = v - A @ coef
        return float(np.sqrt(np.mean(res**2))), coef

    try:
        opt = minimize_scalar(lambda r: fit(r)[0], bounds=(0.05, 4.0), method="bounded", options={"xatol": 1e-10})
        r = float(opt.x)
        resid, coef = fit(r)
        ok = opt.success and np.all(np.isfinite(coef)) and 0.05 + 1e-6 < r < 4.0 - 1e-6
    except (ValueError, np.linalg.LinAlgError):
        ok = False
    if ok:
        return LimitEstimate(float(coef[0]), r, resid)
    h1, h2, v1, v2 = h[-2], h[-1], v[-2], v[-1]
    rich = (h1 * v2 - h2 * v1) / (h1 - h2)
    resid, _ = fit(1.0)
    return LimitEstimate(float(rich), 1.0, resid, "richardson")


# order of limits


def cw_order_parameter(N: int, B: float, J: float, epsilon: float) -> float:
    """m3 = <2 J3 / N> in the ground state of the Dicke matrix with field epsilon (2 J3)."""
    cfg = models.CurieWeissConfig(N=N, B=B, J=J)
    H = models.build_cw_dicke(cfg)
    if epsilon != 0.0:
        H = models.apply_perturbation(H, models.Perturbation("cw_field", epsilon=epsilon), cfg)
    gp = ground_state(H)
    m = (2.0 * np.arange(N + 1) - N) / N
    return float(np.sum(m * gp.vector**2))


def flea_scan_cw(B: float, J: float, epsilon_list, N_list, tol: float = 0.05) -> dict:
    """m3(epsilon, N) and the two order-of-limits verdicts.

    (a) fixed epsilon, largest N: m3 close to -sign(epsilon) sqrt(1 - (B/J)^2);
    (b) fixed N, smallest |epsilon|: |m3| close to 0.
    """
    if not 0.0 < B / J < 1.0:
        raise ValueError("need 0 < B/J < 1")
    eps = [float(e) for e in epsilon_list]
    Ns = [int(n) for n in N_list]
    if any(e == 0.0 for e in eps):
        raise ValueError("epsilon entries must be nonzero")
    for seq in (Ns, eps):
        d = np.diff(seq)
        if len(seq) > 1 and not (np.all(d > 0) or np.all(d < 0)):
            raise ValueError("lists must be monotone")
    m3 = np.array([[cw_order_parameter(N, B, J, e) for N in Ns] for e in eps])
    target = math.sqrt(1.0 - (B / J) ** 2)
    i_big = int(np.argmax(Ns))
    j_small = int(np.argmin(np.abs(eps)))
    a = {e: bool(abs(m3[i, i_big] + math.copysign(target, e)) <= tol) for i, e in enumerate(eps)}
    b = {N: bool(abs(m3[j_small, k]) <= tol) for k, N in enumerate(Ns)}
    return {
        "B": B,
        "J": J,
        "epsilon": eps,
        "N": Ns,
        "m3": m3.tolist(),
        "target": target,
        "tolerance": tol,
        "large_N_selects_branch": a,
        "small_epsilon_restores_symmetry": b,
    }


def flea_schrodinger(hbar_list, flea: models.Perturbation, half_width: float = 3.0, grid_points: int = 2048) -> dict:
    """<q> in the ground state of the flea-perturbed double well for each hbar."""
    if flea.kind != "schrodinger_flea":
        raise ValueError("need a schrodinger_flea perturbation")
    rows = []
    for hb in hbar_list:
        cfg = models.DoubleWellConfig(hbar=float(hb), half_width=half_width, grid_points=grid_points)
        T, x = models.build_double_well(cfg)
        if flea.amplitude != 0.0:
            T = models.apply_perturbation(T, flea, cfg)
        gp = ground_state(T)
        rows.append({"hbar": float(hb), "energy": gp.value, "q_mean": float(np.sum(x * gp.vector**2))})
    by = sorted(rows, key=lambda r: r["hbar"])
    return {
        "flea": {"amplitude": flea.amplitude, "center": flea.center, "width": flea.width},
        "rows": rows,
        "broken_at_small_hbar": bool(by[0]["q_mean"] < -0.8),
        "symmetric_at_large_hbar": bool(abs(by[-1]["q_mean"]) < 0.1),
    }


# acceptance harness


@dataclass
class Check:
    id: str
    description: str
    measured: float
    target: float
    tolerance: float
    mode: str = "abs"  # abs: |m - t| <= tol; le: m <= t + tol; ge: m >= t - tol
    runtime: float = 0.0
    budget: float = float("inf")
    required: bool = True
    conditions: dict = field(default_factory=dict)
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        m, t, tol = self.measured, self.target, self.tolerance
        if not np.isfinite(m):
            ok = False
        elif self.mode == "abs":
            ok = abs(m - t) <= tol
        elif self.mode == "le":
            ok = m <= t + tol
        else:
            ok = m >= t - tol
        return bool(ok and all(self.conditions.values()) and self.runtime <= self.budget)

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "measured": self.measured,
            "target": self.target,
            "tolerance": self.tolerance,
            "mode": self.mode,
            "runtime_s": self.runtime,
            "budget_s": self.budget,
            "required": self.required,
            "conditions": self.conditions,
            "passed": self.passed,
            "detail": self.detail,
        }


def _timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


def criterion_1() -> list[Check]:
    def run():
        return {N: tensor.verify_qnh(N, J=1.0, B=0.5) for N in range(2, 11)}

    vals, dt = _timed(run)
    dev = max(abs(v - tensor.verify_qnh_closed_form(N)) for N, v in vals.items())
    return [Check("1", "exact norm defect of H/N - Q(h) for N = 2..10", dev, 0.0, 1e-10, runtime=dt, budget=10.0,
                  detail={"values": {str(k): v for k, v in vals.items()}})]


def criterion_2() -> list[Check]:
    def run():
        dev = 0.0
        for N in range(1, 9):
            for J in (0.5, 1.0):
                for B in (0.25, 0.5, 0.9):
                    cfg = models.CurieWeissConfig(N=N, B=B, J=J)
                    P = tensor.dicke_project(models.build_cw_tensor(cfg), N)
                    dev = max(dev, float(np.max(np.abs(P - models.build_cw_dicke(cfg).to_dense()))))
        return dev

    dev, dt = _timed(run)
    return [Check("2", "Dicke matrix equals projected tensor Hamiltonian, N <= 8", dev, 0.0, 1e-12, runtime=dt, budget=30.0)]


REQUIRED_ROWS = ("S_z", "S_z^2", "S_x")
PRINTED_ROWS = ("S_z", "S_z^2", "S_x", "S_x^2", "S_y", "S_y^2")


def criterion_3() -> list[Check]:
    def run():
        return {N: quantize.table_reconstruction(N) for N in (1, 2, 5, 10, 20)}

    tab, dt = _timed(run)
    per_row = {r: max(tab[N][r] for N in tab) for r in tab[1]}
    req = max(per_row[r] for r in REQUIRED_ROWS)
    printed = max(per_row[r] for r in PRINTED_ROWS)
    failing = [r for r in PRINTED_ROWS if per_row[r] > 1e-10]
    return [
        Check("3", "upper symbols of S_z, S_z^2, S_x reproduce the spin matrices", req, 0.0, 1e-10,
              runtime=dt, budget=30.0, detail={"max_error_per_row": per_row}),
        Check("3-printed", "all six tabulated upper-symbol rows (failures reported as data)", printed, 0.0, 1e-10,
              runtime=dt, budget=30.0, required=False,
              detail={"failing_rows": failing, "max_error_per_row": per_row}),
    ]


def _sweep_checks(prefix, spec, budget, exact_obs, exact_tol, limits) -> list[Check]:
    recs, dt = _timed(run_limit_sweep, spec)
    checks = []
    for obs, target in limits.items():
        est = extrapolate(select(recs, obs))
        rs = select(recs, obs)
        checks.append(Check(
            f"{prefix}-{obs}", f"extrapolated {obs} -> {target}", est.value, target, 5e-3, runtime=dt, budget=budget,
            conditions={"endpoint_monotone": endpoint_monotone(rs)},
            detail={"rate": est.rate, "residual": est.residual, "method": est.method,
                    "values": {str(r.param_value): r.quantum for r in rs}},
        ))
    rs = select(recs, exact_obs)
    worst = max(abs(r.quantum) for r in rs)
    checks.append(Check(f"{prefix}-{exact_obs}", f"{exact_obs} vanishes at every size", worst, 0.0, exact_tol,
                        runtime=dt, budget=budget))
    return checks


def criterion_4(workers: int = 1) -> list[Check]:
    spec = SweepSpec("curie_weiss", (50, 100, 200, 500, 1000, 2000), B=0.5, J=1.0, workers=workers)
    return _sweep_checks("4", spec, 120.0, "z", 1e-10, {"x": 0.5, "z2": 0.75, "energy_per_site": -0.625})


def criterion_5(workers: int = 1) -> list[Check]:
    spec = SweepSpec("bose_hubbard", (50, 100, 200, 500, 1000), workers=workers)
    return _sweep_checks("5", spec, 180.0, "cos_theta", 1e-8,
                         {"sin_theta_cos_phi": 0.5, "cos2_theta": 0.75, "energy": -0.625})


def criterion_6(workers: int = 1) -> list[Check]:
    spec = SweepSpec("double_well", (0.5, 0.2, 0.1, 0.05, 0.02), workers=workers)
    recs, dt = _timed(run_limit_sweep, spec)
    E = select(recs, "energy")  # ascending hbar
    e_vals = [r.quantum for r in sorted(E, key=lambda r: -r.param_value)]
    decreasing = all(b < a for a, b in zip(e_vals, e_vals[1:]))
    q2 = select(recs, "q2")
    p2 = select(recs, "p2")
    q2_est, p2_est = extrapolate(q2), extrapolate(p2)
    q_worst = max(abs(r.quantum) for r in select(recs, "q"))
    return [
        Check("6-energy", "E0 strictly decreasing in hbar, E0(0.02) < 0.06", E[0].quantum, 0.06, 0.0, mode="le",
              runtime=dt, budget=300.0, conditions={"strictly_decreasing": decreasing},
              detail={"energies": {str(r.param_value): r.quantum for r in E}}),
        Check("6-q", "Husimi <q> = 0 at every hbar", q_worst, 0.0, 1e-6, runtime=dt, budget=300.0),
        Check("6-q2", "Husimi <q^2> at hbar = 0.02 within 0.05 of 1", q2[0].quantum, 1.0, 0.05, runtime=dt, budget=300.0),
        Check("6-q2-limit", "extrapolated <q^2> -> 1", q2_est.value, 1.0, 0.02, runtime=dt, budget=300.0,
              detail={"rate": q2_est.rate, "residual": q2_est.residual, "method": q2_est.method}),
        Check("6-p2-limit", "extrapolated <p^2> -> 0", p2_est.value, 0.0, 0.02, runtime=dt, budget=300.0,
              detail={"rate": p2_est.rate, "residual": p2_est.residual, "method": p2_est.method}),
    ]


def criterion_7() -> list[Check]:
    checks = []
    for name, model in (("curie_weiss", classical.curie_weiss(1.0, 0.5)), ("bose_hubbard", classical.bose_hubbard()),
                        ("double_well", classical.double_well())):
        rep, dt = _timed(classical.ssb_verdict, model)
        checks.append(Check(f"7-{name}", f"SSB verdict and closed-form minima for {name}",
                            rep["closed_form_deviation"], 0.0, 1e-8, runtime=dt,
                            conditions={"verdict_is_SSB": rep["verdict"] == "SSB",
                                        "mixture_invariant": bool(rep["mixture_invariant"])},
                            detail={"minima": rep["minima"], "verdict": rep["verdict"]}))
    return checks


def criterion_8() -> list[Check]:
    scan_big, dt1 = _timed(flea_scan_cw, 0.5, 1.0, [-1e-3, 1e-3], [2000])
    scan_small, dt2 = _timed(flea_scan_cw, 0.5, 1.0, [1e-2, 1e-3, 1e-4, 1e-5, 1e-6], [100])
    flea = models.Perturbation("schrodinger_flea", amplitude=0.1, center=1.0, width=0.2)
    fs, dt3 = _timed(flea_schrodinger, [0.5, 0.2, 0.1, 0.05, 0.02], flea)
    target = scan_big["target"]
    q = {r["hbar"]: r["q_mean"] for r in fs["rows"]}
    return [
        Check("8-neg-field", "m3(eps = -1e-3, N = 2000) -> +0.866", scan_big["m3"][0][0], target, 0.05, runtime=dt1),
        Check("8-pos-field", "m3(eps = +1e-3, N = 2000) -> -0.866", scan_big["m3"][1][0], -target, 0.05, runtime=dt1,
              conditions={"antisymmetric": abs(scan_big["m3"][0][0] + scan_big["m3"][1][0]) <= 1e-8}),
        Check("8-small-field", "m3(N = 100, eps -> 1e-6) -> 0", scan_small["m3"][-1][0], 0.0, 0.05, runtime=dt2,
              detail={"epsilon": scan_small["epsilon"], "m3": [row[0] for row in scan_small["m3"]]}),
        Check("8-flea-small-hbar", "flea <q> at hbar = 0.02 <= -0.8", q[0.02], -0.8, 0.0, mode="le", runtime=dt3),
        Check("8-flea-large-hbar", "flea |<q>| at hbar = 0.5 <= 0.1", abs(q[0.5]), 0.1, 0.0, mode="le", runtime=dt3,
              detail={"q_mean": {str(k): v for k, v in q.items()}}),
    ]


DGR_SIZES = tuple(range(8, 65))


def criterion_9() -> list[Check]:
    Zp, Xp = tensor.Z, tensor.X
    conv, dt0 = _timed(quantize.measure_sphere_convention, Zp, Xp)
    riefs, dt1 = _timed(quantize.quantization_diagnostics, list(range(1, 41)), {"rieffel": (Zp, Xp)}, conv,
                        which=("rieffel",))
    rief_dev = max(abs(r.rieffel_defect - 2.0 / (r.N + 2)) for r in riefs["rows"])
    vn_N = [8, 16, 32, 64]
    vn, dt2 = _timed(quantize.quantization_diagnostics, vn_N, {"zz": (Zp, Zp)}, conv, which=("von_neumann",))
    vd = [r.von_neumann_defect for r in vn["rows"]]
    rate = quantize.fit_rate(vn_N, vd)
    dgr, dt3 = _timed(quantize.quantization_diagnostics, list(DGR_SIZES), {"dgr": (Zp, Xp)}, conv, which=("dgr",))
    ratio = max(r.dgr_defect * r.N for r in dgr["rows"])
    tconv = tensor.measure_dgr_convention(tensor.quantize_poly, tensor.X, tensor.Z, tensor.ball_bracket(tensor.X, tensor.Z), (4,))
    return [
        Check("9-rieffel", "| ||Q'(cos theta)|| - 1 | = 2/(N+2), N <= 40", rief_dev, 0.0, 1e-10, runtime=dt1),
        Check("9-von-neumann", "von Neumann defect rate for f = g = cos theta", rate, 1.0, 0.2, runtime=dt2,
              conditions={"decreasing": all(b < a for a, b in zip(vd, vd[1:]))},
              detail={"N": vn_N, "defects": vd}),
        Check("9-dgr", "N x DGR defect for (cos theta, sin theta cos phi), N = 8..64", ratio, 5.0, 0.0, mode="le",
              runtime=dt0 + dt3, detail={"sphere_convention": {"s": conv[0], "c": conv[1]},
                                         "tensor_convention": {"s": tconv[0], "c": tconv[1]}}),
    ]


def _property_checks(workers: int = 2) -> dict:
    rng = np.random.default_rng(12345)
    out = {}
    # eigen residuals
    T, _ = models.build_double_well(models.DoubleWellConfig(hbar=0.1))
    gp = linalg.ground_pair_parity(T)
    out["eigen_residual"] = gp.residual <= 1e-10 * T.norm_bound
    # Husimi normalization and matrix/scan consistency
    worst = 0.0
    for N in (5, 17, 40):
        psi = rng.normal(size=N + 1) + 1j * rng.normal(size=N + 1)
        psi /= np.linalg.norm(psi)
        worst = max(worst, abs(quantize.husimi_spin_density(psi).normalization - 1.0))
    out["husimi_normalization"] = worst <= 1e-10
    # Berezin positivity and contraction
    f = lambda t, p: (np.cos(t) + 0.3 * np.sin(t) * np.cos(p)) ** 2  # noqa: E731
    M = quantize.berezin_spin_matrix(12, f)
    ev = linalg.dense_eigen(M).values
    out["berezin_positive"] = float(np.min(ev)) >= -1e-10
    out["berezin_contraction"] = float(np.max(np.abs(ev))) <= 1.3**2 + 1e-10
    # symmetrizer idempotence and the placement formula
    A = tensor.pauli_string(["z", "x", "I"])
    S = tensor.full_symmetrizer(A, 3)
    out["symmetrizer_idempotent"] = float(np.max(np.abs(tensor.full_symmetrizer(S, 3) - S))) <= 1e-13
    out["placement_formula"] = float(np.max(np.abs(S - tensor.symmetrize_place(["z", "x"], 3)))) <= 1e-13
    # product-state exactness
    v = np.array([0.3, -0.2, 0.5])
    rho = 0.5 * (np.eye(2) + sum(c * tensor.PAULI[a] for c, a in zip(v, "xyz")))
    R = rho
    for _ in range(3):
        R = np.kron(R, rho)
    p = tensor.Z * tensor.Z + tensor.X * tensor.Y
    out["product_state_exact"] = bool(abs(np.trace(R @ tensor.quantize_poly(p, 4)).real - float(p(*v))) <= 1e-12)
    # determinism across concurrency levels
    spec = SweepSpec("curie_weiss", (20, 40, 80, 160), workers=1)
    a = run_limit_sweep(spec)
    b = run_limit_sweep(replace(spec, workers=workers))
    out["deterministic_across_workers"] = a == b
    return out


def criterion_10(workers: int = 2) -> list[Check]:
    props, dt = _timed(_property_checks, workers)
    cfg = models.DoubleWellConfig(hbar=0.05)
    T, x = models.build_double_well(cfg)
    gp = linalg.ground_pair_parity(T)
    unit = quantize.husimi_schrodinger_expect(gp.vector, 0.05, lambda q, p: np.ones_like(q), x)
    return [
        Check("10-properties", "module invariants hold on the fixture set", float(sum(not v for v in props.values())),
              0.0, 0.0, runtime=dt, budget=300.0, conditions=props),
        Check("10-husimi-unit", "plane Husimi expectation of f = 1", unit, 1.0, 1e-3),
    ]


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}


def acceptance_suite(config: dict | None = None, overrides: dict | None = None, only=None) -> dict:
    """Evaluate the acceptance criteria; failures are data, never exceptions.

    ``overrides`` maps a check id to replacement fields (target, tolerance, mode).
    """
    config = dict(config or {})
    workers = int(config.get("workers", 1))
    checks: list[Check] = []
    for k, fn in CRITERIA.items():
        if only is not None and k not in only:
            continue
        try:
            if k in (4, 5, 6):
                checks.extend(fn(workers))
            elif k == 10:
                checks.extend(fn(max(2, workers)))
            else:
                checks.extend(fn())
        except LabError as exc:
            checks.append(Check(str(k), f"criterion {k} raised {type(exc).__name__}: {exc}", float("nan"), 0.0, 0.0))
    for c in checks:
        for key, val in (overrides or {}).get(c.id, {}).items():
            setattr(c, key, val)
    convention = next((c.detail for c in checks if c.id == "9-dgr"), {})
    required_ok = all(c.passed for c in checks if c.required)
    return {
        "checks": [c.as_dict() for c in checks],
        "conventions": {k: v for k, v in convention.items() if k.endswith("convention")},
        "all_required_passed": required_ok,
    }
