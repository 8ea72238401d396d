import math

import numpy as np
import pytest

from semiclassical import experiments as ex
from semiclassical import models
from semiclassical.experiments import ConvergenceRecord, SweepSpec


def synthetic(values, Ns, classical=0.75):
    return [ConvergenceRecord("curie_weiss", "N", float(N), "z2", float(v), classical) for N, v in zip(Ns, values)]


def test_extrapolate_power_law():
    Ns = [50, 100, 200, 500, 1000, 2000]
    est = ex.extrapolate(synthetic([0.75 - 1.0 / N for N in Ns], Ns))
    assert est.value == pytest.approx(0.75, abs=1e-9)
    assert est.rate == pytest.approx(1.0, abs=1e-4)


def test_extrapolate_constant_and_short():
    Ns = [10, 20, 40, 80]
    est = ex.extrapolate(synthetic([0.3] * 4, Ns))
    assert est.value == 0.3 and est.method == "constant"
    short = ex.extrapolate(synthetic([0.1, 0.2, 0.25], Ns[:3]))
    assert short.value == 0.25 and short.residual == math.inf


def test_extrapolate_hbar_records():
    hb = [0.5, 0.2, 0.1, 0.05, 0.02]
    recs = [ConvergenceRecord("double_well", "hbar", h, "q2", 1.0 - 0.4 * h**1.5, 1.0) for h in hb]
    est = ex.extrapolate(recs)
    assert est.value == pytest.approx(1.0, abs=1e-8)
    assert est.rate == pytest.approx(1.5, abs=1e-4)


def test_record_invariants():
    r = ConvergenceRecord("curie_weiss", "N", 10.0, "x", 0.4, 0.5, abs_error=123.0)
    assert r.abs_error == pytest.approx(0.1)
    recs = ex.sort_records(synthetic([0.1, 0.2], [20, 10]) + [r])
    assert [(x.observable, x.param_value) for x in recs] == [("x", 10.0), ("z2", 10.0), ("z2", 20.0)]


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(model="curie_weiss", params=(10, 5, 20)),
        dict(model="curie_weiss", params=(1, 10)),
        dict(model="curie_weiss", params=(10, 20), observables=("q",)),
        dict(model="double_well", params=(0.1, 0.005)),
        dict(model="ising", params=(10,)),
        dict(model="bose_hubbard", params=()),
    ],
)
def test_sweep_spec_validation(kwargs):
    with pytest.raises(ValueError):
        SweepSpec(**kwargs)


def test_small_cw_sweep_records():
    recs = ex.run_limit_sweep(SweepSpec("curie_weiss", (20, 40, 80)))
    assert len(recs) == 3 * len(ex.CW_OBSERVABLES)
    assert recs == ex.sort_records(recs)
    for r in ex.select(recs, "z"):
        assert abs(r.quantum) < 1e-10
    x = ex.select(recs, "x")
    assert x[-1].abs_error < x[0].abs_error


def test_small_bh_and_dw_sweeps():
    recs = ex.run_limit_sweep(SweepSpec("bose_hubbard", (20, 40)))
    assert all(abs(r.quantum) < 1e-8 for r in ex.select(recs, "cos_theta"))
    recs = ex.run_limit_sweep(SweepSpec("double_well", (0.5, 0.2), grid_points=512))
    e = ex.select(recs, "energy")
    assert e[0].quantum < e[1].quantum
    assert all(abs(r.quantum) < 1e-6 for r in ex.select(recs, "q"))


def test_sweep_deterministic_across_workers():
    spec = SweepSpec("curie_weiss", (20, 40, 60))
    a = ex.run_limit_sweep(spec)
    b = ex.run_limit_sweep(SweepSpec("curie_weiss", (20, 40, 60), workers=2))
    assert a == b


def test_cw_field_antisymmetry():
    for N in (10, 60):
        a = ex.cw_order_parameter(N, 0.5, 1.0, 1e-3)
        b = ex.cw_order_parameter(N, 0.5, 1.0, -1e-3)
        assert a == pytest.approx(-b, abs=1e-10)
    assert ex.cw_order_parameter(60, 0.5, 1.0, 0.0) == pytest.approx(0.0, abs=1e-12)


def test_flea_scan_branches():
    scan = ex.flea_scan_cw(0.5, 1.0, [-1e-2, 1e-2], [400])
    assert scan["large_N_selects_branch"] == {-1e-2: True, 1e-2: True}
    small = ex.flea_scan_cw(0.5, 1.0, [1e-2, 1e-6], [4])
    assert small["small_epsilon_restores_symmetry"][4]
    with pytest.raises(ValueError):
        ex.flea_scan_cw(0.5, 1.0, [0.0], [10])
    with pytest.raises(ValueError):
        ex.flea_scan_cw(1.5, 1.0, [1e-3], [10])


def test_flea_zero_amplitude_is_symmetric():
    out = ex.flea_schrodinger([0.1], models.Perturbation("schrodinger_flea", amplitude=0.0), grid_points=1024)
    assert abs(out["rows"][0]["q_mean"]) < 1e-10


def test_mirrored_flea_flips_sign():
    right = ex.flea_schrodinger([0.05], models.Perturbation("schrodinger_flea", amplitude=0.1, center=1.0), grid_points=1024)
    left = ex.flea_schrodinger([0.05], models.Perturbation("schrodinger_flea", amplitude=0.1, center=-1.0), grid_points=1024)
    qr, ql = right["rows"][0]["q_mean"], left["rows"][0]["q_mean"]
    assert qr < -0.8
    assert ql == pytest.approx(-qr, abs=1e-8)


def test_check_modes():
    assert ex.Check("a", "", 0.9, 1.0, 0.1).passed
    assert not ex.Check("a", "", 0.8, 1.0, 0.1).passed
    assert ex.Check("a", "", 0.5, 1.0, 0.0, mode="le").passed
    assert not ex.Check("a", "", 0.5, 1.0, 0.0, mode="ge").passed
    assert not ex.Check("a", "", float("nan"), 1.0, 1.0).passed
    assert not ex.Check("a", "", 1.0, 1.0, 0.0, conditions={"x": False}).passed
    assert not ex.Check("a", "", 1.0, 1.0, 0.0, runtime=2.0, budget=1.0).passed


def test_tampered_tolerance_is_flagged():
    good = ex.acceptance_suite(only={1})
    assert good["all_required_passed"]
    bad = ex.acceptance_suite(only={1}, overrides={"1": {"target": 1.0}})
    assert not bad["all_required_passed"]
    assert not bad["checks"][0]["passed"]
