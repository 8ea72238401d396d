"""Acceptance criteria at their stated tolerances, one verdict line per criterion.

Nothing here is relaxed to make a criterion pass; a criterion that cannot be met
fails and its measured values are printed.
"""

from functools import lru_cache

import pytest

from semiclassical import experiments

from .conftest import ACCEPTANCE_LINES


@lru_cache(maxsize=None)
def checks(k: int) -> dict:
    rep = experiments.acceptance_suite(only={k})
    return {c["id"]: c for c in rep["checks"]}


def verdict(label: str, ids, k: int) -> bool:
    cs = checks(k)
    missing = [i for i in ids if i not in cs]
    assert not missing, f"criterion {k} produced no check {missing}: {list(cs)}"
    ok = all(cs[i]["passed"] for i in ids)
    parts = []
    for i in ids:
        c = cs[i]
        parts.append(f"{i}: measured={c['measured']:.6g} target={c['target']:.6g} tol={c['tolerance']:.3g}"
                     f"{'' if c['passed'] else ' FAILED'}")
    line = f"{'PASS' if ok else 'FAIL'} {label:<44s} " + "; ".join(parts)
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def report_failure(k, ids):
    cs = checks(k)
    return "\n".join(f"{i}: {cs[i]}" for i in ids if not cs[i]["passed"])


def run(label, ids, k):
    ok = verdict(label, ids, k)
    assert ok, report_failure(k, ids)


def test_criterion_1_exact_norm_oracle():
    run("1 exact norm oracle", ["1"], 1)


def test_criterion_2_dicke_tensor_equivalence():
    run("2 Dicke/tensor equivalence", ["2"], 2)


def test_criterion_3_unconditional_symbol_rows():
    run("3 symbol rows S_z, S_z^2, S_x", ["3"], 3)


def test_criterion_3_all_printed_symbol_rows():
    cs = checks(3)
    failing = cs["3-printed"]["detail"]["failing_rows"]
    if failing:
        print(f"printed rows not reproducing their operators: {failing}")
    run("3 all six printed symbol rows", ["3-printed"], 3)


def test_criterion_4_curie_weiss_limit():
    run("4 Curie-Weiss N sweep", ["4-x", "4-z2", "4-energy_per_site", "4-z"], 4)


def test_criterion_5_bose_hubbard_limit():
    run("5 Bose-Hubbard N sweep", ["5-sin_theta_cos_phi", "5-cos2_theta", "5-energy", "5-cos_theta"], 5)


def test_criterion_6_double_well_limit():
    run("6 double-well hbar sweep", ["6-energy", "6-q", "6-q2", "6-q2-limit", "6-p2-limit"], 6)


def test_criterion_7_ssb_verdicts():
    run("7 SSB verdicts", ["7-curie_weiss", "7-bose_hubbard", "7-double_well"], 7)


def test_criterion_8_large_n_field_selects_branch():
    run("8 field at N=2000 selects a branch", ["8-neg-field", "8-pos-field"], 8)


def test_criterion_8_small_field_restores_symmetry():
    run("8 N=100, epsilon -> 1e-6 restores symmetry", ["8-small-field"], 8)


def test_criterion_8_schrodinger_flea():
    run("8 Schrodinger flea", ["8-flea-small-hbar", "8-flea-large-hbar"], 8)


def test_criterion_9_deformation_diagnostics():
    run("9 deformation diagnostics", ["9-rieffel", "9-von-neumann", "9-dgr"], 9)


def test_criterion_10_property_suites():
    run("10 property suites", ["10-properties", "10-husimi-unit"], 10)
