import json

import numpy as np
import pytest

from confsasaki.identities import (CHECK_IDS, REGISTRY, Accumulator, ConfigError, RunConfig, Target, _outcome,
                                   build_space, expand_jobs, parse_id, run_suite, strip_timing, thread_count)
from confsasaki.terms import REL_FLOOR, Balance, relative


def run(space, factor, imm, checks, **kw):
    return run_suite(RunConfig([Target(space, factor, imm, tuple(checks))], **kw))


def one(space, factor, imm, check, **kw):
    return run(space, factor, imm, [check], **kw)["checks"][0]


# -- status logic on synthetic balances ------------------------------------------------

def _exact():
    return Balance().add_lhs("a", 1.0).add("b", 1.0)


def _off(by):
    return Balance().add_lhs("a", 1.0).add("b", 1.0 - by)


def test_status_pass():
    acc = Accumulator("x")
    acc.add("x", _exact(), _exact())
    assert _outcome(acc, 1e-7, None)["status"] == "pass"


def test_status_pass_with_erratum_names_group():
    acc = Accumulator("x")
    display = Balance().add_lhs("a", 1.0).add("b", 0.5)
    derived = Balance().add_lhs("a", 1.0).add("b", 0.5).add("fix", 0.5)
    acc.add("x", display, derived)
    out = _outcome(acc, 1e-7, None)
    assert out["status"] == "pass_with_erratum" and out["pass"] is True
    assert out["errata"] == ["x:fix"]


def test_status_fail_on_derived_or_condition():
    acc = Accumulator("x")
    acc.add("x", None, _off(1e-3))
    assert _outcome(acc, 1e-7, None)["status"] == "fail"
    acc = Accumulator("x")
    acc.add("x", None, _exact())
    acc.condition("c", False)
    assert _outcome(acc, 1e-7, None)["status"] == "fail"


def test_optional_component_does_not_fail():
    acc = Accumulator("x")
    acc.add("x", None, _exact())
    acc.add("side", None, _off(0.5), required=False)
    assert _outcome(acc, 1e-7, None)["status"] == "pass"


def test_soft_hypothesis_gives_not_applicable():
    acc = Accumulator("x")
    acc.add("x", None, _off(0.5))
    out = _outcome(acc, 1e-7, "hypothesis fails: y")
    assert out["status"] == "not_applicable" and out["pass"] is None and out["components"]


def test_relative_floor():
    assert relative(1e-16, 0.0) == pytest.approx(1e-16 / REL_FLOOR)
    assert relative(2.0, 4.0) == 0.5


# -- configuration ------------------------------------------------------------------------

def test_parse_id():
    assert parse_id("quad:c=0.2,center=[0.1;0;-1]") == ("quad", {"c": 0.2, "center": [0.1, 0.0, -1.0]})
    assert parse_id("sasakian:n=2") == ("sasakian", {"n": 2})
    assert parse_id("const") == ("const", {})


@pytest.mark.parametrize("space,factor", [("sphere:n=1", "const"), ("sasakian:n=1", "cubic:a=1"),
                                          ("sasakian:n=7", "const"), ("sasakian:n=1", "linear:axis=9")])
def test_bad_space_or_factor(space, factor):
    with pytest.raises(ConfigError):
        build_space(space, factor)


def test_validation_errors():
    with pytest.raises(ConfigError):
        RunConfig([Target(checks=("eq9.9",))]).validate()
    with pytest.raises(ConfigError):
        RunConfig([Target()], tol=0.0).validate()
    with pytest.raises(ConfigError):
        RunConfig([Target()], samples=0).validate()
    with pytest.raises(ConfigError):
        expand_jobs(RunConfig([Target("sasakian:n=1", "const", "cr_r7", ("thm5.1",))]))
    with pytest.raises(ConfigError):
        thread_count(-1)


def test_empty_check_list_gives_empty_report():
    r = run("sasakian:n=1", "const:c=0", None, [])
    assert r["checks"] == []
    assert r["summary"]["all_passed"] is True


def test_all_expands_without_submanifold_checks():
    ids = [j.check_id for j in expand_jobs(RunConfig([Target("sasakian:n=1", "const:c=0")]))]
    assert ids and all(not REGISTRY[i].needs_immersion for i in ids)
    assert set(CHECK_IDS) >= set(ids)


def test_explicit_submanifold_check_without_immersion_is_not_applicable():
    rec = one("sasakian:n=1", "const:c=0", None, "eq2.15")
    assert rec["status"] == "not_applicable" and rec["reason"] == "needs an immersion"


def test_hypothesis_failure_is_not_applicable():
    rec = one("sasakian:n=1", "const:c=0", "anti_xaxis_r3", "thm3.1")
    assert rec["status"] == "not_applicable" and "invariant" in rec["reason"]


def test_determinism_and_threads():
    cfg = dict(samples=3, probes=2, seed=11)
    a = run("sasakian:n=1", "quad:c=0.2", "anti_y0_plane_r3", ["eq2.11", "eq4.1", "eq4.2"], threads=1, **cfg)
    b = run("sasakian:n=1", "quad:c=0.2", "anti_y0_plane_r3", ["eq2.11", "eq4.1", "eq4.2"], threads=3, **cfg)
    assert json.dumps(strip_timing(a), sort_keys=True) == json.dumps(strip_timing(b), sort_keys=True)
    c = run("sasakian:n=1", "quad:c=0.2", "anti_y0_plane_r3", ["eq2.11", "eq4.1", "eq4.2"], seed=12, samples=3,
            probes=2)
    assert strip_timing(c)["checks"] != strip_timing(a)["checks"]


# -- behaviour of individual checks -----------------------------------------------------

def test_eq2_1_sensitivity_is_monotone():
    rels = [one(f"sasakian:n=1,phi_scale={1 + e}", "linear_z:a=0.3", None, "eq2.1", samples=4)["relative_residual"]
            for e in (1e-6, 1e-4, 1e-2)]
    assert rels[0] < rels[1] < rels[2]
    assert rels[2] >= 1e-4
    assert one("sasakian:n=1", "linear_z:a=0.3", None, "eq2.1", samples=4)["relative_residual"] <= 1e-12


def test_eq2_10_reports_phi_coefficient_erratum():
    rec = one("sasakian:n=1", "linear_z:a=0.5", None, "eq2.10", samples=4)
    assert rec["status"] == "pass_with_erratum"
    assert rec["errata"] == ["eq2.10:erratum:phi_coefficient"]


def test_eq4_2_localises_single_group():
    rec = one("sasakian:n=1", "linear:a=0.5,axis=1", "anti_y0_plane_r3", "eq4.2", samples=6)
    assert rec["status"] == "pass_with_erratum"
    assert rec["errata"] == ["eq4.2:omega_h"]
    flagged = [g["label"] for g in rec["term_groups"] if g["max_residual"] > 1e-7]
    assert flagged == ["omega_h"]


def test_prop4_2_codimension_one():
    for factor in ("const:c=0.3", "linear:a=0.5,axis=1", "quad:c=0.2"):
        rec = one("sasakian:n=1", factor, "anti_y0_plane_r3", "prop4.2", samples=4)
        assert rec["pass"] is True, (factor, rec["reason"], rec["conditions"])
        assert all(rec["conditions"].values())


def test_thm4_3_trivial_recurrence():
    rec = one("sasakian:n=1", "const:c=0.3", "anti_xaxis_r3", "thm4.3", samples=4)
    assert rec["status"] in ("pass", "pass_with_erratum")
    assert rec["metrics"]


def test_gauss_on_non_flat_factor():
    rec = one("sasakian:n=2", "quad:c=0.2", "anti_surface_r5:warp=0.3", "eq2.15", samples=3)
    assert rec["pass"] is True and rec["relative_residual"] <= 1e-7


def test_report_is_json_serialisable():
    r = run("sasakian:n=1", "quad:c=0.05", "anti_y0_plane_r3", ["eq2.8", "eq2.16"], samples=2, probes=1)
    again = json.loads(json.dumps(r))
    assert again["checks"][0]["id"] == "eq2.8"
    assert {"curvature_sign", "phi"} <= set(again["conventions"])
