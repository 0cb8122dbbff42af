"""Built-in example families, the suite runner, and the CLI surface."""

import json
import subprocess
import sys

import numpy as np
import pytest

from weakf.errors import ConfigError
from weakf.examples import (
    RunConfig,
    build_paper_example,
    build_structure,
    build_unit_tangent_flat,
    discrepancy_flags,
    run_suite,
)
from weakf.cli import main

from conftest import sample_points


def test_run_config_roundtrip():
    cfg = RunConfig(example="paper", n=1, s=2, beta=1.5, samples=7, seed=3)
    assert RunConfig.from_dict(cfg.to_dict()) == cfg


def test_run_config_rejects_unknown_example():
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"example": "nope"})


def test_run_config_rejects_bad_beta():
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"example": "paper", "beta": -1.0})


def test_build_structure_dispatch():
    S = build_structure(RunConfig(example="t1flat", n=1))
    assert S.dim == 3 and S.s == 1


def test_suite_overall_pass_on_both_families():
    for cfg in (
        RunConfig(example="paper", n=1, s=2, beta=2.0, samples=3, seed=1),
        RunConfig(example="t1flat", n=2, samples=3, seed=1),
    ):
        doc = run_suite(cfg)
        assert doc.overall == "pass"
        names = [c.name for c in doc.checks]
        assert "structure-axioms" in names and "condition-A" in names


def test_suite_report_schema():
    doc = run_suite(RunConfig(example="t1flat", n=1, samples=2, seed=9))
    data = doc.to_dict()
    assert set(data) == {"version", "config", "checks", "flags", "overall"}
    for c in data["checks"]:
        assert set(c) == {
            "name",
            "paper_ref",
            "hypotheses",
            "samples",
            "max_residual",
            "mean_residual",
            "tolerance",
            "verdict",
        }


def test_suite_json_is_deterministic(tmp_path):
    cfg = RunConfig(example="paper", n=1, s=1, beta=2.0, samples=3, seed=4)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run_suite(cfg).write(a)
    run_suite(cfg).write(b)
    assert a.read_bytes() == b.read_bytes()


def test_discrepancy_flags_paper_example():
    S = build_paper_example(2, 2, 2.0)
    flags = {f["name"]: f for f in discrepancy_flags(S, sample_points(S, 3))}
    # the frame bracket matches coefficient 2*beta, not the printed 4*beta
    br = flags["bracket-coefficient"]
    assert br["residual_2beta"] < 1e-9 and br["residual_4beta"] > 1.0
    cov = flags["nabla-E1-F1-coefficient"]
    assert cov["residual_beta"] < 1e-9 and cov["residual_2beta"] > 1.0
    wit = flags["condition-B-witness"]
    assert wit["residual_c"] < 1e-9 and wit["residual_2c"] > 1.0
    gt = flags["frame-ground-truth"]
    assert gt["residual_deta"] < 1e-10 and gt["residual_phi"] < 1e-10


def test_splitting_sign_flag_prefers_plus():
    S = build_paper_example(2, 2, 2.0)
    flags = {f["name"]: f for f in discrepancy_flags(S, sample_points(S, 3))}
    sg = flags["splitting-sign"]
    assert sg["residual_plus"] < 1e-9
    assert sg["residual_minus"] > 1.0


# -- CLI -------------------------------------------------------------------


def _run(*argv):
    return main(list(argv))


def test_cli_validate_ok(capsys):
    rc = _run("validate", "--example", "t1flat", "--n", "1", "--samples", "2")
    out = capsys.readouterr().out
    assert rc == 0
    assert "axioms: pass" in out


def test_cli_classify_ok(capsys):
    rc = _run("classify", "--example", "paper", "--n", "1", "--s", "1",
              "--beta", "2.0", "--samples", "2")
    assert rc == 0
    assert "weak_almost_S" in capsys.readouterr().out


def test_cli_check_single_and_all(capsys):
    assert _run("check", "prop41", "--example", "t1flat", "--n", "1",
                "--samples", "2") == 0
    assert _run("check", "all", "--example", "t1flat", "--n", "1",
                "--samples", "2") == 0


def test_cli_unknown_check_exits_2(capsys):
    assert _run("check", "nonsense", "--example", "t1flat", "--n", "1") == 2
    assert "config error" in capsys.readouterr().err


def test_cli_nullity_fit(capsys):
    rc = _run("nullity-fit", "--example", "t1flat", "--n", "2", "--samples", "3")
    out = capsys.readouterr().out
    assert rc == 0
    assert "kappa=" in out and "mu_identifiable=True" in out


def test_cli_suite_roundtrip(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "example": "paper", "n": 1, "s": 1, "beta": 1.0,
        "samples": 2, "seed": 6,
    }))
    out = tmp_path / "report.json"
    rc = _run("suite", "--config", str(cfg), "--out", str(out))
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["overall"] == "pass"
    assert report["version"] == "0.1.0"


def test_cli_suite_missing_config_exits_2(tmp_path, capsys):
    rc = _run("suite", "--config", str(tmp_path / "absent.json"),
              "--out", str(tmp_path / "r.json"))
    assert rc == 2


def test_cli_bad_tol_exits_2(capsys):
    rc = _run("validate", "--example", "t1flat", "--n", "1", "--tol", "oops")
    assert rc == 2


def test_cli_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "weakf.cli", "validate", "--example",
         "t1flat", "--n", "1", "--samples", "2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
