"""End-to-end tests of the command line interface."""

import json
import os
import subprocess
import sys

import pytest

from forestcalc.cli import main


@pytest.fixture(autouse=True)
def no_ambient_cache(monkeypatch):
    monkeypatch.delenv("FORESTCALC_CACHE", raising=False)


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, argv):
    code, out, err = run_cli(capsys, argv)
    return code, json.loads(out), err


# --- enumerate -----------------------------------------------------------------


def test_enumerate_table(capsys):
    code, env, _ = run_json(capsys, ["enumerate", "--n", "2"])
    assert code == 0
    assert env["command"] == "enumerate"
    assert env["config"] == {"n": 2}
    payload = env["payload"]
    assert payload["hom_counts"] == [[6, 0], [24, 8]]
    assert payload["glue_pattern_counts"] == [[1, 0], [4, 1]]
    assert len(payload["objects"]) == 2


def test_enumerate_objects_only(capsys):
    code, env, _ = run_json(capsys, ["enumerate", "--n", "5", "--objects-only"])
    assert code == 0
    assert len(env["payload"]["objects"]) == 7
    assert "homs" not in env["payload"]


def test_enumerate_stratum_filter(capsys):
    code, env, _ = run_json(capsys, ["enumerate", "--n", "2", "--stratum", "2"])
    assert code == 0
    assert len(env["payload"]["objects"]) == 1
    assert "homs" not in env["payload"]
    assert "hom_counts" not in env["payload"]


def test_enumerate_bad_stratum(capsys):
    code, out, err = run_cli(capsys, ["enumerate", "--n", "2", "--stratum", "5"])
    assert code == 2
    assert out == ""
    assert "error:" in err


# --- goodness ------------------------------------------------------------------


def test_goodness_single(capsys):
    code, env, _ = run_json(
        capsys, ["goodness", "--lambda", "(0 1 2)", "--delta", "(0 1)(2)"]
    )
    assert code == 0
    payload = env["payload"]
    assert payload["routes_agree"] is True
    assert payload["good"] is payload["routes"]["excess"]


def test_goodness_sweep(capsys):
    code, env, _ = run_json(capsys, ["goodness", "--lambda", "(0 1 2)", "--all"])
    assert code == 0
    payload = env["payload"]
    assert len(payload["verdicts"]) == 5
    assert payload["bad_count"] == 4


def test_goodness_needs_delta_or_all(capsys):
    code, _, err = run_cli(capsys, ["goodness", "--lambda", "(0 1 2)"])
    assert code == 2
    assert "error:" in err


def test_goodness_json_blocks(capsys):
    code, env, _ = run_json(
        capsys, ["goodness", "--lambda", "[[0,1],[2,3]]", "--all"]
    )
    assert code == 0
    assert env["payload"]["bad_count"] == 10


# --- tspace --------------------------------------------------------------------


def test_tspace_quotient(capsys):
    code, env, _ = run_json(capsys, ["tspace", "--lambda", "(0 1 2)"])
    assert code == 0
    payload = env["payload"]
    assert payload["model"] == "quotient"
    assert payload["homology"]["groups"] == {"2": {"rank": 2, "torsion": []}}


def test_tspace_suspension_agrees(capsys):
    code_a, env_a, _ = run_json(capsys, ["tspace", "--lambda", "(0 1 2)"])
    code_b, env_b, _ = run_json(
        capsys, ["tspace", "--lambda", "(0 1 2)", "--model", "suspension"]
    )
    assert code_a == code_b == 0
    assert env_a["payload"]["homology"]["groups"] == env_b["payload"]["homology"]["groups"]


def test_tspace_bad_partition(capsys):
    code, _, err = run_cli(capsys, ["tspace", "--lambda", "garbage"])
    assert code == 2
    assert "error:" in err


# --- layer ----------------------------------------------------------------------


def test_layer_report(capsys):
    code, env, _ = run_json(capsys, ["layer", "--m", "points:2", "--n", "1"])
    assert code == 0
    payload = env["payload"]
    assert payload["schema"] == "layer-report/1"
    assert payload["coend"]["groups"] == {"1": {"rank": 1, "torsion": []}}
    assert payload["euler_additivity"]["passed"] is True


def test_layer_emit_cells(capsys):
    code, env, _ = run_json(
        capsys, ["layer", "--m", "points:2", "--n", "1", "--emit-cells"]
    )
    assert code == 0
    assert "coend_cells" in env["payload"]


def test_layer_unknown_model(capsys):
    code, _, err = run_cli(capsys, ["layer", "--m", "bogus", "--n", "1"])
    assert code == 2
    assert "error:" in err


def test_layer_model_from_file(capsys, tmp_path):
    model = {
        "cells": [
            {"id": "a", "dim": 0},
            {"id": "b", "dim": 0},
        ]
    }
    path = tmp_path / "two_points.json"
    path.write_text(json.dumps(model), encoding="utf-8")
    code, env, _ = run_json(capsys, ["layer", "--m", str(path), "--n", "1"])
    assert code == 0
    assert env["payload"]["coend"]["groups"] == {"1": {"rank": 1, "torsion": []}}


# --- cube-check -------------------------------------------------------------------


def test_cube_demos(capsys):
    for demo in ("interval", "circle"):
        code, env, _ = run_json(capsys, ["cube-check", "--demo", demo])
        assert code == 0
        assert env["payload"]["acyclic"] is True
    code, env, _ = run_json(capsys, ["cube-check", "--demo", "negative"])
    assert code == 0  # the failure is expected there
    assert env["payload"]["acyclic"] is False
    assert env["payload"]["expected_acyclic"] is False


def test_cube_from_file(capsys, tmp_path):
    data = {
        "model": {
            "cells": [
                {"id": "v0", "dim": 0},
                {"id": "v1", "dim": 0},
                {"id": "e", "dim": 1, "faces": ["v1", "v0"]},
            ]
        },
        "covers": [["v0", "v1", "e"], ["v0", "v1"]],
    }
    path = tmp_path / "cube.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    code, env, _ = run_json(capsys, ["cube-check", "--file", str(path)])
    assert code == 0
    assert env["payload"]["acyclic"] is True
    assert env["payload"]["file"] == "cube.json"


def test_cube_file_missing_keys(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{}", encoding="utf-8")
    code, _, err = run_cli(capsys, ["cube-check", "--file", str(path)])
    assert code == 2
    assert "error:" in err


def test_cube_file_bad_covers_shape(capsys, tmp_path):
    data = {
        "model": {"cells": [{"id": "v", "dim": 0}]},
        "covers": 5,
    }
    path = tmp_path / "bad_covers.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    code, _, err = run_cli(capsys, ["cube-check", "--file", str(path)])
    assert code == 2
    assert "covers" in err


def test_layer_file_wrong_cells_shape(capsys, tmp_path):
    # "cells" as a dim-to-names dict instead of a list of records
    path = tmp_path / "wrong_shape.json"
    path.write_text(
        json.dumps({"cells": {"0": ["p", "q"]}}), encoding="utf-8"
    )
    code, _, err = run_cli(capsys, ["layer", "--m", str(path), "--n", "1"])
    assert code == 2
    assert "error:" in err


def test_cube_nonexistent_file(capsys):
    code, _, err = run_cli(capsys, ["cube-check", "--file", "/no/such/file.json"])
    assert code == 2
    assert "error:" in err


# --- verify ------------------------------------------------------------------------


def test_verify_quick(capsys):
    code, env, _ = run_json(capsys, ["verify", "--level", "quick"])
    assert code == 0
    assert env["payload"]["passed"] is True
    assert len(env["payload"]["checks"]) == 19


def test_verify_byte_identical(capsys):
    _, out_a, _ = run_cli(capsys, ["verify", "--level", "quick"])
    _, out_b, _ = run_cli(capsys, ["verify", "--level", "quick"])
    assert out_a == out_b


def test_verify_fault_exit(capsys):
    code, env, _ = run_json(capsys, ["verify", "--inject-fault"])
    assert code == 1
    assert env["payload"]["passed"] is False


# --- global options -----------------------------------------------------------------


def test_out_writes_file(capsys, tmp_path):
    path = tmp_path / "env.json"
    code, out, _ = run_cli(
        capsys, ["--out", str(path), "enumerate", "--n", "1"]
    )
    assert code == 0
    assert out == ""
    env = json.loads(path.read_text(encoding="utf-8"))
    assert env["command"] == "enumerate"


def test_text_format(capsys):
    code, out, _ = run_cli(capsys, ["--format", "text", "enumerate", "--n", "1"])
    assert code == 0
    assert out.startswith("forestcalc ")
    assert out.rstrip().splitlines()[-1].startswith("digest ")


def test_timings_go_to_stderr(capsys):
    code, out, err = run_cli(capsys, ["--timings", "enumerate", "--n", "1"])
    assert code == 0
    assert "wall" in err
    json.loads(out)  # stdout stays clean


def test_cache_hit_is_byte_identical(capsys, tmp_path):
    cache = str(tmp_path / "cache")
    argv = ["--cache", cache, "tspace", "--lambda", "(0 1)"]
    code_a, out_a, _ = run_cli(capsys, argv)
    assert code_a == 0
    stored = os.listdir(cache)
    assert len(stored) == 1
    code_b, out_b, _ = run_cli(capsys, argv)
    assert code_b == 0
    assert out_a == out_b
    # different config gets its own entry
    run_cli(capsys, ["--cache", cache, "tspace", "--lambda", "(0 1 2)"])
    assert len(os.listdir(cache)) == 2


def test_failures_are_not_cached(capsys, tmp_path):
    cache = str(tmp_path / "cache")
    code, _, _ = run_cli(capsys, ["--cache", cache, "verify", "--inject-fault"])
    assert code == 1
    assert not os.path.exists(cache) or os.listdir(cache) == []


def test_module_entrypoint():
    proc = subprocess.run(
        [sys.executable, "-m", "forestcalc", "enumerate", "--n", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    env = json.loads(proc.stdout)
    assert env["tool"] == "forestcalc"
