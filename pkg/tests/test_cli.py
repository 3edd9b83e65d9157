import json

import pytest

from horokit.cli import main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_boundary_csv_shape(capsys):
    code, out, _ = run(
        capsys, "boundary", "--group", "zd", "--dim", "2", "--r", "1",
        "--rmax", "12", "--window", "4", "--format", "csv",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("# certificate=stabilized")
    assert len(lines) == 2 + 8  # metadata, header, one row per restriction


def test_boundary_json_report(capsys):
    code, out, _ = run(capsys, "boundary", "--group", "z", "--r", "3", "--rmax", "20", "--window", "5")
    assert code == 0
    data = json.loads(out)
    assert data["schema_version"] == "1"
    assert data["result"]["restrictions"]["count"] == 2
    assert data["result"]["unboundedness"]["passed"] is True


def test_reports_byte_identical(capsys):
    args = ("spectral", "tracial", "--count", "3", "--n", "50", "--seed", "0")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2


def test_gallery_spoke_ray(capsys):
    code, out, _ = run(capsys, "gallery", "spoke-ray", "--check", "--r", "1")
    assert code == 0
    data = json.loads(out)
    gaps = {w["gap"] for w in data["result"]["witnesses"]}
    assert gaps == {"3/2"}


def test_gallery_euclidean_zero(capsys):
    code, out, _ = run(capsys, "gallery", "euclidean-zero", "--check")
    assert code == 0
    assert json.loads(out)["result"]["min_of_max"] == "1"


def test_spectral_tau_closed_form(capsys):
    code, out, _ = run(capsys, "spectral", "tau", "--map", "mobius", "--matrix", "2,0,0,1/2", "--n", "200")
    assert code == 0
    data = json.loads(out)
    assert abs(data["result"]["bound"] - 2 * 0.6931471805599453) < 1e-9


def test_dynamics_parabolic_audit_failure_exit_code(capsys):
    code, out, _ = run(
        capsys, "dynamics", "parabolic", "--fixture", "disk-parabolic", "--n", "50", "--tol", "1e-30"
    )
    assert code == 1  # audit fails against an unreachable tolerance


def test_invalid_input_exit_code(capsys):
    code, _, err = run(capsys, "spectral", "tau", "--map", "mobius", "--matrix", "1,2,3")
    assert code == 2
    assert "error" in err


def test_budget_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("HOROKIT_MAX_BALL", "10")
    code, _, err = run(capsys, "boundary", "--group", "free", "--r", "1", "--rmax", "8", "--window", "2")
    assert code == 3
    assert "ResourceLimitError" in err


def test_extend_mcshane_inline_space(capsys):
    space = json.dumps(
        {"type": "finite", "params": {"matrix": [["0", "1", "2"], ["1", "0", "1"], ["2", "1", "0"]]}}
    )
    code, out, _ = run(
        capsys, "extend", "mcshane", "--space", space, "--domain", "[0]",
        "--values", '["0"]', "--mode", "sup", "--format", "csv",
    )
    assert code == 0
    assert out.strip().splitlines() == ["point,value", "0,0", "1,-1", "2,-2"]


def test_extend_hahn_banach_fixture(capsys):
    code, out, _ = run(capsys, "extend", "hahn-banach", "--fixture", "spoke-ray", "--n", "12")
    assert code == 0
    data = json.loads(out)
    assert set(data["result"]["values"].values()) == {"-1/2"}


def test_reduced_classify(capsys):
    code, out, _ = run(capsys, "reduced", "classify-z", "--anchors=-10:10")
    assert code == 0
    assert json.loads(out)["result"]["count"] == 3


def test_reduced_fixed_point(capsys):
    for fixture in ("z-shift", "halfplane-parabolic", "disk-rotation"):
        code, out, _ = run(capsys, "reduced", "fixed-point", "--fixture", fixture)
        assert code == 0, fixture


def test_validate_metric_inline(capsys):
    code, out, _ = run(capsys, "validate", "metric", "--space", '{"type": "heisenberg"}', "--triples", "500")
    assert code == 0


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "validate", "distortion", "--name", "sqrt", "--out", str(target))
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["result"]["passed"] is True


@pytest.mark.parametrize(
    "command",
    [
        ("boundary",),
        ("extend", "mcshane"),
        ("spectral", "tau"),
        ("dynamics", "parabolic"),
        ("gallery", "spoke-ray"),
        ("reduced", "classify-z"),
        ("validate", "metric"),
    ],
    ids=lambda c: c[0],
)
def test_selftests_pass(capsys, command):
    code, out, _ = run(capsys, *command, "--selftest")
    assert code == 0
    assert "FAIL" not in out
    assert "PASS" in out
