import json

import numpy as np
import pytest

from loopsphere import cli, trigpoly


def run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_random_loop_deterministic_and_on_sphere(tmp_path, capsys):
    code1, out1, _ = run(capsys, ["random-loop", "--k", "3", "--N", "2", "--seed", "7"])
    code2, out2, _ = run(capsys, ["random-loop", "--k", "3", "--N", "2", "--seed", "7"])
    assert code1 == code2 == 0
    assert out1 == out2  # byte-identical given identical flags and seed
    n, radius = trigpoly.loop_from_json(out1)
    assert n.degree == 2 and radius == 1.0
    assert trigpoly.constraint_residual(n, radius).max_abs_coeff() < 1e-12
    code3, out3, _ = run(capsys, ["random-loop", "--k", "3", "--N", "2", "--seed", "8"])
    assert out3 != out1


def test_random_loop_degree_statistics():
    hits = 0
    for seed in range(40):
        n = cli.random_loop(2, 3, 1.0, seed)
        assert trigpoly.constraint_residual(n, 1.0).max_abs_coeff() < 1e-12
        hits += n.degree == 3
    assert hits >= 38  # degenerations are measure-zero


def test_check_great_circle(tmp_path, capsys):
    circle = {
        "k": 2,
        "N": 1,
        "R": 1.0,
        "v": [0.0, 0.0, 0.0],
        "a": [[1.0, 0.0, 0.0]],
        "b": [[0.0, 1.0, 0.0]],
    }
    path = tmp_path / "circle.json"
    path.write_text(json.dumps(circle))
    code, out, _ = run(capsys, ["check", "--input", str(path)])
    assert code == 0
    rec = json.loads(out)
    assert rec["constraint_residual"] == 0.0
    assert rec["stratum"] == "great-circles"


def test_check_rejects_off_sphere(tmp_path, capsys):
    bad = {
        "k": 2,
        "N": 0,
        "R": 1.0,
        "v": [2.0, 0.0, 0.0],
        "a": [],
        "b": [],
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, out, _ = run(capsys, ["check", "--input", str(path)])
    assert code == 3
    assert not json.loads(out)["on_sphere"]


def test_factorize_roundtrip(tmp_path, capsys):
    loop_path = tmp_path / "loop.json"
    rot_path = tmp_path / "rots.json"
    code, _, _ = run(capsys, ["random-loop", "--k", "2", "--N", "3", "--seed", "11",
                              "--output", str(loop_path)])
    assert code == 0
    code, _, _ = run(capsys, ["factorize", "--input", str(loop_path),
                              "--output", str(rot_path)])
    assert code == 0
    rots = json.loads(rot_path.read_text())
    assert len(rots["rotations"]) == 3
    code, out, _ = run(capsys, ["factorize", "--input", str(rot_path)])
    assert code == 0
    rebuilt, radius = trigpoly.loop_from_json(out)
    original, _ = trigpoly.loop_from_json(loop_path.read_text())
    thetas = np.linspace(0, 2 * np.pi, 37, endpoint=False)
    assert np.max(np.abs(rebuilt.eval(thetas) - original.eval(thetas))) < 1e-10
    # The reconstruction passes the constraint check.
    recon_path = tmp_path / "recon.json"
    recon_path.write_text(out)
    code, _, _ = run(capsys, ["check", "--input", str(recon_path)])
    assert code == 0


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, ["spectrum", "--k", "5", "--levels", "6",
                                "--neigs", "2", "--format", "csv"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,lambda,est_error,converged"
    assert len(lines) == 3
    first = lines[1].split(",")
    assert first[0] == "0"
    assert len(first[1]) > 12  # 17 significant digits
    assert first[3] == "true"


def test_gap_report_fields(capsys):
    code, out, _ = run(capsys, ["gap", "--k", "5", "--R", "1.0", "--levels", "4"])
    assert code == 0
    rec = json.loads(out)
    for field in ("k", "R", "lambda0", "lambda1", "gap", "bound_12_over_R2",
                  "lavine_paper", "lavine_classical", "convex", "rayleigh_upper"):
        assert field in rec
    assert rec["gap"] == pytest.approx(rec["lambda1"] - rec["lambda0"])


def test_classify_and_frobenius(capsys):
    code, out, _ = run(capsys, ["classify", "--k", "4", "--format", "csv"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "endpoint,kind,mu1,mu2,log_case"
    assert "limit-circle" in lines[1] and "limit-point" in lines[2]
    code, out, _ = run(capsys, ["frobenius", "--k", "4", "--format", "csv"])
    assert code == 0
    assert out.startswith("endpoint,mu1,mu2,log_case")


def test_veff_volume_ricci_angular(capsys):
    code, out, _ = run(capsys, ["veff", "--k", "3", "--R", "1.0", "--tau", "0.5"])
    assert code == 0
    rec = json.loads(out)
    assert "value" in rec and "endpoint_exponents" in rec

    code, out, _ = run(capsys, ["volume", "--k", "3", "--R", "2.0"])
    assert code == 0
    rec = json.loads(out)
    assert rec["relative_deviation"] < 1e-10

    code, out, _ = run(capsys, ["ricci", "--k", "2", "--t", "0.5", "--format", "csv"])
    assert code == 0
    assert "variety_scalar" in out and "fiber_ricci_ab" in out

    code, out, _ = run(capsys, ["angular", "--k", "2", "--l", "2", "--t", "0.25"])
    assert code == 0
    rows = json.loads(out)
    assert sum(r["multiplicity"] for r in rows) == 5


def test_curvature_report(tmp_path, capsys):
    loop_path = tmp_path / "loop.json"
    run(capsys, ["random-loop", "--k", "2", "--N", "1", "--seed", "5",
                 "--output", str(loop_path)])
    code, out, _ = run(capsys, ["curvature", "--input", str(loop_path)])
    assert code == 0
    rec = json.loads(out)
    assert rec["dim"] == 4
    assert rec["scalar_trace_residual"] < 1e-9


def test_validation_errors(tmp_path, capsys):
    # Malformed loop JSON names the offending field and exits 2.
    path = tmp_path / "bad.json"
    path.write_text('{"k": 2, "N": 1, "R": 1.0, "v": [0.0], "a": [], "b": []}')
    code, _, err = run(capsys, ["check", "--input", str(path)])
    assert code == 2
    assert "constant term" in err
    # Invalid parameter range.
    code, _, err = run(capsys, ["classify", "--k", "1"])
    assert code == 2
    assert "k" in err
    # Unknown flags abort argument parsing.
    with pytest.raises(SystemExit) as exc:
        cli.main(["classify", "--bogus", "3"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_output_file_and_json_roundtrip(tmp_path, capsys):
    out_path = tmp_path / "vol.json"
    code, out, _ = run(capsys, ["volume", "--k", "2", "--output", str(out_path)])
    assert code == 0 and out == ""
    rec = json.loads(out_path.read_text())
    assert rec["k"] == 2
