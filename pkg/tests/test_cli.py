import json
import os
import subprocess
import sys

from octaframe.cli import main
from octaframe.formats import TRAJECTORY_HEADER, read_field_json, validate_field_spec


def test_symmetrize_writes_trajectory(tmp_path, capsys):
    out = tmp_path / "traj.csv"
    code = main(["symmetrize", "--seed", "7", "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == TRAJECTORY_HEADER
    assert len(lines) > 10
    assert "converged" in capsys.readouterr().out


def test_symmetrize_accepts_explicit_start(tmp_path):
    out = tmp_path / "traj.csv"
    code = main(
        [
            "symmetrize",
            "--in",
            "0.2,-0.1,0.4,0.7,0.2,-0.3,0.1",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    first_row = out.read_text().split("\n")[1].split(",")
    assert float(first_row[1]) == 0.2


def test_symmetrize_rejects_malformed_vector(tmp_path, capsys):
    code = main(["symmetrize", "--in", "1,2,3", "--out", str(tmp_path / "t.csv")])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_symmetrize_reports_non_convergence(tmp_path):
    out = tmp_path / "traj.csv"
    code = main(["symmetrize", "--seed", "7", "--max-iters", "3", "--out", str(out)])
    assert code == 2
    assert out.exists()  # partial trajectory still written


def test_symmetrize_unwritable_path(capsys):
    code = main(["symmetrize", "--seed", "1", "--out", "/nonexistent/dir/t.csv"])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_field_opt_end_to_end(tmp_path, capsys):
    spec = {
        "grid": [3, 3, 3],
        "boundary": {"angles": [0.4, 0.9, -0.3]},
        "seed": 11,
        "optimizer": {"max_iters": 4000},
    }
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(spec))
    out = tmp_path / "field.json"
    code = main(["field-opt", "--spec", str(spec_path), "--out", str(out)])
    assert code == 0
    field, history = read_field_json(out)
    assert field.n_nodes == 27
    assert history is not None
    # the emitted document is itself a valid spec
    validate_field_spec(json.loads(out.read_text()))


def test_field_opt_levels_flag(tmp_path):
    spec = {
        "grid": [4, 4, 4],
        "boundary": {"angles": [0.1, 0.2, 0.3]},
        "seed": 1,
    }
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(spec))
    out = tmp_path / "field.json"
    code = main(
        ["field-opt", "--spec", str(spec_path), "--out", str(out), "--levels", "2"]
    )
    assert code == 0
    _, history = read_field_json(out)
    assert len(history) == 2


def test_field_opt_invalid_spec(tmp_path, capsys):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps({"grid": [3, 3, 3], "nodes": []}))
    code = main(
        ["field-opt", "--spec", str(spec_path), "--out", str(tmp_path / "f.json")]
    )
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_field_opt_missing_spec_file(tmp_path, capsys):
    code = main(
        [
            "field-opt",
            "--spec",
            str(tmp_path / "nope.json"),
            "--out",
            str(tmp_path / "f.json"),
        ]
    )
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_glyph_writes_obj(tmp_path):
    out = tmp_path / "g.obj"
    code = main(["glyph", "--octupole", "0,1,0,0,0,0,0", "--out", str(out)])
    assert code == 0
    text = out.read_text()
    assert text.count("\nf ") + text.startswith("f ") == 20 * 4**3


def test_glyph_sign_flip_byte_identical(tmp_path):
    out1 = tmp_path / "g1.obj"
    out2 = tmp_path / "g2.obj"
    assert main(["glyph", "--octupole=0.3,0.5,-0.2,0.1,0,0.7,-0.1", "--out", str(out1)]) == 0
    assert main(["glyph", "--octupole=-0.3,-0.5,0.2,-0.1,-0,-0.7,0.1", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_glyph_rejects_zero_octupole(tmp_path, capsys):
    code = main(["glyph", "--octupole", "0,0,0,0,0,0,0", "--out", str(tmp_path / "g.obj")])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_glyph_rejects_bad_subdiv(tmp_path, capsys):
    code = main(
        [
            "glyph",
            "--octupole",
            "0,1,0,0,0,0,0",
            "--subdiv",
            "0",
            "--out",
            str(tmp_path / "g.obj"),
        ]
    )
    assert code == 1


def test_verify_passes(capsys):
    code = main(["verify", "--samples", "10", "--seed", "1"])
    out = capsys.readouterr().out
    assert code == 0
    assert "10/10 checks passed" in out
    assert "FAIL" not in out


def test_verify_rejects_bad_sample_count(capsys):
    code = main(["verify", "--samples", "0"])
    assert code == 1


def test_unknown_subcommand_exits_one(capsys):
    assert main(["frobnicate"]) == 1


def test_verify_byte_identical_across_thread_counts(tmp_path):
    env1 = dict(os.environ)
    env1.pop("OCTAFRAME_THREADS", None)
    env4 = dict(env1, OCTAFRAME_THREADS="4")
    cmd = [sys.executable, "-m", "octaframe.cli", "verify", "--samples", "10"]
    r1 = subprocess.run(cmd, env=env1, capture_output=True)
    r4 = subprocess.run(cmd, env=env4, capture_output=True)
    assert r1.returncode == 0
    assert r1.stdout == r4.stdout
