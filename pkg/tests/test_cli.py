import subprocess
import sys

from windowalg.cli import main

FRAME = """[frame]
p = 3
r = 0
e = 1
a = 3
N = 6
D = 4
L = 2
E = u + 3
"""

SOLVE_JOB = FRAME + """
[window]
d = 1
c = 0
row = 1

[window]
d = 1
c = 0
row = 1 + u

[solve]
a = 2
"""

MODULE_JOB = FRAME + """
[window]
d = 1
c = 1
row = 1, 0
row = 0, 1

[window]
d = 1
c = 1
row = 1, 0
row = 0, 1

[matrix]
row = 3, 0
row = 0, 3
"""


def run_cli(capsys, args):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_nu_golden(capsys, tmp_path):
    path = write(tmp_path, "f.txt", FRAME.replace("a = 3", "a = 1"))
    code, out = run_cli(capsys, ["nu", path, "--machine"])
    assert code == 0
    assert out == "nu = 1\n"


def test_validate_good_and_bad(capsys, tmp_path):
    good = write(tmp_path, "good.txt", FRAME)
    code, out = run_cli(capsys, ["validate", good, "--machine"])
    assert code == 0
    assert out == "frame = valid\n"
    bad = write(tmp_path, "bad.txt", FRAME.replace("u + 3", "u + 1"))
    code, out = run_cli(capsys, ["validate", bad, "--machine"])
    assert code == 1
    assert "error = a0 not divisible by p" in out
    assert "frame = invalid" in out


def test_validate_window_block(capsys, tmp_path):
    job = FRAME + "\n[window]\nd = 1\nc = 1\nrow = 1, u\nrow = 0, 1\n"
    path = write(tmp_path, "w.txt", job)
    code, out = run_cli(capsys, ["validate", path, "--machine"])
    assert code == 0
    assert "window1 = valid" in out


def test_solve_iso_golden(capsys, tmp_path):
    path = write(tmp_path, "s.txt", SOLVE_JOB)
    code, out = run_cli(capsys, ["solve-iso", path, "--machine"])
    assert code == 0
    assert out == "level = 2\nX[1][1] = 1 + (726)*v\nresidual = 0\n"


def test_module_golden(capsys, tmp_path):
    path = write(tmp_path, "m.txt", MODULE_JOB)
    code, out = run_cli(capsys, ["module", path, "--machine"])
    assert code == 0
    assert "m = 2" in out
    assert "order = 3^2" in out
    assert "module = valid" in out


def test_special_fiber_golden(capsys, tmp_path):
    job = FRAME + "\n[window]\nd = 1\nc = 0\nrow = 1\n"
    path = write(tmp_path, "sf.txt", job)
    code, out = run_cli(capsys, ["special-fiber", path, "--machine"])
    assert code == 0
    assert out == (
        "height = 1\ndim = 1\nnilpotent = true\nA0.row1 = 1\nPhi0.row1 = 1\n"
    )


def test_display_command(capsys, tmp_path):
    job = FRAME + "\n[window]\nd = 0\nc = 1\nrow = 1\n"
    path = write(tmp_path, "d.txt", job)
    code, out = run_cli(capsys, ["display", path, "--machine"])
    assert code == 0
    assert "B[1][1] = (19, 9)" in out
    assert "display = valid" in out


def test_output_is_deterministic(capsys, tmp_path):
    path = write(tmp_path, "s.txt", SOLVE_JOB)
    _, out1 = run_cli(capsys, ["solve-iso", path, "--machine"])
    _, out2 = run_cli(capsys, ["solve-iso", path, "--machine"])
    assert out1 == out2
    _, outh = run_cli(capsys, ["solve-iso", path])
    assert outh == "windowalg solve-iso\n" + out1


def test_parse_error_is_positional(capsys, tmp_path):
    text = FRAME.replace("E = u + 3", "E = u + + 3")
    path = write(tmp_path, "p.txt", text)
    code, out = run_cli(capsys, ["validate", path, "--machine"])
    assert code == 2
    assert "parse_error" in out
    assert "line 9" in out


def test_unknown_variable_is_positional(capsys, tmp_path):
    job = FRAME + "\n[window]\nd = 1\nc = 0\nrow = 1 + t1\n"
    path = write(tmp_path, "v.txt", job)
    code, out = run_cli(capsys, ["validate", path, "--machine"])
    assert code == 2
    assert "parse_error" in out and "line 14" in out


def test_missing_frame_block(capsys, tmp_path):
    path = write(tmp_path, "e.txt", "[window]\nd = 1\nc = 0\nrow = 1\n")
    code, out = run_cli(capsys, ["validate", path, "--machine"])
    assert code == 2
    assert "missing [frame] block" in out


def test_duplicate_frame_block(capsys, tmp_path):
    path = write(tmp_path, "dup.txt", FRAME + "\n" + FRAME)
    code, out = run_cli(capsys, ["validate", path, "--machine"])
    assert code == 2
    assert "duplicate [frame] block" in out


def test_selftest_runs_clean(capsys):
    code, out = run_cli(capsys, ["selftest", "--machine"])
    assert code == 0
    assert out.endswith("selftest = ok\n")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "windowalg.cli", "selftest", "--machine"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "selftest = ok" in proc.stdout


def test_hypothesis_failure_exit_code(capsys, tmp_path):
    job = FRAME + """
[window]
d = 0
c = 1
row = 1

[window]
d = 0
c = 1
row = 4
"""
    path = write(tmp_path, "h.txt", job)
    code, out = run_cli(capsys, ["solve-iso", path, "--machine"])
    assert code == 1
    assert "not congruent to I" in out
