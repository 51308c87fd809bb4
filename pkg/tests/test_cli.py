import shutil
import subprocess
import sys

import pytest

from eqwreath.cli import UsageError, main, parse_assign, parse_support


@pytest.fixture
def files(tmp_path):
    (tmp_path / "comm.eq").write_text("# commutator\nx1 a1 x1^-1 a1^-1\n")
    (tmp_path / "sq.eq").write_text("x1^2 a1\n")
    (tmp_path / "forced.eq").write_text("x1 a1^-1\n")
    (tmp_path / "bad.eq").write_text("x1 y1\n")
    (tmp_path / "t248.twr").write_text("ztower 2 4 8\n")
    (tmp_path / "t24.twr").write_text("ztower 2 4\n")
    (tmp_path / "z2.grp").write_text("cayley 2\n0 1\n1 0\n")
    (tmp_path / "s3.grp").write_text("perm 3\n(1 2)\n(1 2 3)\n")
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_helpers():
    assert parse_assign("a1=3,a2=-1") == [3, -1]
    assert parse_support("f1@-1=1,f2@0=0") == {(1, -1): 1, (2, 0): 0}
    for bad in ["a2=1", "a1=x", "b1=1", "a1"]:
        with pytest.raises(UsageError):
            parse_assign(bad)
    with pytest.raises(UsageError):
        parse_support("g1@0=1")


def test_solve(capsys, files):
    code, out, _ = run(capsys, "solve", "--group", files / "s3.grp", "--system", files / "comm.eq",
                       "--assign", "a1=4")
    assert code == 0 and out == "status=solved\ngroup=s3\nx1=0\n"
    code, out, _ = run(capsys, "solve", "--group", "cyclic:2", "--system", files / "sq.eq",
                       "--assign", "a1=1")
    assert code == 1 and out == "status=no-solution\ngroup=Z2\n"


def test_solvable_and_scan(capsys, files):
    code, out, _ = run(capsys, "solvable", "--group", "catalog:Z2", "--system", files / "sq.eq")
    assert code == 1 and out == "status=not-solvable\ngroup=Z2\nwitness=a1=1\n"
    code, out, _ = run(capsys, "solvable", "--group", "catalog:Q8", "--system", files / "comm.eq")
    assert code == 0 and out == "status=solvable\ngroup=Q8\n"
    code, out, _ = run(capsys, "scan", "--system", files / "sq.eq", "--max-order", 8)
    assert code == 1 and out == "status=counterexample\ngroup=Z2\norder=2\nwitness=a1=1\n"
    code, out, _ = run(capsys, "scan", "--system", files / "comm.eq", "--max-order", 6)
    assert code == 0 and out == "status=no-counterexample\nmax_order=6\n"


def test_locality(capsys, files):
    code, out, _ = run(capsys, "locality", "--trials", 200, "--seed", 4)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "trials=200" and "violation=0" in lines
    code2, out2, _ = run(capsys, "locality", "--trials", 200, "--seed", 4, "--workers", 3)
    assert out2 == out
    code, out, _ = run(capsys, "locality", "--trials", 50, "--seed", 4, "--tower", files / "t248.twr")
    assert code == 0 and "violation=0" in out


def test_xn(capsys, files):
    code, out, _ = run(capsys, "xn", "--system", files / "forced.eq", "--tower", files / "t24.twr",
                       "--H", files / "z2.grp", "--assign", "a1=2")
    assert code == 0 and out == "level=2 size=1\n2\n"
    code, out, _ = run(capsys, "xn", "--system", files / "forced.eq", "--tower", files / "t24.twr",
                       "--H", files / "z2.grp", "--assign", "a1=2", "--level", 1, "--witnesses")
    assert out.splitlines()[:2] == ["level=1 size=1", "0"]
    assert out.splitlines()[2].startswith("witness level=1 u=0 f=")
    code, out, _ = run(capsys, "xn", "--system", files / "sq.eq", "--tower", files / "t24.twr",
                       "--H", "cyclic:2", "--assign", "a1=1")
    assert code == 1 and out == "level=2 size=0\n"


def test_pipeline(capsys, files):
    args = ["pipeline", "--system", files / "comm.eq", "--tower", files / "t248.twr",
            "--H", files / "z2.grp", "--assign", "a1=1", "--support", "f1@-1=1,f1@0=1"]
    code, out, _ = run(capsys, *args)
    assert code == 0 and out.endswith("verdict=PASS\n")
    _, again, _ = run(capsys, *args, "--workers", 4)
    assert again == out
    code, out, _ = run(capsys, "pipeline", "--system", files / "sq.eq", "--tower",
                       files / "t248.twr", "--H", files / "z2.grp", "--assign", "a1=1")
    assert code == 1 and "xn[1]=0" in out and out.endswith("verdict=FAIL\n")


@pytest.mark.parametrize("argv", [
    ["solve", "--group", "missing.grp", "--system", "x.eq"],
    ["solve", "--group", "cyclic:2", "--system", "{bad}"],
    ["solve", "--group", "catalog:Z2", "--system", "{comm}", "--assign", "a1=1,a3=0"],
    ["pipeline", "--system", "{comm}", "--tower", "{t24}", "--H", "cyclic:2",
     "--assign", "a1=1", "--support", "f1@9=1"],
])
def test_errors_exit_2(capsys, files, argv):
    subst = {"{bad}": files / "bad.eq", "{comm}": files / "comm.eq", "{t24}": files / "t24.twr"}
    code, out, err = run(capsys, *[subst.get(a, a) for a in argv])
    assert code == 2 and out == "" and err.startswith("error=")


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve"])
    assert exc.value.code == 2


def test_console_script(files):
    exe = shutil.which("eqwreath")
    cmd = [exe] if exe else [sys.executable, "-m", "eqwreath.cli"]
    res = subprocess.run(cmd + ["scan", "--system", str(files / "sq.eq"), "--max-order", "4"],
                         capture_output=True, text=True)
    assert res.returncode == 1 and res.stdout.startswith("status=counterexample")
