import io
import json
import subprocess
import sys

import pytest

from zeroabel.cli import run
from zeroabel.cycles import trivial_projection_space


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), buf)
    return code, buf.getvalue()


def call_json(*argv):
    code, text = call(*argv)
    return code, json.loads(text)


def test_classify_z4_alternating():
    code, out = call_json("classify", "--f", "z^4", "--cycle", "1,-1,1,-1")
    assert code == 0
    assert out["balanced"] is True
    assert out["schema_version"] == 1


def test_moment_command():
    code, out = call_json("moment", "--f", "z^2*(z-1)^2", "--q", "1", "--K", "3")
    assert code == 0
    assert out["moments"] == ["1", "1/30", "1/630"]
    assert out["verdict"] == "Does-Not-Vanish"
    assert out["moment_cycle"]["totally_unbalanced"] is True


def test_solve_z210_from_file(tmp_path):
    C = trivial_projection_space(210)[0]
    path = tmp_path / "cycle.json"
    path.write_text(json.dumps(list(C.weights)))
    code, out = call_json("solve", "--f", "z^210", "--g", "z^2+z^3+z^5+z^7", "--cycle", f"@{path}")
    assert code == 0
    cert = out["certificate"]
    assert cert["status"] == "Vanishes-Trivial"
    assert len(cert["terms"]) == 4
    assert all(t["kind"] == "trivial" for t in cert["terms"])
    assert cert["reconstructs_g"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["roots", "--f", "z^3-1"],
        ["monodromy", "--f", "z^3-3*z"],
        ["blocks", "--f", "(z^2+z)^3"],
        ["zm", "--cycle=-1,2,-2,1,0,0"],
        ["laurent-moment", "--f", "z+1/z", "--g", "z-1/z", "--K", "4"],
        ["hyperelliptic", "--cycle", "1,-1,1,-1", "--kappa", "x^2"],
        ["slowfast", "--f", "z^4/2+z^2/2", "--g0", "z^2+z"],
        ["solve", "--f", "z^4", "--g", "z^3", "--cycle", "1,-1,1,-1", "--table"],
    ],
)
def test_commands_succeed(argv):
    code, text = call(*argv)
    assert code == 0, text
    if "--table" not in argv:
        assert json.loads(text)["command"] == argv[0]


def test_zm_output():
    code, out = call_json("zm", "--cycle=-1,2,-2,1,0,0")
    assert out["forbidden_residues"] == [2, 3, 4]


def test_hyperelliptic_output():
    code, out = call_json("hyperelliptic", "--cycle", "1,-1,1,-1", "--kappa", "x")
    assert out["vanishes"] is False and out["oracle_agrees"] is True


@pytest.mark.parametrize(
    "argv, code, kind",
    [
        (["classify", "--f", "z^", "--cycle", "1,-1"], 1, "parse_error"),
        (["nonsense"], 1, "usage_error"),
        (["classify", "--f", "z^4"], 1, "usage_error"),
        (["classify", "--f", "z^4", "--cycle", "1,1,1,1"], 1, "input_error"),
        (["zm", "--cycle", "1,-1,0,0"], 1, "input_error"),
        (["moment", "--f", "z^2", "--q", "1"], 1, "input_error"),
    ],
)
def test_errors_are_structured(argv, code, kind):
    got, text = call(*argv)
    assert got == code
    err = json.loads(text)["error"]
    assert err["type"] == kind
    assert err["message"]


def test_parse_error_has_position():
    _, out = call_json("roots", "--f", "z^2 + * 3")
    assert out["error"]["position"] == 6


def test_numerical_failure_exit_code(monkeypatch):
    from zeroabel import cli
    from zeroabel.errors import TrackingError

    def boom(args):
        raise TrackingError("synthetic failure")

    monkeypatch.setitem(cli.COMMANDS, "roots", boom)
    code, text = call("roots", "--f", "z^2")
    assert code == 2
    assert json.loads(text)["error"]["type"] == "tracking_error"


def test_unexpected_exception_is_reported(monkeypatch):
    from zeroabel import cli

    def boom(args):
        raise RuntimeError("unexpected")

    monkeypatch.setitem(cli.COMMANDS, "roots", boom)
    code, text = call("roots", "--f", "z^2")
    assert code == 2
    assert json.loads(text)["error"]["type"] == "RuntimeError"


def test_byte_identical_subprocess_runs():
    argv = [sys.executable, "-m", "zeroabel", "solve", "--f", "(z^2+z)^3", "--g", "z^2+z",
            "--cycle", "1,-1,0,0,0,0"]
    a = subprocess.run(argv, capture_output=True, check=False)
    b = subprocess.run(argv, capture_output=True, check=False)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_subprocess_exit_codes():
    bad = subprocess.run([sys.executable, "-m", "zeroabel", "bogus"], capture_output=True)
    assert bad.returncode == 1
    assert json.loads(bad.stdout)["error"]["type"] == "usage_error"
