import json
import subprocess
import sys

import pytest

from cyclic_loci.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_poset(capsys):
    code, out, _ = run(["poset", "-k", "2", "-l", "2", "-n", "4"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["elements"] == 5 and rep["ranks_above_bottom"] == 2


def test_poset_dot(capsys):
    code, out, _ = run(["poset", "-k", "3", "-l", "2", "-n", "6", "--format", "dot"], capsys)
    assert code == 0 and out.startswith("digraph") and out.count("->") == 10
    code, out, _ = run(["poset", "-k", "3", "-l", "2", "-n", "6", "--format", "dot", "--order", "bridge"], capsys)
    assert code == 0 and out.count("->") == 6


def test_verify_ptolemy_with_p(capsys):
    code, out, err = run(["verify", "ptolemy", "-k", "3", "-l", "2", "-p", "4", "--samples", "20"], capsys)
    rep = json.loads(out)
    assert code == 0 and "PASS ptolemy" in err
    assert rep["suites"]["ptolemy"]["cases"][0]["params"]["n"] == 8
    assert rep["suites"]["ptolemy"]["max_residual"] < 1e-8


def test_scan(capsys):
    code, out, _ = run(["scan", "-k", "4", "-n", "8", "-l", "2"], capsys)
    rep = json.loads(out)
    assert (rep["count"], rep["orbit_count"]) == (42, 12)


def test_other_commands(capsys, tmp_path):
    for argv in (["tptest", "-k", "2", "-l", "2", "-n", "8", "--samples", "5"],
                 ["seed", "-k", "3", "-l", "4", "-n", "12"],
                 ["mutate", "-k", "3", "-l", "2", "-n", "6", "--sequence", "0,1,0"],
                 ["exchange-graph", "-k", "2", "-l", "4", "-n", "8"],
                 ["sample", "-k", "3", "-l", "3", "-n", "6", "--perm", "4,6,5"],
                 ["components", "-k", "2", "-l", "2", "-n", "4"],
                 ["chains", "-k", "3", "-l", "2", "-n", "8"]):
        code, out, _ = run(argv, capsys)
        assert code == 0, argv
        json.loads(out)
    code, _, _ = run(["exchange-graph", "-k", "2", "-l", "3", "-n", "6", "--format", "dot",
                      "--out", str(tmp_path / "g.dot")], capsys)
    assert code == 0 and (tmp_path / "g.dot").read_text().count("--") == 6


def test_deterministic_output(capsys):
    argv = ["verify", "gsv", "--seed", "7", "--samples", "5"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b


@pytest.mark.parametrize("argv", [
    ["poset", "-k", "2", "-l", "2"],
    ["poset", "-k", "2", "-l", "2", "-n", "4", "--tol", "0.5"],
    ["verify", "ptolemy", "-k", "2", "-l", "2", "-n", "8", "-p", "3"],
    ["scan", "-k", "2", "-l", "2", "-n", "4", "--format", "dot"],
    ["mutate", "-k", "2", "-l", "2", "-n", "4", "--sequence", "3"],
])
def test_bad_configuration(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and err.startswith("error:")


def test_unknown_flag():
    r = subprocess.run([sys.executable, "-m", "cyclic_loci.cli", "poset", "--bogus"], capture_output=True)
    assert r.returncode != 0


def test_console_script():
    r = subprocess.run(["cyclic-loci", "components", "-k", "2", "-l", "1", "-n", "4"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and len(json.loads(r.stdout)["components"]) == 6
