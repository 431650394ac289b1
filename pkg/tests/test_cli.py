import json
import subprocess
import sys

import pytest

from graphsync import verify
from graphsync.cli import main
from graphsync.dynamics.reduced import normalize_equation


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate_path3_dg(capsys):
    code, out, _ = run(capsys, "enumerate", "--graph", "path:3", "--class", "DG")
    assert code == 0 and "total 2" in out
    assert "(a, b, a)" in out and "(a, b, c)" in out


def test_enumerate_cube_total(capsys):
    code, out, _ = run(capsys, "enumerate", "--graph", "cube", "--class", "DGl", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["total"] == 142
    assert sum(d["counts"].values()) == 142


@pytest.mark.slow
def test_enumerate_petersen_strict_linear_orbits(capsys):
    code, out, _ = run(capsys, "enumerate", "--graph", "petersen", "--class", "DGl",
                       "--only", "strict-linear", "--orbits")
    assert code == 0 and "orbit classes 2" in out


def test_enumerate_is_deterministic(capsys):
    a = run(capsys, "enumerate", "--graph", "paw", "--format", "json")[1]
    b = run(capsys, "enumerate", "--graph", "paw", "--format", "json")[1]
    assert a == b


def test_classify_paw(capsys):
    code, out, _ = run(capsys, "classify", "--graph", "paw", "--subspace", "a,a,b,a")
    assert code == 0
    assert "strict-exo" in out and "d_A(B) = 3" in out and "d_B(A) = 1" in out


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", "--graph", "path:6", "--subspace", "a,-a,-a,a,a,-a", "--format", "json")
    d = json.loads(out)
    assert d["flags"]["odd_balanced"] and not d["fixed_point"]


def test_classify_path3_not_linear(capsys):
    code, out, _ = run(capsys, "classify", "--graph", "path:3", "--subspace", "a,-a,0", "--format", "json")
    assert code == 0 and json.loads(out)["flags"]["linear_balanced"] is False


def test_lattice_cube_quotient(capsys):
    code, out, _ = run(capsys, "lattice", "--graph", "cube", "--class", "DGl", "--quotient")
    assert code == 0 and "37 classes; quotient is NOT a lattice" in out and "witness:" in out


def test_lattice_files(capsys, tmp_path):
    dot, js = tmp_path / "p6.dot", tmp_path / "p6.json"
    code, _, _ = run(capsys, "lattice", "--graph", "path:6", "--dot", str(dot), "--json", str(js))
    assert code == 0
    labels = {ln.split('label="')[1].split('"')[0] for ln in dot.read_text().splitlines() if "label=" in ln}
    assert len(labels) == 9 and "(a, b, c, -c, -b, -a)" in labels
    assert len(json.loads(js.read_text())["nodes"]) == 9
    assert not list(tmp_path.glob(".tmp-*"))


def test_lattice_cycle3_stdout_unfilled(capsys):
    code, out, _ = run(capsys, "lattice", "--graph", "cycle:3", "--dot", "-")
    assert code == 0 and "digraph" in out and "filled" not in out


def test_lattice_quotient_dot_badges(capsys):
    code, out, _ = run(capsys, "lattice", "--graph", "cycle:3", "--quotient", "--quotient-dot", "--dot", "-")
    assert code == 0 and 'xlabel="3"' in out


@pytest.mark.parametrize("argv,eq", [
    (["--graph", "path:3", "--subspace", "a,0,-a", "--field", "vdp:alpha=2,delta=1"], ["ü = 2(1−u²)u̇ − 2u"]),
    (["--graph", "path:3", "--subspace", "a,a,a", "--field", "generic"], ["ȧ = g(a)"]),
    (["--graph", "path:3", "--subspace", "a,0,-a", "--field", "generic"], ["ȧ = g(a) − h(a)"]),
    (["--graph", "path:6", "--subspace", "a,-a,-a,a,a,-a", "--class", "DGl"], ["ȧ = g(a) − 2h(a)"]),
    (["--graph", "path:6", "--subspace", "a,-a,-a,a,a,-a", "--field", "generic:DGodd"], ["ȧ = g(a) − h(2a)"]),
])
def test_reduce_examples(capsys, argv, eq):
    code, out, _ = run(capsys, "reduce", *argv)
    lines = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert code == 0 and [normalize_equation(s) for s in lines] == [normalize_equation(s) for s in eq]


def test_reduce_c4_cross_terms(capsys):
    code, out, _ = run(capsys, "reduce", "--graph", "cycle:4", "--subspace", "a,b,-a,-b",
                       "--field", "vdp:alpha=1,delta=1,eps=0.1")
    assert code == 0 and "0.1((u2−u1)³ + (−u2−u1)³)" in out


@pytest.mark.parametrize("argv", [
    ["--graph", "path:3", "--subspace", "a,0,-a", "--field", "vdp:alpha=1,gamma=0.5"],
    ["--graph", "paw", "--subspace", "a,a,b,a", "--class", "DG"],
    ["--graph", "path:3", "--subspace", "a,-a,0", "--field", "generic"],
])
def test_reduce_incompatible_exit_5(capsys, argv):
    code, _, err = run(capsys, "reduce", *argv)
    assert code == 5 and "incompatible reduction" in err


def test_reduce_bad_field(capsys):
    assert run(capsys, "reduce", "--graph", "path:3", "--subspace", "a,b,a", "--field", "vdp:zeta=1")[0] == 2


@pytest.mark.parametrize("argv", [
    ["enumerate", "--graph", "nosuch"],
    ["classify", "--graph", "path:3", "--subspace", "a,b"],
    ["classify", "--graph", "path:3", "--subspace", "a,,b"],
    ["enumerate", "--graph", "cycle:2"],
    ["verify", "--graphs", "bogus:3"],
])
def test_invalid_input_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as e:
        main(["enumerate", "--graph", "path:3", "--class", "DGx"])
    assert e.value.code == 2


def test_size_limit_exit_3(capsys):
    assert run(capsys, "enumerate", "--graph", "path:11")[0] == 3
    assert run(capsys, "lattice", "--graph", "path:12")[0] == 3
    assert run(capsys, "classify", "--graph", "path:16", "--subspace", ",".join("a" * 16))[0] == 3


def test_unwritable_exit_4(capsys, tmp_path):
    bad = tmp_path / "missing" / "out.dot"
    assert run(capsys, "lattice", "--graph", "path:3", "--dot", str(bad))[0] == 4


def test_verify_small_passes(capsys):
    code, out, _ = run(capsys, "verify", "--graphs", "path:2..5,cycle:3..5,paw", "--suite", "all")
    assert code == 0 and "0 FAIL, 0 WARN" in out


def test_verify_sizes(capsys):
    code, out, _ = run(capsys, "verify", "--graphs", "cube", "--suite", "sizes")
    assert code == 0 and "0 violations" in out


def test_verify_conjecture_warns_without_failing(capsys, monkeypatch):
    monkeypatch.setattr(verify, "path_conjecture", lambda G, limit: ([verify.path_catalog(4)[0]], []))
    code, out, _ = run(capsys, "verify", "--graphs", "path:4", "--suite", "conjectures")
    assert code == 0 and out.startswith("WARN") and "1 WARN" in out


def test_verify_failure_exit_1(capsys, monkeypatch):
    real = verify.scan_graph

    def broken(G, limit=10):
        s = real(G, limit)
        s = verify.GraphScan(**{**s.__dict__, "odd_not_linear": [verify.path_catalog(3)[0]]})
        return s

    monkeypatch.setattr(verify, "scan_graph", broken)
    code, out, _ = run(capsys, "verify", "--graphs", "path:3", "--suite", "identities")
    assert code == 1 and "FAIL" in out


def test_simulate(capsys, tmp_path):
    cfg = tmp_path / "s.toml"
    csv = tmp_path / "out.csv"
    summ = tmp_path / "summary.json"
    cfg.write_text('graph = "path:3"\nfield = "vdp:alpha=2,delta=1"\nsubspace = "a,0,-a"\n'
                   'steps = 200\nevery = 50\n')
    code, out, _ = run(capsys, "simulate", str(cfg), "--csv", str(csv), "--summary", str(summ))
    assert code == 0
    d = json.loads(out)
    assert d == json.loads(summ.read_text())
    assert d["max_residual"] < 1e-8 and d["diverged"] is False and d["steps"] == 200
    rows = csv.read_text().splitlines()
    assert rows[0].startswith("t,cell1_1,cell1_2") and len(rows) == 1 + 5


@pytest.mark.parametrize("body", [
    'field = "vdp:alpha=1"\n',                                   # no graph
    'graph = "path:3"\nfield = "vdp:alpha=1"\nbogus = 1\n',      # unknown key
    'graph = "path:3"\nfield = "vdp:alpha=1"\ndt = -1\n',
    'graph = "path:3"\nfield = "vdp:alpha=1"\nx0 = "sometimes"\n',
    'graph = "path:3"\nfield = "vdp:alpha=1"\nsubspace = "a,b"\n',
    'graph = "path:3"\nfield = "vdp:alpha=1"\nx0 = [1, 2]\n',
    'graph = "path:3"\nfield = "wave"\n',
    'graph = "path:3\n',                                         # bad TOML
])
def test_simulate_invalid_config_exit_2(capsys, tmp_path, body):
    cfg = tmp_path / "bad.toml"
    cfg.write_text(body)
    assert run(capsys, "simulate", str(cfg))[0] == 2


def test_simulate_missing_file(capsys, tmp_path):
    assert run(capsys, "simulate", str(tmp_path / "nope.toml"))[0] == 2


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "graphsync", "enumerate", "--graph", "path:3", "--class", "DG"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and "total 2" in r.stdout
