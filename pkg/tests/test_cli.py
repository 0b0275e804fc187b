import io
import os
import subprocess
import sys
from contextlib import redirect_stdout

import pytest

from artifact.cli import main, parse_int_list, read_config

REF = os.path.join(os.path.dirname(__file__), "test_charsums.py")


def run(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        rc = main(list(argv))
    return rc, buf.getvalue()


def test_tables_nu():
    rc, out = run("tables", "nu")
    lines = out.splitlines()
    assert rc == 0 and lines[0] == "d,nu" and len(lines) == 25
    assert lines[1] == "3,2" and lines[-1] == "97,5"
    assert "\r" not in out


def test_tables_tgd():
    from test_charsums import TGD

    rc, out = run("tables", "tgd")
    rows = [l.split(",") for l in out.splitlines()[1:]]
    assert {int(r[0]): int(r[2]) for r in rows} == TGD
    assert rows[-1] == ["997", "10", "100"]


def test_tables_exact3design_classes():
    rc, out = run("tables", "exact3design")
    rows = [l.split(",", 2) for l in out.splitlines()[1:]]
    classes = {r[2].rsplit(",", 1)[1] for r in rows}
    assert len(classes) == 12


def test_sigma():
    rc, out = run("sigma", "--d", "7")
    lines = out.splitlines()
    assert len(lines) == 17
    assert lines[0].startswith("index,id_y,parity")


def test_moments_output():
    rc, out = run("moments", "--d", "7", "--n", "1", "--spec", "1,0,0,0", "--csv")
    kv = dict(l.split("=", 1) for l in out.splitlines() if "=" in l and "," not in l)
    assert rc == 0 and abs(float(kv["norm"]) - 1.1884402052221446) < 1e-12
    assert kv["dev_exact"] in ("0", "1")
    rc, out = run("moments", "--d", "3", "--n", "2", "--spec", "4,1;1,0")
    assert rc == 0 and "k=2" in out


def test_sweep_deterministic_and_ordered(monkeypatch):
    monkeypatch.setenv("QDL_THREADS", "4")
    args = ("sweep", "--d", "3:50", "--n", "10", "--quantity", "phi3")
    rc1, a = run(*args)
    monkeypatch.setenv("QDL_THREADS", "1")
    rc2, b = run(*args)
    assert rc1 == rc2 == 0 and a == b
    rows = [r.split(",") for r in a.splitlines()[1:]]
    assert [int(r[0]) for r in rows] == parse_int_list("3:50", primes=True)
    for r in rows:
        d, D = int(r[0]), int(r[0]) ** 10
        assert abs(float(r[5]) - (d + 1) * (D + 2) / (3 * (D + d))) <= 1e-12 * float(r[5])


def test_sweep_unsupported_and_config(tmp_path):
    cfg = tmp_path / "grid.txt"
    cfg.write_text("# grid\nd = 7,13\nn = 1\nk = 1,2\nquantity = shadow-stab-K\nfamily = canonical-magic\nK = 1\n")
    rc, out = run("sweep", "--config", str(cfg))
    rows = [r.split(",") for r in out.splitlines()[1:]]
    assert [r[-1] for r in rows] == ["ok", "unsupported", "ok", "unsupported"]
    assert read_config(str(cfg))["K"] == "1"


def test_design_commands():
    rc, out = run("design", "--d", "5", "--n", "1")
    assert rc == 0 and "certification=exact" in out and "(1/21)" in out
    rc, out = run("design", "--d", "7", "--n", "3")
    assert "orbits=2" in out
    rc, out = run("design", "--table-s", "--dmax", "100")
    assert out.splitlines()[0] == "d,g_tilde_sq,S,class"


def test_verify_suite_exit_code():
    rc, out = run("verify", "--suite", "gram")
    assert rc == 0 and "failed=0" in out


def test_usage_errors():
    with pytest.raises(SystemExit) as e:
        main(["nope"])
    assert e.value.code == 2
    assert main(["moments", "--d", "9", "--n", "1"]) == 2
    assert main(["sweep", "--quantity", "phi3", "--family", "balanced", "--d", "7", "--n", "x"]) == 2
    assert main(["design", "--d", "7"]) == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "artifact", "tables", "nu"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("d,nu\n")
