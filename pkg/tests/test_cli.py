import io
import json
import subprocess
import sys

import pytest

from topiso.cli import RunReport, bench_tasks, run, run_bench
from topiso.generators import generate
from topiso.graph import apply_permutation, write_graph


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    def make(name, g):
        path = tmp_path / name
        write_graph(g, path)
        return str(path)

    return make


def test_refine_p3(files):
    code, out, _ = call("refine", "--k", "1", files("p3.grf", generate("path(3)")))
    assert code == 0 and "2 classes" in out


def test_iso_exit_codes(files):
    g = generate("random_max_degree(12,3)", 4)
    a = files("a.grf", g)
    b = files("b.grf", apply_permutation(g, list(reversed(range(12)))))
    c = files("c.grf", generate("cycle(12)"))
    assert call("iso", a, b, "--h", "5")[0] == 0
    assert call("iso", a, c, "--h", "5")[0] == 1
    c7 = files("c7.grf", generate("cycle(7)"))
    assert call("iso", c7, c7, "--h", "4", "--t", "1")[0] == 2
    assert call("iso", a, a, "--h", "5", "--budget", "1")[0] == 3
    code, out, _ = call("iso", a, b, "--h", "5", "--witness", "--aut")
    assert code == 0 and out.strip()


def test_usage_and_io_errors(files, tmp_path):
    a = files("a.grf", generate("cycle(4)"))
    code, _, err = call("iso", a, a, "--h", "5", "--bogus")
    assert code == 64 and "usage" in err
    assert call("nope")[0] == 64
    assert call("iso", a)[0] == 64
    assert call("iso", a, str(tmp_path / "missing.grf"), "--h", "3")[0] == 66
    bad = tmp_path / "bad.grf"
    bad.write_text("n 2\ne 0 5\n")
    assert call("refine", str(bad))[0] == 65
    assert call("--help")[0] == 0


def test_json_roundtrip(files):
    a = files("a.grf", generate("cycle(6)"))
    code, out, _ = call("iso", a, a, "--h", "4", "--json")
    assert code == 0
    rep = RunReport.from_json(out)
    assert rep.command == "iso" and rep.outcome == "Isomorphic"
    assert RunReport.from_json(rep.to_json()) == rep
    assert all(v >= 0 for v in rep.timings.values())
    assert rep.peak_classes > 0 and rep.nodes > 0
    for cmd in (["refine", a, "--k", "2"], ["closure", a, "--t", "2", "--individualize", "0"],
                ["initial-set", a, "--h", "4", "--t", "2"], ["aut", a, "--h", "4"],
                ["decompose", a, "--h", "4"], ["oracle", "iso", a, a], ["oracle", "topo", a, "--h", "3"],
                ["oracle", "refine", a]):
        code, out, _ = call(*cmd, "--json")
        assert code == 0, cmd
        RunReport.from_json(out)


def test_text_outputs(files):
    a = files("a.grf", generate("cycle(6)"))
    assert "0 1 2 3 4 5" in call("closure", a, "--t", "2", "--individualize", "0")[1]
    assert call("initial-set", a, "--h", "4", "--t", "1")[1].strip() == "DETECTED"
    assert "|Aut| = 12" in call("aut", a, "--h", "5")[1]
    assert call("decompose", a, "--h", "4", "--format", "dot")[1].startswith("graph")
    assert "yes" in call("oracle", "topo", a, "--h", "3")[1]


def test_bench_deterministic():
    tasks = bench_tasks(["random_max_degree({n},3)"], [10, 20, 30], 2, 7, 5, None, 2, 10**6)
    one = [r.without_timings() for r in run_bench(tasks, 1)]
    again = [r.without_timings() for r in run_bench(tasks, 1)]
    par = [r.without_timings() for r in run_bench(tasks, 2)]
    assert one == again == par
    assert all(r["outcome"] == "Isomorphic" for r in one)
    assert all(r["details"]["witness_ok"] for r in one)


def test_bench_cli():
    code, out, _ = call("bench", "--spec", "cycle({n})", "--sizes", "5,6", "--json")
    assert code == 0 and len(json.loads(out)) == 2
    code, out, _ = call("bench", "--json")
    assert code == 0 and json.loads(out) == []
    assert call("bench", "--spec", "nosuch({n})", "--sizes", "5")[0] == 64
    assert call("bench", "--spec", "cycle({n})", "--sizes", "x")[0] == 64
    code, out, _ = call("bench", "--spec", "cycle({n})", "--sizes", "5")
    assert "total Isomorphic=1" in out


def test_console_script(files):
    a = files("a.grf", generate("path(3)"))
    proc = subprocess.run([sys.executable, "-m", "topiso.cli", "refine", a], capture_output=True, text=True)
    assert proc.returncode == 0 and "2 classes" in proc.stdout
