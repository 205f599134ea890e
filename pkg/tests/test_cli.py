import json
import subprocess
import sys

import jsonschema
import pytest

from msnlab.cli import SCHEMA_PATH, UsageError, bench, main, parse_universe
from msnlab.fixtures import two_route_network
from msnlab.msn import format_network, network

SCHEMA = json.loads(SCHEMA_PATH.read_text())


def run(capsys, *argv):
    """Call main with --json and return (exit code, validated report)."""
    code = main(["--json", *argv])
    out = capsys.readouterr().out
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    assert rep["exit"] == code
    return code, rep


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_dplen_methods(capsys, files):
    star = files("star.txt", "r -> a\nr -> b\nr -> c\n")
    for method in ("dp", "brute", "flowout"):
        code, rep = run(capsys, "dplen", star, "--method", method)
        assert code == 0 and rep["p"] == 3 and rep["method"] == method


def test_human_output(capsys, files):
    star = files("star.txt", "r -> a\nr -> b\n")
    assert main(["dplen", star]) == 0
    assert capsys.readouterr().out.startswith("p(H)=2")


def test_bounds(capsys, files):
    g = files("g.txt", "s -> p1\np1 -> p2\np2 -> t\np1 -> x\ny -> p2\n")
    code, rep = run(capsys, "bounds", g)
    assert code == 0 and rep["upper"] and rep["lower"]
    code, rep = run(capsys, "bounds", g, "--theorem", "T5.4")
    assert code == 2 and rep["status"] == "error"
    out = files("o.txt", "s -> p1\np1 -> p2\np2 -> t\np1 -> x\n")
    code, rep = run(capsys, "bounds", out, "--theorem", "T5.4")
    assert code == 0 and rep["stats"]["c"] == [rep["stats"]["n"]]


def test_accepts_and_sound(capsys, files):
    net = files("net.txt", format_network(two_route_network()))
    g = files("g.txt", "s -> a\na -> t\n")
    h = files("h.txt", "s -> a\n")
    assert run(capsys, "accepts", net, g)[0] == 0
    assert run(capsys, "accepts", net, h)[0] == 1
    code, rep = run(capsys, "sound", net, "--universe", "4")
    assert code == 0 and rep["sound"] is True
    code, rep = run(capsys, "sound", net, "--universe", "a,b", "--method", "cuts")
    assert code == 0
    assert run(capsys, "complete", net, "--universe", "a,b")[0] == 0


def test_unsound_network_exits_one(capsys, files):
    net = files("bad.txt", format_network(network("s' -- t' : *")))
    code, rep = run(capsys, "sound", net)
    assert code == 1 and rep["status"] == "negative"
    assert rep["sound"] is False and rep["witness"]["edges"] == []


def test_sound_budget_exits_three(capsys, files):
    net = files("net.txt", format_network(two_route_network()))
    code, rep = run(capsys, "sound", net, "--universe", "4", "--budget", "1")
    assert code == 3 and rep["status"] == "budget"


def test_sigma_and_min_msn(capsys, files):
    g = files("g.txt", "s -> a\na -> t\nvertex b\n")
    code, rep = run(capsys, "sigma", g)
    assert code == 0 and rep["count"] == 2
    code, rep = run(capsys, "min-msn", g, "--sigma")
    assert code == 0 and rep["m"] == 4
    code, rep = run(capsys, "min-msn", g, "--sigma", "--max-universe", "3")
    assert code == 3


def test_reduce_and_check_cert(capsys, files, tmp_path):
    g = files("g.txt", "s -> p1\np1 -> p2\np2 -> t\np1 -> x\ny -> p2\nf -> x\n")
    out = tmp_path / "certs.json"
    code, rep = run(capsys, "reduce", g, "--kind", "thm51", "--out", str(out))
    assert code == 0 and len(rep["certificates"]) == 3
    code, rep = run(capsys, "check-cert", str(out))
    assert code == 0 and rep["valid"] and len(rep["results"]) == 3

    data = json.loads(out.read_text())
    data[0]["moves"].insert(0, {"op": "replace_source_s", "u": "zz", "v": "p1"})
    data[0]["fingerprints"].insert(0, "0")
    bad = files("bad.json", json.dumps(data))
    code, rep = run(capsys, "check-cert", bad)
    assert code == 1 and rep["results"][0]["reason"] == "precondition" and rep["results"][0]["step"] == 0


def test_reduce_kinds(capsys, files):
    base = files("st.txt", "s -> t\n")
    tree = files("h.txt", "h0 -> h1\nh2 -> h1\n")
    for kind in ("sqrt", "dplen"):
        code, rep = run(capsys, "reduce", base, "--kind", kind, "--tree", tree)
        assert code == 0 and len(rep["certificates"]) == 1
    assert run(capsys, "reduce", base, "--kind", "sqrt")[0] == 2
    path = files("p.txt", "".join(f"{a} -> {b}\n" for a, b in zip(["s", *"abc"], [*"abc", "t"])))
    code, rep = run(capsys, "reduce", path, "--kind", "flowout", "--i", "1")
    assert code == 0
    code, rep = run(capsys, "reduce", path, "--kind", "upper")
    assert code == 0 and rep["sequence"]["graphs"]


def test_construct_a(capsys, tmp_path):
    out = tmp_path / "net.txt"
    code, rep = run(capsys, "construct-a", "--n", "8", "--ell", "2", "--no-check", "--out", str(out))
    assert code == 0 and rep["accepted_all"]
    assert out.read_text().strip()
    code, rep = run(capsys, "construct-a", "--n", "10", "--ell", "3", "--C", "1", "--no-check", "--retries", "1")
    assert code == 1
    code, rep = run(capsys, "construct-a", "--n", "10", "--ell", "3")
    assert code == 2  # n must exceed 20


def test_bench(capsys):
    code, rep = run(capsys, "bench", "--sizes", "100,1000", "--repeat", "1")
    assert code == 0 and [r["n"] for r in rep["rows"]] == [100, 1000]
    assert run(capsys, "bench", "--sizes", "1000,100")[0] == 2
    assert run(capsys, "bench", "--sizes", "x")[0] == 2
    with pytest.raises(UsageError):
        bench([10, 5])


def test_missing_file_is_usage_error(capsys):
    code, rep = run(capsys, "dplen", "/nonexistent/file.txt")
    assert code == 2 and "cannot read" in rep["error"]


def test_parse_error_is_usage_error(capsys, files):
    g = files("g.txt", "s => t\n")
    assert run(capsys, "dplen", g)[0] == 2


def test_threads_flag_and_env(capsys, monkeypatch, files):
    star = files("star.txt", "r -> a\n")
    assert run(capsys, "dplen", star)[1]["threads"] == 1
    monkeypatch.setenv("MSNLAB_THREADS", "3")
    assert run(capsys, "dplen", star)[1]["threads"] == 3
    assert run(capsys, "--threads", "2", "dplen", star)[1]["threads"] == 2
    assert run(capsys, "dplen", star, "--threads", "5")[1]["threads"] == 5
    monkeypatch.setenv("MSNLAB_THREADS", "many")
    assert run(capsys, "dplen", star)[0] == 2


def test_json_flag_position(capsys, files):
    star = files("star.txt", "r -> a\n")
    assert main(["dplen", star, "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["p"] == 2


def test_parse_universe():
    net = network("s' -- t' : s->a")
    assert parse_universe("4", net) == {"s", "t", "a", "u1"}
    assert parse_universe("x,y", net) == {"s", "t", "x", "y"}
    assert parse_universe(None) is None
    with pytest.raises(UsageError):
        parse_universe("2", net)


def test_console_entry_point(tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("r -> a\nr -> b\n")
    proc = subprocess.run([sys.executable, "-m", "msnlab.cli", "--json", "dplen", str(g)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["p"] == 2
    proc = subprocess.run([sys.executable, "-m", "msnlab.cli", "nosuch"], capture_output=True, text=True, check=False)
    assert proc.returncode == 2
