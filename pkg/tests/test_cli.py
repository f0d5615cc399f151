import json

import pytest
from click.testing import CliRunner

from patdist.cli import main
from patdist.distribution import loads


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)

    return invoke


def test_dist_kmp(run):
    for n in ("0", "100", "500"):
        res = run("dist", "--algo", "kmp", "--n", n)
        assert res.exit_code == 0
        assert res.stdout == f"value,probability\n{n},1\n"


def test_dist_horspool_csv_and_json(run, tmp_path):
    res = run("dist", "--algo", "horspool", "--pattern", "ACGTAC", "--n", "100", "--iid", "uniform")
    assert res.exit_code == 0
    d = loads(res.stdout)
    d.check()
    # at least ceil(95/6) windows, each costing between 1 and 6
    assert d.support[0] >= 16 and d.support[-1] <= 570
    assert "states:" in res.stderr and "states:" not in res.stdout
    out = tmp_path / "d.json"
    res = run("dist", "--algo", "bndm", "--pattern", "ACG", "--n", "20", "--format", "json", "--out", str(out))
    assert res.exit_code == 0 and res.stdout == ""
    doc = json.loads(out.read_text())
    assert doc["metadata"]["algorithm"] == "bdm"
    assert doc["metadata"]["n"] == 20


def test_dist_with_iid_and_markov(run, tmp_path):
    res = run("dist", "--algo", "bom", "--pattern", "AC", "--alphabet", "AC", "--iid", "A=0.3,C=0.7", "--n", "10")
    assert res.exit_code == 0
    loads(res.stdout).check()
    spec = {"alphabet": "AC", "order": 1, "probs": {"": {"A": 0.5, "C": 0.5}, "A": {"A": 0.9, "C": 0.1}, "C": {"A": 0.2, "C": 0.8}}}
    path = tmp_path / "mk.json"
    path.write_text(json.dumps(spec))
    res = run("dist", "--algo", "bom", "--pattern", "AC", "--alphabet", "AC", "--markov", str(path), "--n", "10")
    assert res.exit_code == 0
    loads(res.stdout).check()


def test_dist_errors(run):
    res = run("dist", "--algo", "bom", "--pattern", "AX", "--n", "10")
    assert res.exit_code == 2
    res = run("dist", "--algo", "bom", "--pattern", "AC", "--alphabet", "AC", "--iid", "A=0.5,C=0.6")
    assert res.exit_code == 2 and "SUM_NOT_ONE" in res.stderr
    res = run("dist", "--algo", "horspool", "--pattern", "ACGTAC", "--state-cap", "10")
    assert res.exit_code == 2 and "state cap" in res.stderr


def test_compare_self_and_pair(run):
    res = run("compare", "--algo", "bom", "--algo", "bom", "--pattern", "ACGT", "--n", "50")
    assert res.exit_code == 0
    assert loads(res.stdout).as_dict() == {0: 1.0}
    res = run("compare", "--algo", "horspool", "--algo", "bndm", "--pattern", "CGA", "--n", "30", "--format", "json")
    doc = json.loads(res.stdout)
    meta = doc["metadata"]
    assert meta["p_less"] + meta["p_equal"] + meta["p_greater"] == pytest.approx(1.0)
    res = run("compare", "--algo", "bom", "--pattern", "AC")
    assert res.exit_code != 0


def test_sweep_small(run):
    res = run("sweep", "--m", "2")
    assert res.exit_code == 0
    rows = res.stdout.strip().splitlines()
    assert rows[0].startswith("m,algorithm,unminimized")
    assert "2,horspool,48,16,4,4.75,5,False" in rows
    assert run("sweep", "--m", "6").exit_code != 0


def test_verify_command(run):
    res = run("verify", "--max-m", "2", "--max-n", "6")
    assert res.exit_code == 0 and res.stdout.startswith("PASS")


def test_simulate_deterministic(run):
    args = ("simulate", "--algo", "horspool", "--pattern", "ACG", "--n", "30", "--samples", "200", "--seed", "5")
    a, b = run(*args), run(*args)
    assert a.exit_code == 0 and a.stdout == b.stdout
    one = run("simulate", "--algo", "bom", "--pattern", "ACG", "--n", "30", "--samples", "1")
    assert len(loads(one.stdout)) == 1
    chk = run(*args, "--check")
    assert chk.exit_code == 0 and "z=" in chk.stderr


def test_stats(run, tmp_path):
    out = tmp_path / "d.csv"
    run("compare", "--algo", "horspool", "--algo", "bdm", "--pattern", "CGA", "--n", "30", "--out", str(out))
    res = run("stats", str(out))
    assert res.exit_code == 0
    assert "mean" in res.stdout and "P(<0)" in res.stdout
