import json
import os
import subprocess
import sys

import pytest

from hypatlas.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def lines(text):
    return [json.loads(ln) for ln in text.splitlines() if ln.strip()]


def test_classify_point_T(capsys):
    code, out, _ = run(capsys, "classify", "--degree", "3", "--coeffs", "1,1/3,1/27", "--exact")
    (rec,) = lines(out)
    assert code == 0
    assert rec["id"] == "19" and rec["landmark"] == "T"
    assert rec["partition"] == [3]


def test_classify_E2(capsys):
    code, out, _ = run(capsys, "classify", "--degree", "2", "--coeffs", "0,-1", "--exact")
    (rec,) = lines(out)
    assert code == 0 and rec["memberships"] == ["E"] and rec["mo"] == "P=N"


def test_classify_point_B(capsys):
    code, out, _ = run(capsys, "classify", "--degree", "4", "--coeffs", "1,2/5,3/40,9/1600", "--exact")
    (rec,) = lines(out)
    assert code == 0 and rec["hyperbolic"] == "outside" and rec["memberships"] == ["Δ"]


def test_classify_fixed_field_names(capsys):
    _, out, _ = run(capsys, "classify", "--degree", "3", "--coeffs", "1,-1/4,-1/4", "--exact")
    (rec,) = lines(out)
    assert {"degree", "hyperbolic", "partition", "sp", "mo", "memberships", "id"} <= rec.keys()
    assert (rec["id"], rec["sp"], rec["mo"]) == ("13", "(+,+,-,-)", "P=N<N")


def test_classify_several_points(capsys):
    code, out, _ = run(capsys, "classify", "--degree", "1", "--coeffs", "2", "--coeffs", "-1/2")
    assert code == 0
    assert [r["id"] for r in lines(out)] == ["a>0", "a<0"]


def test_classify_ambiguous_exits_2(capsys):
    code, out, _ = run(capsys, "classify", "--degree", "2", "--coeffs", "1.0,0.250000001")
    (rec,) = lines(out)
    assert code == 2 and len(rec["candidates"]) >= 2


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "--degree", "2", "--coeffs", "1/2,0.5"],
        ["classify", "--degree", "2", "--coeffs", "1,2,3"],
        ["classify", "--degree", "2", "--coeffs", "1,abc"],
        ["classify", "--degree", "2", "--coeffs", "1.0,2.0", "--exact"],
        ["figure", "--curve", "bogus"],
        ["nonsense"],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err


def test_figure_disc_slice(capsys, tmp_path):
    sidecar = tmp_path / "sing.json"
    code, out, _ = run(
        capsys, "figure", "--curve", "disc-slice", "--a", "1", "--b", "0",
        "--range", "-1:1", "--samples", "500", "--singular-sidecar", str(sidecar),
    )
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "t,c,h" and len(rows) == 501
    sing = json.loads(sidecar.read_text())
    kinds = sorted(p["kind"] for p in sing["singular_points"])
    assert kinds == ["cusp", "cusp", "self-intersection"]
    assert {"point": ["-1/8", "1/64"]}.items() <= next(p for p in sing["singular_points"] if p["kind"] == "self-intersection").items()


def test_figure_etilde_slice(capsys):
    code, out, _ = run(capsys, "figure", "--curve", "etilde-slice", "--a", "1", "--b", "0.125", "--samples", "11")
    assert code == 0
    for row in out.splitlines()[1:]:
        _, c, h = map(float, row.split(","))
        assert h == pytest.approx(c * (0.125 - c), abs=1e-15)


def test_figure_pcal(capsys):
    code, out, _ = run(capsys, "figure", "--curve", "pcal", "--samples", "9")
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "u,b,c,h"
    for row in rows[1:]:
        _, b, c, h = map(float, row.split(","))
        assert (b - 2 * c) ** 2 + c == pytest.approx(0, abs=1e-12)


def test_figure_json(capsys):
    code, out, _ = run(capsys, "figure", "--curve", "c3", "--samples", "5", "--format", "json")
    js = json.loads(out)
    assert code == 0 and js["singular_points"][0]["kind"] == "cusp"


def test_verify_jacobian(capsys):
    code, out, _ = run(capsys, "verify", "jacobian", "--degrees", "3:8", "--trials", "100", "--seed", "7")
    rep = json.loads(out)
    assert code == 0 and rep["passed"]
    assert rep["suites"]["jacobian"]["ranks"] == {str(d): [d - 1] for d in range(3, 9)}


def test_verify_hessian(capsys):
    code, out, _ = run(capsys, "verify", "hessian", "--grid", "50")
    rep = json.loads(out)["suites"]["hessian"]
    assert code == 0
    assert rep["misclassified"] == []
    assert set(rep["rank_counts"]) == {"1", "2"}
    assert rep["rank_counts"]["1"] == rep["on_parabola"]


def test_verify_whitney(capsys):
    code, out, _ = run(capsys, "verify", "whitney", "--trials", "1000", "--seed", "1")
    rep = json.loads(out)["suites"]["whitney"]
    assert code == 0 and rep["max_residual"] == "0"


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "all", "--trials", "20")
    rep = json.loads(out)
    assert code == 0 and rep["passed"]
    assert {"jacobian", "transversality", "hessian", "whitney", "resultant-family"} <= rep["suites"].keys()


def test_search_d4_rigid(capsys, tmp_path):
    code, out, _ = run(
        capsys, "search", "--degree", "4", "--samples", "100000", "--seed", "11",
        "--restrict", "a>0", "--out", str(tmp_path),
    )
    rep = json.loads(out)
    assert code == 0
    assert sorted(rep["rigid"]) == ["N<N<N<N", "P<N<P<N"]
    assert {"table.json", "table.csv", "report.json"} <= {p.name for p in tmp_path.iterdir()}


def test_search_d3_canonical(capsys):
    code, out, _ = run(capsys, "search", "--degree", "3", "--samples", "100000")
    rep = json.loads(out)
    assert code == 0
    canon = {e["sp"] for e in rep["canonical"] if e["canonical"]}
    assert {"(+,+,+,+)", "(+,+,-,+)", "(+,+,+,-)"} <= canon
    assert "(+,+,-,-)" not in canon


def test_search_d2(capsys):
    code, out, _ = run(capsys, "search", "--degree", "2", "--samples", "10000")
    rep = json.loads(out)
    assert code == 0
    assert all(e["canonical"] for e in rep["canonical"]) and len(rep["canonical"]) == 4
    assert len(rep["rigid"]) == 4


def test_landmarks(capsys):
    code, out, _ = run(capsys, "landmarks", "--degree", "4", "--name", "B")
    (rec,) = lines(out)
    assert code == 0 and rec["coords"] == ["1", "2/5", "3/40", "9/1600"]


def _cli(*argv, threads):
    env = dict(os.environ, HYPATLAS_THREADS=str(threads))
    return subprocess.run(
        [sys.executable, "-m", "hypatlas", *argv], capture_output=True, env=env, check=False
    )


def test_output_is_byte_identical_across_thread_counts():
    argv = ("search", "--degree", "3", "--samples", "20000", "--seed", "5")
    one, four = _cli(*argv, threads=1), _cli(*argv, threads=4)
    assert one.returncode == four.returncode == 0
    assert one.stdout == four.stdout
    fig = ("figure", "--curve", "s4", "--samples", "200")
    assert _cli(*fig, threads=1).stdout == _cli(*fig, threads=3).stdout
