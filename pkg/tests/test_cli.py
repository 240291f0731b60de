import io
import json
import subprocess
import sys

import numpy as np
import pytest

from oracles import circle_width_closed
from trapeze import io as tio
from trapeze.cli import parse_thetas, resolve_threads, run


def call(*argv):
    buf = io.StringIO()
    status = run(list(argv), stdout=buf)
    return status, buf.getvalue()


def test_inscribe_circle():
    status, text = call("inscribe", "--curve", "circle", "--r", "0.25", "--theta", "1.5708",
                        "--grid-n", "64")
    assert status == 0
    doc = json.loads(text)
    assert doc["schema"] == "trapeze/1" and doc["command"] == "inscribe"
    ins = doc["result"]["inscriptions"]
    assert len(ins) == 1 and ins[0]["family"]
    assert abs(ins[0]["diag_length"] - circle_width_closed(0.25, 1.5708)) < 1e-9


def test_output_is_deterministic():
    argv = ("inscribe", "--curve", "ellipse", "--r", "0.3", "--theta", "1.1", "--grid-n", "64")
    assert call(*argv)[1] == call(*argv)[1]


def test_degrees():
    a = json.loads(call("inscribe", "--curve", "ellipse", "--r", "0.3", "--theta", "90",
                        "--degrees", "--grid-n", "64")[1])
    b = json.loads(call("inscribe", "--curve", "ellipse", "--r", "0.3", "--theta", repr(np.pi / 2),
                        "--grid-n", "64")[1])
    da = sorted(q["diag_length"] for q in a["result"]["inscriptions"])
    db = sorted(q["diag_length"] for q in b["result"]["inscriptions"])
    assert np.allclose(da, db, atol=1e-12)


@pytest.mark.parametrize("argv,code", [
    (("inscribe", "--curve", "circle", "--r", "0.7", "--theta", "1"), "domain_error"),
    (("inscribe", "--r", "1.7"), "domain_error"),
    (("inscribe", "--curve", "circle", "--r", "0.25", "--theta", "4"), "domain_error"),
    (("inscribe", "--curve", "nowhere.json", "--r", "0.25", "--theta", "1"), "domain_error"),
    (("inscribe", "--curve", "circle"), "usage_error"),
    (("frobnicate",), "usage_error"),
])
def test_errors_exit_one_with_an_envelope(argv, code):
    status, text = call(*argv)
    assert status == 1
    assert json.loads(text)["error"]["code"] == code


def test_bowtie_file_is_rejected(tmp_path):
    path = tmp_path / "bowtie.json"
    path.write_text(json.dumps({"kind": "polygon", "vertices": [[0, 0], [1, 1], [1, 0], [0, 1]]}))
    status, text = call("inscribe", "--curve", str(path), "--r", "0.25", "--theta", "1")
    assert status == 1 and "error" in json.loads(text)


def test_verify_duality_and_shrinkout():
    status, text = call("verify", "--check", "duality", "--curve", "fig6", "--r", "0.25")
    assert status == 0 and json.loads(text)["result"]["passed"]
    status, text = call("verify", "--check", "shrinkout", "--curve", "ellipse", "--r", "0.25")
    assert status == 0
    limits = json.loads(text)["result"]["limits"]
    assert limits and all(x["matched"] is not None for x in limits)


def test_failed_check_exits_two():
    # every ellipse branch shrinks out, so there is no quadrisecant pair
    status, text = call("verify", "--check", "duality", "--curve", "ellipse", "--r", "0.25")
    assert status == 2
    assert json.loads(text)["result"]["passed"] is False


def test_mollify_then_constants(tmp_path):
    out = tmp_path / "m.json"
    status, _ = call("mollify", "--curve", "square", "--eps", "0.02", "--out", str(out))
    assert status == 0
    doc = json.loads(out.read_text())
    assert doc["result"]["deviation"] < 0.05
    status, text = call("constants", "--curve", str(out), "--K", "1")
    assert status == 0
    assert 0.3 < json.loads(text)["result"]["mu_K"] < 0.42


def test_branch_writes_csv_and_svg(tmp_path):
    csv, svg = tmp_path / "b.csv", tmp_path / "b.svg"
    status, text = call("branch", "--curve", "ellipse", "--r", "0.25", "--theta-start", "1.5",
                        "--csv", str(csv), "--svg", str(svg), "--grid-n", "64")
    assert status == 0
    assert csv.read_text().splitlines()[0] == "branch,theta,action"
    assert svg.read_text().startswith("<svg")
    types = {b["limit"]["type"] for b in json.loads(text)["result"]["branches"]}
    assert types == {"Shrinkout"}


def test_render(tmp_path):
    svg = tmp_path / "r.svg"
    status, _ = call("render", "--curve", "ellipse", "--r", "0.25", "--theta", "1",
                     "--svg", str(svg), "--grid-n", "64")
    assert status == 0
    text = svg.read_text()
    assert text.count('class="diagonal weight-r"') == 8
    assert text.count('class="diagonal weight-1mr"') == 8


def test_l2_command():
    status, text = call("l2", "--curve", "circle", "--r", "0.25", "--n", "8")
    assert status == 0
    res = json.loads(text)["result"]
    vals = res["proxy"]["l2_values"]
    assert res["triangle"]["passed"]
    assert len(vals) == 7 and np.all(np.diff(vals) > 0)


def test_thread_resolution(monkeypatch):
    monkeypatch.delenv("TRAPEZE_THREADS", raising=False)
    assert resolve_threads(3) == 3
    monkeypatch.setenv("TRAPEZE_THREADS", "2")
    assert resolve_threads(5) == 2


def test_theta_lists():
    assert np.allclose(parse_thetas("0.1,0.2"), [0.1, 0.2])
    assert np.allclose(parse_thetas("0:1:5"), [0, 0.25, 0.5, 0.75, 1])
    assert np.allclose(parse_thetas("90", degrees=True), [np.pi / 2])


def test_seventeen_digits_and_nan():
    text = tio.dumps({"a": 0.1, "b": [1, 2.5], "c": float("nan"), "d": 1 + 2j})
    doc = json.loads(text)
    assert "0.10000000000000001" in text
    assert doc["c"] is None and doc["d"] == [1.0, 2.0]


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "trapeze.cli", "inscribe", "--curve", "circle",
                          "--r", "0.25", "--theta", "1", "--grid-n", "32"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0
    assert json.loads(out.stdout)["schema"] == "trapeze/1"


def test_l2_threshold_near_pi():
    status, text = call("l2", "--curve", "circle", "--r", "0.25", "--n", "16", "--threshold", "0.5")
    near = json.loads(text)["result"]["near_pi"]
    assert status == 0 and near["points"] >= 1 and near["above"] and near["heuristic"]
    status, text = call("l2", "--curve", "circle", "--r", "0.25", "--n", "16", "--threshold", "5")
    assert not json.loads(text)["result"]["near_pi"]["above"]
