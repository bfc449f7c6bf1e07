import csv
import io
import json
import subprocess
import sys

import pytest

L22 = {"squares": 3, "h": [2, 1, 3], "v": [3, 2, 1]}
XI_UNIT = {"side": "vertical", "coeffs": [["B1", "1"], ["B2", "1"]], "approx": False}
ETA_UNIT = {
    "side": "horizontal",
    "coeffs": [["A1", "1"], ["A2", "1"]],
    "approx": False,
}


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "origeo.cli", *args],
        capture_output=True,
        text=True,
    )


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, data in (
        ("origami", L22),
        ("xi", XI_UNIT),
        ("eta", ETA_UNIT),
    ):
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(data))
        paths[name] = str(p)
    return paths


@pytest.fixture
def report_file(files, tmp_path):
    out = tmp_path / "report.json"
    res = run_cli(
        "geodesic", files["origami"], files["xi"], files["eta"],
        "--out", str(out),
    )
    assert res.returncode == 0, res.stderr
    return str(out)


def test_validate_summary_fields(files):
    res = run_cli("validate", files["origami"])
    assert res.returncode == 0
    data = json.loads(res.stdout)
    assert data["squares"] == 3
    assert data["genus"] == 2
    assert data["coneAngles2Pi"] == [3]
    assert data["intersectionMatrix"] == [[1, 1], [1, 0]]
    labels = [c["id"] for c in data["cylinders"]["horizontal"]]
    assert labels == ["A1", "A2"]


def test_validate_builtin_flag():
    res = run_cli("validate", "--builtin", "quaternion-8")
    assert res.returncode == 0
    assert json.loads(res.stdout)["genus"] == 3


def test_validate_requires_exactly_one_source(files):
    assert run_cli("validate").returncode == 2
    assert (
        run_cli("validate", files["origami"], "--builtin", "l-2-2").returncode == 2
    )


def test_geodesic_report_content(report_file):
    data = json.loads(open(report_file).read())
    lam = float(data["lambda"])
    assert abs(lam - 2.618033988749895) < 1e-10
    assert data["filling"] == "FillingCertified"
    assert data["walshForwardCosine"] > 1 - 1e-9
    assert float(data["area"]) > 0
    assert data["inputs"]["origami"]["squares"] == 3
    assert data["config"]["seed"] == 0


def test_geodesic_deterministic_bytes(files, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        res = run_cli(
            "geodesic", files["origami"], files["xi"], files["eta"],
            "--seed", "3", "--out", str(out),
        )
        assert res.returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_flow_grid_and_columns(report_file):
    res = run_cli(
        "flow", report_file, "--t-min", "-3", "--t-max", "3", "--step", "0.5"
    )
    assert res.returncode == 0, res.stderr
    rows = list(csv.reader(io.StringIO(res.stdout)))
    header, body = rows[0], rows[1:]
    assert header == [
        "t", "width_B1", "width_B2", "height_A1", "height_A2",
        "ext_fv", "ext_fh", "psi_fv", "psi_fh",
        "busemann_lo", "busemann_hi", "d_to_base",
    ]
    assert len(body) == 13
    ts = [float(r[0]) for r in body]
    assert ts == [(-3 + 0.5 * i) for i in range(13)]
    for r in body:
        t = float(r[0])
        assert abs(float(r[header.index("psi_fv")]) + t) <= 1e-12
        assert abs(float(r[header.index("psi_fh")]) - t) <= 1e-12
        assert abs(float(r[header.index("d_to_base")]) - abs(t)) <= 1e-12
        assert abs(float(r[header.index("busemann_lo")]) + t) <= 1e-9
        assert abs(float(r[header.index("busemann_hi")]) + t) <= 1e-9


def test_flow_respects_custom_grid(report_file):
    res = run_cli("flow", report_file, "--t-min", "0", "--t-max", "1", "--step", "0.25")
    body = res.stdout.strip().splitlines()[1:]
    assert len(body) == 5


def test_flow_rejects_empty_grid(report_file):
    res = run_cli("flow", report_file, "--t-min", "2", "--t-max", "-2")
    assert res.returncode == 2


def test_converge_exact_gaps(report_file):
    res = run_cli("converge", report_file, "--n-max", "6", "--eps", "0.05")
    assert res.returncode == 0, res.stderr
    data = json.loads(res.stdout)
    assert [row["gap"] for row in data["exact"]] == [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
    for row in data["exact"]:
        assert row["miyachiLo"] - 1e-12 <= 1.0 <= row["miyachiHi"] + 1e-12
    assert data["jittered"]["note"] == "demonstration, not certificate"
    assert data["deltaProbe"]["status"] == "probe"


def test_converge_zero_jitter_collapses(report_file):
    res = run_cli("converge", report_file, "--n-max", "4", "--eps", "0")
    data = json.loads(res.stdout)
    for row in data["jittered"]["rows"]:
        assert row["proxyLo"] == 0.0 and row["proxyHi"] == 0.0


def test_converge_jitter_stays_bounded(report_file):
    res = run_cli("converge", report_file, "--n-max", "12", "--eps", "0.1")
    data = json.loads(res.stdout)
    for row in data["jittered"]["rows"]:
        assert row["proxyHi"] <= 0.5  # bounded uniformly in n


def test_check_passes_and_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        res = run_cli("check", "--seed", "11", "--out", str(out))
        assert res.returncode == 0, res.stderr
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert data["status"] == "pass"
    assert len(data["suites"]) == 7


def test_check_suite_filter():
    res = run_cli("check", "--suite", "gauss")
    assert res.returncode == 0
    data = json.loads(res.stdout)
    assert [s["name"] for s in data["suites"]] == ["gauss-bonnet"]


def test_check_unknown_suite_exits_config_error():
    assert run_cli("check", "--suite", "nonesuch").returncode == 2


def test_check_negative_tolerance_exits_config_error():
    assert run_cli("check", "--tol", "-1").returncode == 2


def test_missing_file_exits_input_error(tmp_path):
    assert run_cli("validate", str(tmp_path / "nope.json")).returncode == 2


def test_bad_json_exits_input_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{oops")
    assert run_cli("validate", str(p)).returncode == 2


def test_low_genus_exits_input_error(tmp_path):
    p = tmp_path / "torus.json"
    p.write_text(json.dumps({"squares": 2, "h": [2, 1], "v": [1, 2]}))
    res = run_cli("validate", str(p))
    assert res.returncode == 2
    assert "genus" in res.stderr


def test_non_filling_exits_hypothesis_error(files, tmp_path):
    xi = tmp_path / "xi2.json"
    eta = tmp_path / "eta2.json"
    xi.write_text(json.dumps(
        {"side": "vertical", "coeffs": [["B2", "1"]], "approx": False}
    ))
    eta.write_text(json.dumps(
        {"side": "horizontal", "coeffs": [["A2", "1"]], "approx": False}
    ))
    res = run_cli("geodesic", files["origami"], str(xi), str(eta))
    assert res.returncode == 3
    assert "fill" in res.stderr


def test_flow_without_flat_realization_exits_hypothesis_error(files, tmp_path):
    xi = tmp_path / "xi1.json"
    eta = tmp_path / "eta1.json"
    xi.write_text(json.dumps(
        {"side": "vertical", "coeffs": [["B1", "1"]], "approx": False}
    ))
    eta.write_text(json.dumps(
        {"side": "horizontal", "coeffs": [["A1", "1"]], "approx": False}
    ))
    rep = tmp_path / "sub.json"
    assert run_cli(
        "geodesic", files["origami"], str(xi), str(eta), "--out", str(rep)
    ).returncode == 0
    assert run_cli("flow", str(rep)).returncode == 3


def test_unreachable_tolerance_exits_no_convergence(files):
    res = run_cli(
        "geodesic", files["origami"], files["xi"], files["eta"], "--tol", "1e-30"
    )
    assert res.returncode == 4


def test_out_file_matches_stdout(files, tmp_path):
    out = tmp_path / "v.json"
    res = run_cli("validate", files["origami"], "--out", str(out))
    assert res.returncode == 0
    assert out.read_text() == res.stdout
