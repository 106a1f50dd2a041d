import copy
import io
import json
import math

import pytest

from torus_retract import cli, data_path


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def write_config(tmp_path, fixture_config):
    def write(name="calibrated_elbow.json", edit=None):
        data = fixture_config(name)
        if edit:
            edit(data)
        path = tmp_path / f"cfg_{abs(hash(json.dumps(data, sort_keys=True)))}.json"
        path.write_text(json.dumps(data))
        return str(path)
    return write


def report(argv):
    code, out, err = run(argv)
    assert code == 0, err
    rep = json.loads(out)
    assert {"tool", "version", "timestamp", "inputs", "payload"} <= set(rep)
    return rep


def test_classify_straight_benign(write_config):
    rep = report(["classify", "--config", write_config("straight_benign.json")])
    assert rep["payload"]["mode"] == "RETRACT_OK"


def test_classify_75_degrees(write_config):
    path = write_config(edit=lambda d: d["state"].update(theta="75 deg"))
    assert report(["classify", "--config", path])["payload"]["mode"] == "ELBOW_BUCKLING"


def test_missing_diameter_exit_2(write_config):
    path = write_config(edit=lambda d: d["geometry"].pop("diameter"))
    code, out, err = run(["classify", "--config", path])
    assert code == 2
    assert "diameter" in err
    assert "payload" not in json.loads(out)


@pytest.mark.parametrize("edit, word", [
    (lambda d: d["geometry"].update(diamter="50 mm"), "diamter"),
    (lambda d: d["state"].update(theta=45), "theta"),
    (lambda d: d["state"].update(theta="45 mm"), "theta"),
    (lambda d: d["state"].update(theta="200 deg"), "theta"),
    (lambda d: d.update(colour="red"), "colour"),
    (lambda d: d["friction"].update(mu_belt=-0.1), "friction"),
])
def test_config_errors_exit_2(write_config, edit, word):
    code, _, err = run(["classify", "--config", write_config(edit=edit)])
    assert code == 2 and word in err


def test_unreadable_and_invalid_json(tmp_path):
    assert run(["classify", "--config", str(tmp_path / "nope.json")])[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["classify", "--config", str(bad)])[0] == 2


def test_internal_error_exit_1(write_config, monkeypatch):
    def boom(cfg, args):
        raise RuntimeError("kaput")
    monkeypatch.setitem(cli.COMMANDS, "classify", boom)
    code, out, err = run(["classify", "--config", write_config()])
    assert code == 1 and "kaput" in err
    assert "payload" not in json.loads(out)


def test_critical_never_fails_sentinel(write_config):
    path = write_config(edit=lambda d: d["state"].update(pressure_moment="1000 N*m"))
    crit = report(["critical", "--config", path])["payload"]["critical_length"]
    assert crit["status"] == "never_fails" and crit["value"] is None


def test_critical_angle_never_triggers_without_belt_friction(write_config):
    path = write_config(edit=lambda d: d["friction"].update(mu_belt=0.0))
    crit = report(["critical", "--config", path, "--target", "angle"])["payload"]["critical_angle"]
    assert crit["status"] == "never_fails"


def test_critical_table_increases_with_angle(write_config):
    table = report(["critical", "--config", write_config()])["payload"]["table"]
    values = [row["value"] for row in table]
    assert len(values) == 4 and all(a < b for a, b in zip(values, values[1:]))


def test_sweep_single_point(write_config, tmp_path):
    def edit(d):
        d["sweep"] = {"axes": [{"name": "theta", "values": ["30 deg"]}]}
    out = tmp_path / "one.csv"
    report(["sweep", "--config", write_config(edit=edit), "--out", str(out)])
    lines = out.read_bytes().split(b"\n")
    assert lines[-1] == b"" and len(lines) == 3  # header + 1 row + trailing newline
    assert b"\r" not in out.read_bytes()


def test_sweep_csv_columns_and_determinism(write_config, tmp_path):
    path = write_config("fill_sweep_guide_tube.json")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    report(["sweep", "--config", path, "--out", str(a)])
    report(["sweep", "--config", path, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    header = a.read_text(encoding="utf-8").splitlines()[0].split(",")
    assert header[:3] == ["fill_ratio [%]", "theta [deg]", "mode"]
    assert header[3:7] == ["margin_straight_bending [N]", "margin_straight_buckling [N]",
                           "margin_elbow_bending [N*m]", "margin_elbow_buckling [N]"]
    assert "critical_length [m]" in header and "peak_severity" in header
    rows = a.read_text().splitlines()[1:]
    assert [r.split(",")[:2] for r in rows[:2]] == [["100.0", "15.0"], ["100.0", "30.0"]]


def test_sweep_unwritable_path(write_config, tmp_path):
    code, _, err = run(["sweep", "--config", write_config("fill_sweep_bare.json"),
                        "--out", str(tmp_path / "missing" / "x.csv")])
    assert code == 2


def test_sweep_requires_axes(write_config, tmp_path):
    code, _, err = run(["sweep", "--config", write_config(), "--out", str(tmp_path / "x.csv")])
    assert code == 2 and "sweep" in err


def test_simulate_single_step_benign(write_config):
    def edit(d):
        d["simulation"] = {"step": "500 mm"}
    path = write_config("straight_benign.json", edit)
    pay = report(["simulate", "--config", path])["payload"]
    assert pay["outcome"] == "PASSED_BEND" and pay["n_steps"] == 1


def test_simulate_agrees_with_critical(write_config):
    def edit(d):
        d["state"].update(theta="15 deg", buckling_force="5 N")
        d.pop("critical")
    path = write_config(edit=edit)
    sim = report(["simulate", "--config", path])["payload"]
    crit = report(["critical", "--config", path])["payload"]["critical_length"]
    assert sim["failure_mode"] == "ELBOW_BENDING"
    assert abs(sim["L_fail"] - crit["value"]) <= 1e-3


def test_simulate_with_tube_passes_at_15(write_config):
    path = write_config("calibrated_guide_tube.json", lambda d: d["state"].update(theta="15 deg"))
    assert report(["simulate", "--config", path])["payload"]["outcome"] == "PASSED_BEND"


def test_simulate_trace_csv(write_config, tmp_path):
    out = tmp_path / "trace.csv"
    report(["simulate", "--config", write_config(), "--out", str(out)])
    lines = out.read_text().splitlines()
    assert lines[0].startswith("L [m],suppressed,mode")
    assert float(lines[1].split(",")[0]) == 0.5


def test_fit_exact_csv(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("theta_rad,tension_N\n" + "".join(
        f"{t!r},{2 * math.exp(0.55 * t)!r}\n" for t in (0.0, 0.3, 0.6, 0.9)))
    pay = report(["fit", "--samples", str(p)])["payload"]
    assert pay["F0_hat"] == pytest.approx(2.0, rel=1e-12)
    assert pay["mu_belt_hat"] == pytest.approx(0.55, rel=1e-12)


def test_fit_single_angle(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("theta [deg],tension [N]\n30,2.0\n30,2.1\n")
    code, _, err = run(["fit", "--samples", str(p)])
    assert code == 2 and "need >= 2 distinct angles" in err


def test_fit_missing_unit_and_bad_values(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("theta,tension\n0,1\n1,2\n")
    assert run(["fit", "--samples", str(p)])[0] == 2
    p.write_text("theta [deg],tension [N]\n0,1\n10,-2\n")
    assert run(["fit", "--samples", str(p)])[0] == 2


def test_shipped_fixture_fits():
    for name, mu in (("tension_film.csv", 0.55), ("tension_guide_tube.csv", 0.45)):
        pay = report(["fit", "--samples", str(data_path(name))])["payload"]
        assert abs(pay["mu_belt_hat"] - mu) <= 0.01


@pytest.mark.parametrize("name, cmd", [
    ("calibrated_elbow.json", "classify"),
    ("calibrated_elbow.json", "critical"),
    ("calibrated_guide_tube.json", "simulate"),
    ("fill_sweep_bare.json", "sweep"),
])
def test_echo_is_idempotent(tmp_path, name, cmd):
    extra = ["--out", str(tmp_path / "o.csv")] if cmd == "sweep" else []
    first = report([cmd, "--config", str(data_path(name))] + extra)
    echo_path = tmp_path / "echo.json"
    echo_path.write_text(json.dumps(first["inputs"]))
    second = report([cmd, "--config", str(echo_path)] + extra)
    assert second["inputs"] == first["inputs"]
    p1, p2 = copy.deepcopy(first["payload"]), copy.deepcopy(second["payload"])
    if cmd == "sweep":
        for row in p1["rows"] + p2["rows"]:
            row["coords"] = {k: round(v, 12) for k, v in row["coords"].items()}
    assert p1 == p2


def test_numbers_keep_nine_significant_digits(write_config):
    code, out, _ = run(["classify", "--config", write_config(), "--format", "csv"])
    assert code == 0
    cells = out.splitlines()[1].split(",")
    margin = cells[3]
    digits = margin.lstrip("-").replace(".", "").lstrip("0").split("e")[0]
    assert len(digits) >= 9
