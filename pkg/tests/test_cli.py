from __future__ import annotations

import csv
import json

import pytest

from modderiv.cli import main
from modderiv.report import validate


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    data = json.loads(out)
    validate(data)
    return data, out


def test_analyze_power_law(capsys):
    data, _ = report(capsys, "analyze", "--fn", "pow:0.5", "--point", "0", "--modulus", "pow:0.5")
    assert data["tool"] == "modderiv" and data["command"] == "analyze"
    (pt,) = data["points"]
    fwd = pt["sides"]["Forward"]
    assert fwd["modular_derivative"]["status"] == "converged"
    assert fwd["modular_derivative"]["value"] == pytest.approx(1.0, abs=1e-12)
    assert "Backward" not in pt["sides"]


def test_analyze_grid_classical_derivatives(capsys):
    data, _ = report(capsys, "analyze", "--fn", "expr:x^2", "--interval", "0,1", "--grid", "11",
                     "--modulus", "linear")
    assert len(data["points"]) == 11
    for pt in data["points"]:
        for side in pt["sides"].values():
            md = side["modular_derivative"]
            assert md["status"] == "converged"
            assert md["value"] == pytest.approx(2 * pt["x"], abs=1e-5)
    assert data["set_level"]["total_variation"] == pytest.approx(1.0)
    assert data["set_level"]["discontinuities"] == []


def test_analyze_with_beta_and_empirical(capsys):
    data, _ = report(capsys, "analyze", "--fn", "cubic", "--point", "0.5", "--beta", "0.5",
                     "--modulus", "empirical")
    side = data["points"][0]["sides"]["Forward"]
    assert side["fractional_velocity"]["value"] == pytest.approx(0.0, abs=1e-6)
    assert side["omega_derivative"]["limit"]["value"] == 1


def test_same_seed_gives_identical_bytes(capsys):
    argv = ("analyze", "--fn", "xsin1x", "--point", "0", "--point", "0.3", "--seed", "7")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b and a


def test_workers_do_not_change_output(capsys):
    base = ("analyze", "--fn", "expr:abs(x-0.5)", "--interval", "0,1", "--grid", "17")
    _, a, _ = run(capsys, *base)
    _, b, _ = run(capsys, *base, "--workers", "4")
    ja, jb = json.loads(a), json.loads(b)
    ja["config"].pop("workers"), jb["config"].pop("workers")
    assert ja == jb


def test_flags_override_config_file(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"fn": "pow:0.5", "points": [0.25], "modulus": "linear",
                               "steps": 20}))
    data, _ = report(capsys, "analyze", "--config", str(cfg), "--modulus", "pow:0.5")
    assert data["config"]["modulus"] == "pow:0.5"
    assert data["config"]["steps"] == 20
    assert data["config"]["points"] == [0.25]


def test_config_file_unknown_key(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"fn": "cubic", "points": [0.5], "colour": "red"}))
    assert run(capsys, "analyze", "--config", str(cfg))[0] == 2


def test_out_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert main(["analyze", "--fn", "sin", "--point", "1", "--out", str(out)]) == 0
    validate(json.loads(out.read_text()))


@pytest.mark.parametrize("argv, code", [
    (("analyze", "--csv", "missing.csv", "--point", "0"), 3),
    (("analyze", "--fn", "expr:2*+x", "--point", "0"), 2),
    (("analyze", "--fn", "nosuch", "--point", "0"), 2),
    (("analyze", "--fn", "pow:0.5", "--point", "-1"), 2),
    (("analyze", "--fn", "cubic"), 2),
    (("analyze", "--fn", "cubic", "--point", "0.5", "--modulus", "bogus"), 2),
    (("analyze", "--fn", "cubic", "--point", "0.5", "--ratio", "2"), 2),
    (("svc", "50"), 2),
    (("svc", "-1"), 2),
    (("classify", "--point", "0"), 2),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_malformed_csv_is_a_data_error(capsys, tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("x,y\n0,1\nfoo,bar\n")
    assert run(capsys, "analyze", "--csv", str(p), "--point", "0")[0] == 3


def test_csv_input(capsys, tmp_path):
    p = tmp_path / "lin.csv"
    with p.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y"])
        for i in range(101):
            w.writerow([i / 100, 3 * i / 100])
    data, _ = report(capsys, "analyze", "--csv", str(p), "--point", "0.5", "--eps0", "0.01",
                     "--steps", "10")
    md = data["points"][0]["sides"]["Forward"]["modular_derivative"]
    assert md["value"] == pytest.approx(3.0, abs=1e-9)


def test_svc_command(capsys, tmp_path):
    data, _ = report(capsys, "svc", "1")
    assert data["intervals"] == [[0, 0.375], [0.625, 1]]
    assert data["remaining_length"] == 0.75
    data, _ = report(capsys, "svc", "0")
    assert data["intervals"] == [[0, 1]] and data["remaining_length"] == 1
    data, _ = report(capsys, "svc", "30")
    assert data["intervals"] is None


def test_svc_emit_plot(capsys, tmp_path):
    path = tmp_path / "cdf.csv"
    data, _ = report(capsys, "svc", "4", "--emit-plot", str(path))
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["x", "y"]
    ys = [float(r[1]) for r in rows[1:]]
    assert len(ys) == data["plot"]["points"]
    assert ys[0] == 0 and ys[-1] == 1 and ys == sorted(ys)


@pytest.mark.parametrize("fn, point, kind", [("pow:0.5", "0", "singular"),
                                             ("expr:x^2", "1", "lipschitz")])
def test_classify(capsys, fn, point, kind):
    data, _ = report(capsys, "classify", "--fn", fn, "--point", point)
    side = data["points"][0]["sides"]["Forward"]
    assert side["kind"] == kind


def test_classify_constant(capsys):
    data, _ = report(capsys, "classify", "--fn", "const:2", "--point", "0.5")
    side = data["points"][0]["sides"]["Forward"]
    assert side["kind"] == "lipschitz" and side["ratio_limit"]["value"] == 0
    assert side["modulus"] is None
    assert any("DegenerateModulus" in n for n in side["notes"])


def test_classify_additivity_of_sqrt(capsys):
    data, _ = report(capsys, "classify", "--fn", "pow:0.5", "--point", "0")
    side = data["points"][0]["sides"]["Forward"]
    assert side["additivity"]["value"] == "strictly-sub-additive"
    assert side["continuity_ratio"]["value"] == pytest.approx(2 ** 0.5, rel=1e-9)


def test_oscillation_command(capsys):
    data, _ = report(capsys, "oscillation", "--fn", "step:0.5", "--point", "0.5",
                     "--interval", "0,1", "--grid", "101")
    pt = data["points"][0]["sides"]
    assert pt["Backward"]["limit"]["value"] == 1 and pt["Forward"]["limit"]["value"] == 0
    assert data["interval"]["discontinuities"] == [{"x": 0.5, "osc": 1}]
    assert data["interval"]["oscillation"] == 1


def test_corpus_list(capsys):
    code, out, _ = run(capsys, "corpus-list")
    assert code == 0
    for name in ("cantor", "svc-cdf", "weierstrass", "xsin1x", "power"):
        assert name in out


def test_consistency_error_exit_code(capsys, monkeypatch):
    from modderiv import cli
    from modderiv.errors import ConsistencyError

    def boom(*a, **k):
        raise ConsistencyError("majorization violated")
    monkeypatch.setattr(cli, "analyze", boom)
    assert run(capsys, "analyze", "--fn", "cubic", "--point", "0.5")[0] == 4
