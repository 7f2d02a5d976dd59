import csv
import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from nppt_lab import cli
from nppt_lab.cli import CSV_COLUMNS, EXIT_FLAG, alpha_grid, main

SVG = "{http://www.w3.org/2000/svg}"


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def strip_wall(text):
    doc = json.loads(text)
    doc.pop("wall_ms", None)
    return doc


def test_classify(capsys):
    assert main(["classify", "--d", "3", "--alpha", "0.4"]) == 0
    out = capsys.readouterr().out
    assert "NPPT_ONE_COPY_UNDISTILLABLE" in out and "1/d=0.3333" in out


def test_classify_out_of_range(capsys):
    assert main(["classify", "--d", "3", "--alpha", "1.5"]) == 2
    assert "error" in capsys.readouterr().err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["werner-scan", "--d", "three"])
    assert exc.value.code == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "nppt_lab", "classify", "--d", "4", "--alpha", "0.7"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert "DISTILLABLE" in out.stdout


def test_alpha_grid():
    assert alpha_grid(0.1, 0.9, 0.1) == [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
    assert alpha_grid(0.5, 0.4, 0.1) == []
    assert len(alpha_grid(-1, 1, 0.01)) == 201


def test_werner_scan_csv(tmp_path):
    out = tmp_path / "scan.csv"
    args = ["werner-scan", "--d", "3", "--n", "1", "--alpha-start", "0.3", "--alpha-stop", "0.6",
            "--alpha-step", "0.1", "--restarts", "10", "--out", str(out)]
    assert main(args) == 0
    raw = out.read_bytes()
    assert b"\r" not in raw
    assert raw.decode().splitlines()[0] == ",".join(CSV_COLUMNS)
    rows = read_csv(out)
    assert [float(r["alpha"]) for r in rows] == [0.3, 0.4, 0.5, 0.6]
    for r in rows:
        a = float(r["alpha"])
        assert float(r["seesaw_min"]) == pytest.approx(1 - 2 * a, abs=1e-8)
        assert float(r["analytic_ref"]) == 1 - 2 * a
        assert r["flag"] == "false"
        gap = float(r["gap"])
        assert gap == float(r["seesaw_min"]) - float(r["extremal_min"])
        # 17 significant digits: text -> float -> text is the identity
        assert cli.fmt(float(r["seesaw_min"])) == r["seesaw_min"]


def test_werner_scan_two_copies_and_negative_alpha(tmp_path):
    out = tmp_path / "scan.csv"
    assert main(["werner-scan", "--n", "1", "2", "--alpha-start", "-0.2", "--alpha-stop", "-0.2",
                 "--restarts", "5", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert [r["n"] for r in rows] == ["1", "2"]
    assert all(r["analytic_ref"] == "" for r in rows)


def test_empty_grid_header_only(tmp_path):
    out = tmp_path / "empty.csv"
    assert main(["werner-scan", "--alpha-start", "0.5", "--alpha-stop", "0.4", "--out", str(out)]) == 0
    assert out.read_text() == ",".join(CSV_COLUMNS) + "\n"


def test_unwritable_path():
    assert main(["werner-scan", "--alpha-start", "0.5", "--alpha-stop", "0.4",
                 "--out", "/nonexistent-dir/x.csv"]) == 3


def test_config_file_with_override(tmp_path):
    conf = tmp_path / "conf.json"
    conf.write_text(json.dumps({"alpha_start": 0.2, "alpha_stop": 0.4, "alpha_step": 0.1, "restarts": 4}))
    out = tmp_path / "scan.csv"
    assert main(["werner-scan", "--config", str(conf), "--alpha-stop", "0.3", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert [r["alpha"] for r in rows] == ["0.20000000000000001", "0.29999999999999999"]
    assert {r["restarts"] for r in rows} == {"4"}
    assert main(["werner-scan", "--config", str(tmp_path / "missing.json")]) == 3
    conf.write_text("{not json")
    assert main(["werner-scan", "--config", str(conf)]) == 2


def test_family_scan_constraints(tmp_path):
    out = tmp_path / "fam.json"
    assert main(["family-scan", "--samples", "12", "--restarts", "8", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["schema"] == 1
    assert len(doc["members"]) == 12
    assert all(m["nppt"] and m["two_positive"] and m["valid"] for m in doc["members"])
    s = doc["summary"]
    assert s["count"] == 12 and s["nppt"] == 12
    assert s["most_negative_gap"] == min(m["gap"] for m in doc["members"])


def test_family_scan_zero_correlations(tmp_path):
    out = tmp_path / "fam.json"
    assert main(["family-scan", "--samples", "10", "--constraints", "valid", "--z-scale", "0",
                 "--restarts", "4", "--out", str(out)]) == 0
    assert not any(m["nppt"] for m in json.loads(out.read_text())["members"])


def test_family_scan_deterministic(tmp_path):
    args = ["family-scan", "--samples", "6", "--restarts", "6", "--seed", "9"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert strip_wall(a.read_text()) == strip_wall(b.read_text())


def test_family_scan_exhaustion():
    assert main(["family-scan", "--samples", "1", "--constraints", "nppt", "--z-scale", "0"]) == 4
    assert main(["family-scan", "--constraints", "psd"]) == 2


def test_compare_outputs(tmp_path, capsys):
    out = tmp_path / "cmp.json"
    assert main(["compare", "--alpha", "0.6", "--n", "1", "--restarts", "20", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["seesaw_min"] == pytest.approx(-0.2, abs=1e-8)
    assert doc["distillable_witness"] is True
    assert "distillable witness found" in capsys.readouterr().err
    assert main(["compare", "--alpha", "0.5", "--n", "1", "--restarts", "20", "--out", str(out)]) == 0
    assert abs(json.loads(out.read_text())["gap"]) <= 1e-6
    assert main(["compare", "--n", "1"]) == 2


def test_compare_flag_exit_code(monkeypatch, tmp_path, capsys):
    real = cli.compare

    def shifted(*args, **kwargs):
        rep = real(*args, **kwargs)
        rep.extremal_min += 1.0
        rep.gap = rep.seesaw_min - rep.extremal_min
        rep.flag = True
        return rep

    monkeypatch.setattr(cli, "compare", shifted)
    code = main(["compare", "--alpha", "0.45", "--n", "1", "--restarts", "5",
                 "--out", str(tmp_path / "c.json")])
    assert code == EXIT_FLAG == 10
    assert "FLAGGED" in capsys.readouterr().err


def test_plot_svg(tmp_path):
    data = tmp_path / "scan.csv"
    assert main(["werner-scan", "--alpha-start", "0.1", "--alpha-stop", "0.9",
                 "--restarts", "10", "--out", str(data)]) == 0
    svg = tmp_path / "plot.svg"
    assert main(["plot", "--csv", str(data), "--x", "alpha", "--y", "seesaw_min", "--out", str(svg)]) == 0
    text = svg.read_text()
    assert '"-//W3C//DTD SVG 1.1//EN"' in text
    root = ET.fromstring(text.split("\n", 2)[2])
    assert root.get("version") == "1.1"
    lines = root.findall(f"{SVG}polyline")
    assert len(lines) == 1
    ys = [float(p.split(",")[1]) for p in lines[0].get("points").split()]
    labels = [t.text for t in root.iter(f"{SVG}text")]
    assert "alpha" in labels and "seesaw_min" in labels
    zero = [ln for ln in root.findall(f"{SVG}line") if ln.get("stroke-dasharray")]
    assert zero
    z = float(zero[0].get("y1"))
    # the curve crosses zero between the 0.4 and 0.6 samples and sits on it at 0.5
    assert ys[3] < z < ys[5] and ys[4] == pytest.approx(z, abs=0.01)


def test_plot_single_row_marker(tmp_path):
    data = tmp_path / "one.csv"
    data.write_text("alpha,seesaw_min\n0.5,0\n")
    svg = tmp_path / "one.svg"
    assert main(["plot", "--csv", str(data), "--x", "alpha", "--y", "seesaw_min", "--out", str(svg)]) == 0
    root = ET.fromstring(svg.read_text().split("\n", 2)[2])
    assert len(root.findall(f"{SVG}circle")) == 1
    assert not root.findall(f"{SVG}polyline")


def test_plot_errors(tmp_path):
    data = tmp_path / "d.csv"
    data.write_text("alpha,seesaw_min\n0.5,0\n")
    svg = str(tmp_path / "x.svg")
    assert main(["plot", "--csv", str(data), "--x", "alpha", "--y", "gap", "--out", svg]) == 5
    data.write_text("alpha,seesaw_min\n")
    assert main(["plot", "--csv", str(data), "--x", "alpha", "--y", "seesaw_min", "--out", svg]) == 5
    data.write_text("alpha,seesaw_min\nx,1\n")
    assert main(["plot", "--csv", str(data), "--x", "alpha", "--y", "seesaw_min", "--out", svg]) == 5
    assert main(["plot", "--csv", str(tmp_path / "none.csv"), "--x", "a", "--y", "b", "--out", svg]) == 3
