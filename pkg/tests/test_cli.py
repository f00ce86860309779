import json
import os

import pytest

from cedagof.cli import main
from cedagof.ingest import housefly_path

EXPECTED = {
    "report.json", "intervals.csv", "counts.csv", "p0.csv", "signs.csv", "qq.csv",
    "heatmap_p0.svg", "heatmap_signs.svg", "histogram.svg", "qq.svg", "dendrogram.svg",
}


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_housefly(tmp_path, capsys):
    code, out, _ = run([ "analyze", housefly_path(), "--k", "8", "--sims", "100", "--seed", "1", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert EXPECTED <= set(os.listdir(tmp_path))
    assert not [f for f in os.listdir(tmp_path) if ".tmp-" in f]
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["schema"] == 1
    assert 0 <= report["ceda"]["p_value"] <= 1
    ks = report["classical"]["kolmogorov-smirnov"]
    assert ks["statistic"] == pytest.approx(0.050752, abs=1e-6)
    assert ks["warnings"] == ["ties should not be present"]
    assert report["config"]["K"] == 8 and report["config"]["K_source"] == "user"
    assert len(report["ceda"]["intervals"]) == 8
    assert report["ceda"]["intervals"][0][0] == "-inf"
    lines = out.splitlines()
    assert lines[0].startswith("ceda: p-value=")
    assert lines[1].startswith("shapiro-wilk: ")
    assert lines[2].startswith("pearson-chisq: ")
    assert lines[3].startswith("kolmogorov-smirnov: ")


def test_missing_input(tmp_path, capsys):
    code, _, err = run(["analyze", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "o")], capsys)
    assert code == 2
    assert "nope.csv" in err
    assert not (tmp_path / "o").exists()


def test_unparseable_input(tmp_path, capsys):
    f = tmp_path / "bad.csv"
    f.write_text("a,b\n1,x\n2,3\n")
    code, _, err = run(["analyze", str(f), "--column", "b", "--out", str(tmp_path / "o")], capsys)
    assert code == 2 and "row 1" in err


def test_computation_error(tmp_path, capsys):
    f = tmp_path / "const.csv"
    f.write_text("5\n5\n5\n5\n")
    code, _, err = run(["analyze", str(f), "--out", str(tmp_path / "o")], capsys)
    assert code == 3
    assert not (tmp_path / "o").exists() or not os.listdir(tmp_path / "o")


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["analyze"])
    assert exc.value.code == 2


def test_auto_k_and_env_out(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CEDAGOF_OUT", str(tmp_path / "env"))
    code, _, _ = run(["analyze", "builtin:housefly", "--sims", "20"], capsys)
    assert code == 0
    report = json.loads((tmp_path / "env" / "report.json").read_text())
    assert report["config"]["K_source"] == "auto"
    assert 3 <= report["config"]["K"] <= 15
    assert report["config"]["K_edf_distance"] is not None


def test_flags_echoed(tmp_path, capsys):
    code, out, _ = run(["analyze", "builtin:housefly", "--k", "8", "--sims", "10", "--flip-sign", "--df-correction", "--out", str(tmp_path)], capsys)
    assert code == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["config"]["flip_sign"] is True
    assert report["classical"]["pearson-chisq"]["aux"] == 10
    assert "df=10" in out


def test_synth(tmp_path, capsys):
    f = tmp_path / "speeds.csv"
    assert main(["synth", str(f), "--n", "300"]) == 0
    lines = f.read_text().splitlines()
    assert lines[0] == "speed" and len(lines) == 301


def test_report_identical_across_backends(tmp_path, capsys, monkeypatch):
    from cedagof import _backend

    if _backend.BACKEND != "cython":
        pytest.skip("compiled kernel not built")
    args = ["analyze", "builtin:housefly", "--k", "8", "--sims", "50", "--seed", "9"]
    assert main(args + ["--out", str(tmp_path / "c")]) == 0
    monkeypatch.setattr(_backend, "ward_linkage", _backend.get_kernels("python"))
    assert main(args + ["--out", str(tmp_path / "p")]) == 0
    capsys.readouterr()
    for name in os.listdir(tmp_path / "c"):
        assert (tmp_path / "c" / name).read_bytes() == (tmp_path / "p" / name).read_bytes(), name
