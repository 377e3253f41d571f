import subprocess
import sys

import pytest

from qcocycle import __version__
from qcocycle import askey_wilson as aw
from qcocycle import cli, ladder
from qcocycle.errors import NumericalFailure


def run(*argv):
    return cli.run(list(argv))


def test_spectrum_rows():
    code, text = run("spectrum", "--smax", "1", "--digits", "30")
    assert code == 0
    out = cli.parse_output(text)
    assert [(r["s"], r["i"]) for r in out["rows"]] == [
        ("0", "0"), ("1/2", "-1/2"), ("1/2", "1/2"), ("1", "-1"), ("1", "0"), ("1", "1"),
    ]
    assert all(float(r["abs_error"]) < 1e-20 for r in out["rows"])


def test_config_echo():
    code, text = run("gram", "--q", "0.3", "--a", "0.7", "--window", "3", "--digits", "35")
    assert code == 0
    cfg = cli.parse_output(text)["config"]
    assert cfg["command"] == "gram" and cfg["version"] == __version__
    assert cfg["digits"] == 35 and cfg["window"] == 3
    assert cfg["lambda"] == ""


def test_gram_summary():
    code, text = run("gram", "--lambda", "0.8", "--window", "4")
    out = cli.parse_output(text)
    assert code == 0 and len(out["rows"]) == 9
    assert out["summary"]["g1"] == "1.0"
    assert float(out["summary"]["max_rel_error"]) < 1e-30


def test_gram_discrete_middle_row():
    _, text = run("gram", "--window", "2", "--format", "csv")
    rows = cli.parse_output(text)["rows"]
    middle = next(r for r in rows if r["n"] == "0")
    assert middle["closed_form"] == "+inf" and middle["rel_error"] == ""


def test_growth_rows_json_csv_agree():
    _, js = run("growth", "--nmax", "4")
    _, cs = run("growth", "--nmax", "4", "--format", "csv")
    a, b = cli.parse_output(js), cli.parse_output(cs)
    assert a["rows"] == b["rows"]
    assert {k: v for k, v in a["config"].items() if k != "format"} == b["config"]
    zero = a["rows"][0]
    assert zero["n"] == "0" and zero["G_closed"] == "0.0" and zero["x_max"] == ""


def test_csv_header_matches_columns():
    _, text = run("growth", "--nmax", "2", "--format", "csv")
    lines = text.splitlines()
    assert lines[0].startswith("# config: ")
    assert lines[1] == ",".join(cli.COLUMNS["growth"])


def test_scan_summary():
    code, text = run("scan", "--nmax", "12", "--format", "csv")
    assert code == 0
    summary = cli.parse_output(text)["summary"]
    assert summary["proper"] is True and summary["sample"] == [5, 10]
    assert set(summary["flags"]) == {"divergence", "derivative_bound", "zeros_increasing"}


def test_output_is_deterministic(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert cli.main(["growth", "--nmax", "6", "--jobs", "2", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "--q", "1.5"],
        ["spectrum", "--digits", "10"],
        ["spectrum", "--smax", "1/3"],
        ["growth", "--nmax", "500"],
        ["growth", "--eps", "-1"],
        ["growth", "--eps", "abc"],
        ["scan", "--nmax", "3"],
        ["gram", "--lambda", "5"],
        ["gram", "--window", "0"],
        ["growth", "--jobs", "0"],
    ],
)
def test_usage_errors(argv):
    assert cli.run(argv)[0] == cli.EXIT_USAGE


def test_parser_errors_exit_64():
    with pytest.raises(SystemExit) as info:
        cli.main(["nonsense"])
    assert info.value.code == 64
    with pytest.raises(SystemExit) as info:
        cli.main(["growth", "--nmax", "x"])
    assert info.value.code == 64


def test_tolerance_failure_exit_2(monkeypatch):
    real = ladder.gram_recursion

    def skewed(m):
        g = real(m)
        g[2] *= 1.001
        return g

    monkeypatch.setattr(ladder, "gram_recursion", skewed)
    code, text = run("gram", "--lambda", "0.8", "--window", "3")
    assert code == cli.EXIT_TOLERANCE and text is not None


def test_numerical_failure_exit_2(monkeypatch):
    def boom(*args, **kwargs):
        raise NumericalFailure("no convergence")

    monkeypatch.setattr(cli.cocycle, "growth_rows", boom)
    assert run("growth", "--nmax", "3") == (cli.EXIT_TOLERANCE, None)


def test_precision_exhausted_exit_3(monkeypatch, capsys):
    monkeypatch.setattr(aw, "MAX_WORKING_DPS", 60)
    aw.family.cache_clear()
    try:
        code, _ = run("growth", "--nmax", "25", "--digits", "41")
    finally:
        aw.family.cache_clear()
    assert code == cli.EXIT_PRECISION
    assert "working digits" in capsys.readouterr().err


def test_verify_command():
    code, text = run("verify", "--digits", "30", "--window", "6")
    out = cli.parse_output(text)
    assert code == 0 and out["summary"]["failed"] == []
    assert all(r["ok"] == "true" for r in out["rows"])


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qcocycle", "--version"], capture_output=True, text=True, check=True
    )
    assert proc.stdout.strip() == f"qcocycle {__version__}"
