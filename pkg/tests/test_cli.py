import csv
import io
import math

import pytest

from wglab.cli import HEADER, Row, build_parser, main, render_csv
from wglab.config import ConfigError, RunConfig, load_config, parse_config_text

EXPECTED_HEADER = ("scenario,param_names,param_values,value,threshold,margin,direction,status,"
                   "spacing_finest,truncation,resid_tol,extrap_err,seed")


def read_rows(path):
    text = path.read_text(encoding="utf-8")
    return text, list(csv.DictReader(io.StringIO(text)))


def test_header_is_exact():
    assert HEADER == EXPECTED_HEADER
    assert render_csv([]).splitlines() == [EXPECTED_HEADER]


def test_numbers_round_trip():
    r = Row("x", (("a", 0.1), ("n", 3)), 1 / 3, math.pi, "ESTIMATE", "OK", spacing_finest=1 / 64)
    line = render_csv([r]).splitlines()[1]
    fields = next(csv.reader([line]))
    assert float(fields[3]) == 1 / 3
    assert float(fields[5]) == 1 / 3 - math.pi
    assert fields[2] == "0.1;3"
    assert fields[9] == ""  # truncation not applicable


def test_lemma1_row_and_exit_code(tmp_path):
    code = main(["lemma1", "--L", "1.5", "--h", "1.2", "--eps", "0.05", "--no-scaling", "--out", str(tmp_path)])
    assert code == 0
    text, rows = read_rows(tmp_path / "lemma1.csv")
    assert text.splitlines()[0] == EXPECTED_HEADER
    cert = next(r for r in rows if r["scenario"] == "lemma1:certificate")
    assert cert["status"] == "PASS"
    lam = next(r for r in rows if r["scenario"] == "lemma1:lambda_eps")
    assert float(lam["value"]) > math.pi ** 2
    for key in ("spacing_finest", "resid_tol", "extrap_err"):
        assert lam[key] != ""


def test_lemma1_outside_regime_is_config_error(tmp_path, capsys):
    assert main(["lemma1", "--h", "0.9", "--out", str(tmp_path)]) == 1
    assert "config error" in capsys.readouterr().err


def test_determinism_byte_identical(tmp_path):
    args = ["lemma2a", "--betas", "0.5,1,2", "--spacing", "1/16", "--levels", "2", "--seed", "3"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "lemma2a.csv").read_bytes()
    b = (tmp_path / "b" / "lemma2a.csv").read_bytes()
    assert a == b
    assert b",3\n" in a


def test_bad_config_line_reports_location(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("L = 1.5\n# comment\nh = 'wide'\n", encoding="utf-8")
    assert main(["lemma1", "--config", str(cfg), "--out", str(tmp_path)]) == 1
    err = capsys.readouterr().err
    assert "bad.cfg:3" in err and "field 'h'" in err


@pytest.mark.parametrize("text, fragment", [
    ("nonsense", "expected 'key = value'"),
    ("colour = 3", "unknown field 'colour'"),
    ("L = 1\nL = 2", "given twice"),
    ("L = [1, 2", "cannot parse"),
    ("levels = 2.5", "expected an integer"),
    ("plot = 1", "expected true/false"),
])
def test_config_parser_diagnostics(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_config_text(text, "f.cfg")


def test_config_parser_accepts_toml_subset():
    vals = parse_config_text('L = 2.0  # long\nbetas = [1, 2, 3]\nplot = true\nstudy = "oscillator"\n')
    assert vals == {"L": 2.0, "betas": (1.0, 2.0, 3.0), "plot": True, "study": "oscillator"}


def test_precedence_defaults_file_flags(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("L = 1.7\nh = 1.3\n", encoding="utf-8")
    c = load_config(str(cfg), {"h": 1.4, "eps": None}, "lemma1")
    assert c.L == 1.7  # file over default
    assert c.h == 1.4  # flag over file
    assert c.eps == RunConfig().eps  # default survives an unset flag


def test_unknown_flag_and_scenario_exit_one(capsys):
    assert main(["lemma1", "--bogus", "1"]) == 1
    assert main(["nothing"]) == 1


def test_empty_sweep_exits_one(tmp_path, capsys):
    assert main(["sweep", "--target", "oscillator", "--param", "beta", "--values", "",
                 "--out", str(tmp_path)]) == 1
    assert "empty sweep range" in capsys.readouterr().err


def test_sweep_param_must_match_target(tmp_path):
    assert main(["sweep", "--target", "oscillator", "--param", "L", "--values", "1,2",
                 "--out", str(tmp_path)]) == 1


def test_oscillator_sweep_increases_toward_limit(tmp_path):
    assert main(["sweep", "--target", "oscillator", "--param", "beta", "--values", "1,2,3,4",
                 "--out", str(tmp_path), "--plot"]) == 0
    _, rows = read_rows(tmp_path / "sweep.csv")
    vals = [float(r["value"]) for r in rows]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert all(v <= math.sqrt(2) + 1e-9 for v in vals)
    svg = (tmp_path / "sweep.svg").read_text(encoding="utf-8")
    assert svg.startswith("<svg") or svg.startswith("<?xml")
    assert "http" not in svg.replace("http://www.w3.org/2000/svg", "")
    assert "<text" in svg


def test_sweep_records_point_failures(tmp_path):
    # L = 1 leaves no room for h > 1, so the point fails but the sweep does not
    assert main(["sweep", "--target", "lemma2b", "--param", "L", "--values", "1,150",
                 "--out", str(tmp_path)]) == 0
    _, rows = read_rows(tmp_path / "sweep.csv")
    assert rows[0]["status"].startswith("ERROR:")
    assert rows[1]["status"] == "BINDS"


def test_window_sweep_is_monotone(tmp_path):
    assert main(["sweep", "--target", "lemma1", "--param", "eps", "--values", "0.4,0.2,0.1,0.05",
                 "--L", "1.5", "--h", "1.2", "--spacing", "1/40", "--out", str(tmp_path)]) == 0
    _, rows = read_rows(tmp_path / "sweep.csv")
    vals = [float(r["value"]) for r in rows]
    assert all(b >= a - 1e-8 for a, b in zip(vals, vals[1:]))


def test_two_parameter_sweep_writes_heatmap(tmp_path):
    assert main(["sweep", "--target", "halfline", "--param", "alpha", "--values", "0.5,1",
                 "--param2", "eps", "--values2", "0.1,0.5,2", "--out", str(tmp_path), "--plot"]) == 0
    _, rows = read_rows(tmp_path / "sweep.csv")
    assert len(rows) == 6
    assert [r["param_values"] for r in rows][:2] == ["0.5;0.1", "0.5;0.5"]
    assert "<rect" in (tmp_path / "sweep.svg").read_text(encoding="utf-8")


def test_parallel_sweep_matches_serial(tmp_path):
    base = ["sweep", "--target", "oscillator", "--param", "beta", "--values", "1,2,3"]
    assert main(base + ["--out", str(tmp_path / "s")]) == 0
    assert main(base + ["--threads", "2", "--out", str(tmp_path / "p")]) == 0
    assert (tmp_path / "s" / "sweep.csv").read_bytes() == (tmp_path / "p" / "sweep.csv").read_bytes()


def test_lemma2b_not_found_exit_code(tmp_path):
    assert main(["lemma2b", "--L-min", "10", "--L-max", "30", "--L-count", "5", "--out", str(tmp_path)]) == 4
    _, rows = read_rows(tmp_path / "lemma2b.csv")
    assert rows[-1]["status"] == "NOT_FOUND"


def test_convergence_oscillator_study(tmp_path):
    assert main(["convergence", "--study", "oscillator", "--alpha", "1", "--beta", "4",
                 "--out", str(tmp_path)]) == 0
    _, rows = read_rows(tmp_path / "convergence.csv")
    final = rows[-1]
    assert final["status"].startswith("EXTRAPOLATED")
    assert abs(float(final["value"]) - math.sqrt(2)) < 1e-6


def test_parser_accepts_fractions_and_global_flags():
    args = build_parser().parse_args(["convergence", "--spacing", "1/64", "--seed", "9", "--tol", "1e-9"])
    assert args.spacing == 1 / 64 and args.seed == 9 and args.tol == 1e-9
