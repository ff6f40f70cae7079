import io
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from freqreuse.analytic import NetworkParams, Scheme, SchemeKind
from freqreuse.harness import (
    ConfigError,
    SweepSpec,
    Table,
    emit_figure_data,
    figure_table,
    first_crossing,
    parse_config,
    parse_grid,
    read_csv,
    run_sweep,
    run_validation,
)
from freqreuse.harness.cli import main
from freqreuse.montecarlo import SimConfig

UNIT = NetworkParams(1.0, 1.0)


def test_single_point_baseline_sweep():
    t = run_sweep(SweepSpec("lambda_b", (1.0,), UNIT, (SchemeKind.BASELINE,), ("m_star", "rate", "gain")))
    assert t.columns == ("lambda_b", "baseline_m_star", "baseline_rate", "baseline_gain")
    assert len(t.rows) == 1
    assert t.rows[0][1] == 1 and t.rows[0][3] == 1.0


def test_sweep_columns_follow_outputs():
    spec = SweepSpec("eta", (0.99, 0.999), UNIT, ("fru", "frb"), ("alloc_fraction", "m_star"))
    t = run_sweep(spec)
    assert t.columns == ("eta", "fru_alloc_fraction", "fru_m_star", "frb_alloc_fraction", "frb_m_star")
    assert all(isinstance(v, int) for v in t.column("frb_m_star"))


@pytest.mark.parametrize("kw", [
    {"variable": "bandwidth_w"}, {"grid": ()}, {"grid": (2.0, 1.0)}, {"grid": (1.0, 1.0)},
    {"outputs": ("nope",)}, {"schemes": ()}, {"variable": "eta", "grid": (0.5, 1.5)},
])
def test_sweep_spec_validation(kw):
    base = dict(variable="lambda_b", grid=(1.0,), fixed=UNIT)
    with pytest.raises(ValueError):
        SweepSpec(**{**base, **kw})


def test_bounds_figure_ultra_column():
    t = figure_table("fig2_bounds", SweepSpec.default(UNIT))
    assert t.columns == ("t", "exact", "lemma2_lower", "lemma2_upper", "lemma3")
    ts = t.column("t")
    assert ts[0] == pytest.approx(1e-3) and ts[-1] == pytest.approx(1e3)
    for r in t.records():
        assert r["lemma3"] == pytest.approx(1 / (1 + r["t"]), rel=1e-15)
        assert r["lemma2_lower"] <= r["exact"] <= r["lemma2_upper"]


def test_fig3_single_point(tmp_path):
    spec = SweepSpec("lambda_b", (0.5,), UNIT)
    path = emit_figure_data("fig3_rates", spec, tmp_path)
    assert path.name == "fig3_rates.csv"
    assert len(read_csv(path).rows) == 1


def test_fig4_reaches_single_channel():
    t = figure_table("fig4_mstar", SweepSpec.default(UNIT))
    assert "baseline_m_star" not in t.columns
    for col in ("frb_m_star", "fru_m_star"):
        ms = t.column(col)
        assert ms[-1] == 1 and ms[0] > 1


def test_decomposition_columns():
    t = figure_table("decomposition", SweepSpec("lambda_b", (0.1, 1.0), UNIT, ("frb",)))
    assert t.columns == ("lambda_b", "frb_interferer_ratio", "frb_max_alloc", "frb_alloc_fraction",
                         "frb_spectral_efficiency")


def test_sweep_csv_round_trip(tmp_path):
    t = run_sweep(SweepSpec.default(UNIT))
    back = read_csv(t.write(tmp_path / "s.csv"))
    assert back == t
    assert back.notes["frb_rate"].startswith("frb:")


cells = st.one_of(
    st.none(), st.integers(-10**12, 10**12), st.floats(allow_nan=False),
    st.sampled_from(["coverage", "window", "frb"]),
)


@given(rows=st.lists(st.tuples(cells, cells, cells), max_size=6))
def test_table_round_trip_any_cells(rows):
    t = Table(("a", "b_rate", "c"), rows)
    assert read_csv(io.StringIO(t.to_csv())) == t


def test_rates_use_scientific_notation():
    text = Table(("x", "frb_rate"), [(0.5, 1234567.0)]).to_csv()
    assert "1.2345670000000000e+06" in text and "0.5," in text


def test_first_crossing():
    t = Table(("lambda_b", "frb_rate"), [(0.1, 1.0), (1.0, 5.0), (10.0, 9.0)])
    assert first_crossing(t, "frb_rate", 4.0) == 1.0
    assert first_crossing(t, "frb_rate", 10.0) is None


def test_validation_full_load_baseline():
    r = run_validation(NetworkParams(1.0, 50.0), Scheme.baseline(), SimConfig(trials=3000, seed=1),
                       (1e-9, 1.0))
    rows = r.table.records()
    assert rows[0]["empirical"] == 1.0 and rows[0]["pass"] == 1
    assert abs(rows[1]["empirical"] - 0.5601) <= rows[1]["tolerance"]
    assert rows[-1]["check"] == "window" and r.window_ok
    assert r.passed


def test_validation_tiny_window_fails():
    r = run_validation(NetworkParams(1.0, 50.0), Scheme.baseline(), SimConfig(trials=50, window_radius=1.0),
                       (1.0,))
    assert not r.window_ok and not r.passed


def test_config_defaults_and_values():
    cfg = parse_config("""
[network]
lambda_u = 50
eta = 0.999
[scheme]
kind = frb
m = 4
[sim]
trials = 123
thresholds = 0.5, 2
[sweep]
variable = alpha
grid = linspace(3, 6, 4)
schemes = frb
outputs = m_star, gain
""")
    assert cfg.network == NetworkParams(1.0, 50.0, eta=0.999)
    assert cfg.scheme == Scheme.frb(4)
    assert cfg.sim.trials == 123 and cfg.thresholds == (0.5, 2.0)
    assert cfg.sweep.grid == (3.0, 4.0, 5.0, 6.0)
    assert cfg.sweep.fixed.eta == 0.999
    empty = parse_config("")
    assert empty.network.alpha == 4.0 and empty.network.eta == 0.99 and empty.network.bandwidth_w == 100e6


@pytest.mark.parametrize("text,line", [
    ("[network]\nalpha = 4\neta = 3\n", 3),
    ("[network]\nalpha = four\n", 2),
    ("[sweep]\n\ngrid = 2, 1\n", 3),
    ("[nets]\nalpha = 4\n", 1),
    ("[sim]\ntrials = 10\nbogus = 1\n", 3),
    ("alpha = 4\n", 1),
    ("[scheme]\nkind = baseline\nm = 3\n", 3),
])
def test_config_errors_carry_line(text, line):
    with pytest.raises(ConfigError) as e:
        parse_config(text, "x.ini")
    assert e.value.line == line
    assert str(e.value).startswith(f"x.ini:{line}:")


def test_parse_grid_forms():
    assert parse_grid("logspace(0, 2, 3)") == (1.0, 10.0, 100.0)
    assert parse_grid("1, 2.5") == (1.0, 2.5)
    with pytest.raises(ValueError):
        parse_grid("logspace(0, 2)")


def test_cli_validate_deterministic(tmp_path):
    args = ["validate", "--lambda-u", "50", "--trials", "400", "--seed", "3", "--tolerance", "0.5"]
    assert main(args + ["--out", str(tmp_path / "a.csv")]) == 0
    assert main(args + ["--out", str(tmp_path / "b.csv")]) == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["validate", "--lambda-u", "50", "--trials", "50", "--window-radius", "1",
                 "--out", str(tmp_path / "v.csv")]) == 1
    assert main(["sweep", "--eta", "1.5"]) == 2
    assert main(["sweep", "--config", str(tmp_path / "missing.ini")]) == 2
    bad = tmp_path / "bad.ini"
    bad.write_text("[sim]\ntrials = -4\n")
    assert main(["validate", "--config", str(bad)]) == 2
    assert "bad.ini:2" in capsys.readouterr().err
    with pytest.raises(SystemExit) as e:
        main(["figure", "fig9"])
    assert e.value.code == 2


def test_cli_sweep_and_figure_outputs(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--grid", "0.01, 1, 100", "--out", str(out), "--target-rate", "1e6"]) == 0
    t = read_csv(out)
    assert t.column("lambda_b") == [0.01, 1.0, 100.0]
    assert "frb: reaches" in capsys.readouterr().err
    assert main(["figure", "fig2_bounds", "--alpha", "3"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("# t: SIR threshold (alpha = 3.0)")
    assert main(["optimize", "--lambda-b", "0.1", "--scheme", "fru"]) == 0
    rows = read_csv(io.StringIO(capsys.readouterr().out)).records()
    assert [r["method"] for r in rows] == ["full_search", "surrogate"]
    assert rows[0]["rate"] >= rows[1]["rate"]


def test_cli_byte_identical_sweeps(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["figure", "fig3_rates", "--out", str(a)])
    main(["figure", "fig3_rates", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    assert not any(math.isnan(v) for v in read_csv(a).column("frb_rate"))
