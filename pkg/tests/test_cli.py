import io
import json
import math

import numpy as np
import pytest

from sfarates import config
from sfarates.bound_states import BoundStateModel
from sfarates.cli import main, parse_range
from sfarates.config import CSV_COLUMNS, TASKS, ConfigError, parse_config, parse_intensity
from sfarates.errors import DomainError
from sfarates.io import config_hash, read_csv, read_json
from sfarates.params import LaserInput, derive_params
from sfarates.rates import dW_dOmega_circular


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_params_reference_point():
    code, out, _ = run_cli("params", "--omega", "0.1", "--up", "0.3", "--eb", "0.5")
    assert code == 0
    meta, data = read_json(out)
    assert data["z"] == pytest.approx(3.0, rel=1e-14)
    assert data["z1"] == pytest.approx(1.2, rel=1e-14)
    assert data["n0"] == 8
    assert meta["tool"] == "sfarates" and len(meta["config_hash"]) == 64
    assert meta["field_params"]["up"] == 0.3


def test_params_csv_has_metadata_header():
    code, out, _ = run_cli("params", "--omega", "0.1", "--up", "0.3", "--format", "csv")
    assert code == 0
    assert out.startswith("# ")
    meta, cols, rows = read_csv(out)
    assert cols == ["key", "value"]
    assert "field_params" in meta and "version" in meta
    assert dict(rows)["z"] == pytest.approx(3.0)


def test_intensity_with_units():
    code, out, _ = run_cli("params", "--omega", "0.057", "--intensity", "8e14 W/cm2")
    assert code == 0
    _, data = read_json(out)
    assert data["intensity_wcm2"] == pytest.approx(8e14, rel=1e-12)
    code, _, err = run_cli("params", "--omega", "0.057", "--intensity", "8e14")
    assert code == 1 and "intensity" in err


def test_regime_map_files(tmp_path):
    out_csv = tmp_path / "map.csv"
    code, _, _ = run_cli("regime-map", "--shape", "8", "6", "-o", str(out_csv))
    assert code == 0
    meta, cols, rows = read_csv(out_csv.read_text())
    assert len(rows) == 48 and cols[-1] == "label"
    _, lines = read_json(out_csv.with_suffix(".polylines.json").read_text())
    vert = next(line for line in lines if line["name"] == "omega=E_B")
    assert vert["omega_au"] == [0.5, 0.5]


def test_regime_map_range_flags():
    code, out, _ = run_cli("regime-map", "--omega", "0.01..1", "--intensity", "1e12..1e18 W/cm2", "--shape", "4", "4",
                           "--format", "json")
    assert code == 0
    meta, data = read_json(out)
    assert meta["config"]["regime"]["intensity_wcm2"] == [1e12, 1e18]
    om = [r[0] for r in data["grid"]["rows"]]
    assert min(om) == pytest.approx(0.01) and max(om) == pytest.approx(1.0)


def test_parse_range():
    assert parse_range("1..2") == (1.0, 2.0, None)
    assert parse_range("1e10..1e20 W/cm2") == (1e10, 1e20, "W/cm2")
    with pytest.raises(Exception):
        parse_range("1-2")


def test_bessel_both_methods():
    code, out, _ = run_cli("bessel", "--n", "100", "--x", "50", "--method", "both", "--format", "json")
    assert code == 0
    _, data = read_json(out)
    direct, asym = data
    assert direct["method"] == "recurrence" and asym["method"] == "asymptotic"
    assert asym["rel_dev"] <= 1e-2


def test_bessel_generalized():
    code, out, _ = run_cli("bessel", "--n", "3", "--x", "2", "--v", "-1.5", "--method", "quadrature", "--format", "json")
    assert code == 0
    _, data = read_json(out)
    assert data[0]["value"] == pytest.approx(-0.377883038283713875872547725216, abs=1e-12)


def test_json_round_trip_exact():
    code, out, _ = run_cli("rate", "--omega", "0.1", "--up", "0.3", "--polarization", "circular",
                           "--theta", "0.5", "1.2", "--format", "json")
    assert code == 0
    _, data = read_json(out)
    fp = derive_params(LaserInput(0.1, up=0.3, polarization="circular"), 0.5)
    direct = dW_dOmega_circular(fp, BoundStateModel.hydrogen(), np.array([0.5, 1.2]))
    assert data["dW_dOmega"] == direct.tolist()


def test_csv_round_trip_exact():
    code, out, _ = run_cli("rate", "--omega", "0.1", "--up", "0.3", "--polarization", "circular", "--theta", "0.7")
    assert code == 0
    _, cols, rows = read_csv(out)
    fp = derive_params(LaserInput(0.1, up=0.3, polarization="circular"), 0.5)
    assert rows[0][cols.index("dW_dOmega")] == dW_dOmega_circular(fp, BoundStateModel.hydrogen(), 0.7)


def test_spectrum_and_momentum_run():
    code, out, _ = run_cli("spectrum", "--omega", "0.1", "--up", "0.3", "--polarization", "circular", "--format", "json")
    assert code == 0
    meta, data = read_json(out)
    assert data["n"][0] == 8 and meta["peak_order"] == 12
    assert math.fsum(data["rate"]) == pytest.approx(meta["total_rate"], rel=1e-12)
    code, out, _ = run_cli("momentum-map", "--omega", "0.1", "--up", "0.3", "--p-par-max", "1", "--p-perp-max", "1",
                           "--n-par", "11", "--n-perp", "9", "--format", "json")
    assert code == 0
    meta, data = read_json(out)
    assert np.shape(data["values"]) == (9, 11)
    assert meta["config"]["momentum"]["kernel_width"] == 0.05


def test_fit_samples():
    e = [0.05, 0.08, 0.1, 0.15]
    doc = {"task": "fit", "fit": {"samples": [[x, 2 * math.exp(-1.5 / x)] for x in e]}, "output": {"format": "json"}}
    cfg = parse_config(json.dumps(doc))
    assert cfg.section("fit")["samples"][0][0] == 0.05


def test_config_defaults():
    doc = {"task": "momentum-map", "laser": {"omega": 0.2, "up": 0.3}, "momentum": {"p_par_max": 1, "p_perp_max": 1}}
    cfg = parse_config(json.dumps(doc))
    assert cfg.tail_eps == 1e-8
    assert cfg.threshold == 10
    assert cfg.section("momentum")["kernel_width"] == 0.1
    assert cfg.output_format == "csv"
    assert parse_config(json.dumps({"task": "params", "laser": {"omega": 0.2, "up": 0.3}})).output_format == "json"


def test_all_issues_reported_together():
    doc = {"task": "rate", "laser": {"omega": -0.1, "up": 0.3}, "atom": {"eb": -1.0}}
    with pytest.raises(ConfigError) as info:
        parse_config(json.dumps(doc))
    paths = {i.path for i in info.value.issues}
    assert {"laser.omega", "atom.eb"} <= paths


def test_unknown_key_suggestion():
    with pytest.raises(ConfigError) as info:
        parse_config(json.dumps({"task": "params", "laser": {"omega_eV": 1.5, "up": 0.3}}))
    text = str(info.value)
    assert "laser.omega" in text and "photon energy in atomic units" in text


def test_exactly_one_drive():
    with pytest.raises(ConfigError):
        parse_config(json.dumps({"task": "rate", "laser": {"omega": 0.1, "up": 0.3, "e0": 0.05}}))
    with pytest.raises(ConfigError):
        parse_config(json.dumps({"task": "rate", "laser": {"omega": 0.1}}))


def test_json_syntax_location(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"task": "params",\n "laser": {"omega": 0.1,, "up": 0.3}}\n')
    code, _, err = run_cli("params", "--config", str(bad))
    assert code == 1
    assert "line 2" in err and "column" in err


def test_flags_override_file(tmp_path):
    f = tmp_path / "c.json"
    f.write_text(json.dumps({"laser": {"omega": 0.1, "up": 0.3}}))
    code, out, _ = run_cli("params", "--config", str(f), "--up", "0.6")
    _, data = read_json(out)
    assert code == 0 and data["up"] == 0.6


def test_exit_codes():
    assert run_cli("params", "--omega", "-1", "--up", "0.3")[0] == 1
    code, _, err = run_cli("spectrum", "--omega", "0.1", "--up", "0.3", "--rtol", "1e-17")
    assert code == 2
    assert "partial" in err or "estimates" in err


def test_schema_documents_every_column():
    code, out, _ = run_cli("--schema")
    assert code == 0
    doc = json.loads(out)
    assert set(doc["csv_columns"]) == set(TASKS)
    assert doc["csv_columns"] == json.loads(json.dumps(CSV_COLUMNS))
    runs = {
        "params": ("--omega", "0.1", "--up", "0.3", "--format", "csv"),
        "rate": ("--omega", "0.1", "--up", "0.3", "--theta", "1"),
        "spectrum": ("--omega", "0.1", "--up", "0.3"),
        "bessel": ("--n", "3", "--x", "2"),
    }
    for task, flags in runs.items():
        _, cols, _ = read_csv(run_cli(task, *flags)[1])
        assert set(cols) == set(doc["csv_columns"][task])


def test_thread_env(monkeypatch):
    argv = ("fit", "--omega", "0.057", "--gamma-k", "0.45", "0.5", "--format", "json")
    monkeypatch.setenv("SFARATES_THREADS", "1")
    one = run_cli(*argv)[1]
    monkeypatch.setenv("SFARATES_THREADS", "3")
    three = run_cli(*argv)[1]
    assert one == three
    monkeypatch.setenv("SFARATES_THREADS", "zero")
    assert run_cli(*argv)[0] == 1


def test_config_hash_ignores_output_path(tmp_path):
    a = parse_config(json.dumps({"task": "params", "laser": {"omega": 0.1, "up": 0.3}, "output": {"path": "a.json"}}))
    b = parse_config(json.dumps({"task": "params", "laser": {"omega": 0.1, "up": 0.3}, "output": {"path": "b.json"}}))
    assert config_hash(a.hashed()) == config_hash(b.hashed())


def test_parse_intensity():
    assert parse_intensity("8e14 W/cm2") == (8e14, "W/cm2")
    assert parse_intensity("0.02 au") == (0.02, "au")
    with pytest.raises(DomainError):
        parse_intensity("8e14")


def test_schema_is_strict():
    assert config.SCHEMA["additionalProperties"] is False
