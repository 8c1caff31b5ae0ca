import json

import numpy as np
import pandas as pd
import pytest

from src.errors import CoverageError, DomainError, LengthError, ParseError, SchemaError, ValidationFailure
from src.ingestion.extraction import load_csv, load_schema, write_csv, write_schema
from src.ingestion.models import Role, VariableMeta
from src.ingestion.panel import assemble, standardize, unstandardize
from src.ingestion.transforms import TCODE_LAGS, apply_tcode


def _meta(name, role, tcode=1):
    return VariableMeta(mnemonic=name, role=role, tcode=tcode)


def _monthly(values, start="2000-01", name="x"):
    return pd.Series(values, index=pd.period_range(start, periods=len(values), freq="M"), name=name, dtype=float)


def _write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_load_csv_parses_declared_columns(tmp_path):
    path = _write(tmp_path, "date,Target,RGDP\n2020-01,0.1,100\n2020-02,,101\n2020-03,-0.2,102\n")
    raw = load_csv(path, [_meta("Target", Role.INSTRUMENT), _meta("RGDP", Role.CORE)])
    assert set(raw) == {"Target", "RGDP"}
    assert len(raw["RGDP"]) == 3
    assert len(raw["Target"]) == 3
    assert np.isnan(raw["Target"].iloc[1])


def test_load_csv_missing_column_names_it(tmp_path):
    path = _write(tmp_path, "date,Target\n2020-01,0.1\n")
    with pytest.raises(SchemaError) as err:
        load_csv(path, [_meta("Target", Role.INSTRUMENT), _meta("Path", Role.INSTRUMENT)])
    assert err.value.mnemonic == "Path"
    assert "Path" in str(err.value)


def test_load_csv_rejects_invalid_month(tmp_path):
    path = _write(tmp_path, "date,RGDP\n2020-12,1\n2020-13,2\n")
    with pytest.raises(ParseError) as err:
        load_csv(path, [_meta("RGDP", Role.CORE)])
    assert err.value.row == 2


def test_load_csv_rejects_garbage_cell_and_duplicates(tmp_path):
    bad = _write(tmp_path, "date,RGDP\n2020-01,1\n2020-02,abc\n")
    with pytest.raises(ParseError) as err:
        load_csv(bad, [_meta("RGDP", Role.CORE)])
    assert err.value.row == 2 and err.value.column == "RGDP"
    dup = _write(tmp_path, "date,RGDP\n2020-01,1\n2020-01,2\n", name="dup.csv")
    with pytest.raises(ParseError):
        load_csv(dup, [_meta("RGDP", Role.CORE)])


def test_skipped_month_is_missing_not_adjacent(tmp_path):
    levels = 100 * np.exp(0.01 * np.arange(5))
    rows = "".join(f"2020-0{k + 1},{float(levels[k])!r}\n" for k in (0, 2, 3, 4))
    path = _write(tmp_path, "date,RGDP\n" + rows)
    schema = [_meta("RGDP", Role.CORE, 5)]
    raw = load_csv(path, schema)
    assert len(raw["RGDP"]) == 5
    assert np.isnan(raw["RGDP"][pd.Period("2020-02", freq="M")])
    with pytest.raises(CoverageError) as err:
        assemble(raw, schema, sample=("2020-03", "2020-05"))
    assert "2020-02" in str(err.value)


def test_tcode_refuses_to_difference_across_a_gap():
    index = pd.PeriodIndex([pd.Period(m, freq="M") for m in ("2020-01", "2020-03", "2020-04")])
    gapped = pd.Series([1.0, 2.0, 3.0], index=index, name="x")
    with pytest.raises(CoverageError):
        apply_tcode(gapped, 2)
    np.testing.assert_array_equal(apply_tcode(gapped, 1).to_numpy(), [1.0, 2.0, 3.0])


def test_schema_rejects_unknown_tcode(tmp_path):
    path = tmp_path / "schema.json"
    path.write_text(json.dumps([{"mnemonic": "X", "role": "CORE", "tcode": 3}]))
    with pytest.raises(SchemaError):
        load_schema(path)


def test_schema_round_trip(tmp_path):
    schema = [_meta("Target", Role.INSTRUMENT), _meta("PCE", Role.CORE, 7)]
    path = tmp_path / "schema.json"
    write_schema(schema, path)
    assert load_schema(path) == schema


def test_tcode_values():
    np.testing.assert_array_equal(apply_tcode(_monthly([3.0, 2.5, 4.0]), 1).to_numpy(), [3.0, 2.5, 4.0])
    np.testing.assert_allclose(apply_tcode(_monthly([7.0, 7.0, 7.0]), 5).to_numpy(), [0.0, 0.0])
    growth = apply_tcode(_monthly(np.exp(0.01 * np.arange(30))), 7).to_numpy()
    np.testing.assert_allclose(growth, 12.0, atol=1e-10)
    np.testing.assert_allclose(apply_tcode(_monthly([1.0, 4.0, 2.0]), 2).to_numpy(), [3.0, -2.0])
    np.testing.assert_allclose(apply_tcode(_monthly([1.0, np.e]), 4).to_numpy(), [0.0, 100.0])


@pytest.mark.parametrize("tcode", sorted(TCODE_LAGS))
def test_tcode_output_length_and_dates(tcode):
    rng = np.random.default_rng(tcode)
    for length in rng.integers(13, 200, size=5):
        series = _monthly(rng.uniform(1.0, 2.0, size=length))
        out = apply_tcode(series, tcode)
        assert len(out) == length - TCODE_LAGS[tcode]
        assert out.index[0] == series.index[TCODE_LAGS[tcode]]


def test_tcode_errors():
    with pytest.raises(DomainError) as err:
        apply_tcode(_monthly([1.0, -1.0, 2.0]), 5)
    assert err.value.date == "2000-02"
    with pytest.raises(LengthError):
        apply_tcode(_monthly(np.ones(12)), 7)


def _schema():
    return [_meta("RGDP", Role.CORE), _meta("Target", Role.INSTRUMENT), _meta("Path", Role.INSTRUMENT), _meta("CPIA", Role.OTHER)]


def test_assemble_orders_roles_and_zero_fills_instruments():
    raw = {
        "RGDP": _monthly(np.arange(6.0), start="1995-01"),
        "CPIA": _monthly(np.arange(6.0) + 1, start="1995-01"),
        "Target": _monthly([0.1], start="1995-01"),
        "Path": _monthly([0.3, 0.4, 0.5], start="1995-04"),
    }
    ds = assemble(raw, _schema(), sample=("1995-01", "1995-06"))
    assert ds.names == ["Target", "Path", "RGDP", "CPIA"]
    assert ds.m == 2 and ds.n == 2
    assert not np.isnan(ds.values).any()
    march = list(ds.dates).index(pd.Period("1995-03", "M"))
    assert ds.values[march, 0] == 0.0 and ds.values[march, 1] == 0.0
    assert ds.zero_filled == {"Target": 5, "Path": 3}


def test_assemble_reports_macro_coverage_gap():
    raw = {
        "RGDP": _monthly(np.arange(6.0), start="1996-01"),
        "CPIA": _monthly(np.arange(30.0), start="1995-01"),
        "Target": _monthly([0.1], start="1996-01"),
        "Path": _monthly([0.1], start="1996-01"),
    }
    with pytest.raises(CoverageError) as err:
        assemble(raw, _schema(), sample=("1995-01", "1996-06"))
    assert err.value.variable == "RGDP"


def test_standardize_values_and_round_trip():
    raw = {"A": _monthly([1.0, 2.0, 3.0]), "B": _monthly([10.0, 30.0, 20.0])}
    schema = [_meta("A", Role.CORE), _meta("B", Role.CORE)]
    ds = assemble(raw, schema)
    std = standardize(ds)
    np.testing.assert_allclose(std.values[:, 0], [-1.0, 0.0, 1.0])
    np.testing.assert_allclose(std.scaling[0], [2.0, 1.0])
    np.testing.assert_allclose(std.values.mean(axis=0), 0.0, atol=1e-10)
    np.testing.assert_allclose(std.values.std(axis=0, ddof=1), 1.0, atol=1e-10)
    np.testing.assert_allclose(unstandardize(std).values, ds.values, rtol=1e-12)
    twice = standardize(std)
    np.testing.assert_allclose(twice.values, std.values, atol=1e-10)
    np.testing.assert_allclose(unstandardize(twice).values, ds.values, rtol=1e-12)


def test_standardize_rejects_constant_column():
    ds = assemble({"A": _monthly([1.0, 1.0, 1.0])}, [_meta("A", Role.CORE)])
    with pytest.raises(ValidationFailure, match="'A'"):
        standardize(ds)


def test_write_csv_round_trips_through_loader(tmp_path, small_panel):
    ds, _ = small_panel
    raw_ds = unstandardize(ds)
    path = tmp_path / "panel.csv"
    write_csv(raw_ds, path)
    back = assemble(load_csv(path, raw_ds.meta), raw_ds.meta)
    np.testing.assert_array_equal(back.values, raw_ds.values)
    assert list(back.dates) == list(raw_ds.dates)
