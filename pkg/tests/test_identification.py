import json

import pytest
from pydantic import ValidationError

from src.errors import DimensionError, ParseError, SchemeError
from src.identification.models import Restriction, RestrictionScheme
from src.identification.parsing import check_against_dataset, load_scheme, parse_row, parse_scheme, resolve_scheme
from src.identification.schemes import default_scheme, instruments_only_scheme, prose_scheme
from src.identification.validation import require_valid, validate

P, N, Z, F = Restriction.POS, Restriction.NEG, Restriction.ZERO, Restriction.FREE


def _scheme_text(rows, shocks=("Target", "Path")):
    return json.dumps({"shocks": list(shocks), "rows": rows})


def test_parse_row_compact_form():
    name, cells = parse_row("RGDP: - . 0 +")
    assert name == "RGDP"
    assert cells == [N, F, Z, P]


def test_parse_row_unknown_symbol_names_row_and_position():
    with pytest.raises(ParseError) as err:
        parse_row("GS10: + x")
    assert "GS10" in str(err.value)
    assert "position 2" in str(err.value)


def test_parse_row_requires_name():
    with pytest.raises(ParseError):
        parse_row("+ 0 .")


def test_parse_scheme_mixed_entries():
    text = _scheme_text(["Target: + 0", "Path: 0 +", {"name": "OTHER1", "pattern": ". .", "tv": True}])
    scheme = parse_scheme(text)
    assert scheme.row_names == ["Target", "Path", "OTHER1"]
    assert scheme.shock_labels == ["Target", "Path"]
    assert scheme.tv_mask == [False, False, True]
    assert scheme.entry("Path", "Path") == P


def test_parse_scheme_wrong_row_width():
    with pytest.raises(DimensionError):
        parse_scheme(_scheme_text(["Target: + 0 ."]))


def test_parse_scheme_rejects_missing_keys_and_duplicates():
    with pytest.raises(ParseError):
        parse_scheme(json.dumps({"rows": []}))
    with pytest.raises(ParseError):
        parse_scheme(_scheme_text(["Target: + 0", "Target: 0 +"]))


def test_to_payload_is_parseable():
    scheme = default_scheme(n_other=2)
    again = parse_scheme(json.dumps(scheme.to_payload()))
    assert again == scheme


def test_scheme_model_rejects_ragged_grid():
    with pytest.raises(ValidationError):
        RestrictionScheme(grid=[[P, Z], [P]], row_names=["a", "b"], shock_labels=["s1", "s2"], tv_mask=[False, False])


def test_default_scheme_layout():
    scheme = default_scheme(n_other=1, r=4)
    assert scheme.shock_labels == ["Target", "Path", "Residual1", "Residual2"]
    assert scheme.row_pattern(0) == "+ 0 0 0"
    assert scheme.row_pattern(1) == "0 + 0 0"
    assert scheme.row_pattern(scheme.row_names.index("RGDP")) == "- . . ."
    assert scheme.row_pattern(scheme.row_names.index("FFR")) == "+ 0 . ."
    assert scheme.row_pattern(scheme.row_names.index("GS10")) == "0 + . ."
    assert scheme.tv_mask == [False] * 9 + [True]
    assert validate(scheme, 2, 8, 4) == []


def test_prose_scheme_differs_only_in_two_cells():
    default, prose = default_scheme(), prose_scheme()
    diff = [
        (name, shock)
        for name in default.row_names
        for shock in default.shock_labels
        if default.entry(name, shock) != prose.entry(name, shock)
    ]
    assert sorted(diff) == [("GS10", "Target"), ("RGDP", "Path")]
    assert prose.entry("GS10", "Target") == F
    assert prose.entry("RGDP", "Path") == Z


def test_default_scheme_refuses_other_dimensions():
    with pytest.raises(SchemeError) as err:
        default_scheme(m=1, r=1)
    assert len(err.value.violations) == 2


def test_instruments_only_scheme():
    scheme = instruments_only_scheme(2, 3, 3, row_names=["i1", "i2", "a", "b", "c"], tv_rows=["c"])
    assert scheme.shock_labels == ["Target", "Path", "Residual1"]
    assert scheme.tv_mask == [False, False, False, False, True]
    assert scheme.row_pattern(3) == ". . ."
    with pytest.raises(SchemeError):
        instruments_only_scheme(2, 3, 3, row_names=["i1", "i2", "a", "b", "c"], tv_rows=["i1"])
    with pytest.raises(SchemeError):
        instruments_only_scheme(3, 1, 2)


def test_validate_reports_every_violation():
    scheme = RestrictionScheme(
        grid=[[F, Z], [Z, P], [P, Z]],
        row_names=["Target", "Path", "GS1"],
        shock_labels=["Target", "Path"],
        tv_mask=[True, False, True],
    )
    violations = validate(scheme, 2, 1, 2)
    assert any("diagonal" in v and "Target" in v for v in violations)
    assert any("instrument 'Target' cannot have time-varying" in v for v in violations)
    assert any("'GS1' carries restrictions" in v for v in violations)
    with pytest.raises(SchemeError):
        require_valid(scheme, 2, 1, 2)


def test_validate_off_diagonal_and_dimensions():
    scheme = RestrictionScheme(grid=[[P, F], [Z, P]], row_names=["Target", "Path"], shock_labels=["Target", "Path"], tv_mask=[False, False])
    violations = validate(scheme, 2, 1, 3)
    assert any("off-diagonal" in v for v in violations)
    assert any("expected m+n=3" in v for v in violations)
    assert any("expected r=3" in v for v in violations)


def test_resolve_builtin_schemes(small_panel):
    ds, _ = small_panel
    scheme = resolve_scheme("default", ds, 3)
    assert scheme.row_names == ds.names
    assert scheme.tv_mask[-1]
    loose = resolve_scheme("instruments-only", ds, 3)
    assert all(cell == F for row in loose.grid[2:] for cell in row)
    with pytest.raises(SchemeError):
        resolve_scheme("default", ds, 1)


def test_resolve_scheme_file_checked_against_columns(small_panel, tmp_path):
    ds, _ = small_panel
    payload = default_scheme(n_other=1, r=3, row_names=ds.names).to_payload()
    path = tmp_path / "scheme.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    assert load_scheme(path).row_names == ds.names
    assert resolve_scheme(str(path), ds, 3).r == 3
    with pytest.raises(DimensionError):
        resolve_scheme(str(path), ds, 4)

    payload["rows"][2], payload["rows"][3] = payload["rows"][3], payload["rows"][2]
    path.write_text(json.dumps(payload), encoding="utf-8")
    with pytest.raises(SchemeError) as err:
        check_against_dataset(load_scheme(path), ds)
    assert len(err.value.violations) == 2
