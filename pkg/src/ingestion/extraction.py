import json
import logging
import math
import re
from pathlib import Path
from typing import List, Optional, Union

import pandas as pd
from pydantic import TypeAdapter, ValidationError

from src.errors import ParseError, SchemaError
from src.ingestion.models import Dataset, RawSeries, VariableMeta

logger = logging.getLogger(__name__)

DATE_COLUMN = "date"
_DATE_PATTERN = re.compile(r"^(\d{4})-(\d{2})$")

_schema_adapter = TypeAdapter(List[VariableMeta])


def parse_month(text: str, row: Optional[int] = None) -> pd.Period:
    """Parse a YYYY-MM stamp into a monthly Period, rejecting invalid months."""
    match = _DATE_PATTERN.match(text.strip())
    if not match:
        raise ParseError(f"Invalid date '{text}', expected YYYY-MM", row=row, column=DATE_COLUMN)
    year, month = int(match.group(1)), int(match.group(2))
    if not 1 <= month <= 12:
        raise ParseError(f"Invalid month in date '{text}'", row=row, column=DATE_COLUMN)
    return pd.Period(year=year, month=month, freq="M")


def _parse_cell(text: str, row: int, column: str) -> float:
    stripped = text.strip()
    if stripped == "":
        return math.nan
    try:
        value = float(stripped)
    except ValueError:
        raise ParseError(f"Unparseable value '{text}'", row=row, column=column) from None
    if not math.isfinite(value):
        raise ParseError(f"Non-finite value '{text}'", row=row, column=column)
    return value


def load_schema(path: Union[str, Path]) -> List[VariableMeta]:
    """Load the JSON schema array of {mnemonic, role, tcode, description}."""
    with open(path, "r", encoding="utf-8") as f:
        payload = json.load(f)
    try:
        schema = _schema_adapter.validate_python(payload)
    except ValidationError as e:
        raise SchemaError(f"Invalid schema file {path}: {e}") from e
    names = [v.mnemonic for v in schema]
    if len(set(names)) != len(names):
        raise SchemaError(f"Schema {path} declares duplicate mnemonics")
    return schema


def load_csv(path: Union[str, Path], schema: List[VariableMeta]) -> RawSeries:
    """
    Read an already-monthly CSV into one raw series per schema mnemonic.
    Empty cells are missing observations; each series keeps its own span
    (leading and trailing gaps dropped) on a gap-free monthly index, so a
    month missing from the file shows up as NaN. Parsing is strict: any other
    non-numeric cell is an error with its row and column.
    """
    frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    if DATE_COLUMN not in frame.columns:
        raise SchemaError(f"CSV {path} has no '{DATE_COLUMN}' column", mnemonic=DATE_COLUMN)
    for meta in schema:
        if meta.mnemonic not in frame.columns:
            raise SchemaError(f"CSV {path} is missing column '{meta.mnemonic}' declared in schema", mnemonic=meta.mnemonic)

    # Row numbers are 1-based data rows (header excluded)
    periods = [parse_month(text, row=i + 1) for i, text in enumerate(frame[DATE_COLUMN])]
    index = pd.PeriodIndex(periods, freq="M")
    duplicated = index.duplicated()
    if duplicated.any():
        first = int(duplicated.argmax())
        raise ParseError(f"Duplicate date {index[first]}", row=first + 1, column=DATE_COLUMN)

    raw: RawSeries = {}
    for meta in schema:
        values = [_parse_cell(text, row=i + 1, column=meta.mnemonic) for i, text in enumerate(frame[meta.mnemonic])]
        series = pd.Series(values, index=index, name=meta.mnemonic, dtype=float).sort_index()
        observed = series.dropna()
        if observed.empty:
            raise SchemaError(f"Column '{meta.mnemonic}' has no observations", mnemonic=meta.mnemonic)
        # months absent from the file become NaN so later differencing never spans a gap
        span = pd.period_range(observed.index[0], observed.index[-1], freq="M")
        raw[meta.mnemonic] = series.reindex(span)
    logger.info(f"Loaded {len(raw)} series from {path}")
    return raw


def write_csv(ds: Dataset, path: Union[str, Path]) -> None:
    """Write a Dataset in the loader's CSV format (values as stored, full precision)."""
    frame = ds.to_frame()
    frame.index = frame.index.strftime("%Y-%m")
    frame.index.name = DATE_COLUMN
    frame.to_csv(path, float_format="%.17g", lineterminator="\n")


def write_schema(schema: List[VariableMeta], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump([v.model_dump(mode="json") for v in schema], f, indent=2)
