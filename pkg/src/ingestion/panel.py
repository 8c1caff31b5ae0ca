import logging
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from src.errors import CoverageError, SchemaError, ValidationFailure
from src.ingestion.extraction import parse_month
from src.ingestion.models import ROLE_ORDER, Dataset, RawSeries, Role, VariableMeta
from src.ingestion.transforms import apply_tcode

logger = logging.getLogger(__name__)

PeriodLike = Union[str, pd.Period]


def _as_period(value: PeriodLike) -> pd.Period:
    if isinstance(value, pd.Period):
        return value.asfreq("M")
    return parse_month(str(value), row=None)


def _describe_span(missing: pd.PeriodIndex) -> str:
    if len(missing) == 1:
        return str(missing[0])
    return f"{missing[0]}..{missing[-1]} ({len(missing)} months)"


def order_schema(schema: List[VariableMeta]) -> List[VariableMeta]:
    """Stable sort into INSTRUMENT, CORE, OTHER blocks."""
    return sorted(schema, key=lambda v: ROLE_ORDER[v.role])


def assemble(raw: RawSeries, schema: List[VariableMeta], sample: Optional[Tuple[PeriodLike, PeriodLike]] = None) -> Dataset:
    """
    Transform every series by its code, align to the monthly sample and
    order columns by role. Instrument months without an observation are
    filled with 0.0; macro series must fully cover the sample.
    """
    ordered = order_schema(schema)
    transformed: Dict[str, pd.Series] = {}
    for meta in ordered:
        if meta.mnemonic not in raw:
            raise SchemaError(f"No raw series for '{meta.mnemonic}'", mnemonic=meta.mnemonic)
        series = raw[meta.mnemonic]
        if meta.role == Role.INSTRUMENT:
            transformed[meta.mnemonic] = apply_tcode(series.dropna(), meta.tcode)
            continue
        gaps = series.index[series.isna().to_numpy()]
        if len(gaps):
            raise CoverageError(meta.mnemonic, _describe_span(gaps))
        transformed[meta.mnemonic] = apply_tcode(series, meta.tcode)

    macro = [v.mnemonic for v in ordered if v.role != Role.INSTRUMENT]
    if sample is None:
        if not macro:
            raise SchemaError("Cannot infer the sample without macro series; pass sample=(start, end)")
        start = max(transformed[name].index[0] for name in macro)
        end = min(transformed[name].index[-1] for name in macro)
    else:
        start, end = _as_period(sample[0]), _as_period(sample[1])
    if end < start:
        raise ValidationFailure(f"Sample end {end} precedes start {start}")

    dates = pd.period_range(start=start, end=end, freq="M")
    columns = []
    zero_filled: Dict[str, int] = {}
    for meta in ordered:
        series = transformed[meta.mnemonic]
        aligned = series.reindex(dates)
        missing = aligned.isna().to_numpy()
        if meta.role == Role.INSTRUMENT:
            zero_filled[meta.mnemonic] = int(missing.sum())
            aligned = aligned.fillna(0.0)
        elif missing.any():
            raise CoverageError(meta.mnemonic, _describe_span(dates[missing]))
        columns.append(aligned.to_numpy(dtype=float))

    values = np.column_stack(columns) if columns else np.empty((len(dates), 0))
    logger.info(f"Assembled panel {dates[0]}..{dates[-1]}: T={len(dates)}, columns={len(ordered)}, zero-filled={zero_filled}")
    return Dataset(values=values, dates=dates, meta=ordered, zero_filled=zero_filled)


def standardize(ds: Dataset) -> Dataset:
    """Scale every column to mean 0 and sample sd 1, storing (mean, sd) so results can be reported in original units."""
    if ds.T < 2:
        raise ValidationFailure("Standardization needs at least 2 observations")
    mean = ds.values.mean(axis=0)
    sd = ds.values.std(axis=0, ddof=1)
    flat = ~(sd > 0)
    if flat.any():
        name = ds.names[int(np.argmax(flat))]
        raise ValidationFailure(f"Column '{name}' has zero variance and cannot be standardized")
    values = (ds.values - mean) / sd
    if ds.scaling is not None:
        # compose with the existing scaling so original units stay recoverable
        mean = ds.scaling[:, 0] + ds.scaling[:, 1] * mean
        sd = ds.scaling[:, 1] * sd
    return ds.with_values(values, np.column_stack([mean, sd]))


def unstandardize(ds: Dataset) -> Dataset:
    if ds.scaling is None:
        return ds
    values = ds.values * ds.scaling[:, 1] + ds.scaling[:, 0]
    return ds.with_values(values, None)
