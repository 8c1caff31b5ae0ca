import numpy as np
import pandas as pd

from src.errors import CoverageError, DomainError, LengthError

# Lag lost by each transformation code
TCODE_LAGS = {1: 0, 2: 1, 4: 0, 5: 1, 7: 12}
LOG_TCODES = (4, 5, 7)


def tcode_lag(tcode: int) -> int:
    if tcode not in TCODE_LAGS:
        raise ValueError(f"Unknown tcode {tcode}")
    return TCODE_LAGS[tcode]


def apply_tcode(series: pd.Series, tcode: int) -> pd.Series:
    """
    Apply a stationarity transformation code:
    1 level, 2 first difference, 4 100*log level,
    5 100*monthly log difference, 7 100*12-month log difference.
    The result is shortened by the code's lag and keeps the trimmed dates.
    """
    lag = tcode_lag(tcode)
    name = series.name or "series"
    if len(series) <= lag or len(series) == 0:
        raise LengthError(f"Series '{name}' has {len(series)} observations, tcode {tcode} needs more than {lag}")

    if lag and isinstance(series.index, pd.PeriodIndex):
        expected = pd.period_range(series.index[0], periods=len(series), freq="M")
        if not series.index.equals(expected):
            missing = expected.difference(series.index)
            span = str(missing[0]) if len(missing) else f"months after {series.index[0]}"
            raise CoverageError(str(name), f"{span} (tcode {tcode} differences across months)")

    values = series.to_numpy(dtype=float)
    if tcode in LOG_TCODES:
        bad = ~(values > 0)
        if bad.any():
            where = series.index[int(np.argmax(bad))]
            raise DomainError(f"Series '{name}' has a nonpositive value at {where} under log transform (tcode {tcode})", date=str(where))

    if tcode == 1:
        out = values.copy()
    elif tcode == 2:
        out = values[1:] - values[:-1]
    elif tcode == 4:
        out = 100.0 * np.log(values)
    elif tcode == 5:
        logs = np.log(values)
        out = 100.0 * (logs[1:] - logs[:-1])
    else:
        logs = np.log(values)
        out = 100.0 * (logs[12:] - logs[:-12])

    return pd.Series(out, index=series.index[lag:], name=series.name)
