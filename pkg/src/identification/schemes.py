"""
Built-in restriction schemes.

The default grid reproduces the published identification table: a Target
and a Path shock tied to the two instruments, plus residual shocks that
load on every macro row freely and never on the instruments. The prose
variant frees the 10-year yield under Target and pins output to zero under
Path, as the accompanying text describes.
"""
from typing import List, Optional, Sequence

from src.errors import SchemeError
from src.identification.models import Restriction, RestrictionScheme

P, N, Z, F = Restriction.POS, Restriction.NEG, Restriction.ZERO, Restriction.FREE

INSTRUMENT_NAMES = ["Target", "Path"]
CORE_NAMES = ["RGDP", "PCE", "FFR", "GS1", "GS10", "M2REAL", "SP500"]
IDENTIFIED_SHOCKS = ["Target", "Path"]

# (Target shock, Path shock) restriction per core row
CORE_TABLE = {
    "RGDP": (N, F),
    "PCE": (N, Z),
    "FFR": (P, Z),
    "GS1": (P, F),
    "GS10": (Z, P),
    "M2REAL": (N, F),
    "SP500": (N, F),
}
PROSE_OVERRIDES = {
    "GS10": (F, P),
    "RGDP": (N, Z),
}


def residual_labels(count: int) -> List[str]:
    return [f"Residual{k + 1}" for k in range(count)]


def _instrument_rows(m: int, r: int) -> List[List[Restriction]]:
    return [[P if j == i else Z for j in range(r)] for i in range(m)]


def _names(defaults: List[str], given: Optional[Sequence[str]], count: int, role: str) -> List[str]:
    if given is None:
        return defaults[:count] if len(defaults) >= count else [f"{role}{k + 1}" for k in range(count)]
    if len(given) != count:
        raise SchemeError([f"Expected {count} {role} row names, got {len(given)}"])
    return list(given)


def _table_scheme(table: dict, m: int, n_core: int, n_other: int, r: int, row_names: Optional[Sequence[str]]) -> RestrictionScheme:
    problems = []
    if m != len(INSTRUMENT_NAMES):
        problems.append(f"the built-in table needs {len(INSTRUMENT_NAMES)} instruments, got m={m}")
    if n_core != len(CORE_NAMES):
        problems.append(f"the built-in table needs {len(CORE_NAMES)} core rows, got n_core={n_core}")
    if r < len(IDENTIFIED_SHOCKS):
        problems.append(f"the built-in table needs r >= {len(IDENTIFIED_SHOCKS)}, got r={r}")
    if problems:
        raise SchemeError(problems)

    n_resid = r - len(IDENTIFIED_SHOCKS)
    grid = _instrument_rows(m, r)
    for name in CORE_NAMES:
        grid.append(list(table[name]) + [F] * n_resid)
    grid.extend([[F] * r for _ in range(n_other)])

    if row_names is None:
        names = INSTRUMENT_NAMES + CORE_NAMES + [f"OTHER{k + 1}" for k in range(n_other)]
    else:
        names = list(row_names)
        if len(names) != m + n_core + n_other:
            raise SchemeError([f"Expected {m + n_core + n_other} row names, got {len(names)}"])
    return RestrictionScheme(
        grid=grid,
        row_names=names,
        shock_labels=IDENTIFIED_SHOCKS + residual_labels(n_resid),
        tv_mask=[False] * (m + n_core) + [True] * n_other,
    )


def default_scheme(m: int = 2, n_core: int = 7, n_other: int = 0, r: int = 4, row_names: Optional[Sequence[str]] = None) -> RestrictionScheme:
    """The published grid; OTHER rows are FREE and time-varying."""
    return _table_scheme(CORE_TABLE, m, n_core, n_other, r, row_names)


def prose_scheme(m: int = 2, n_core: int = 7, n_other: int = 0, r: int = 4, row_names: Optional[Sequence[str]] = None) -> RestrictionScheme:
    return _table_scheme({**CORE_TABLE, **PROSE_OVERRIDES}, m, n_core, n_other, r, row_names)


def instruments_only_scheme(m: int, n: int, r: int, row_names: Optional[Sequence[str]] = None, tv_rows: Sequence[str] = ()) -> RestrictionScheme:
    """Only the instrument conventions: macro rows FREE in every column."""
    if r < m:
        raise SchemeError([f"r={r} is smaller than the number of instruments m={m}"])
    names = _names([], row_names, m + n, "ROW")
    tv = set(tv_rows)
    unknown = tv - set(names[m:])
    if unknown:
        raise SchemeError([f"tv row '{name}' is not a macro row" for name in sorted(unknown)])
    n_resid = r - m
    labels = IDENTIFIED_SHOCKS + residual_labels(n_resid) if m == len(IDENTIFIED_SHOCKS) else (
        [f"Shock{k + 1}" for k in range(m)] + residual_labels(n_resid)
    )
    return RestrictionScheme(
        grid=_instrument_rows(m, r) + [[F] * r for _ in range(n)],
        row_names=names,
        shock_labels=labels,
        tv_mask=[False] * m + [name in tv for name in names[m:]],
    )
