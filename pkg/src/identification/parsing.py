import logging
from pathlib import Path
from typing import List, Tuple, Union

import yaml

from src.errors import DimensionError, ParseError, SchemeError
from src.identification.models import SYMBOL_RESTRICTIONS, Restriction, RestrictionScheme
from src.identification.schemes import default_scheme, instruments_only_scheme, prose_scheme
from src.ingestion.models import Dataset, Role

logger = logging.getLogger(__name__)

BUILTIN_SCHEMES = ("default", "default-prose", "instruments-only")


def parse_pattern(pattern: str, row: str) -> List[Restriction]:
    """Map a whitespace-separated symbol pattern such as "- . 0 +" to restrictions."""
    cells = []
    for position, symbol in enumerate(pattern.split()):
        if symbol not in SYMBOL_RESTRICTIONS:
            raise ParseError(f"Unknown restriction symbol '{symbol}' in row '{row}' at position {position + 1} (expected one of + - 0 .)")
        cells.append(SYMBOL_RESTRICTIONS[symbol])
    return cells


def parse_row(text: str) -> Tuple[str, List[Restriction]]:
    """Parse the compact row form "RGDP: - . . .". """
    name, sep, pattern = text.partition(":")
    if not sep or not name.strip():
        raise ParseError(f"Row '{text}' must look like 'NAME: + . 0 -'")
    return name.strip(), parse_pattern(pattern, name.strip())


def _row_entry(entry: Union[str, dict], index: int) -> Tuple[str, List[Restriction], bool]:
    if isinstance(entry, str):
        name, cells = parse_row(entry)
        return name, cells, False
    if isinstance(entry, dict) and len(entry) == 1 and "name" not in entry:
        # unquoted YAML "RGDP: - . . ." arrives as a one-key mapping
        (name, pattern), = entry.items()
        return str(name), parse_pattern(str(pattern), str(name)), False
    if not isinstance(entry, dict) or "name" not in entry or "pattern" not in entry:
        raise ParseError(f"Row entry {index + 1} needs 'name' and 'pattern'")
    name = str(entry["name"])
    return name, parse_pattern(str(entry["pattern"]), name), bool(entry.get("tv", False))


def parse_scheme(text: str) -> RestrictionScheme:
    """
    Parse {shocks: [labels], rows: [{name, pattern, tv}]} from JSON or YAML
    text. Rows may also be given in the compact "NAME: + 0 . -" form.
    """
    # JSON is a subset of YAML
    try:
        payload = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ParseError(f"Restriction config is neither JSON nor YAML: {e}") from e
    if not isinstance(payload, dict) or "shocks" not in payload or "rows" not in payload:
        raise ParseError("Restriction config must define 'shocks' and 'rows'")

    shocks = [str(s) for s in payload["shocks"]]
    names, grid, tv = [], [], []
    for index, entry in enumerate(payload["rows"]):
        name, cells, flag = _row_entry(entry, index)
        if len(cells) != len(shocks):
            raise DimensionError(f"Row '{name}' has {len(cells)} symbols for {len(shocks)} shocks")
        names.append(name)
        grid.append(cells)
        tv.append(flag)
    if len(set(names)) != len(names):
        raise ParseError("Restriction config repeats a row name")
    return RestrictionScheme(grid=grid, row_names=names, shock_labels=shocks, tv_mask=tv)


def load_scheme(path: Union[str, Path]) -> RestrictionScheme:
    with open(path, "r", encoding="utf-8") as f:
        return parse_scheme(f.read())


def check_against_dataset(scheme: RestrictionScheme, ds: Dataset) -> None:
    """Rows must match the dataset's columns one-to-one and in order."""
    if scheme.n_rows != len(ds.names):
        raise DimensionError(f"Scheme has {scheme.n_rows} rows but the dataset has {len(ds.names)} columns")
    mismatched = [
        f"row {i + 1}: scheme '{s}' vs dataset '{d}'"
        for i, (s, d) in enumerate(zip(scheme.row_names, ds.names))
        if s != d
    ]
    if mismatched:
        raise SchemeError(mismatched)


def resolve_scheme(choice: str, ds: Dataset, r: int) -> RestrictionScheme:
    """A built-in scheme laid over the dataset's columns, or a scheme file checked against them."""
    n_core = sum(1 for v in ds.meta if v.role == Role.CORE)
    n_other = sum(1 for v in ds.meta if v.role == Role.OTHER)
    if choice == "default":
        scheme = default_scheme(ds.m, n_core, n_other, r, row_names=ds.names)
    elif choice == "default-prose":
        scheme = prose_scheme(ds.m, n_core, n_other, r, row_names=ds.names)
    elif choice == "instruments-only":
        other = [v.mnemonic for v in ds.meta if v.role == Role.OTHER]
        scheme = instruments_only_scheme(ds.m, ds.n, r, row_names=ds.names, tv_rows=other)
    else:
        scheme = load_scheme(choice)
        check_against_dataset(scheme, ds)
    if scheme.r != r:
        raise DimensionError(f"Scheme defines {scheme.r} shocks but r={r}")
    logger.info(f"Using restriction scheme '{choice}' with {scheme.n_rows} rows and shocks {scheme.shock_labels}")
    return scheme
