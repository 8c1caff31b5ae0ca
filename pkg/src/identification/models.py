from enum import Enum
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator


class Restriction(str, Enum):
    POS = "POS"
    NEG = "NEG"
    ZERO = "ZERO"
    FREE = "FREE"

    @property
    def symbol(self) -> str:
        return RESTRICTION_SYMBOLS[self]

    @classmethod
    def from_symbol(cls, symbol: str) -> "Restriction":
        return SYMBOL_RESTRICTIONS[symbol]


RESTRICTION_SYMBOLS = {
    Restriction.POS: "+",
    Restriction.NEG: "-",
    Restriction.ZERO: "0",
    Restriction.FREE: ".",
}
SYMBOL_RESTRICTIONS = {symbol: restriction for restriction, symbol in RESTRICTION_SYMBOLS.items()}


class RestrictionScheme(BaseModel):
    """(m+n) x r grid of impact restrictions, one row per panel column in panel order."""
    model_config = ConfigDict(frozen=True)

    grid: List[List[Restriction]]
    row_names: List[str]
    shock_labels: List[str]
    tv_mask: List[bool]

    @model_validator(mode="after")
    def _check_shape(self) -> "RestrictionScheme":
        r = len(self.shock_labels)
        if r == 0:
            raise ValueError("A restriction scheme needs at least one shock")
        if len(self.row_names) != len(self.grid) or len(self.tv_mask) != len(self.grid):
            raise ValueError(
                f"grid has {len(self.grid)} rows but {len(self.row_names)} names and {len(self.tv_mask)} tv flags"
            )
        for name, row in zip(self.row_names, self.grid):
            if len(row) != r:
                raise ValueError(f"Row '{name}' has {len(row)} entries, expected {r} (one per shock)")
        return self

    @property
    def n_rows(self) -> int:
        return len(self.grid)

    @property
    def r(self) -> int:
        return len(self.shock_labels)

    def entry(self, row: str, shock: str) -> Restriction:
        return self.grid[self.row_names.index(row)][self.shock_labels.index(shock)]

    def mask(self, restriction: Restriction) -> np.ndarray:
        return np.array([[cell == restriction for cell in row] for row in self.grid], dtype=bool)

    @property
    def tv_rows(self) -> np.ndarray:
        return np.array(self.tv_mask, dtype=bool)

    def row_pattern(self, index: int) -> str:
        return " ".join(cell.symbol for cell in self.grid[index])

    def with_tv(self, tv_mask: List[bool]) -> "RestrictionScheme":
        return self.model_copy(update={"tv_mask": list(tv_mask)})

    def to_payload(self) -> dict:
        """The config form read by parse_scheme."""
        return {
            "shocks": list(self.shock_labels),
            "rows": [
                {"name": name, "pattern": self.row_pattern(i), "tv": bool(tv)}
                for i, (name, tv) in enumerate(zip(self.row_names, self.tv_mask))
            ],
        }
