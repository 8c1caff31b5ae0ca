from typing import List

from src.errors import SchemeError
from src.identification.models import Restriction, RestrictionScheme


def validate(scheme: RestrictionScheme, m: int, n: int, r: int) -> List[str]:
    """Every violation of the instrument conventions and the tv rules; empty when the scheme is usable."""
    violations = []
    if scheme.n_rows != m + n:
        violations.append(f"scheme has {scheme.n_rows} rows, expected m+n={m + n}")
    if scheme.r != r:
        violations.append(f"scheme has {scheme.r} shocks, expected r={r}")
    if r < m:
        violations.append(f"r={r} must be at least m={m} (one factor per instrument)")

    for i in range(min(m, scheme.n_rows)):
        name = scheme.row_names[i]
        for j, cell in enumerate(scheme.grid[i]):
            if j == i and cell != Restriction.POS:
                violations.append(f"instrument '{name}': diagonal entry (shock '{scheme.shock_labels[j]}') must be POS")
            elif j != i and cell != Restriction.ZERO:
                violations.append(f"instrument '{name}': instrument off-diagonal must be ZERO (shock '{scheme.shock_labels[j]}')")
        if scheme.tv_mask[i]:
            violations.append(f"instrument '{name}' cannot have time-varying loadings")

    for i in range(m, scheme.n_rows):
        restricted = any(cell != Restriction.FREE for cell in scheme.grid[i])
        if scheme.tv_mask[i] and restricted:
            violations.append(f"row '{scheme.row_names[i]}' carries restrictions and cannot have time-varying loadings")
    return violations


def require_valid(scheme: RestrictionScheme, m: int, n: int, r: int) -> None:
    violations = validate(scheme, m, n, r)
    if violations:
        raise SchemeError(violations)
