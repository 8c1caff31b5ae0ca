from .models import Restriction, RestrictionScheme
from .parsing import check_against_dataset, load_scheme, parse_row, parse_scheme, resolve_scheme
from .schemes import default_scheme, instruments_only_scheme, prose_scheme
from .validation import require_valid, validate

__all__ = [
    "Restriction",
    "RestrictionScheme",
    "check_against_dataset",
    "load_scheme",
    "parse_row",
    "parse_scheme",
    "resolve_scheme",
    "default_scheme",
    "instruments_only_scheme",
    "prose_scheme",
    "require_valid",
    "validate",
]
