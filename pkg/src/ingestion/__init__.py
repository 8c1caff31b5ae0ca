from .extraction import load_csv, load_schema, write_csv, write_schema
from .panel import assemble, standardize, unstandardize
from .transforms import apply_tcode

__all__ = ["load_csv", "load_schema", "write_csv", "write_schema", "assemble", "standardize", "unstandardize", "apply_tcode"]
