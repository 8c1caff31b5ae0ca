from .draws_codec import decode, encode, read_draws, write_draws
from .run_store import RunStore

__all__ = ["decode", "encode", "read_draws", "write_draws", "RunStore"]
