"""
Binary container for stored posterior draws (draws.bin).

    magic    8 bytes  b"FBVARDRW"
    version  u16 little-endian
    length   u32 little-endian, size of the JSON header in bytes
    header   UTF-8 JSON, keys sorted
    payload  every array as raw little-endian float64, C order, in header order

The header lists each array with its shape, byte offset into the payload
and sha256, together with the `truncated` flag and the run metadata. It
holds nothing that varies between identical runs.
"""
import hashlib
import json
import logging
import struct
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
import pandas as pd

from src.engine.models import PosteriorDraws
from src.errors import IntegrityError

logger = logging.getLogger(__name__)

MAGIC = b"FBVARDRW"
VERSION = 1
DTYPE = "<f8"
_PREFIX = struct.Struct("<8sHI")

PathLike = Union[str, Path]


def encode(draws: PosteriorDraws) -> bytes:
    entries = []
    chunks = []
    offset = 0
    for name, array in draws.arrays().items():
        data = np.ascontiguousarray(array, dtype=DTYPE).tobytes()
        entries.append({
            "name": name,
            "shape": list(array.shape),
            "offset": offset,
            "nbytes": len(data),
            "sha256": hashlib.sha256(data).hexdigest(),
        })
        chunks.append(data)
        offset += len(data)
    header = {
        "arrays": entries,
        "dtype": DTYPE,
        "truncated": bool(draws.truncated),
        "run": draws.header(),
    }
    text = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return _PREFIX.pack(MAGIC, VERSION, len(text)) + text + b"".join(chunks)


def read_header(blob: bytes) -> Tuple[Dict[str, Any], int]:
    """Parse and check the fixed prefix and JSON header; returns (header, payload start)."""
    if len(blob) < _PREFIX.size:
        raise IntegrityError("draws file is shorter than its fixed header")
    magic, version, length = _PREFIX.unpack_from(blob)
    if magic != MAGIC:
        raise IntegrityError(f"not a draws file (magic {magic!r})")
    if version != VERSION:
        raise IntegrityError(f"unsupported draws file version {version}, expected {VERSION}")
    start = _PREFIX.size + length
    if len(blob) < start:
        raise IntegrityError("draws file header is truncated")
    try:
        header = json.loads(blob[_PREFIX.size:start].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise IntegrityError(f"draws file header is not valid JSON: {e}") from e
    return header, start


def decode(blob: bytes, diagnostics: Optional[pd.DataFrame] = None) -> PosteriorDraws:
    header, start = read_header(blob)
    payload = memoryview(blob)[start:]
    arrays: Dict[str, np.ndarray] = {}
    for entry in header["arrays"]:
        lo, hi = entry["offset"], entry["offset"] + entry["nbytes"]
        if hi > len(payload):
            raise IntegrityError(f"draws file is truncated inside array '{entry['name']}'")
        data = bytes(payload[lo:hi])
        if hashlib.sha256(data).hexdigest() != entry["sha256"]:
            raise IntegrityError(f"checksum mismatch for array '{entry['name']}'")
        arrays[entry["name"]] = np.frombuffer(data, dtype=header["dtype"]).reshape(entry["shape"]).astype(float)
    expected = sum(entry["nbytes"] for entry in header["arrays"])
    if len(payload) != expected:
        raise IntegrityError(f"draws payload holds {len(payload)} bytes, header declares {expected}")
    return PosteriorDraws.from_arrays(arrays, header["run"], bool(header["truncated"]), diagnostics)


def write_draws(draws: PosteriorDraws, path: PathLike) -> None:
    blob = encode(draws)
    with open(path, "wb") as f:
        f.write(blob)
    logger.info(f"Wrote {draws.count} draws ({len(blob)} bytes) to {path}")


def read_draws(path: PathLike, diagnostics: Optional[pd.DataFrame] = None) -> PosteriorDraws:
    try:
        with open(path, "rb") as f:
            blob = f.read()
    except FileNotFoundError as e:
        raise IntegrityError(f"no draws file at {path}") from e
    return decode(blob, diagnostics)
