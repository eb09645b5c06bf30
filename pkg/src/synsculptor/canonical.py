"""Canonical JSON serialization and content hashing.

Equal payloads must hash equal across processes, so serialization is
pinned: sorted keys, no whitespace, shortest round-trip decimal floats
(Python repr semantics via json), NaN/Infinity rejected. The hash is
64-bit FNV-1a over the UTF-8 bytes, reported as 16 hex digits.
"""

from __future__ import annotations

import json

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK = 0xFFFFFFFFFFFFFFFF


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def fnv1a_64(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & _MASK
    return h


def content_hash(obj) -> str:
    """16-hex-digit FNV-1a over the canonical serialization."""
    return f"{fnv1a_64(canonical_json(obj).encode('utf-8')):016x}"
