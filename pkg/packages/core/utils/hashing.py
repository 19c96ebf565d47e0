from __future__ import annotations
from typing import Any
import hashlib

import orjson


def sha256_hex(data: str | bytes) -> str:
    raw = data.encode("utf-8") if isinstance(data, str) else data
    return hashlib.sha256(raw).hexdigest()


def canonical_digest(document: Any) -> str:
    """Digest of a JSON-able document, independent of key order."""
    return sha256_hex(orjson.dumps(document, option=orjson.OPT_SORT_KEYS))
