"""Deterministic JSON serialization for model files and wire records.

Model files carry floats at 17 significant digits so a dump -> load -> dump
cycle is byte-identical on any platform.  JSON Lines wire records use
Python's shortest round-trip float repr (the json default).
"""

from __future__ import annotations

import json
import math
from typing import Any


def _canonical(obj: Any, parts: list[str]) -> None:
    if obj is None:
        parts.append("null")
    elif obj is True:
        parts.append("true")
    elif obj is False:
        parts.append("false")
    elif isinstance(obj, int):
        parts.append(str(obj))
    elif isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite float {obj!r} cannot be serialized")
        parts.append(format(obj, ".17g"))
    elif isinstance(obj, str):
        parts.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, (list, tuple)):
        parts.append("[")
        for i, item in enumerate(obj):
            if i:
                parts.append(",")
            _canonical(item, parts)
        parts.append("]")
    elif isinstance(obj, dict):
        parts.append("{")
        for i, key in enumerate(sorted(obj)):
            if not isinstance(key, str):
                raise TypeError(f"non-string key {key!r}")
            if i:
                parts.append(",")
            parts.append(json.dumps(key, ensure_ascii=False))
            parts.append(":")
            _canonical(obj[key], parts)
        parts.append("}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_canonical(obj: Any) -> str:
    """Serialize with sorted keys and 17-significant-digit floats."""
    parts: list[str] = []
    _canonical(obj, parts)
    return "".join(parts)


def dump_canonical(obj: Any, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_canonical(obj))
        fh.write("\n")


def load(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def dumps_record(obj: Any) -> str:
    """One JSON Lines record: sorted keys, shortest round-trip floats."""
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
