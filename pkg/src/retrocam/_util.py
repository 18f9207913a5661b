"""Small shared helpers: deterministic serialization and ordered parallel map."""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, Sequence


def format_float(value: float) -> str:
    """Render a float with 17 significant digits (exact double round trip)."""
    if not math.isfinite(value):
        raise ValueError(f"cannot serialize non-finite value {value!r}")
    return format(float(value), ".17g")


def dump_json(obj: Any, indent: int = 2) -> str:
    """Serialize to JSON with every float at 17 significant digits.

    Key order is insertion order, so building the document deterministically
    yields byte-identical output.  The stdlib encoder formats floats with
    repr(), which is shortest-round-trip rather than fixed precision, hence
    this small recursive writer.
    """
    out: list[str] = []
    _write(obj, out, indent, 0)
    out.append("\n")
    return "".join(out)


def _write(obj: Any, out: list[str], indent: int, level: int) -> None:
    pad = " " * (indent * level)
    inner = " " * (indent * (level + 1))
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            out.append(f"{inner}{json.dumps(key)}: ")
            _write(value, out, indent, level + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        # short numeric rows (points, id pairs) stay on one line
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj) and len(obj) <= 4:
            out.append("[")
            parts = [format_float(v) if isinstance(v, float) else str(v) for v in obj]
            out.append(", ".join(parts))
            out.append("]")
            return
        out.append("[\n")
        for i, value in enumerate(obj):
            out.append(inner)
            _write(value, out, indent, level + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def tmap(fn: Callable, items: Iterable, threads: int = 1) -> list:
    """Map fn over items, preserving order, optionally on a thread pool.

    Results are collected in input order whatever the thread count, so a
    pipeline built on tmap produces identical output for any value of
    threads.
    """
    seq: Sequence = list(items)
    if threads <= 1 or len(seq) <= 1:
        return [fn(item) for item in seq]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, seq))
