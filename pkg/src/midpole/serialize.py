"""JSON emission with fixed 17-significant-digit floats.

Every external surface (CLI output, HTTP responses) goes through dumps()
here, so a number formatted by the server is byte-identical to the same
number formatted by the CLI and round-trips exactly through IEEE doubles.
"""

from __future__ import annotations

import json
import math

__all__ = ["format_float", "dumps", "loads"]


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite float {x} cannot be serialized")
    if x == int(x) and abs(x) < 1e16:
        # keep integral values unambiguous as floats
        return f"{x:.1f}"
    return f"{x:.17g}"


def _encode(obj) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = ",".join(f"{json.dumps(str(k))}:{_encode(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_encode(v) for v in obj) + "]"
    if hasattr(obj, "tolist"):  # numpy array or scalar
        return _encode(obj.tolist())
    if hasattr(obj, "item"):  # other numpy scalar-likes
        return _encode(obj.item())
    if hasattr(obj, "to_json_dict"):
        return _encode(obj.to_json_dict())
    raise TypeError(f"cannot serialize {type(obj)!r}")


def dumps(obj) -> str:
    return _encode(obj)


def loads(text: str):
    return json.loads(text)
