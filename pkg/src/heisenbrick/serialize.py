"""JSON reading and writing for bricks, instances and reports."""

from __future__ import annotations

import json
from pathlib import Path

from .brick import Brick
from .errors import InputError
from .fp import DEFAULT_MAX_PRIME, prime_field, set_from_json, set_to_json
from .sumprod import SumProdInstance


def parse_json(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None


def load_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_json(text, str(path))


def _int_field(obj: dict, key: str) -> int:
    if key not in obj:
        raise InputError(f"missing field {key!r}")
    v = obj[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise InputError(f"field {key!r} must be an integer, got {v!r}")
    return v


def brick_from_json(obj, max_prime: int = DEFAULT_MAX_PRIME) -> Brick:
    if not isinstance(obj, dict):
        raise InputError("a brick is a JSON object")
    p = _int_field(obj, "p")
    n = _int_field(obj, "n")
    F = prime_field(p, max_prime)
    for key in ("X", "Y", "Z"):
        if key not in obj:
            raise InputError(f"missing field {key!r}")
    if not isinstance(obj["X"], list) or not isinstance(obj["Y"], list):
        raise InputError("'X' and 'Y' are lists of sets")
    if len(obj["X"]) != n or len(obj["Y"]) != n:
        raise InputError(f"n = {n} but got {len(obj['X'])} X-sets and {len(obj['Y'])} Y-sets")
    xs = [set_from_json(F, s) for s in obj["X"]]
    ys = [set_from_json(F, s) for s in obj["Y"]]
    z = set_from_json(F, obj["Z"])
    return Brick(xs, ys, z, allow_zero=bool(obj.get("allow_zero", False)))


def brick_to_json(b: Brick) -> dict:
    out = {
        "p": b.p,
        "n": b.n,
        "X": [set_to_json(s) for s in b.xs],
        "Y": [set_to_json(s) for s in b.ys],
        "Z": set_to_json(b.z),
    }
    if b.allow_zero:
        out["allow_zero"] = True
    return out


def instance_from_json(obj, max_prime: int = DEFAULT_MAX_PRIME) -> SumProdInstance:
    b = brick_from_json(obj, max_prime)
    m = _int_field(obj, "m")
    return SumProdInstance(m, b.xs, b.ys, b.z)


def instance_to_json(inst: SumProdInstance) -> dict:
    return {
        "p": inst.p,
        "n": inst.n,
        "m": inst.m,
        "X": [set_to_json(s) for s in inst.xs],
        "Y": [set_to_json(s) for s in inst.ys],
        "Z": set_to_json(inst.z),
    }


def dumps(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _flatten(prefix, value, rows):
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else k, value[k], rows)
    elif isinstance(value, (int, float, bool)) or value is None:
        rows.append((prefix, value))


def to_csv(report: dict) -> str:
    """key,value rows for the scalar numeric fields of a report."""
    rows: list = []
    _flatten("", report.get("numbers", report), rows)
    lines = ["key,value"] + [f"{k},{'' if v is None else v}" for k, v in rows]
    return "\n".join(lines) + "\n"
