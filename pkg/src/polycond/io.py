"""File formats for coefficient tensors and whole systems.

A tensor file is one JSON header line, newline-terminated, followed by the
raw entries as little-endian float64 in row-major order:

    {"n": 4, "d": 2, "m": 3, "layout": "row-major", "dtype": "f64"}\\n<bytes>

The pure-JSON variant inlines the entries under a "data" key for small
systems.  A system file uses the same header plus "kind": "system" and
"has_det", then the random part's bytes followed by the deterministic
part's when present.  All round trips are binary exact.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ConfigError
from .systems import CoefficientTensor, PolynomialSystem, SystemShape

_LAYOUT = "row-major"
_DTYPE = "f64"


def _header_dict(shape: SystemShape) -> dict:
    return {
        "n": shape.n,
        "d": shape.d,
        "m": shape.m,
        "layout": _LAYOUT,
        "dtype": _DTYPE,
    }


def _parse_header(obj: dict) -> SystemShape:
    try:
        n, d, m = int(obj["n"]), int(obj["d"]), int(obj["m"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"tensor header missing or malformed n/d/m: {obj!r}") from exc
    if obj.get("layout") != _LAYOUT:
        raise ConfigError(f"unsupported layout {obj.get('layout')!r}, expected {_LAYOUT!r}")
    if obj.get("dtype") != _DTYPE:
        raise ConfigError(f"unsupported dtype {obj.get('dtype')!r}, expected {_DTYPE!r}")
    shape = SystemShape(n, d)
    if shape.m != m:
        raise ConfigError(f"header claims m={m} but n={n} forces m={shape.m}")
    return shape


def _split_header(blob: bytes, path) -> tuple[dict, bytes]:
    nl = blob.find(b"\n")
    if nl < 0:
        raise ConfigError(f"{path}: no header line found")
    try:
        obj = json.loads(blob[:nl].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{path}: malformed JSON header") from exc
    return obj, blob[nl + 1 :]


def _decode_body(body: bytes, shape: SystemShape, path, count: int = 1) -> np.ndarray:
    expected = shape.entry_count * count * 8
    if len(body) != expected:
        raise ConfigError(
            f"{path}: body has {len(body)} bytes, expected {expected} "
            f"for {count} tensor(s) of shape {shape.tensor_shape}"
        )
    return np.frombuffer(body, dtype="<f8").astype(np.float64)


def save_tensor(tensor: CoefficientTensor, path) -> None:
    """Write a tensor in the binary header-plus-raw-floats format."""
    with open(path, "wb") as fh:
        fh.write(json.dumps(_header_dict(tensor.shape)).encode("utf-8"))
        fh.write(b"\n")
        fh.write(np.ascontiguousarray(tensor.data, dtype="<f8").tobytes())


def load_tensor(path) -> CoefficientTensor:
    with open(path, "rb") as fh:
        blob = fh.read()
    obj, body = _split_header(blob, path)
    shape = _parse_header(obj)
    return CoefficientTensor(shape, _decode_body(body, shape, path))


def tensor_to_json(tensor: CoefficientTensor) -> str:
    """Pure-JSON variant for small tensors (entries inline, full precision)."""
    obj = _header_dict(tensor.shape)
    obj["data"] = tensor.data.reshape(-1).tolist()
    return json.dumps(obj)


def tensor_from_json(text: str) -> CoefficientTensor:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("malformed tensor JSON") from exc
    shape = _parse_header(obj)
    data = obj.get("data")
    if not isinstance(data, list) or len(data) != shape.entry_count:
        raise ConfigError(
            f"tensor JSON 'data' must be a list of {shape.entry_count} numbers"
        )
    return CoefficientTensor(shape, np.asarray(data, dtype=np.float64))


def save_tensor_json(tensor: CoefficientTensor, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(tensor_to_json(tensor))


def load_tensor_json(path) -> CoefficientTensor:
    with open(path, "r", encoding="utf-8") as fh:
        return tensor_from_json(fh.read())


def save_system(sys: PolynomialSystem, path) -> None:
    """Write a whole system: header, random part bytes, then det bytes if any."""
    obj = _header_dict(sys.shape)
    obj["kind"] = "system"
    obj["has_det"] = sys.det is not None
    with open(path, "wb") as fh:
        fh.write(json.dumps(obj).encode("utf-8"))
        fh.write(b"\n")
        fh.write(np.ascontiguousarray(sys.rand.data, dtype="<f8").tobytes())
        if sys.det is not None:
            fh.write(np.ascontiguousarray(sys.det.data, dtype="<f8").tobytes())


def load_system(path) -> PolynomialSystem:
    with open(path, "rb") as fh:
        blob = fh.read()
    obj, body = _split_header(blob, path)
    if obj.get("kind") != "system":
        raise ConfigError(f"{path}: not a system file (kind={obj.get('kind')!r})")
    shape = _parse_header(obj)
    has_det = bool(obj.get("has_det"))
    flat = _decode_body(body, shape, path, count=2 if has_det else 1)
    size = shape.entry_count
    rand = CoefficientTensor(shape, flat[:size])
    det = CoefficientTensor(shape, flat[size:]) if has_det else None
    return PolynomialSystem(rand=rand, det=det)
