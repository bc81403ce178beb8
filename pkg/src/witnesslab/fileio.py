"""JSON file formats for matrices and subspaces.

Matrix file::

    {"dim_a": 3, "dim_b": 3, "index_convention": "row-major-a-major",
     "re": [[...], ...], "im": [[...], ...]}

Subspace file::

    {"dim_a": 3, "dim_b": 3, "vectors": [{"re": [...], "im": [...]}, ...]}

Floats are written with Python's shortest round-trip repr, so reading a file
back reproduces every entry bit for bit.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .bipartite import BipartiteOperator
from .errors import ParseError, WitnessLabError
from .matrix_core import Subspace, orthonormalize

INDEX_CONVENTION = "row-major-a-major"


def _load_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top-level JSON value must be an object")
    return data


def _dims(data: dict) -> tuple[int, int]:
    try:
        a, b = data["dim_a"], data["dim_b"]
    except KeyError as exc:
        raise ParseError(f"missing field {exc}") from exc
    if not (isinstance(a, int) and isinstance(b, int)) or a < 1 or b < 1:
        raise ParseError("dim_a and dim_b must be positive integers")
    return a, b


def _complex_array(re, im, shape) -> np.ndarray:
    try:
        arr = np.asarray(re, dtype=float) + 1j * np.asarray(im, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"non-numeric entries: {exc}") from exc
    if arr.shape != shape:
        raise ParseError(f"array shape {arr.shape}, expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise ParseError("non-finite entries")
    return arr


def matrix_to_dict(op: BipartiteOperator) -> dict:
    return {
        "dim_a": op.dim_a,
        "dim_b": op.dim_b,
        "index_convention": INDEX_CONVENTION,
        "re": op.mat.real.tolist(),
        "im": op.mat.imag.tolist(),
    }


def matrix_from_dict(data: dict) -> BipartiteOperator:
    a, b = _dims(data)
    conv = data.get("index_convention", INDEX_CONVENTION)
    if conv != INDEX_CONVENTION:
        raise ParseError(f"unsupported index_convention {conv!r}")
    if "re" not in data:
        raise ParseError("missing field 're'")
    side = a * b
    re = data["re"]
    im = data.get("im", np.zeros((side, side)).tolist())
    try:
        return BipartiteOperator(a, b, _complex_array(re, im, (side, side)))
    except WitnessLabError as exc:
        raise ParseError(str(exc)) from exc


def subspace_to_dict(dim_a: int, dim_b: int, vectors) -> dict:
    vecs = [np.asarray(v, dtype=np.complex128) for v in vectors]
    return {
        "dim_a": dim_a,
        "dim_b": dim_b,
        "vectors": [{"re": v.real.tolist(), "im": v.imag.tolist()} for v in vecs],
    }


def subspace_vectors_from_dict(data: dict) -> tuple[tuple[int, int], list[np.ndarray]]:
    a, b = _dims(data)
    raw = data.get("vectors")
    if not isinstance(raw, list) or not raw:
        raise ParseError("'vectors' must be a nonempty list")
    vecs = []
    for item in raw:
        if not isinstance(item, dict) or "re" not in item:
            raise ParseError("each vector needs at least an 're' field")
        vecs.append(_complex_array(item["re"], item.get("im", [0.0] * (a * b)), (a * b,)))
    return (a, b), vecs


def subspace_from_dict(data: dict) -> tuple[tuple[int, int], Subspace]:
    dims, vecs = subspace_vectors_from_dict(data)
    return dims, orthonormalize(vecs, ambient_dim=dims[0] * dims[1])


def write_json(path, data: dict) -> None:
    Path(path).write_text(json.dumps(data, indent=1) + "\n", encoding="utf-8")


def read_matrix(path) -> BipartiteOperator:
    return matrix_from_dict(_load_json(path))


def write_matrix(path, op: BipartiteOperator) -> None:
    write_json(path, matrix_to_dict(op))


def read_subspace(path) -> tuple[tuple[int, int], Subspace]:
    return subspace_from_dict(_load_json(path))


def read_subspace_vectors(path) -> tuple[tuple[int, int], list[np.ndarray]]:
    return subspace_vectors_from_dict(_load_json(path))


def write_subspace(path, dim_a: int, dim_b: int, vectors) -> None:
    write_json(path, subspace_to_dict(dim_a, dim_b, vectors))
