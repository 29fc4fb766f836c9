"""Tensor JSON files.

    {"order": m, "dim": n, "symmetric": bool,
     "entries": [{"index": [i1, ..., im], "value": v}, ...]}

Indices are 1-based. With ``"symmetric": true`` every index must be
non-decreasing and is expanded over its permutations. Omitted entries are
zero.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import TensorFormatError
from .tensor import Tensor, build_tensor, is_symmetric, symmetrize_from_representatives


def tensor_from_dict(doc: dict) -> Tensor:
    if not isinstance(doc, dict):
        raise TensorFormatError("tensor document must be a JSON object")
    try:
        order, dim = doc["order"], doc["dim"]
        entries = doc.get("entries", [])
        symmetric = doc.get("symmetric", False)
    except KeyError as exc:
        raise TensorFormatError(f"missing field {exc}") from None
    if not isinstance(order, int) or not isinstance(dim, int) or isinstance(order, bool):
        raise TensorFormatError("order and dim must be integers")
    if not isinstance(symmetric, bool):
        raise TensorFormatError("symmetric must be a boolean")
    if not isinstance(entries, list):
        raise TensorFormatError("entries must be a list")
    pairs = []
    for item in entries:
        if not isinstance(item, dict) or "index" not in item or "value" not in item:
            raise TensorFormatError(f"malformed entry {item!r}")
        index, value = item["index"], item["value"]
        if not isinstance(index, list) or not all(isinstance(k, int) and not isinstance(k, bool) for k in index):
            raise TensorFormatError(f"index must be a list of integers, got {index!r}")
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise TensorFormatError(f"value must be a number, got {value!r}")
        pairs.append((tuple(index), float(value)))
    if symmetric:
        return symmetrize_from_representatives(order, dim, pairs)
    return build_tensor(order, dim, pairs)


def tensor_to_dict(t: Tensor, symmetric: bool | None = None) -> dict:
    """Sparse listing of the nonzero entries; symmetric tensors list sorted keys only."""
    if symmetric is None:
        symmetric = is_symmetric(t)
    entries = []
    for idx in np.argwhere(t.data != 0):
        key = tuple(int(k) + 1 for k in idx)
        if symmetric and list(key) != sorted(key):
            continue
        entries.append({"index": list(key), "value": float(t.data[tuple(idx)])})
    return {"order": t.order, "dim": t.dim, "symmetric": bool(symmetric), "entries": entries}


def loads(text: str) -> Tensor:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TensorFormatError(f"invalid JSON: {exc}") from None
    return tensor_from_dict(doc)


def dumps(t: Tensor, symmetric: bool | None = None) -> str:
    return json.dumps(tensor_to_dict(t, symmetric), indent=2)


def load_tensor(path) -> Tensor:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise TensorFormatError(f"cannot read {path}: {exc}") from None
    return loads(text)


def save_tensor(t: Tensor, path, symmetric: bool | None = None) -> None:
    Path(path).write_text(dumps(t, symmetric) + "\n", encoding="utf-8")


FIXTURES = ("ex41", "ex51", "ex61")


def fixture_path(name: str) -> Path:
    """Path of a bundled example tensor (``ex41``, ``ex51`` or ``ex61``)."""
    if name not in FIXTURES:
        raise KeyError(name)
    return Path(str(resources.files("tensorloc") / "fixtures" / f"{name}.json"))


def load_fixture(name: str) -> Tensor:
    return load_tensor(fixture_path(name))
