"""Versioned on-disk model bundles.

A bundle is a single self-describing JSON document: every array is stored
with explicit shape metadata and the top-level ``format_version`` guards
against loading documents written by an incompatible release. Serialization
is deterministic (sorted keys, no wall-clock fields), so retraining on
identical inputs writes identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

FORMAT_VERSION = 1


def encode_array(arr) -> dict:
    data = np.asarray(arr, dtype=float)
    return {"shape": list(data.shape), "data": data.reshape(-1).tolist()}


def decode_array(payload: dict) -> np.ndarray:
    return np.asarray(payload["data"], dtype=float).reshape(payload["shape"])


def save_bundle(path, bundle: dict) -> None:
    document = {"format_version": FORMAT_VERSION, **bundle}
    Path(path).write_text(json.dumps(document, sort_keys=True, indent=1))


def load_bundle(path) -> dict:
    document = json.loads(Path(path).read_text())
    version = document.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(
            f"model file {path} has format_version {version}; expected {FORMAT_VERSION}"
        )
    return document
