"""Codec model artifact: versioned JSON, conventionally with a .cdc suffix."""

from __future__ import annotations

import json
import os

from .model import CodecModel


def model_to_dict(model: CodecModel) -> dict:
    return {
        "version": model.version,
        "chunk_len": model.chunk_len,
        "dims": model.dims,
        "scales": list(model.scales),
        "q": model.q,
        "base_alphabet": model.base_alphabet,
        "vocab_size": model.vocab_size,
        "merges": [list(p) for p in model.merges],
        "warnings": list(model.warnings),
    }


def model_from_dict(d: dict) -> CodecModel:
    return CodecModel(
        version=str(d["version"]),
        chunk_len=int(d["chunk_len"]),
        dims=int(d["dims"]),
        scales=tuple(float(s) for s in d["scales"]),
        q=float(d["q"]),
        merges=tuple((int(a), int(b)) for a, b in d["merges"]),
        warnings=tuple(str(w) for w in d.get("warnings", [])),
    )


def save_model(model: CodecModel, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, sort_keys=True, indent=None)
        fh.write("\n")


def load_model(path: str | os.PathLike) -> CodecModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
