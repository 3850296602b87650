"""Encode chunks to action-token sequences and decode them back."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bpe, dct
from .model import (
    BASE_ALPHABET,
    BOS_ACT,
    EOS_ACT,
    FIRST_MERGE_ID,
    QUANT_LEVEL_MAX,
    CodecModel,
    MalformedSequence,
    TruncatedPayload,
    as_chunk,
)


def quantize_levels(chunk: np.ndarray, model: CodecModel) -> np.ndarray:
    """Scaled mid-tread quantizer levels, shape (N, D), clipped to +/-127."""
    coefs = dct.forward(chunk)
    scaled = coefs / np.asarray(model.scales)[None, :]
    levels = np.rint(scaled / model.q)
    return np.clip(levels, -QUANT_LEVEL_MAX, QUANT_LEVEL_MAX).astype(np.int64)


def encode_chunk(chunk, model: CodecModel) -> list[int]:
    """Tokenize one (N, D) chunk: BOS, merged payload symbols, EOS."""
    arr = as_chunk(chunk, model.chunk_len, model.dims)
    levels = quantize_levels(arr, model)
    base = [int(levels[f, d]) + QUANT_LEVEL_MAX for d in range(model.dims) for f in range(model.chunk_len)]
    merged = bpe.apply_merges(base, model.ranks, model.merges, FIRST_MERGE_ID)
    return [BOS_ACT, *merged, EOS_ACT]


def decode_tokens(tokens, model: CodecModel) -> np.ndarray:
    """Invert :func:`encode_chunk` up to quantization; returns the (N, D) chunk."""
    toks = list(int(t) for t in tokens)
    if len(toks) < 2 or toks[0] != BOS_ACT or toks[-1] != EOS_ACT:
        raise MalformedSequence("sequence must be framed by BOS_ACT and EOS_ACT")
    payload = toks[1:-1]
    for t in payload:
        if t in (BOS_ACT, EOS_ACT):
            raise MalformedSequence("control id inside the payload")
        if not (0 <= t < FIRST_MERGE_ID + len(model.merges)):
            raise MalformedSequence(f"id {t} outside the model vocabulary")
    base = bpe.expand(payload, model.merges, FIRST_MERGE_ID, BASE_ALPHABET)
    if len(base) != model.n_payload_symbols:
        raise TruncatedPayload(
            f"expected {model.n_payload_symbols} coefficients, got {len(base)}"
        )
    levels = np.asarray(base, dtype=np.float64).reshape(model.dims, model.chunk_len).T
    levels -= QUANT_LEVEL_MAX
    coefs = levels * model.q * np.asarray(model.scales)[None, :]
    return dct.inverse(coefs)


@dataclass
class EncodeStats:
    n_tokens: int
    n_base_symbols: int
    n_saturated: int


def encode_stats(chunk, model: CodecModel) -> EncodeStats:
    """Token counts plus the saturation counter for one chunk."""
    arr = as_chunk(chunk, model.chunk_len, model.dims)
    coefs = dct.forward(arr)
    scaled = coefs / np.asarray(model.scales)[None, :]
    raw = np.rint(scaled / model.q)
    n_sat = int(np.sum(np.abs(raw) > QUANT_LEVEL_MAX))
    tokens = encode_chunk(arr, model)
    return EncodeStats(
        n_tokens=len(tokens),
        n_base_symbols=model.n_payload_symbols,
        n_saturated=n_sat,
    )


def round_trip_bound(model: CodecModel) -> float:
    """Worst-case |decode(encode(x)) - x| per element, absent saturation.

    Each quantizer level is within q/2 of the scaled coefficient, so the
    coefficient error is at most q * scale / 2 per frequency; the orthonormal
    inverse transform spreads a coefficient error vector e to at most
    ||e||_2 <= sqrt(N) * max|e_f| in the time domain.
    """
    return model.q * max(model.scales) * np.sqrt(model.chunk_len) / 2.0
