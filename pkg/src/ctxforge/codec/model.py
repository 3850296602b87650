"""Action codec model: id layout, chunk helpers, and the trained state.

Action chunks are plain float arrays of shape (chunk_len, dims); the encode
pipeline is, per dimension: orthonormal DCT-II over the frames, divide by the
per-dimension scale, mid-tread quantize with step ``q`` (clipped to +/-127
levels), flatten dimension-major (all frequencies of dimension 0 first,
ascending frequency within each dimension), map levels to base symbols,
apply byte-pair merges, and wrap with the control ids.

Id layout (2048 ids total):
    [0, 255)                  base symbols (quantizer levels -127..127)
    [255, 255 + n_merges)     merged symbols, at most 1791
    2046, 2047                BOS_ACT, EOS_ACT
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

VOCAB_SIZE = 2048
BASE_ALPHABET = 255
QUANT_LEVEL_MAX = 127  # levels span [-127, 127]
BOS_ACT = VOCAB_SIZE - 2
EOS_ACT = VOCAB_SIZE - 1
MAX_MERGES = VOCAB_SIZE - BASE_ALPHABET - 2  # 1791
FIRST_MERGE_ID = BASE_ALPHABET

MODEL_VERSION = "dct-bpe-v1"

DEGENERATE_DIMENSION = "DEGENERATE_DIMENSION"


class CodecError(ValueError):
    pass


class ShapeMismatch(CodecError):
    pass


class NonFinite(CodecError):
    pass


class MalformedSequence(CodecError):
    pass


class TruncatedPayload(CodecError):
    pass


class EmptyCorpus(CodecError):
    pass


@dataclass
class TrainConfig:
    q: float = 0.01
    scale_quantile: float = 1.0
    min_pair_count: int = 2
    version: str = MODEL_VERSION


@dataclass
class CodecModel:
    """Trained tokenizer state. Treat as immutable once built."""

    version: str
    chunk_len: int
    dims: int
    scales: tuple[float, ...]
    q: float
    merges: tuple[tuple[int, int], ...]
    base_alphabet: int = BASE_ALPHABET
    vocab_size: int = VOCAB_SIZE
    warnings: tuple[str, ...] = ()
    ranks: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.q <= 0:
            raise CodecError("quantization step must be positive")
        if len(self.scales) != self.dims:
            raise CodecError("one scale per action dimension required")
        if len(self.merges) > MAX_MERGES:
            raise CodecError(f"merge table exceeds the {MAX_MERGES}-slot budget")
        self.ranks = {pair: i for i, pair in enumerate(self.merges)}
        if len(self.ranks) != len(self.merges):
            raise CodecError("merge table contains duplicate pairs")
        for i, (a, b) in enumerate(self.merges):
            for sym in (a, b):
                if not (0 <= sym < FIRST_MERGE_ID + i):
                    raise CodecError(f"merge {i} references undefined symbol {sym}")

    @property
    def n_payload_symbols(self) -> int:
        return self.chunk_len * self.dims


def as_chunk(frames, chunk_len: int | None = None, dims: int | None = None) -> np.ndarray:
    """Coerce frames to a float64 (N, D) chunk array, checking shape and finiteness."""
    arr = np.asarray(frames, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeMismatch(f"chunk must be 2-D, got shape {arr.shape}")
    if chunk_len is not None and arr.shape[0] != chunk_len:
        raise ShapeMismatch(f"expected {chunk_len} frames, got {arr.shape[0]}")
    if dims is not None and arr.shape[1] != dims:
        raise ShapeMismatch(f"expected {dims} dims, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise NonFinite("chunk contains non-finite values")
    return arr
