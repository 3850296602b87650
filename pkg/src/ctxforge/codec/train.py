"""Fit a codec: per-dimension scales, then byte-pair merges to fill the vocabulary."""

from __future__ import annotations

import numpy as np

from . import bpe, dct
from .model import (
    DEGENERATE_DIMENSION,
    MAX_MERGES,
    QUANT_LEVEL_MAX,
    CodecModel,
    EmptyCorpus,
    FIRST_MERGE_ID,
    TrainConfig,
    as_chunk,
)


def train_codec(corpus, config: TrainConfig | None = None) -> CodecModel:
    """Train on a list of (N, D) chunks sharing one shape.

    Scales are the robust max-abs of each dimension's transform coefficients
    (``config.scale_quantile`` of |coef|; 1.0 means the plain maximum); a
    dimension whose coefficients are all zero gets scale 1.0 and a
    DEGENERATE_DIMENSION warning. Merges are learned greedily until the
    2048-id space is full or no pair repeats. Deterministic for a fixed
    corpus order.
    """
    config = config or TrainConfig()
    chunks = [as_chunk(c) for c in corpus]
    if not chunks:
        raise EmptyCorpus("cannot train on an empty corpus")
    n, d = chunks[0].shape
    for c in chunks[1:]:
        as_chunk(c, n, d)

    all_coefs = np.stack([dct.forward(c) for c in chunks])  # (M, N, D)
    abs_coefs = np.abs(all_coefs)
    scales = []
    warnings = []
    for dim in range(d):
        s = float(np.quantile(abs_coefs[:, :, dim], config.scale_quantile))
        if s <= 0.0:
            scales.append(1.0)
            warnings.append(f"{DEGENERATE_DIMENSION}:{dim}")
        else:
            scales.append(s)

    scales_arr = np.asarray(scales)[None, None, :]
    levels = np.clip(
        np.rint(all_coefs / scales_arr / config.q),
        -QUANT_LEVEL_MAX,
        QUANT_LEVEL_MAX,
    ).astype(np.int64)
    seqs = [
        [int(levels[m, f, dim]) + QUANT_LEVEL_MAX for dim in range(d) for f in range(n)]
        for m in range(len(chunks))
    ]
    merges = bpe.train_merges(
        seqs,
        first_new_id=FIRST_MERGE_ID,
        max_merges=MAX_MERGES,
        min_pair_count=config.min_pair_count,
    )
    return CodecModel(
        version=config.version,
        chunk_len=n,
        dims=d,
        scales=tuple(scales),
        q=config.q,
        merges=tuple(merges),
        warnings=tuple(warnings),
    )
