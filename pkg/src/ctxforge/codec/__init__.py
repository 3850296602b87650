from .coding import (
    EncodeStats,
    decode_tokens,
    encode_chunk,
    encode_stats,
    quantize_levels,
    round_trip_bound,
)
from .io import load_model, model_from_dict, model_to_dict, save_model
from .model import (
    BASE_ALPHABET,
    BOS_ACT,
    EOS_ACT,
    MAX_MERGES,
    VOCAB_SIZE,
    CodecError,
    CodecModel,
    EmptyCorpus,
    MalformedSequence,
    NonFinite,
    ShapeMismatch,
    TrainConfig,
    TruncatedPayload,
    as_chunk,
)
from .train import train_codec

__all__ = [
    "BASE_ALPHABET",
    "BOS_ACT",
    "EOS_ACT",
    "MAX_MERGES",
    "VOCAB_SIZE",
    "CodecError",
    "CodecModel",
    "EmptyCorpus",
    "EncodeStats",
    "MalformedSequence",
    "NonFinite",
    "ShapeMismatch",
    "TrainConfig",
    "TruncatedPayload",
    "as_chunk",
    "decode_tokens",
    "encode_chunk",
    "encode_stats",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "quantize_levels",
    "round_trip_bound",
    "save_model",
    "train_codec",
]
