from .stream import (
    IllegalId,
    Segment,
    SegmentDecodeError,
    StrayActionToken,
    StrayTextToken,
    UnterminatedAction,
    VocabLayout,
    decode_stream_actions,
    demux,
    serialize,
)

__all__ = [
    "IllegalId",
    "Segment",
    "SegmentDecodeError",
    "StrayActionToken",
    "StrayTextToken",
    "UnterminatedAction",
    "VocabLayout",
    "decode_stream_actions",
    "demux",
    "serialize",
]
