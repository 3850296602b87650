"""Split a joint-vocabulary token stream into text and action segments.

The joint id space is the text vocabulary, one action-onset marker id, and a
2048-id action block. Generation enters action mode at the marker and leaves
it at the action codec's EOS symbol; the marker itself is not stored in the
segments (an Action segment implies one), so re-serializing the segment list
reproduces the input stream exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..codec import EOS_ACT, CodecError, CodecModel, decode_tokens
from ..codec.model import VOCAB_SIZE


class DemuxError(ValueError):
    pass


class IllegalId(DemuxError):
    pass


class StrayActionToken(DemuxError):
    pass


class StrayTextToken(DemuxError):
    """A non-action id inside an open action window (before the action EOS)."""


class UnterminatedAction(DemuxError):
    pass


@dataclass(frozen=True)
class VocabLayout:
    """Joint id space: [0, text_size) text, one marker id, a 2048-id action block."""

    text_size: int
    act_marker_id: int
    action_offset: int
    action_size: int = VOCAB_SIZE

    def __post_init__(self) -> None:
        text = (0, self.text_size)
        action = (self.action_offset, self.action_offset + self.action_size)
        if self.text_size < 0 or self.action_offset < 0:
            raise ValueError("layout ranges must be non-negative")
        if text[0] <= self.act_marker_id < text[1]:
            raise ValueError("act marker id collides with the text range")
        if action[0] <= self.act_marker_id < action[1]:
            raise ValueError("act marker id collides with the action range")
        if not (action[1] <= text[0] or text[1] <= action[0]):
            raise ValueError("text and action ranges overlap")

    def is_text(self, tok: int) -> bool:
        return 0 <= tok < self.text_size

    def is_action(self, tok: int) -> bool:
        return self.action_offset <= tok < self.action_offset + self.action_size

    def is_legal(self, tok: int) -> bool:
        return tok == self.act_marker_id or self.is_text(tok) or self.is_action(tok)

    def to_action_rel(self, tok: int) -> int:
        return tok - self.action_offset

    def to_dict(self) -> dict:
        return {
            "text_size": self.text_size,
            "act_marker_id": self.act_marker_id,
            "action_offset": self.action_offset,
            "action_size": self.action_size,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VocabLayout":
        return cls(
            text_size=int(d["text_size"]),
            act_marker_id=int(d["act_marker_id"]),
            action_offset=int(d["action_offset"]),
            action_size=int(d.get("action_size", VOCAB_SIZE)),
        )

    @classmethod
    def load(cls, path) -> "VocabLayout":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class Segment:
    kind: str  # "text" | "action"
    tokens: tuple[int, ...]  # action tokens re-based to [0, action_size)

    @classmethod
    def text(cls, tokens: Iterable[int]) -> "Segment":
        return cls("text", tuple(tokens))

    @classmethod
    def action(cls, tokens: Iterable[int]) -> "Segment":
        return cls("action", tuple(tokens))


def demux(stream: Sequence[int], layout: VocabLayout) -> list[Segment]:
    """Lossless partition of a legal stream into text and action segments."""
    segments: list[Segment] = []
    text_buf: list[int] = []
    action_buf: list[int] | None = None

    for pos, tok in enumerate(stream):
        tok = int(tok)
        if not layout.is_legal(tok):
            raise IllegalId(f"id {tok} at position {pos} is outside the layout")
        if action_buf is not None:
            if not layout.is_action(tok):
                raise StrayTextToken(
                    f"id {tok} at position {pos} inside an open action window"
                )
            rel = layout.to_action_rel(tok)
            action_buf.append(rel)
            if rel == EOS_ACT:
                segments.append(Segment.action(action_buf))
                action_buf = None
            continue
        if tok == layout.act_marker_id:
            if text_buf:
                segments.append(Segment.text(text_buf))
                text_buf = []
            action_buf = []
            continue
        if layout.is_action(tok):
            raise StrayActionToken(
                f"action id {tok} at position {pos} outside an action window"
            )
        text_buf.append(tok)

    if action_buf is not None:
        raise UnterminatedAction("stream ended inside an action window")
    if text_buf:
        segments.append(Segment.text(text_buf))
    return segments


def serialize(segments: Iterable[Segment], layout: VocabLayout) -> list[int]:
    """Inverse of :func:`demux`: emit the marker before each action segment."""
    out: list[int] = []
    for seg in segments:
        if seg.kind == "text":
            out.extend(seg.tokens)
        elif seg.kind == "action":
            out.append(layout.act_marker_id)
            out.extend(layout.action_offset + t for t in seg.tokens)
        else:
            raise ValueError(f"unknown segment kind {seg.kind!r}")
    return out


class SegmentDecodeError(ValueError):
    def __init__(self, segment_index: int, cause: Exception):
        super().__init__(f"action segment {segment_index}: {cause}")
        self.segment_index = segment_index
        self.cause = cause


def decode_stream_actions(segments: Iterable[Segment], model: CodecModel) -> list:
    """Decode every action segment to a chunk, preserving order."""
    chunks = []
    action_idx = -1
    for i, seg in enumerate(segments):
        if seg.kind != "action":
            continue
        action_idx += 1
        try:
            chunks.append(decode_tokens(seg.tokens, model))
        except CodecError as err:
            raise SegmentDecodeError(i, err) from err
    return chunks
