"""Core data model for contextual-instruction episodes.

An episode bundles a scripted multi-speaker conversation, references to the
visual observation frames, the robot action trajectory, and enough metadata
to rebuild the rendered audio deterministically. All types are immutable
after construction; structural validity is checked by
:mod:`ctxforge.episodes.validate`, not by constructors, so that invalid
records loaded from disk can still be represented and reported on.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class InstructionType(enum.Enum):
    """The six contextual instruction categories plus the direct-text retention set."""

    SENTIMENT = "sentiment"
    OVERLAPPING = "overlapping"
    NON_VERBAL = "non_verbal"
    IDENTITY = "identity"
    DYADIC = "dyadic"
    TRIADIC = "triadic"
    DIRECT_TEXT = "direct_text"

    @classmethod
    def from_string(cls, value: str) -> "InstructionType":
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"unknown instruction type: {value!r}") from None


#: Types produced by the dialogue-synthesis stage (everything but direct text).
CONTEXTUAL_TYPES = tuple(t for t in InstructionType if t is not InstructionType.DIRECT_TEXT)


class Speaker(enum.Enum):
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    ROBOT = "Robot"

    @property
    def is_human(self) -> bool:
        return self is not Speaker.ROBOT


AGE_GROUPS = ("child", "adult", "senior")
GENDERS = ("male", "female")


@dataclass(frozen=True)
class SpeakerProfile:
    """A voice identity: demographic cell plus a timbre-cloning reference clip.

    (age_group x gender) spans exactly six demographic categories.
    """

    id: str
    age_group: str
    gender: str
    timbre_ref: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "age_group": self.age_group,
            "gender": self.gender,
            "timbre_ref": self.timbre_ref,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SpeakerProfile":
        return cls(
            id=str(d["id"]),
            age_group=str(d["age_group"]),
            gender=str(d["gender"]),
            timbre_ref=str(d.get("timbre_ref", "")),
        )


@dataclass(frozen=True)
class OverlapSpan:
    """Half-open character span [start, end) of a turn's text that is spoken over.

    The interrupting speaker's utterance is the immediately following turn.
    """

    start: int
    end: int
    interrupting: Speaker


@dataclass(frozen=True)
class Turn:
    """One utterance in a transcript.

    ``overlap_spans``, ``sound_anchors`` and ``sentiment_cues`` hold character
    offsets into ``text``; the clip ids / cue payloads they refer to live in
    the episode's mix plan, keyed by anchor order.
    """

    speaker: Speaker
    text: str
    overlap_spans: tuple[OverlapSpan, ...] = ()
    sound_anchors: tuple[int, ...] = ()
    sentiment_cues: tuple[int, ...] = ()
    has_act: bool = False


@dataclass(frozen=True)
class MarkupDoc:
    """A parsed transcript: ordered turns plus the action-onset marker."""

    turns: tuple[Turn, ...] = ()

    @property
    def act_marker(self) -> int | None:
        """Index of the turn carrying the action-onset tag, if any."""
        for i, t in enumerate(self.turns):
            if t.has_act:
                return i
        return None

    def act_count(self) -> int:
        return sum(1 for t in self.turns if t.has_act)

    def sound_anchor_positions(self) -> list[tuple[int, int]]:
        """All (turn_index, char_offset) sound anchors in document order."""
        out = []
        for i, t in enumerate(self.turns):
            for pos in t.sound_anchors:
                out.append((i, pos))
        return out

    def speakers_used(self) -> set[Speaker]:
        return {t.speaker for t in self.turns}


@dataclass(frozen=True)
class ActionFrame:
    """A single delta end-effector control step (dx, dy, dz, droll, dpitch, dyaw, gripper).

    Stored as given; dimensionality and range are checked by validation so
    malformed records remain representable.
    """

    delta: tuple[float, ...]

    @classmethod
    def from_list(cls, values) -> "ActionFrame":
        return cls(delta=tuple(float(v) for v in values))


ACTION_DIMS = 7
ACTION_CLIP_RANGE = (-1.0, 1.0)


@dataclass(frozen=True)
class EventInsertion:
    anchor_index: int
    clip_id: str
    mode: str  # "gap_insert" | "overlay"


@dataclass(frozen=True)
class MixPlan:
    """How an episode's audio was (or will be) mixed: background, SNR, events."""

    background_id: str
    target_snr_db: float
    event_insertions: tuple[EventInsertion, ...] = ()

    def to_dict(self) -> dict:
        return {
            "background_id": self.background_id,
            "target_snr_db": self.target_snr_db,
            "events": [
                {"anchor_index": e.anchor_index, "clip_id": e.clip_id, "mode": e.mode}
                for e in self.event_insertions
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MixPlan":
        return cls(
            background_id=str(d["background_id"]),
            target_snr_db=float(d["target_snr_db"]),
            event_insertions=tuple(
                EventInsertion(int(e["anchor_index"]), str(e["clip_id"]), str(e["mode"]))
                for e in d.get("events", [])
            ),
        )


@dataclass(frozen=True)
class Provenance:
    source_dataset: str
    trajectory_id: str

    def to_dict(self) -> dict:
        return {"source_dataset": self.source_dataset, "trajectory_id": self.trajectory_id}

    @classmethod
    def from_dict(cls, d: dict) -> "Provenance":
        return cls(str(d.get("source_dataset", "")), str(d.get("trajectory_id", "")))


@dataclass(frozen=True)
class Episode:
    """One (conversation, frames, actions) triplet plus audio and provenance.

    ``speakers`` is positional: index 0 is the S1 voice, 1 is S2, 2 is S3.
    """

    id: str
    instruction_type: InstructionType
    original_instruction: str
    conversation: MarkupDoc
    audio_ref: str
    frame_refs: tuple[str, ...]
    actions: tuple[ActionFrame, ...]
    speakers: tuple[SpeakerProfile, ...]
    provenance: Provenance
    mix_plan: MixPlan | None = field(default=None)

    def speaker_for(self, slot: Speaker) -> SpeakerProfile | None:
        order = {Speaker.S1: 0, Speaker.S2: 1, Speaker.S3: 2}
        idx = order.get(slot)
        if idx is None or idx >= len(self.speakers):
            return None
        return self.speakers[idx]
