"""Scripting-stage data types: seeds, drafts, plans, verdicts."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..episodes.types import InstructionType, MarkupDoc
from ..lexicon import extract_skill_objects

# Canonical family roles and their demographic cells (age_group, gender).
ROLE_DEMOGRAPHICS = {
    "dad": ("adult", "male"),
    "father": ("adult", "male"),
    "mom": ("adult", "female"),
    "mother": ("adult", "female"),
    "mum": ("adult", "female"),
    "son": ("child", "male"),
    "boy": ("child", "male"),
    "daughter": ("child", "female"),
    "girl": ("child", "female"),
    "grandpa": ("senior", "male"),
    "grandfather": ("senior", "male"),
    "grandma": ("senior", "female"),
    "grandmother": ("senior", "female"),
}


def role_demographics(role: str) -> tuple[str, str] | None:
    return ROLE_DEMOGRAPHICS.get(role.strip().lower())


@dataclass(frozen=True)
class TrajectorySeed:
    """One source trajectory to contextualize: id, instruction, first frame.

    ``skill`` and ``objects`` are extracted deterministically from the
    instruction via the frozen lexicon.
    """

    source_id: str
    original_instruction: str
    first_frame_ref: str
    skill: str | None
    objects: tuple[str, ...]

    @classmethod
    def from_instruction(
        cls, source_id: str, instruction: str, first_frame_ref: str = ""
    ) -> "TrajectorySeed":
        skill, objects = extract_skill_objects(instruction)
        return cls(
            source_id=source_id,
            original_instruction=instruction,
            first_frame_ref=first_frame_ref,
            skill=skill,
            objects=tuple(objects),
        )


@dataclass(frozen=True)
class SeedRecord:
    """Full seed line from seeds.jsonl: the scripting fields plus the
    trajectory payload that dataset packing joins back in."""

    seed: TrajectorySeed
    frame_refs: tuple[str, ...]
    actions: tuple[tuple[float, ...], ...]
    dataset: str

    @classmethod
    def from_dict(cls, d: dict) -> "SeedRecord":
        frame_refs = tuple(str(p) for p in d.get("frame_refs", []))
        seed = TrajectorySeed.from_instruction(
            source_id=str(d["source_id"]),
            instruction=str(d["instruction"]),
            first_frame_ref=str(d.get("first_frame_ref", frame_refs[0] if frame_refs else "")),
        )
        return cls(
            seed=seed,
            frame_refs=frame_refs,
            actions=tuple(tuple(float(v) for v in row) for row in d.get("actions", [])),
            dataset=str(d.get("dataset", "")),
        )


def load_seed_records(path) -> list[SeedRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(SeedRecord.from_dict(json.loads(line)))
    return records


@dataclass(frozen=True)
class FilterDecision:
    keep: bool
    reason: str | None = None

    @classmethod
    def kept(cls) -> "FilterDecision":
        return cls(True)

    @classmethod
    def dropped(cls, reason: str) -> "FilterDecision":
        return cls(False, reason)


@dataclass(frozen=True)
class ScriptDraft:
    """A synthesized human-only dialogue, before the robot exchange is added."""

    scene_description: str
    conversation: MarkupDoc
    speaker_infos: tuple[tuple[str, str], ...]  # (role, name)
    instruction_type: InstructionType
    selected_sound_type: str | None = None


@dataclass(frozen=True)
class ConversationPlan:
    """Draft plus the human-robot extension; the first pair is the
    ``<conv>`` placeholder standing for the draft dialogue."""

    draft: ScriptDraft
    extension_turns: tuple[tuple[str, str], ...]  # (user, robot)
    final_robot_turn_has_act: bool = True


@dataclass(frozen=True)
class IntentVerdict:
    passed: bool
    inferred_intent: str = ""

    @classmethod
    def ok(cls, inferred: str) -> "IntentVerdict":
        return cls(True, inferred)

    @classmethod
    def fail(cls, inferred: str) -> "IntentVerdict":
        return cls(False, inferred)


@dataclass
class DraftRecord:
    """One drafts.jsonl line: everything audio realization and packing need."""

    id: str
    source_id: str
    instruction_type: str
    original_instruction: str
    scene_description: str
    conversation: str  # canonical markup, includes the robot turns and [ACT]
    speakers: list[dict] = field(default_factory=list)  # {"role","name"}
    selected_sound_type: str | None = None
    intent: str = "pass"
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "source_id": self.source_id,
            "instruction_type": self.instruction_type,
            "original_instruction": self.original_instruction,
            "scene_description": self.scene_description,
            "conversation": self.conversation,
            "speakers": self.speakers,
            "selected_sound_type": self.selected_sound_type,
            "intent": self.intent,
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DraftRecord":
        return cls(
            id=str(d["id"]),
            source_id=str(d["source_id"]),
            instruction_type=str(d["instruction_type"]),
            original_instruction=str(d["original_instruction"]),
            scene_description=str(d.get("scene_description", "")),
            conversation=str(d["conversation"]),
            speakers=list(d.get("speakers", [])),
            selected_sound_type=d.get("selected_sound_type"),
            intent=str(d.get("intent", "pass")),
            provenance=dict(d.get("provenance", {})),
        )
