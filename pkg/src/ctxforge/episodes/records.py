"""Episode manifest line schema (JSONL, one episode per line).

Field names are part of the bit-exact contract::

    {"id", "instruction_type", "original_instruction",
     "conversation" (canonical markup string), "audio_ref",
     "frame_refs" [..], "actions" [[7 floats]..], "speakers" [..],
     "provenance" {..}}

``mix_plan`` is an optional tenth field carrying the audio mix recipe.
"""

from __future__ import annotations

import json

from . import markup, validate
from .types import (
    ActionFrame,
    Episode,
    InstructionType,
    MixPlan,
    Provenance,
    SpeakerProfile,
)

REQUIRED_FIELDS = (
    "id",
    "instruction_type",
    "original_instruction",
    "conversation",
    "audio_ref",
    "frame_refs",
    "actions",
    "speakers",
    "provenance",
)


def episode_to_record(e: Episode) -> dict:
    record = {
        "id": e.id,
        "instruction_type": e.instruction_type.value,
        "original_instruction": e.original_instruction,
        "conversation": markup.render_markup(e.conversation),
        "audio_ref": e.audio_ref,
        "frame_refs": list(e.frame_refs),
        "actions": [list(f.delta) for f in e.actions],
        "speakers": [s.to_dict() for s in e.speakers],
        "provenance": e.provenance.to_dict(),
    }
    if e.mix_plan is not None:
        record["mix_plan"] = e.mix_plan.to_dict()
    return record


def episode_from_record(record: dict) -> Episode:
    missing = [f for f in REQUIRED_FIELDS if f not in record]
    if missing:
        raise KeyError(f"episode record missing fields: {missing}")
    return Episode(
        id=str(record["id"]),
        instruction_type=InstructionType.from_string(record["instruction_type"]),
        original_instruction=str(record["original_instruction"]),
        conversation=markup.parse_markup(record["conversation"]),
        audio_ref=str(record["audio_ref"]),
        frame_refs=tuple(str(p) for p in record["frame_refs"]),
        actions=tuple(ActionFrame.from_list(row) for row in record["actions"]),
        speakers=tuple(SpeakerProfile.from_dict(d) for d in record["speakers"]),
        provenance=Provenance.from_dict(record["provenance"]),
        mix_plan=MixPlan.from_dict(record["mix_plan"]) if record.get("mix_plan") else None,
    )


def dump_record(e: Episode) -> str:
    return json.dumps(episode_to_record(e), ensure_ascii=False, sort_keys=True)


def validate_record(
    record: dict,
    *,
    check_paths: bool = False,
    snr_bounds: tuple[float, float] | None = None,
) -> validate.ValidationReport:
    """Validate a raw manifest record, including its markup string.

    Records that cannot even be decoded into an :class:`Episode` still get a
    report: schema problems and markup grammar failures become coded entries
    (a transcript with two action-onset tags reports ``ACT_MULTIPLICITY``).
    """
    report = validate.ValidationReport(episode_id=str(record.get("id", "")))
    missing = [f for f in REQUIRED_FIELDS if f not in record]
    for f in missing:
        report.add(validate.FIELD_MISSING, f)
    if missing:
        return report

    try:
        InstructionType.from_string(record["instruction_type"])
    except ValueError:
        report.add(validate.TYPE_UNKNOWN, str(record["instruction_type"]))
        return report

    try:
        episode = episode_from_record(record)
    except markup.MarkupError as err:
        if err.code == markup.DUPLICATE_ACT:
            report.add(validate.ACT_MULTIPLICITY, str(err))
        elif err.code in (markup.MISPLACED_ACT,):
            report.add(validate.ACT_PLACEMENT, str(err))
        else:
            report.add(validate.MARKUP_INVALID, f"{err.code}: {err}")
        return report
    except (TypeError, ValueError) as err:
        report.add(validate.MARKUP_INVALID, str(err))
        return report

    return validate.validate_episode(
        episode, check_paths=check_paths, snr_bounds=snr_bounds
    )
