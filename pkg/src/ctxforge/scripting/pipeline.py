"""The scripting stage end to end: filter, synthesize, extend, validate, emit."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from ..episodes import markup
from ..episodes.types import InstructionType
from .chat import ChatClient, ChatServiceError, SchemaError
from .filters import TrajectoryFilter
from .synthesis import (
    RuleViolation,
    check_ambiguity,
    direct_text_markup,
    extend_interaction,
    plan_to_markup,
    synthesize_dialogue,
    validate_intent,
)
from .types import DraftRecord, SeedRecord

DIRECT_TEXT_ROLES = ("dad", "mom", "son", "daughter", "grandpa", "grandma")


@dataclass
class StageOutcome:
    drafts: list[DraftRecord] = field(default_factory=list)
    dropped_seeds: list[tuple[str, str]] = field(default_factory=list)  # (source_id, reason)
    failures: list[tuple[str, str, str]] = field(default_factory=list)  # (id, stage, error)


def episode_id(source_id: str, itype: InstructionType) -> str:
    return f"{source_id}--{itype.value}"


def run_scripting_stage(
    seed_records: list[SeedRecord],
    types: list[InstructionType],
    client: ChatClient,
    sound_types: list[str] | None = None,
    per_seed: int = 0,
) -> StageOutcome:
    """Produce one draft per (kept seed, requested type).

    ``per_seed`` > 0 caps the number of contextual variants per seed,
    cycling deterministically through the requested types; 0 takes every
    requested type for every seed.
    """
    outcome = StageOutcome()
    filt = TrajectoryFilter()
    for idx, rec in enumerate(seed_records):
        decision = filt.filter(rec.seed)
        if not decision.keep:
            outcome.dropped_seeds.append((rec.seed.source_id, decision.reason or ""))
            continue
        chosen = list(types)
        if per_seed > 0:
            chosen = [types[(idx + j) % len(types)] for j in range(min(per_seed, len(types)))]
        for itype in chosen:
            eid = episode_id(rec.seed.source_id, itype)
            try:
                outcome.drafts.append(
                    _build_draft(eid, rec, itype, client, sound_types)
                )
            except (SchemaError, RuleViolation, ChatServiceError, markup.MarkupError) as err:
                outcome.failures.append((eid, type(err).__name__, str(err)))
    return outcome


def _build_draft(
    eid: str,
    rec: SeedRecord,
    itype: InstructionType,
    client: ChatClient,
    sound_types: list[str] | None,
) -> DraftRecord:
    seed = rec.seed
    provenance = {"source_dataset": rec.dataset or "unknown", "trajectory_id": seed.source_id}

    if itype is InstructionType.DIRECT_TEXT:
        doc = direct_text_markup(seed.original_instruction)
        role_idx = hashlib.sha256(seed.source_id.encode()).digest()[0] % len(DIRECT_TEXT_ROLES)
        return DraftRecord(
            id=eid,
            source_id=seed.source_id,
            instruction_type=itype.value,
            original_instruction=seed.original_instruction,
            scene_description="",
            conversation=markup.render_markup(doc),
            speakers=[{"role": DIRECT_TEXT_ROLES[role_idx], "name": ""}],
            intent="pass",
            provenance=provenance,
        )

    tags = {"source_id": seed.source_id}
    draft = synthesize_dialogue(seed, itype, client, sound_types=sound_types)
    plan = extend_interaction(draft, client, seed.original_instruction, tags=tags)
    if itype is not InstructionType.NON_VERBAL:
        # non-verbal conditionals must quote the action ("If X, do A"); the
        # verbatim-leak scan applies to every other type
        check_ambiguity(plan, seed.original_instruction)
    verdict = validate_intent(plan, seed.original_instruction, client, tags=tags)
    if not verdict.passed:
        raise RuleViolation(
            f"intent validation failed: inferred {verdict.inferred_intent!r}"
        )
    return DraftRecord(
        id=eid,
        source_id=seed.source_id,
        instruction_type=itype.value,
        original_instruction=seed.original_instruction,
        scene_description=draft.scene_description,
        conversation=markup.render_markup(plan_to_markup(plan)),
        speakers=[{"role": r, "name": n} for r, n in draft.speaker_infos],
        selected_sound_type=draft.selected_sound_type,
        intent="pass",
        provenance=provenance,
    )


def write_drafts(path, drafts: list[DraftRecord]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for d in drafts:
            fh.write(json.dumps(d.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")


def load_drafts(path) -> list[DraftRecord]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(DraftRecord.from_dict(json.loads(line)))
    return out
