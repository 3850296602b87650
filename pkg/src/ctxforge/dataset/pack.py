"""Join drafts, rendered audio, and source trajectories into packed episodes."""

from __future__ import annotations

from ..episodes.types import (
    ActionFrame,
    Episode,
    InstructionType,
    MixPlan,
    Provenance,
    SpeakerProfile,
)
from ..episodes import markup
from ..scripting.types import DraftRecord, SeedRecord


class PackError(ValueError):
    pass


def build_episode(draft: DraftRecord, render: dict, seed_rec: SeedRecord) -> Episode:
    if not seed_rec.actions:
        raise PackError(f"seed {seed_rec.seed.source_id} carries no action trajectory")
    if not seed_rec.frame_refs:
        raise PackError(f"seed {seed_rec.seed.source_id} carries no frame references")
    return Episode(
        id=draft.id,
        instruction_type=InstructionType.from_string(draft.instruction_type),
        original_instruction=draft.original_instruction,
        conversation=markup.parse_markup(draft.conversation),
        audio_ref=str(render["audio_ref"]),
        frame_refs=seed_rec.frame_refs,
        actions=tuple(ActionFrame.from_list(row) for row in seed_rec.actions),
        speakers=tuple(SpeakerProfile.from_dict(p) for p in render.get("speakers", [])),
        provenance=Provenance.from_dict(draft.provenance),
        mix_plan=MixPlan.from_dict(render["mix_plan"]) if render.get("mix_plan") else None,
    )


def build_episodes(
    drafts: list[DraftRecord],
    render_map: dict[str, dict],
    seed_records: list[SeedRecord],
) -> tuple[list[Episode], list[tuple[str, str]]]:
    """Returns (episodes, skipped) where skipped pairs are (draft_id, reason)."""
    seed_map = {s.seed.source_id: s for s in seed_records}
    episodes: list[Episode] = []
    skipped: list[tuple[str, str]] = []
    for draft in drafts:
        render = render_map.get(draft.id)
        if render is None:
            skipped.append((draft.id, "no rendered audio"))
            continue
        seed_rec = seed_map.get(draft.source_id)
        if seed_rec is None:
            skipped.append((draft.id, f"unknown seed {draft.source_id}"))
            continue
        try:
            episodes.append(build_episode(draft, render, seed_rec))
        except (PackError, markup.MarkupError, ValueError) as err:
            skipped.append((draft.id, str(err)))
    return episodes, skipped
