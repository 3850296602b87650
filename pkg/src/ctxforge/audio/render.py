"""Episode audio realization: drafts in, mixed 16 kHz WAV files out.

Only human turns are synthesized (robot turns stay textual); a robot turn
contributes a longer inter-turn pause instead. Overlap offsets come from the
transcript's overlap spans: by default the interruption length is the
interrupted clip's duration scaled by the span's share of the turn text, and
when frame posteriors are available the span start can be located with
forced alignment instead.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

import numpy as np

from ..episodes import markup
from ..episodes.types import (
    EventInsertion,
    MarkupDoc,
    MixPlan,
    Speaker,
    SpeakerProfile,
    Turn,
)
from ..scripting.types import DraftRecord, role_demographics
from .align import Alignment
from .catalog import ClipCatalog
from .timeline import OverlapSpec, Timeline, assemble_timeline, insert_event, mix_background
from .tts import TtsClient, synthesize_turn
from .wave_io import CANONICAL_RATE, Waveform, write_wav

TURN_GAP_RANGE = (0.15, 0.5)
ROBOT_GAP_RANGE = (0.8, 1.6)
MIN_OVERLAP_SECONDS = 0.05
PEAK_TARGET = 0.89


@dataclass
class RenderResult:
    episode_id: str
    audio_path: str
    mix_plan: MixPlan
    speakers: list[SpeakerProfile] = field(default_factory=list)
    duration_s: float = 0.0


class VoicePool:
    """Deterministic role-to-voice assignment from a voices.jsonl catalog."""

    def __init__(self, profiles: list[SpeakerProfile]):
        if not profiles:
            raise ValueError("voice pool is empty")
        self.profiles = sorted(profiles, key=lambda p: p.id)

    @classmethod
    def load(cls, path) -> "VoicePool":
        profiles = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    profiles.append(SpeakerProfile.from_dict(json.loads(line)))
        return cls(profiles)

    def pick(self, role: str, rng: np.random.Generator) -> SpeakerProfile:
        cell = role_demographics(role)
        pool = self.profiles
        if cell is not None:
            matching = [p for p in pool if (p.age_group, p.gender) == cell]
            if matching:
                pool = matching
        return pool[int(rng.integers(0, len(pool)))]


def estimate_overlap_seconds(turn: Turn, clip: Waveform) -> float:
    """Char-proportional overlap length for the turn's tail span."""
    span = turn.overlap_spans[0]
    if not turn.text:
        return MIN_OVERLAP_SECONDS
    frac = (span.end - span.start) / len(turn.text)
    return max(MIN_OVERLAP_SECONDS, min(frac * clip.duration, clip.duration * 0.9))


def overlap_seconds_from_alignment(
    alignment: Alignment, span_start_label: int, clip: Waveform
) -> float:
    """Overlap length from a forced alignment of the interrupted turn: the
    interruption begins where the span's first label starts."""
    start_t = alignment.label_start_time(span_start_label)
    return max(MIN_OVERLAP_SECONDS, min(clip.duration - start_t, clip.duration * 0.9))


def _episode_rng(seed: int, episode_id: str) -> np.random.Generator:
    digest = hashlib.sha256(f"{seed}\x1f{episode_id}".encode("utf-8")).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "little"))


def render_episode_audio(
    draft: DraftRecord,
    voices: VoicePool,
    tts: TtsClient,
    out_dir: str,
    seed: int = 0,
    events: ClipCatalog | None = None,
    backgrounds: ClipCatalog | None = None,
    snr_range: tuple[float, float] = (0.0, 20.0),
) -> RenderResult:
    """Synthesize, place, decorate, and mix one episode; write the WAV."""
    doc = markup.parse_markup(draft.conversation)
    rng = _episode_rng(seed, draft.id)

    slot_roles = _slot_roles(draft)
    slot_voices = {
        slot: voices.pick(role, rng) for slot, role in slot_roles.items()
    }

    clips: list[Waveform] = []
    gaps: list[float] = []
    clip_turn_idx: list[int] = []
    pending_gap = 0.0
    for i, turn in enumerate(doc.turns):
        if turn.speaker is Speaker.ROBOT or not turn.text.strip():
            pending_gap += float(rng.uniform(*ROBOT_GAP_RANGE))
            continue
        voice = slot_voices.get(turn.speaker)
        if voice is None:
            voice = voices.pick("", rng)
            slot_voices[turn.speaker] = voice
        clip = synthesize_turn(turn, voice, tts)
        if clips:
            gaps.append(pending_gap + float(rng.uniform(*TURN_GAP_RANGE)))
        pending_gap = 0.0
        clips.append(clip)
        clip_turn_idx.append(i)

    if not clips:
        raise ValueError(f"episode {draft.id} has no speakable turns")

    overlaps = _overlap_specs(doc, clips, clip_turn_idx)
    timeline = assemble_timeline(clips, gaps, overlaps)

    insertions: list[EventInsertion] = []
    if events is not None:
        timeline, insertions = _insert_events(
            doc, draft, timeline, clips, clip_turn_idx, events, rng
        )

    target_snr = float(rng.uniform(*snr_range))
    if backgrounds is not None:
        bg_id = backgrounds.choose(rng)
        mixed = mix_background(timeline, backgrounds.get(bg_id), target_snr)
    else:
        bg_id = ""
        mixed = timeline.render()

    peak = mixed.peak()
    if peak > PEAK_TARGET:
        mixed = Waveform(mixed.samples * (PEAK_TARGET / peak), mixed.rate)

    os.makedirs(out_dir, exist_ok=True)
    audio_path = os.path.join(out_dir, f"{draft.id}.wav")
    dither_seed = int.from_bytes(hashlib.sha256(draft.id.encode()).digest()[:4], "little")
    write_wav(audio_path, mixed, dither_seed=dither_seed)

    order = [Speaker.S1, Speaker.S2, Speaker.S3]
    profiles = [slot_voices[s] for s in order if s in slot_voices]
    return RenderResult(
        episode_id=draft.id,
        audio_path=audio_path,
        mix_plan=MixPlan(
            background_id=bg_id,
            target_snr_db=round(target_snr, 3),
            event_insertions=tuple(insertions),
        ),
        speakers=profiles,
        duration_s=mixed.duration,
    )


def _slot_roles(draft: DraftRecord) -> dict[Speaker, str]:
    order = [Speaker.S1, Speaker.S2, Speaker.S3]
    out: dict[Speaker, str] = {}
    for slot, info in zip(order, draft.speakers):
        out[slot] = str(info.get("role", ""))
    return out


def _overlap_specs(
    doc: MarkupDoc, clips: list[Waveform], clip_turn_idx: list[int]
) -> list[OverlapSpec]:
    turn_to_clip = {t: c for c, t in enumerate(clip_turn_idx)}
    specs: list[OverlapSpec] = []
    for turn_idx, turn in enumerate(doc.turns):
        if not turn.overlap_spans:
            continue
        interrupted_clip = turn_to_clip.get(turn_idx)
        interrupting_clip = turn_to_clip.get(turn_idx + 1)
        if interrupted_clip is None or interrupting_clip is None:
            continue
        seconds = estimate_overlap_seconds(turn, clips[interrupted_clip])
        specs.append(OverlapSpec(interrupted_clip, interrupting_clip, seconds))
    return specs


def _insert_events(
    doc: MarkupDoc,
    draft: DraftRecord,
    timeline: Timeline,
    clips: list[Waveform],
    clip_turn_idx: list[int],
    events: ClipCatalog,
    rng: np.random.Generator,
) -> tuple[Timeline, list[EventInsertion]]:
    turn_to_clip = {t: c for c, t in enumerate(clip_turn_idx)}
    insertions: list[EventInsertion] = []
    for anchor_index, (turn_idx, char_pos) in enumerate(doc.sound_anchor_positions()):
        try:
            clip_id = events.choose(rng, tag=draft.selected_sound_type)
        except KeyError:
            clip_id = events.choose(rng)
        clip_pos = turn_to_clip.get(turn_idx)
        if clip_pos is None:
            anchor_time = timeline.duration
        else:
            placement = timeline.placements[clip_pos]
            text_len = max(1, len(doc.turns[turn_idx].text))
            frac = min(1.0, char_pos / text_len)
            anchor_time = (
                placement.start_sample + frac * len(placement.clip)
            ) / timeline.rate
        anchor_time = min(anchor_time, timeline.duration)
        timeline = insert_event(timeline, anchor_time, events.get(clip_id), "gap_insert")
        insertions.append(EventInsertion(anchor_index, clip_id, "gap_insert"))
    return timeline, insertions


def write_render_manifest(path, results: list[RenderResult]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in results:
            fh.write(
                json.dumps(
                    {
                        "episode_id": r.episode_id,
                        "audio_ref": r.audio_path,
                        "mix_plan": r.mix_plan.to_dict(),
                        "speakers": [p.to_dict() for p in r.speakers],
                        "duration_s": round(r.duration_s, 4),
                    },
                    ensure_ascii=False,
                    sort_keys=True,
                )
                + "\n"
            )


def load_render_manifest(path) -> dict[str, dict]:
    out: dict[str, dict] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                d = json.loads(line)
                out[d["episode_id"]] = d
    return out
