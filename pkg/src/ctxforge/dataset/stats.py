"""Corpus statistics: exact recounts from the manifest, no cached state."""

from __future__ import annotations

import os
import wave
from dataclasses import dataclass, field

from ..lexicon import extract_skill_objects
from .manifest import iter_records

AUDIO_BUCKET_SECONDS = 10.0


@dataclass
class StatsReport:
    episodes: int = 0
    skills: int = 0
    objects: int = 0
    speakers: int = 0
    sound_events: int = 0
    backgrounds: int = 0
    per_type: dict[str, int] = field(default_factory=dict)
    audio_duration_hist: dict[str, int] = field(default_factory=dict)
    action_length_hist: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "totals": {
                "episodes": self.episodes,
                "skills": self.skills,
                "objects": self.objects,
                "speakers": self.speakers,
                "sound_events": self.sound_events,
                "backgrounds": self.backgrounds,
            },
            "per_type": dict(sorted(self.per_type.items())),
            "audio_duration_hist": dict(sorted(self.audio_duration_hist.items())),
            "action_length_hist": dict(sorted(self.action_length_hist.items())),
        }


def _audio_duration(path: str) -> float | None:
    try:
        with wave.open(path, "rb") as fh:
            rate = fh.getframerate()
            return fh.getnframes() / rate if rate else None
    except (OSError, wave.Error):
        return None


def compute_stats(manifest_path, read_audio: bool = True) -> StatsReport:
    """Recount everything from the manifest lines.

    Skills and objects come from the same frozen-lexicon extractor used when
    filtering seeds, so the tallies agree with the scripting stage.
    """
    report = StatsReport()
    skills: set[str] = set()
    objects: set[str] = set()
    speakers: set[str] = set()
    events: set[str] = set()
    backgrounds: set[str] = set()

    for _, record in iter_records(manifest_path):
        report.episodes += 1
        t = str(record.get("instruction_type", ""))
        report.per_type[t] = report.per_type.get(t, 0) + 1

        skill, objs = extract_skill_objects(str(record.get("original_instruction", "")))
        if skill:
            skills.add(skill)
        objects.update(objs)

        for prof in record.get("speakers", []):
            if isinstance(prof, dict) and prof.get("id"):
                speakers.add(str(prof["id"]))

        plan = record.get("mix_plan") or {}
        if plan.get("background_id"):
            backgrounds.add(str(plan["background_id"]))
        for ev in plan.get("events", []):
            if ev.get("clip_id"):
                events.add(str(ev["clip_id"]))

        n_actions = len(record.get("actions", []))
        key = f"{n_actions}"
        report.action_length_hist[key] = report.action_length_hist.get(key, 0) + 1

        if read_audio:
            duration = _audio_duration(str(record.get("audio_ref", "")))
            if duration is None:
                bucket = "missing"
            else:
                lo = int(duration // AUDIO_BUCKET_SECONDS) * int(AUDIO_BUCKET_SECONDS)
                bucket = f"{lo}-{lo + int(AUDIO_BUCKET_SECONDS)}s"
            report.audio_duration_hist[bucket] = report.audio_duration_hist.get(bucket, 0) + 1

    report.skills = len(skills)
    report.objects = len(objects)
    report.speakers = len(speakers)
    report.sound_events = len(events)
    report.backgrounds = len(backgrounds)
    assert sum(report.per_type.values()) == report.episodes
    return report


def audio_files_exist(manifest_path) -> list[str]:
    """Paths referenced by the manifest that are missing on disk."""
    missing = []
    for _, record in iter_records(manifest_path):
        ref = str(record.get("audio_ref", ""))
        if ref and not os.path.exists(ref):
            missing.append(ref)
    return missing
