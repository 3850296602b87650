"""Episode validation: every violated invariant becomes a coded report entry."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

from . import markup
from .types import (
    ACTION_CLIP_RANGE,
    ACTION_DIMS,
    AGE_GROUPS,
    GENDERS,
    Episode,
    Speaker,
)

# Report codes
ID_EMPTY = "ID_EMPTY"
ACTIONS_EMPTY = "ACTIONS_EMPTY"
ACTION_DIM = "ACTION_DIM"
ACTION_NONFINITE = "ACTION_NONFINITE"
ACTION_RANGE = "ACTION_RANGE"
FRAME_REFS_EMPTY = "FRAME_REFS_EMPTY"
ACT_MISSING = "ACT_MISSING"
ACT_MULTIPLICITY = "ACT_MULTIPLICITY"
ACT_PLACEMENT = "ACT_PLACEMENT"
MARKUP_INVALID = "MARKUP_INVALID"
SPEAKER_PROFILE_MISSING = "SPEAKER_PROFILE_MISSING"
SPEAKER_PROFILE_INVALID = "SPEAKER_PROFILE_INVALID"
AUDIO_REF_EMPTY = "AUDIO_REF_EMPTY"
AUDIO_FILE_MISSING = "AUDIO_FILE_MISSING"
FRAME_FILE_MISSING = "FRAME_FILE_MISSING"
MIX_ANCHOR_INVALID = "MIX_ANCHOR_INVALID"
SNR_OUT_OF_RANGE = "SNR_OUT_OF_RANGE"
FIELD_MISSING = "FIELD_MISSING"
TYPE_UNKNOWN = "TYPE_UNKNOWN"
INSTRUCTION_EMPTY = "INSTRUCTION_EMPTY"


@dataclass
class Violation:
    code: str
    detail: str = ""

    def to_dict(self) -> dict:
        return {"code": self.code, "detail": self.detail}


@dataclass
class ValidationReport:
    episode_id: str
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, detail: str = "") -> None:
        self.violations.append(Violation(code, detail))

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def to_dict(self) -> dict:
        return {
            "episode_id": self.episode_id,
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
        }


def validate_episode(
    e: Episode,
    *,
    check_paths: bool = False,
    snr_bounds: tuple[float, float] | None = None,
) -> ValidationReport:
    """Check every episode invariant; an empty report means the episode is valid.

    ``check_paths`` additionally resolves audio/frame references on disk
    (the pack-time contract). ``snr_bounds``, when given, bounds the mix
    plan's target SNR.
    """
    report = ValidationReport(episode_id=e.id)

    if not e.id:
        report.add(ID_EMPTY)
    if not e.original_instruction.strip():
        report.add(INSTRUCTION_EMPTY)

    if not e.actions:
        report.add(ACTIONS_EMPTY)
    lo, hi = ACTION_CLIP_RANGE
    for i, frame in enumerate(e.actions):
        if len(frame.delta) != ACTION_DIMS:
            report.add(ACTION_DIM, f"frame {i} has {len(frame.delta)} components")
            continue
        for v in frame.delta:
            if not math.isfinite(v):
                report.add(ACTION_NONFINITE, f"frame {i}")
                break
            if not (lo <= v <= hi):
                report.add(ACTION_RANGE, f"frame {i} value {v}")
                break

    if not e.frame_refs:
        report.add(FRAME_REFS_EMPTY)

    _check_conversation(e, report)
    _check_speakers(e, report)
    _check_mix_plan(e, report, snr_bounds)

    if not e.audio_ref:
        report.add(AUDIO_REF_EMPTY)
    if check_paths:
        if e.audio_ref and not os.path.exists(e.audio_ref):
            report.add(AUDIO_FILE_MISSING, e.audio_ref)
        for ref in e.frame_refs:
            if not os.path.exists(ref):
                report.add(FRAME_FILE_MISSING, ref)

    return report


def _check_conversation(e: Episode, report: ValidationReport) -> None:
    doc = e.conversation
    problems = markup.check_doc(doc)
    acts = doc.act_count()
    if acts == 0:
        report.add(ACT_MISSING)
    elif acts > 1:
        report.add(ACT_MULTIPLICITY, f"{acts} action-onset turns")
        problems = [p for p in problems if "action-onset turn" not in p]
    non_robot_act = [p for p in problems if "non-Robot" in p]
    for p in non_robot_act:
        report.add(ACT_PLACEMENT, p)
    for p in problems:
        if p not in non_robot_act:
            report.add(MARKUP_INVALID, p)


def _check_speakers(e: Episode, report: ValidationReport) -> None:
    order = {Speaker.S1: 0, Speaker.S2: 1, Speaker.S3: 2}
    needed = sorted(
        {order[s] for s in e.conversation.speakers_used() if s in order}
    )
    for idx in needed:
        if idx >= len(e.speakers):
            report.add(SPEAKER_PROFILE_MISSING, f"no profile for S{idx + 1}")
    for prof in e.speakers:
        if prof.age_group not in AGE_GROUPS or prof.gender not in GENDERS:
            report.add(
                SPEAKER_PROFILE_INVALID,
                f"{prof.id}: {prof.age_group}/{prof.gender}",
            )


def _check_mix_plan(
    e: Episode, report: ValidationReport, snr_bounds: tuple[float, float] | None
) -> None:
    plan = e.mix_plan
    if plan is None:
        return
    n_anchors = len(e.conversation.sound_anchor_positions())
    for ins in plan.event_insertions:
        if not (0 <= ins.anchor_index < n_anchors):
            report.add(MIX_ANCHOR_INVALID, f"anchor {ins.anchor_index} of {n_anchors}")
        if ins.mode not in ("gap_insert", "overlay"):
            report.add(MIX_ANCHOR_INVALID, f"unknown mode {ins.mode}")
    if snr_bounds is not None:
        lo, hi = snr_bounds
        if not (lo <= plan.target_snr_db <= hi):
            report.add(SNR_OUT_OF_RANGE, f"{plan.target_snr_db} dB outside [{lo}, {hi}]")
