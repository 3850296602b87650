"""Self-contained demo assets: seeds, voices, sound catalogs, mock replies.

Everything a full offline forge run needs, generated deterministically, so
the end-to-end pipeline can run without any external service. The mock chat
replies follow the same per-type structural rules the validators enforce.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .audio.catalog import CatalogEntry, write_catalog
from .audio.wave_io import Waveform, write_wav
from .episodes.types import AGE_GROUPS, GENDERS

DEMO_INSTRUCTIONS = [
    ("traj-0001", "move the pot onto the towel"),
    ("traj-0002", "pick up the banana"),
    ("traj-0003", "put the lid on the pot"),
    ("traj-0004", "open the top drawer"),
    ("traj-0005", "place the sponge in the bowl"),
    ("traj-0006", "put the knife on the cutting board"),
    ("traj-0007", "move the pan to the right of the bottle"),
    ("traj-0008", "place the brush on the orange cloth"),
    ("traj-0009", "close the microwave door"),
    ("traj-0010", "pick up the apple"),
]

SOUND_TYPES = ("doorbell", "microwave beep", "door knock", "phone ring")

DISTRACTORS = ("mug", "tray", "jar", "kettle", "plate", "napkin")

ROLE_PAIRS = (("dad", "mom"), ("mom", "son"), ("daughter", "dad"), ("grandpa", "son"))
ROLE_TRIPLES = (
    ("grandpa", "dad", "son"),
    ("mom", "daughter", "grandma"),
    ("dad", "daughter", "grandpa"),
)

NAMES = {
    "dad": "Joe",
    "mom": "May",
    "son": "Alex",
    "daughter": "Lily",
    "grandpa": "Walt",
    "grandma": "Rose",
}


def _target_and_distractors(instruction: str) -> tuple[str, str, str]:
    from .lexicon import extract_objects

    objects = extract_objects(instruction)
    target = objects[0] if objects else "item"
    pool = [d for d in DISTRACTORS if d not in objects]
    return target, pool[0], pool[1]


def _speakers(roles) -> list[dict]:
    return [{"role": r, "name": NAMES.get(r, "")} for r in roles]


def _dialogue_response(source_id: str, itype: str, instruction: str, index: int) -> dict:
    target, d1, d2 = _target_and_distractors(instruction)
    scene = f"A household scene with a {target}, a {d1} and a {d2} in easy reach."
    pair = ROLE_PAIRS[index % len(ROLE_PAIRS)]
    triple = ROLE_TRIPLES[index % len(ROLE_TRIPLES)]

    if itype == "sentiment":
        convo = (
            f"[S1] We could start with the {d1}, the {d2}, or that other thing over there. "
            f"[S2] [SentimentCue] Hmm, the {d1} doesn't feel right to me... "
            f"[S1] Okay, the {d2} then? "
            f"[S2] [SentimentCue] Uh, I'm not so sure about that one either... "
            f"[S1] I see, so it's the remaining one you're after."
        )
        return {"scene_description": scene, "conversation": convo, "speakers": _speakers(pair)}
    if itype == "overlapping":
        convo = (
            f"[S2] So what should we sort out first here? "
            f"[S1] The {d1} or [Overlap]the {target}? "
            f"[Overlap_S2] The {target}, definitely! "
            f"[S1] Ha, alright, that settles it."
        )
        return {"scene_description": scene, "conversation": convo, "speakers": _speakers(pair)}
    if itype == "non_verbal":
        x = SOUND_TYPES[index % len(SOUND_TYPES)]
        y = SOUND_TYPES[(index + 1) % len(SOUND_TYPES)]
        convo = (
            f"[S1] Can you give me a hand in here? "
            f"[S2] Sure, what do you need me to do? "
            f"[S1] If you hear the {x}, {instruction}. If you hear the {y}, leave everything as it is. [Sound] "
            f"[S2] Got it, I'm listening out for it."
        )
        return {
            "scene_description": scene,
            "conversation": convo,
            "speakers": _speakers(pair),
            "selected_sound_type": x,
        }
    if itype == "identity":
        convo = (
            f"[S1] I was hoping to deal with the {d1} first, you know how I like order. "
            f"[S2] And I still need that {target} for my own little project, uh, soon please. "
            f"[S3] Ha, you two never stop! I say we help the one who asked nicest. "
            f"[S2] So we're agreed then? "
            f"[S3] Yep, agreed, let's get to it."
        )
        return {"scene_description": scene, "conversation": convo, "speakers": _speakers(triple)}
    if itype == "dyadic":
        convo = (
            f"[S1] That {target} keeps catching my eye over there. "
            f"[S2] Uh, yeah, it really can't stay like that. "
            f"[S1] Should we deal with it before dinner? "
            f"[S2] Yes, let's sort it out right now."
        )
        return {"scene_description": scene, "conversation": convo, "speakers": _speakers(pair)}
    if itype == "triadic":
        convo = (
            f"[S1] Hey, look at that {target} just sitting there! "
            f"[S2] Ha, it's waiting for someone brave to step up. "
            f"[S3] You two are hilarious, um, maybe I should be the brave one. "
            f"[S1] Go for it, you've got the touch. "
            f"[S3] Alright then, that's exactly what I want done."
        )
        return {"scene_description": scene, "conversation": convo, "speakers": _speakers(triple)}
    raise ValueError(f"no mock dialogue for type {itype}")


def build_mock_responses(seeds: list[tuple[str, str]] | None = None) -> dict:
    """Mock chat replies keyed '<template>:<source_id>' for every seed and type."""
    seeds = seeds or DEMO_INSTRUCTIONS
    responses: dict[str, object] = {}
    for index, (source_id, instruction) in enumerate(seeds):
        for itype in ("sentiment", "overlapping", "non_verbal", "identity", "dyadic", "triadic"):
            responses[f"{itype}:{source_id}"] = _dialogue_response(
                source_id, itype, instruction, index
            )
        responses[f"extension:{source_id}"] = {
            "conversation": [
                {"user": "<conv>", "robot": f"Do you need me to {instruction}?"},
                {
                    "user": "[S2] Uh, yes, that would be great.",
                    "robot": f"Alright, I will {instruction} now. [ACT]",
                },
            ]
        }
        responses[f"intent_judge:{source_id}"] = {"intent": instruction}
    return responses


def _smooth_trajectory(rng: np.random.Generator) -> list[list[float]]:
    n = int(rng.integers(18, 60))
    steps = rng.uniform(-0.08, 0.08, size=(n, 7))
    traj = np.clip(np.cumsum(steps, axis=0), -1.0, 1.0)
    traj[:, 6] = np.where(np.arange(n) > n * 0.7, 1.0, -1.0)  # gripper toggles late
    return [[round(float(v), 6) for v in row] for row in traj]


def _event_clip(kind: str, rate: int = 16000) -> Waveform:
    t = np.arange(round(0.9 * rate)) / rate
    if kind == "doorbell":
        x = 0.3 * (np.sin(2 * np.pi * 880 * t) + np.sin(2 * np.pi * 660 * t)) * np.exp(-3 * t)
    elif kind == "microwave beep":
        x = 0.3 * np.sin(2 * np.pi * 1000 * t) * (np.sin(2 * np.pi * 4 * t) > 0)
    elif kind == "door knock":
        rng = np.random.default_rng(17)
        x = np.zeros_like(t)
        for k in range(3):
            s = round(0.25 * k * rate)
            burst = 0.4 * rng.standard_normal(400) * np.exp(-np.arange(400) / 60)
            x[s : s + 400] += burst
    else:  # phone ring
        x = 0.3 * np.sin(2 * np.pi * 1200 * t) * (0.5 + 0.5 * np.sin(2 * np.pi * 20 * t))
    return Waveform(np.clip(x, -1, 1), rate)


def _background_clip(seed: int, rate: int = 16000) -> Waveform:
    rng = np.random.default_rng(seed)
    n = 4 * rate
    raw = rng.standard_normal(n + 64)
    kernel = np.ones(64) / 64.0  # crude low-pass for an ambient hum
    x = np.convolve(raw, kernel, mode="valid")[:n]
    x = 0.12 * x / np.max(np.abs(x))
    return Waveform(x, rate)


def generate_demo_assets(out_dir: str, seed: int = 0) -> dict[str, str]:
    """Write seeds, voices, catalogs, frames, and the mock reply file.

    Returns the paths of everything written, keyed by asset name.
    """
    rng = np.random.default_rng(seed)
    os.makedirs(out_dir, exist_ok=True)
    frames_dir = os.path.join(out_dir, "frames")
    os.makedirs(frames_dir, exist_ok=True)

    seeds_path = os.path.join(out_dir, "seeds.jsonl")
    with open(seeds_path, "w", encoding="utf-8") as fh:
        for source_id, instruction in DEMO_INSTRUCTIONS:
            frame_refs = []
            for j in range(2):
                frame = os.path.join(frames_dir, f"{source_id}-{j}.png")
                with open(frame, "wb") as img:
                    img.write(b"\x89PNG\r\n\x1a\n" + source_id.encode() + bytes([j]))
                frame_refs.append(frame)
            fh.write(
                json.dumps(
                    {
                        "source_id": source_id,
                        "instruction": instruction,
                        "first_frame_ref": frame_refs[0],
                        "frame_refs": frame_refs,
                        "actions": _smooth_trajectory(rng),
                        "dataset": "demo-kitchen",
                    }
                )
                + "\n"
            )

    voices_path = os.path.join(out_dir, "voices.jsonl")
    with open(voices_path, "w", encoding="utf-8") as fh:
        idx = 0
        for age in AGE_GROUPS:
            for gender in GENDERS:
                for k in range(2):
                    idx += 1
                    fh.write(
                        json.dumps(
                            {
                                "id": f"voice-{idx:03d}",
                                "age_group": age,
                                "gender": gender,
                                "timbre_ref": f"timbre/{age}-{gender}-{k}.wav",
                            }
                        )
                        + "\n"
                    )

    events_dir = os.path.join(out_dir, "events")
    entries = []
    for kind in SOUND_TYPES:
        slug = kind.replace(" ", "_")
        write_wav(_ensure(events_dir, f"{slug}.wav"), _event_clip(kind))
        entries.append(CatalogEntry(id=f"evt-{slug}", path=f"{slug}.wav", tags=(kind,)))
    write_catalog(events_dir, entries)

    bg_dir = os.path.join(out_dir, "backgrounds")
    bg_entries = []
    for i, name in enumerate(("kitchen_hum", "fan", "street")):
        write_wav(_ensure(bg_dir, f"{name}.wav"), _background_clip(seed + 100 + i))
        bg_entries.append(CatalogEntry(id=f"bg-{name}", path=f"{name}.wav", tags=("ambient",)))
    write_catalog(bg_dir, bg_entries)

    mock_path = os.path.join(out_dir, "mock_responses.json")
    with open(mock_path, "w", encoding="utf-8") as fh:
        json.dump(build_mock_responses(), fh, ensure_ascii=False, indent=1)

    return {
        "seeds": seeds_path,
        "voices": voices_path,
        "events": events_dir,
        "backgrounds": bg_dir,
        "mock": mock_path,
    }


def _ensure(directory: str, filename: str) -> str:
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, filename)
