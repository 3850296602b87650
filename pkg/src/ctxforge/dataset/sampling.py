"""Verification sampling: deterministic review batches, optionally stratified."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .manifest import iter_records


class SampleTooLarge(ValueError):
    pass


@dataclass
class ReviewItem:
    episode_id: str
    instruction_type: str
    original_instruction: str
    transcript: str
    audio_ref: str
    calibration: bool = False

    def to_dict(self) -> dict:
        return {
            "episode_id": self.episode_id,
            "instruction_type": self.instruction_type,
            "original_instruction": self.original_instruction,
            "transcript": self.transcript,
            "audio_ref": self.audio_ref,
            "calibration": self.calibration,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ReviewItem":
        return cls(
            episode_id=str(d["episode_id"]),
            instruction_type=str(d.get("instruction_type", "")),
            original_instruction=str(d.get("original_instruction", "")),
            transcript=str(d.get("transcript", "")),
            audio_ref=str(d.get("audio_ref", "")),
            calibration=bool(d.get("calibration", False)),
        )


@dataclass
class ReviewBatch:
    batch_id: str
    manifest_path: str
    seed: int
    items: list[ReviewItem] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "batch_id": self.batch_id,
            "manifest_path": self.manifest_path,
            "seed": self.seed,
            "items": [i.to_dict() for i in self.items],
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, ensure_ascii=False, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ReviewBatch":
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
        return cls(
            batch_id=str(d["batch_id"]),
            manifest_path=str(d.get("manifest_path", "")),
            seed=int(d.get("seed", 0)),
            items=[ReviewItem.from_dict(i) for i in d.get("items", [])],
        )


def _item_from_record(record: dict) -> ReviewItem:
    return ReviewItem(
        episode_id=str(record["id"]),
        instruction_type=str(record.get("instruction_type", "")),
        original_instruction=str(record.get("original_instruction", "")),
        transcript=str(record.get("conversation", "")),
        audio_ref=str(record.get("audio_ref", "")),
    )


def sample_for_review(
    manifest_path,
    n: int,
    seed: int = 0,
    stratify_by_type: bool = False,
) -> ReviewBatch:
    """Draw n episodes deterministically for human verification.

    Stratified draws take an equal share per instruction type (within one of
    n / n_types, remainders assigned in canonical type order); shortfalls in
    a type are refilled from the other types' leftovers, largest pools first.
    """
    records = [record for _, record in iter_records(manifest_path)]
    if not (1 <= n <= len(records)):
        raise SampleTooLarge(f"cannot sample {n} of {len(records)} episodes")
    rng = random.Random(seed)

    if not stratify_by_type:
        chosen = rng.sample(records, n)
    else:
        by_type: dict[str, list[dict]] = {}
        for r in records:
            by_type.setdefault(str(r.get("instruction_type", "")), []).append(r)
        types = sorted(by_type)
        base, extra = divmod(n, len(types))
        quotas = {t: base + (1 if i < extra else 0) for i, t in enumerate(types)}
        chosen = []
        leftovers: list[dict] = []
        for t in types:
            pool = by_type[t]
            rng.shuffle(pool)
            take = min(quotas[t], len(pool))
            chosen.extend(pool[:take])
            leftovers.extend(pool[take:])
        shortfall = n - len(chosen)
        if shortfall > 0:
            rng.shuffle(leftovers)
            chosen.extend(leftovers[:shortfall])
        rng.shuffle(chosen)

    batch = ReviewBatch(
        batch_id=f"review-{seed}-{n}",
        manifest_path=str(manifest_path),
        seed=seed,
        items=[_item_from_record(r) for r in chosen],
    )
    return batch


def mark_calibration(batch: ReviewBatch, episode_ids: set[str]) -> None:
    for item in batch.items:
        if item.episode_id in episode_ids:
            item.calibration = True
