"""Seed filtering: cheap textual heuristics plus source deduplication."""

from __future__ import annotations

from ..lexicon import extract_objects, tokenize
from .types import FilterDecision, TrajectorySeed

EMPTY_INSTRUCTION = "EMPTY_INSTRUCTION"
TOO_FEW_TOKENS = "TOO_FEW_TOKENS"
NO_OBJECT_NOUN = "NO_OBJECT_NOUN"
DUPLICATE_SOURCE = "DUPLICATE_SOURCE"

MIN_TOKENS = 3


class TrajectoryFilter:
    """Stateful so that duplicate source ids drop after the first sighting."""

    def __init__(self) -> None:
        self.seen_sources: set[str] = set()

    def filter(self, seed: TrajectorySeed) -> FilterDecision:
        text = seed.original_instruction.strip()
        if not text:
            return FilterDecision.dropped(EMPTY_INSTRUCTION)
        if len(tokenize(text)) < MIN_TOKENS:
            return FilterDecision.dropped(TOO_FEW_TOKENS)
        if not seed.objects and not extract_objects(text):
            return FilterDecision.dropped(NO_OBJECT_NOUN)
        if seed.source_id in self.seen_sources:
            return FilterDecision.dropped(DUPLICATE_SOURCE)
        self.seen_sources.add(seed.source_id)
        return FilterDecision.kept()


def filter_trajectory(seed: TrajectorySeed, filt: TrajectoryFilter | None = None) -> FilterDecision:
    return (filt or TrajectoryFilter()).filter(seed)
