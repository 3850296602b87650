"""Frozen verb and object lexicon for deterministic skill/object extraction.

Instruction strings are mined with longest-match lookup against these fixed
lists, so corpus statistics are reproducible across runs and machines. The
lists cover common household manipulation vocabulary; extend them here, not
at call sites.
"""

from __future__ import annotations

import re

VERB_PHRASES = (
    "pick up",
    "turn on",
    "turn off",
    "take out",
    "put away",
    "pick",
    "put",
    "place",
    "move",
    "open",
    "close",
    "push",
    "pull",
    "grab",
    "lift",
    "stack",
    "cover",
    "pour",
    "wipe",
    "take",
    "set",
    "bring",
    "hand",
    "slide",
    "flip",
    "press",
)

OBJECT_PHRASES = (
    "alphabet soup",
    "black bowl",
    "chip bag",
    "cream cheese",
    "cutting board",
    "moka pot",
    "red bull",
    "apple",
    "bag",
    "ball",
    "banana",
    "basket",
    "board",
    "book",
    "bottle",
    "bowl",
    "box",
    "bread",
    "brush",
    "burner",
    "cabinet",
    "can",
    "carrot",
    "cheese",
    "cloth",
    "cola",
    "cup",
    "door",
    "drawer",
    "egg",
    "faucet",
    "fork",
    "glass",
    "jar",
    "juice",
    "kettle",
    "knife",
    "lamp",
    "lid",
    "microwave",
    "mug",
    "napkin",
    "orange",
    "oven",
    "pan",
    "pen",
    "pepper",
    "phone",
    "pitcher",
    "plate",
    "pot",
    "ramekin",
    "remote",
    "rxbar",
    "scissors",
    "sink",
    "soup",
    "sponge",
    "spoon",
    "steak",
    "stove",
    "sugar",
    "tape",
    "tomato",
    "towel",
    "toy",
    "tray",
)

_MAX_PHRASE_WORDS = max(len(p.split()) for p in OBJECT_PHRASES + VERB_PHRASES)

_PUNCT_RE = re.compile(r"[^\w\s]", flags=re.UNICODE)


def tokenize(text: str) -> list[str]:
    return _PUNCT_RE.sub(" ", text.lower()).split()


def extract_skill(instruction: str) -> str | None:
    """First verb phrase in the instruction, longest match wins."""
    tokens = tokenize(instruction)
    verbs = set(VERB_PHRASES)
    for i in range(len(tokens)):
        for width in range(_MAX_PHRASE_WORDS, 0, -1):
            phrase = " ".join(tokens[i : i + width])
            if phrase in verbs:
                return phrase
    return None


def extract_objects(instruction: str) -> list[str]:
    """Known object phrases in order of appearance, deduplicated, longest match wins."""
    tokens = tokenize(instruction)
    names = set(OBJECT_PHRASES)
    found: list[str] = []
    i = 0
    while i < len(tokens):
        for width in range(_MAX_PHRASE_WORDS, 0, -1):
            phrase = " ".join(tokens[i : i + width])
            if phrase in names:
                if phrase not in found:
                    found.append(phrase)
                i += width
                break
        else:
            i += 1
    return found


def extract_skill_objects(instruction: str) -> tuple[str | None, list[str]]:
    return extract_skill(instruction), extract_objects(instruction)
