"""ctxforge: build contextual-instruction episodes end to end.

Scripted household dialogues, rendered multi-speaker audio with overlaps,
sound events and backgrounds, tokenized robot action trajectories, and a
human verification service with a review console.
"""

__version__ = "0.1.0"
