"""Forced alignment of a label sequence to frame posteriors.

Standard topology: optional blanks between labels, a mandatory blank between
repeated labels, monotone left-to-right transitions. The dynamic program
maximizes total log-probability over the expanded state lattice
(blank, l_0, blank, l_1, ..., blank); its score equals exhaustive search over
all valid frame-to-state paths. The blank is the LAST posterior column.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

NEG_INF = -np.inf


class AlignError(ValueError):
    pass


class Infeasible(AlignError):
    pass


class DimensionMismatch(AlignError):
    pass


@dataclass
class CtcPosteriors:
    """(T, K+1) log-probability matrix; column K is the blank."""

    log_probs: np.ndarray
    frame_seconds: float = 0.02

    def __post_init__(self) -> None:
        self.log_probs = np.asarray(self.log_probs, dtype=np.float64)
        if self.log_probs.ndim != 2 or self.log_probs.shape[0] < 1:
            raise AlignError("posteriors must be a (T>=1, K+1) matrix")
        if self.frame_seconds <= 0:
            raise AlignError("frame_seconds must be positive")
        row_lse = np.logaddexp.reduce(self.log_probs, axis=1)
        if np.max(np.abs(row_lse)) > 1e-6:
            raise AlignError("posterior rows must be normalized (log-sum-exp ~ 0)")

    @property
    def n_frames(self) -> int:
        return self.log_probs.shape[0]

    @property
    def n_symbols(self) -> int:
        return self.log_probs.shape[1] - 1

    @property
    def blank(self) -> int:
        return self.n_symbols


@dataclass
class Alignment:
    """Inclusive (start_frame, end_frame) spans, one per label, in order."""

    spans: tuple[tuple[int, int], ...]
    score: float
    frame_seconds: float

    def label_start_time(self, index: int) -> float:
        return self.spans[index][0] * self.frame_seconds

    def label_end_time(self, index: int) -> float:
        return (self.spans[index][1] + 1) * self.frame_seconds


def ctc_force_align(post: CtcPosteriors, labels: Sequence[int]) -> Alignment:
    """Maximum-log-probability monotone alignment of ``labels`` to the frames."""
    labels = [int(x) for x in labels]
    t_total = post.n_frames
    k = post.n_symbols
    for lab in labels:
        if not (0 <= lab < k):
            raise DimensionMismatch(f"label {lab} outside the {k}-symbol alphabet")
    dup_pairs = sum(1 for a, b in zip(labels, labels[1:]) if a == b)
    if t_total < len(labels) + dup_pairs:
        raise Infeasible(
            f"{t_total} frames cannot carry {len(labels)} labels "
            f"with {dup_pairs} mandatory separating blanks"
        )

    n_labels = len(labels)
    n_states = 2 * n_labels + 1
    sym = np.full(n_states, post.blank, dtype=np.int64)
    sym[1::2] = labels
    lp = post.log_probs

    # skip from s-2 is allowed into an odd state whose label differs from the previous label
    can_skip = np.zeros(n_states, dtype=bool)
    for s in range(3, n_states, 2):
        can_skip[s] = labels[(s - 1) // 2] != labels[(s - 3) // 2]

    dp = np.full((t_total, n_states), NEG_INF)
    parent = np.zeros((t_total, n_states), dtype=np.int8)
    dp[0, 0] = lp[0, sym[0]]
    if n_states > 1:
        dp[0, 1] = lp[0, sym[1]]

    for t in range(1, t_total):
        prev = dp[t - 1]
        stay = prev
        step = np.concatenate(([NEG_INF], prev))[:n_states]
        skip = np.concatenate(([NEG_INF, NEG_INF], prev))[:n_states]
        skip = np.where(can_skip, skip, NEG_INF)
        stacked = np.stack([stay, step, skip])  # tie-break prefers staying
        choice = np.argmax(stacked, axis=0)
        dp[t] = stacked[choice, np.arange(n_states)] + lp[t, sym]
        parent[t] = choice

    if n_states == 1:
        end_state = 0
    else:
        end_state = n_states - 1 if dp[-1, n_states - 1] >= dp[-1, n_states - 2] else n_states - 2
    score = float(dp[-1, end_state])
    if score == NEG_INF:
        raise Infeasible("no valid alignment path")

    states = np.empty(t_total, dtype=np.int64)
    s = end_state
    for t in range(t_total - 1, -1, -1):
        states[t] = s
        s -= parent[t, s]

    spans: list[tuple[int, int]] = []
    for j in range(n_labels):
        state = 2 * j + 1
        frames = np.nonzero(states == state)[0]
        spans.append((int(frames[0]), int(frames[-1])))
    return Alignment(spans=tuple(spans), score=score, frame_seconds=post.frame_seconds)
