"""Byte-pair merge machinery over quantized-coefficient symbol streams."""

from __future__ import annotations

from collections import Counter, defaultdict
from typing import Sequence


def train_merges(
    seqs: list[list[int]],
    first_new_id: int,
    max_merges: int,
    min_pair_count: int = 2,
) -> list[tuple[int, int]]:
    """Learn up to ``max_merges`` pair merges from the corpus.

    Deterministic: ties on pair frequency break toward the smallest pair.
    Stops early when no adjacent pair occurs at least ``min_pair_count``
    times, so tiny corpora yield short merge tables.
    """
    work = [list(s) for s in seqs]
    counts: Counter = Counter()
    locs: defaultdict[tuple[int, int], set[int]] = defaultdict(set)
    for i, seq in enumerate(work):
        for pair in zip(seq, seq[1:]):
            counts[pair] += 1
            locs[pair].add(i)

    merges: list[tuple[int, int]] = []
    while len(merges) < max_merges:
        best_pair = None
        best_count = min_pair_count - 1
        for pair, count in counts.items():
            if count > best_count or (count == best_count and best_pair is not None and pair < best_pair):
                best_pair = pair
                best_count = count
        if best_pair is None or best_count < min_pair_count:
            break

        new_id = first_new_id + len(merges)
        merges.append(best_pair)
        for i in sorted(locs[best_pair]):
            old = work[i]
            for pair in zip(old, old[1:]):
                counts[pair] -= 1
                if counts[pair] <= 0:
                    del counts[pair]
                locs[pair].discard(i)
            new = _merge_once(old, best_pair, new_id)
            work[i] = new
            for pair in zip(new, new[1:]):
                counts[pair] += 1
                locs[pair].add(i)
    return merges


def _merge_once(seq: list[int], pair: tuple[int, int], new_id: int) -> list[int]:
    """Replace left-to-right non-overlapping occurrences of ``pair``."""
    out: list[int] = []
    i = 0
    n = len(seq)
    a, b = pair
    while i < n:
        if i + 1 < n and seq[i] == a and seq[i + 1] == b:
            out.append(new_id)
            i += 2
        else:
            out.append(seq[i])
            i += 1
    return out


def apply_merges(
    seq: Sequence[int],
    ranks: dict[tuple[int, int], int],
    merges: Sequence[tuple[int, int]],
    first_new_id: int,
) -> list[int]:
    """Compress a base-symbol sequence with the trained merge table.

    Repeatedly merges the lowest-rank pair present; equivalent to replaying
    the merge list in training order, and never lengthens the sequence.
    """
    out = list(seq)
    while len(out) >= 2:
        best_rank = None
        for pair in zip(out, out[1:]):
            r = ranks.get(pair)
            if r is not None and (best_rank is None or r < best_rank):
                best_rank = r
        if best_rank is None:
            break
        out = _merge_once(out, merges[best_rank], first_new_id + best_rank)
    return out


def expand(
    tokens: Sequence[int],
    merges: Sequence[tuple[int, int]],
    first_new_id: int,
    base_size: int,
) -> list[int]:
    """Expand merged ids back to base symbols; raises KeyError on unknown ids."""
    out: list[int] = []
    stack = list(reversed(tokens))
    while stack:
        tok = stack.pop()
        if 0 <= tok < base_size:
            out.append(tok)
        else:
            idx = tok - first_new_id
            if not (0 <= idx < len(merges)):
                raise KeyError(tok)
            a, b = merges[idx]
            stack.append(b)
            stack.append(a)
    return out
