"""Append-only verdict log with an in-memory index rebuilt on start.

Durability contract: a verdict is appended and fsynced BEFORE the caller is
acknowledged, and the index dedupes by (episode, annotator) keeping the
first occurrence, so a crash anywhere in submit never loses an acked verdict
and never double-counts one. ``fault_hook`` exists so tests can inject
crashes between the named steps.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass
from typing import Callable


class StoreError(Exception):
    pass


class DuplicateVerdict(StoreError):
    pass


class NoVerdicts(StoreError):
    pass


@dataclass(frozen=True)
class Verdict:
    episode_id: str
    annotator_id: str
    intent_recoverable: bool
    phenomenon_fidelity: bool
    notes: str = ""
    timestamp: float = 0.0

    def to_dict(self) -> dict:
        return {
            "episode_id": self.episode_id,
            "annotator_id": self.annotator_id,
            "intent_recoverable": self.intent_recoverable,
            "phenomenon_fidelity": self.phenomenon_fidelity,
            "notes": self.notes,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        return cls(
            episode_id=str(d["episode_id"]),
            annotator_id=str(d["annotator_id"]),
            intent_recoverable=bool(d["intent_recoverable"]),
            phenomenon_fidelity=bool(d["phenomenon_fidelity"]),
            notes=str(d.get("notes", "")),
            timestamp=float(d.get("timestamp", 0.0)),
        )


class VerdictStore:
    def __init__(self, log_path, fault_hook: Callable[[str], None] | None = None):
        self.log_path = str(log_path)
        self._fault_hook = fault_hook or (lambda stage: None)
        self._lock = threading.Lock()
        self._index: dict[tuple[str, str], Verdict] = {}
        self._last_ts: dict[str, float] = {}
        self._rebuild()
        self._fh = open(self.log_path, "a", encoding="utf-8")

    def _rebuild(self) -> None:
        self._index.clear()
        if not os.path.exists(self.log_path):
            return
        with open(self.log_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    v = Verdict.from_dict(json.loads(line))
                except (json.JSONDecodeError, KeyError):
                    continue  # torn tail line from a crash mid-write
                key = (v.episode_id, v.annotator_id)
                if key not in self._index:
                    self._index[key] = v
                    prev = self._last_ts.get(v.annotator_id, 0.0)
                    self._last_ts[v.annotator_id] = max(prev, v.timestamp)

    def submit(
        self,
        episode_id: str,
        annotator_id: str,
        intent_recoverable: bool,
        phenomenon_fidelity: bool,
        notes: str = "",
    ) -> Verdict:
        """Durably append, then index, then return; raises DuplicateVerdict
        instead of overwriting a resubmission."""
        with self._lock:
            key = (episode_id, annotator_id)
            if key in self._index:
                raise DuplicateVerdict(f"{annotator_id} already judged {episode_id}")
            ts = max(time.time(), self._last_ts.get(annotator_id, 0.0) + 1e-6)
            verdict = Verdict(
                episode_id=episode_id,
                annotator_id=annotator_id,
                intent_recoverable=intent_recoverable,
                phenomenon_fidelity=phenomenon_fidelity,
                notes=notes,
                timestamp=ts,
            )
            self._fault_hook("before_append")
            self._fh.write(json.dumps(verdict.to_dict(), ensure_ascii=False) + "\n")
            self._fault_hook("after_write")
            self._fh.flush()
            os.fsync(self._fh.fileno())
            self._fault_hook("after_fsync")
            self._index[key] = verdict
            self._last_ts[annotator_id] = ts
            self._fault_hook("before_ack")
            return verdict

    def has(self, episode_id: str, annotator_id: str) -> bool:
        return (episode_id, annotator_id) in self._index

    def verdicts(self) -> list[Verdict]:
        return list(self._index.values())

    def count(self) -> int:
        return len(self._index)

    def close(self) -> None:
        self._fh.close()
