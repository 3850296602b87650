"""Episode manifests: JSONL packing, reading, and whole-corpus checking."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from ..episodes import Episode, episode_from_record, episode_to_record, validate_record
from ..episodes.validate import ValidationReport


class ManifestError(Exception):
    pass


class DuplicateId(ManifestError):
    pass


class NotFound(ManifestError):
    pass


class CorruptLine(ManifestError):
    def __init__(self, line_no: int, detail: str = ""):
        super().__init__(f"corrupt manifest line {line_no}: {detail}")
        self.line_no = line_no


def iter_records(path):
    """Yield (line_no, record) pairs; raises CorruptLine on undecodable lines."""
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            try:
                record = json.loads(stripped)
            except json.JSONDecodeError as err:
                raise CorruptLine(line_no, str(err)) from err
            if not isinstance(record, dict) or "id" not in record:
                raise CorruptLine(line_no, "record is not an episode object")
            yield line_no, record


@dataclass
class Manifest:
    """Summary view over a manifest file."""

    path: str
    episode_count: int = 0
    per_type: dict[str, int] = field(default_factory=dict)
    ids: list[str] = field(default_factory=list)

    @classmethod
    def load(cls, path) -> "Manifest":
        m = cls(path=str(path))
        seen: set[str] = set()
        for line_no, record in iter_records(path):
            eid = str(record["id"])
            if eid in seen:
                raise DuplicateId(f"id {eid} repeats at line {line_no}")
            seen.add(eid)
            m.ids.append(eid)
            m.episode_count += 1
            t = str(record.get("instruction_type", ""))
            m.per_type[t] = m.per_type.get(t, 0) + 1
        return m


class ManifestWriter:
    """Append-only writer; one flushed line per episode, duplicate ids rejected."""

    def __init__(self, path):
        self.path = str(path)
        self._ids: set[str] = set()
        if os.path.exists(self.path):
            for _, record in iter_records(self.path):
                self._ids.add(str(record["id"]))
        self._fh = open(self.path, "a", encoding="utf-8")

    def write_episode(self, e: Episode) -> None:
        if e.id in self._ids:
            raise DuplicateId(e.id)
        line = json.dumps(episode_to_record(e), ensure_ascii=False, sort_keys=True)
        self._fh.write(line + "\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())
        self._ids.add(e.id)

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "ManifestWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def read_episode(episode_id: str, path) -> Episode:
    for _, record in iter_records(path):
        if str(record["id"]) == episode_id:
            return episode_from_record(record)
    raise NotFound(episode_id)


def pack_episodes(episodes: list[Episode], path) -> Manifest:
    """Write a fresh manifest sorted by id; repacking the same set is byte-identical."""
    ordered = sorted(episodes, key=lambda e: e.id)
    ids = [e.id for e in ordered]
    for a, b in zip(ids, ids[1:]):
        if a == b:
            raise DuplicateId(a)
    with open(path, "w", encoding="utf-8") as fh:
        for e in ordered:
            fh.write(json.dumps(episode_to_record(e), ensure_ascii=False, sort_keys=True) + "\n")
    return Manifest.load(path)


def check_manifest(
    path,
    check_paths: bool = True,
    snr_bounds: tuple[float, float] | None = None,
) -> list[ValidationReport]:
    """Validate every record; returns only the failing reports."""
    failures: list[ValidationReport] = []
    seen: set[str] = set()
    for line_no, record in iter_records(path):
        eid = str(record["id"])
        if eid in seen:
            raise DuplicateId(f"id {eid} repeats at line {line_no}")
        seen.add(eid)
        report = validate_record(record, check_paths=check_paths, snr_bounds=snr_bounds)
        if not report.ok:
            failures.append(report)
    return failures
