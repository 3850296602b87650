"""Sound catalogs: a directory of WAV clips plus a catalog.jsonl index.

Catalog lines are {"id", "path", "tags"}; paths are relative to the
catalog directory.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .wave_io import Waveform, read_wav

CATALOG_FILENAME = "catalog.jsonl"


@dataclass
class CatalogEntry:
    id: str
    path: str
    tags: tuple[str, ...] = ()


@dataclass
class ClipCatalog:
    root: str
    entries: dict[str, CatalogEntry] = field(default_factory=dict)
    _cache: dict[str, Waveform] = field(default_factory=dict, repr=False)

    @classmethod
    def load(cls, root: str) -> "ClipCatalog":
        index = os.path.join(root, CATALOG_FILENAME)
        entries: dict[str, CatalogEntry] = {}
        with open(index, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                d = json.loads(line)
                entry = CatalogEntry(
                    id=str(d["id"]),
                    path=str(d["path"]),
                    tags=tuple(d.get("tags", [])),
                )
                if entry.id in entries:
                    raise ValueError(f"duplicate catalog id {entry.id}")
                entries[entry.id] = entry
        return cls(root=root, entries=entries)

    def ids(self) -> list[str]:
        return sorted(self.entries)

    def get(self, clip_id: str) -> Waveform:
        if clip_id not in self._cache:
            entry = self.entries[clip_id]
            self._cache[clip_id] = read_wav(os.path.join(self.root, entry.path))
        return self._cache[clip_id]

    def choose(self, rng, tag: str | None = None) -> str:
        """Deterministic pick given the caller's seeded RNG."""
        pool = [
            e.id
            for e in sorted(self.entries.values(), key=lambda e: e.id)
            if tag is None or tag in e.tags
        ]
        if not pool:
            raise KeyError(f"no catalog entries with tag {tag!r}")
        return pool[int(rng.integers(0, len(pool)))]


def write_catalog(root: str, entries: list[CatalogEntry]) -> None:
    os.makedirs(root, exist_ok=True)
    with open(os.path.join(root, CATALOG_FILENAME), "w", encoding="utf-8") as fh:
        for e in entries:
            fh.write(json.dumps({"id": e.id, "path": e.path, "tags": list(e.tags)}) + "\n")
