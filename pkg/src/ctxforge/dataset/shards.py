"""Shard a manifest into tar archives with a sidecar index."""

from __future__ import annotations

import io
import json
import os
import tarfile

from .manifest import iter_records

SHARD_SIZE = 1024


def write_shards(manifest_path, out_dir, shard_size: int = SHARD_SIZE) -> dict[str, str]:
    """One JSON member per episode, at most ``shard_size`` per archive.

    Returns the id-to-shard map, also written to ``index.jsonl`` next to the
    shards. Members and shards follow manifest order, so repacking the same
    manifest reproduces the same layout.
    """
    if shard_size < 1:
        raise ValueError("shard size must be positive")
    os.makedirs(out_dir, exist_ok=True)
    index: dict[str, str] = {}
    shard_no = -1
    tar: tarfile.TarFile | None = None
    count_in_shard = 0

    for _, record in iter_records(manifest_path):
        if tar is None or count_in_shard >= shard_size:
            if tar is not None:
                tar.close()
            shard_no += 1
            shard_name = f"episodes-{shard_no:05d}.tar"
            tar = tarfile.open(os.path.join(out_dir, shard_name), "w")
            count_in_shard = 0
        payload = json.dumps(record, ensure_ascii=False, sort_keys=True).encode("utf-8")
        info = tarfile.TarInfo(name=f"{record['id']}.json")
        info.size = len(payload)
        info.mtime = 0
        tar.addfile(info, io.BytesIO(payload))
        index[str(record["id"])] = f"episodes-{shard_no:05d}.tar"
        count_in_shard += 1
    if tar is not None:
        tar.close()

    with open(os.path.join(out_dir, "index.jsonl"), "w", encoding="utf-8") as fh:
        for eid, shard in index.items():
            fh.write(json.dumps({"id": eid, "shard": shard}) + "\n")
    return index


def read_from_shard(out_dir, index: dict[str, str], episode_id: str) -> dict:
    shard = index[episode_id]
    with tarfile.open(os.path.join(out_dir, shard), "r") as tar:
        member = tar.extractfile(f"{episode_id}.json")
        if member is None:
            raise KeyError(episode_id)
        return json.loads(member.read().decode("utf-8"))


def load_index(out_dir) -> dict[str, str]:
    index: dict[str, str] = {}
    with open(os.path.join(out_dir, "index.jsonl"), encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                d = json.loads(line)
                index[str(d["id"])] = str(d["shard"])
    return index
