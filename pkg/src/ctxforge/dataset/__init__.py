from .manifest import (
    CorruptLine,
    DuplicateId,
    Manifest,
    ManifestError,
    ManifestWriter,
    NotFound,
    check_manifest,
    iter_records,
    pack_episodes,
    read_episode,
)
from .sampling import (
    ReviewBatch,
    ReviewItem,
    SampleTooLarge,
    mark_calibration,
    sample_for_review,
)
from .shards import load_index, read_from_shard, write_shards
from .stats import StatsReport, audio_files_exist, compute_stats

__all__ = [
    "CorruptLine",
    "DuplicateId",
    "Manifest",
    "ManifestError",
    "ManifestWriter",
    "NotFound",
    "ReviewBatch",
    "ReviewItem",
    "SampleTooLarge",
    "StatsReport",
    "audio_files_exist",
    "check_manifest",
    "compute_stats",
    "iter_records",
    "load_index",
    "mark_calibration",
    "pack_episodes",
    "read_episode",
    "read_from_shard",
    "sample_for_review",
    "write_shards",
]
