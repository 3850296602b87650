from .align import Alignment, AlignError, CtcPosteriors, DimensionMismatch, Infeasible, ctc_force_align
from .catalog import CatalogEntry, ClipCatalog, write_catalog
from .render import (
    RenderResult,
    VoicePool,
    estimate_overlap_seconds,
    load_render_manifest,
    overlap_seconds_from_alignment,
    render_episode_audio,
    write_render_manifest,
)
from .dsp import SilentInput, active_mask, measure_snr, resample, snr_gain
from .timeline import (
    AnchorOutOfRange,
    OverlapSpec,
    OverlapTooLong,
    PeakOverflow,
    Placement,
    RateMismatch,
    SilentNoise,
    SilentTimeline,
    Timeline,
    assemble_timeline,
    insert_event,
    loop_to_length,
    mix_background,
)
from .tts import EmptyAudio, HttpTtsClient, MockTtsClient, TtsClient, TtsServiceError, UnsupportedVoice, synthesize_turn
from .wave_io import (
    CANONICAL_RATE,
    AudioError,
    Waveform,
    read_wav,
    read_wav_bytes,
    silence,
    wav_bytes,
    wav_format,
    write_wav,
)

__all__ = [
    "CANONICAL_RATE",
    "Alignment",
    "AlignError",
    "AnchorOutOfRange",
    "AudioError",
    "CatalogEntry",
    "ClipCatalog",
    "CtcPosteriors",
    "DimensionMismatch",
    "EmptyAudio",
    "HttpTtsClient",
    "Infeasible",
    "MockTtsClient",
    "OverlapSpec",
    "OverlapTooLong",
    "PeakOverflow",
    "Placement",
    "RateMismatch",
    "RenderResult",
    "SilentInput",
    "SilentNoise",
    "SilentTimeline",
    "Timeline",
    "VoicePool",
    "TtsClient",
    "TtsServiceError",
    "UnsupportedVoice",
    "Waveform",
    "active_mask",
    "assemble_timeline",
    "ctc_force_align",
    "estimate_overlap_seconds",
    "insert_event",
    "load_render_manifest",
    "loop_to_length",
    "measure_snr",
    "mix_background",
    "overlap_seconds_from_alignment",
    "read_wav",
    "read_wav_bytes",
    "render_episode_audio",
    "resample",
    "silence",
    "snr_gain",
    "synthesize_turn",
    "wav_bytes",
    "wav_format",
    "write_catalog",
    "write_render_manifest",
    "write_wav",
]
