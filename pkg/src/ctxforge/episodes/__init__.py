from .markup import (
    ACT_TAG,
    InvalidDocError,
    MarkupError,
    check_doc,
    parse_markup,
    render_markup,
)
from .records import (
    dump_record,
    episode_from_record,
    episode_to_record,
    validate_record,
)
from .types import (
    ACTION_DIMS,
    AGE_GROUPS,
    CONTEXTUAL_TYPES,
    GENDERS,
    ActionFrame,
    Episode,
    EventInsertion,
    InstructionType,
    MarkupDoc,
    MixPlan,
    OverlapSpan,
    Provenance,
    Speaker,
    SpeakerProfile,
    Turn,
)
from .validate import ValidationReport, Violation, validate_episode

__all__ = [
    "ACT_TAG",
    "ACTION_DIMS",
    "AGE_GROUPS",
    "CONTEXTUAL_TYPES",
    "GENDERS",
    "ActionFrame",
    "Episode",
    "EventInsertion",
    "InstructionType",
    "InvalidDocError",
    "MarkupDoc",
    "MarkupError",
    "MixPlan",
    "OverlapSpan",
    "Provenance",
    "Speaker",
    "SpeakerProfile",
    "Turn",
    "ValidationReport",
    "Violation",
    "check_doc",
    "dump_record",
    "episode_from_record",
    "episode_to_record",
    "parse_markup",
    "render_markup",
    "validate_episode",
    "validate_record",
]
