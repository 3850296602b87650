from .chat import (
    ChatClient,
    ChatClientConfig,
    ChatServiceError,
    DiskResponseCache,
    HttpChatClient,
    MockChatClient,
    SchemaError,
    ScriptedChatClient,
    cache_key,
)
from .filters import (
    DUPLICATE_SOURCE,
    EMPTY_INSTRUCTION,
    NO_OBJECT_NOUN,
    TOO_FEW_TOKENS,
    TrajectoryFilter,
    filter_trajectory,
)
from .pipeline import (
    StageOutcome,
    episode_id,
    load_drafts,
    run_scripting_stage,
    write_drafts,
)
from .synthesis import (
    MissingActTag,
    PlaceholderMissing,
    RuleViolation,
    check_ambiguity,
    check_draft_rules,
    direct_text_markup,
    extend_interaction,
    fill_template,
    intents_match,
    load_template,
    normalize_intent,
    plan_to_markup,
    synthesize_dialogue,
    validate_intent,
)
from .types import (
    ConversationPlan,
    DraftRecord,
    FilterDecision,
    IntentVerdict,
    ROLE_DEMOGRAPHICS,
    ScriptDraft,
    SeedRecord,
    TrajectorySeed,
    load_seed_records,
    role_demographics,
)

__all__ = [
    "ChatClient",
    "ChatClientConfig",
    "ChatServiceError",
    "ConversationPlan",
    "DiskResponseCache",
    "DraftRecord",
    "DUPLICATE_SOURCE",
    "EMPTY_INSTRUCTION",
    "FilterDecision",
    "HttpChatClient",
    "IntentVerdict",
    "MissingActTag",
    "MockChatClient",
    "NO_OBJECT_NOUN",
    "PlaceholderMissing",
    "ROLE_DEMOGRAPHICS",
    "RuleViolation",
    "SchemaError",
    "ScriptDraft",
    "ScriptedChatClient",
    "SeedRecord",
    "StageOutcome",
    "TOO_FEW_TOKENS",
    "TrajectoryFilter",
    "TrajectorySeed",
    "cache_key",
    "check_ambiguity",
    "check_draft_rules",
    "direct_text_markup",
    "episode_id",
    "extend_interaction",
    "fill_template",
    "filter_trajectory",
    "intents_match",
    "load_drafts",
    "load_seed_records",
    "load_template",
    "normalize_intent",
    "plan_to_markup",
    "run_scripting_stage",
    "synthesize_dialogue",
    "validate_intent",
    "write_drafts",
]
