"""Dialogue synthesis, interaction extension, and intent validation.

All service output is treated as untrusted input: structural rules are
re-checked here with deterministic validators, never delegated to the
generator.
"""

from __future__ import annotations

import hashlib
import json
import re
import string
from importlib import resources

from ..episodes import markup
from ..episodes.types import InstructionType, MarkupDoc, Speaker, Turn
from .chat import ChatClient, SchemaError
from .types import ConversationPlan, IntentVerdict, ScriptDraft, TrajectorySeed

PLACEHOLDER = "<conv>"
MIN_EXTENSION_PAIRS = 2
MAX_EXTENSION_PAIRS = 4

AGENT_WORDS = ("robot", "agent", "assistant")

DEMOGRAPHIC_CELLS = (
    "male child",
    "female child",
    "male adult",
    "female adult",
    "male senior",
    "female senior",
)


class RuleViolation(ValueError):
    """Service output broke a per-type structural rule."""


class MissingActTag(SchemaError):
    pass


class PlaceholderMissing(SchemaError):
    pass


def load_template(template_id: str) -> str:
    text = (
        resources.files("ctxforge.scripting")
        .joinpath(f"templates/{template_id}.txt")
        .read_text(encoding="utf-8")
    )
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return "\n".join(lines).strip()


def fill_template(template_id: str, **values: str) -> str:
    return string.Template(load_template(template_id)).substitute(**values)


def _parse_json_reply(raw: str, required: tuple[str, ...]) -> dict:
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as err:
        raise SchemaError(f"service reply is not valid JSON: {err}") from err
    if not isinstance(data, dict):
        raise SchemaError("service reply must be a JSON object")
    missing = [k for k in required if k not in data]
    if missing:
        raise SchemaError(f"service reply missing fields: {missing}")
    return data


def _seed_identities(seed: TrajectorySeed, count: int) -> list[str]:
    """Deterministic demographic cells for the prompt, distinct, seed-keyed."""
    digest = hashlib.sha256(seed.source_id.encode("utf-8")).digest()
    start = digest[0] % len(DEMOGRAPHIC_CELLS)
    step = 1 + digest[1] % (len(DEMOGRAPHIC_CELLS) - 1)
    return [
        DEMOGRAPHIC_CELLS[(start + i * step) % len(DEMOGRAPHIC_CELLS)]
        for i in range(count)
    ]


def synthesize_dialogue(
    seed: TrajectorySeed,
    itype: InstructionType,
    client: ChatClient,
    sound_types: list[str] | None = None,
) -> ScriptDraft:
    """One human-only dialogue draft of the requested contextual type."""
    if itype is InstructionType.DIRECT_TEXT:
        raise ValueError("direct-text episodes are built without the dialogue service")
    values = {
        "instruction": seed.original_instruction,
        "scene_hint": seed.first_frame_ref or ", ".join(seed.objects) or "a household scene",
    }
    if itype is InstructionType.NON_VERBAL:
        names = sound_types or ["doorbell", "microwave beep", "door knock", "phone ring"]
        values["sound_info"] = "\n".join(f"{i + 1}. {n}" for i, n in enumerate(names))
    if itype is InstructionType.IDENTITY:
        ids = _seed_identities(seed, 3)
        values.update(identity_1=ids[0], identity_2=ids[1], identity_3=ids[2])

    raw = client.complete(
        fill_template(itype.value, **values),
        template_id=itype.value,
        tags={"source_id": seed.source_id},
    )
    required = ("scene_description", "conversation", "speakers")
    if itype is InstructionType.NON_VERBAL:
        required += ("selected_sound_type",)
    data = _parse_json_reply(raw, required)

    try:
        doc = markup.parse_markup(str(data["conversation"]))
    except markup.MarkupError as err:
        raise SchemaError(f"conversation does not parse: {err.code}: {err}") from err

    speakers = []
    for entry in data["speakers"]:
        if not isinstance(entry, dict) or "role" not in entry:
            raise SchemaError("each speaker needs at least a role")
        speakers.append((str(entry["role"]), str(entry.get("name", ""))))

    draft = ScriptDraft(
        scene_description=str(data["scene_description"]),
        conversation=doc,
        speaker_infos=tuple(speakers),
        instruction_type=itype,
        selected_sound_type=(
            str(data["selected_sound_type"]) if itype is InstructionType.NON_VERBAL else None
        ),
    )
    check_draft_rules(draft)
    return draft


def check_draft_rules(draft: ScriptDraft) -> None:
    """Deterministic post-hoc validation of per-type structural rules."""
    doc = draft.conversation
    if doc.act_marker is not None:
        raise RuleViolation("draft dialogue must not carry the action-onset tag")
    if any(t.speaker is Speaker.ROBOT for t in doc.turns):
        raise RuleViolation("draft dialogue is between people only")
    for t in doc.turns:
        lowered = t.text.lower()
        for word in AGENT_WORDS:
            if re.search(rf"\b{word}\b", lowered):
                raise RuleViolation(f"dialogue must not mention the {word}")

    n_speakers = len(doc.speakers_used())
    itype = draft.instruction_type
    if itype in (InstructionType.IDENTITY, InstructionType.TRIADIC) and n_speakers != 3:
        raise RuleViolation(f"{itype.value} dialogue needs 3 speakers, got {n_speakers}")
    if itype is InstructionType.DYADIC and n_speakers != 2:
        raise RuleViolation(f"dyadic dialogue needs 2 speakers, got {n_speakers}")
    if itype is InstructionType.OVERLAPPING:
        if not any(t.overlap_spans for t in doc.turns):
            raise RuleViolation("overlapping dialogue needs at least one overlap span")
    if itype is InstructionType.NON_VERBAL:
        if not draft.selected_sound_type:
            raise RuleViolation("non-verbal dialogue needs a selected sound type")
        if not any(t.sound_anchors for t in doc.turns):
            raise RuleViolation("non-verbal dialogue needs a sound anchor")
    if itype is InstructionType.SENTIMENT:
        if not any(t.sentiment_cues for t in doc.turns):
            raise RuleViolation("sentiment dialogue needs at least one cue tag")


def extend_interaction(
    draft: ScriptDraft,
    client: ChatClient,
    instruction: str,
    tags: dict | None = None,
) -> ConversationPlan:
    """Add the confirmation exchange; the final robot turn must end in the act tag."""
    prompt = fill_template(
        "extension",
        scene_description=draft.scene_description,
        conversation=markup.render_markup(draft.conversation),
        instruction=instruction,
    )
    raw = client.complete(prompt, template_id="extension", tags=tags or {})
    data = _parse_json_reply(raw, ("conversation",))
    pairs = data["conversation"]
    if not isinstance(pairs, list) or not all(
        isinstance(p, dict) and "user" in p and "robot" in p for p in pairs
    ):
        raise SchemaError("extension must be a list of user/robot pairs")
    if not (MIN_EXTENSION_PAIRS <= len(pairs) <= MAX_EXTENSION_PAIRS):
        raise SchemaError(
            f"extension needs {MIN_EXTENSION_PAIRS}-{MAX_EXTENSION_PAIRS} pairs, got {len(pairs)}"
        )
    if str(pairs[0]["user"]).strip() != PLACEHOLDER:
        raise PlaceholderMissing(f"first pair's user must be the {PLACEHOLDER} placeholder")
    turns = tuple((str(p["user"]), str(p["robot"])) for p in pairs)
    if not turns[-1][1].rstrip().endswith(markup.ACT_TAG):
        raise MissingActTag("final robot turn must end with the action-onset tag")
    plan = ConversationPlan(draft=draft, extension_turns=turns)
    plan_to_markup(plan)  # raises SchemaError if any turn fails the grammar
    return plan


def plan_to_markup(plan: ConversationPlan) -> MarkupDoc:
    """Splice the extension into the draft: full conversation, one act marker."""
    turns: list[Turn] = list(plan.draft.conversation.turns)
    for i, (user, robot) in enumerate(plan.extension_turns):
        if i > 0:
            turns.extend(_parse_fragment(user, expect_human=True))
        turns.extend(_parse_fragment(f"[Robot] {robot}", expect_human=False))
    doc = MarkupDoc(turns=tuple(turns))
    if doc.act_count() != 1 or doc.act_marker != len(doc.turns) - 1:
        raise SchemaError("the spliced conversation must end at the single act marker")
    return doc


def _parse_fragment(text: str, expect_human: bool) -> tuple[Turn, ...]:
    try:
        doc = markup.parse_markup(text)
    except markup.MarkupError as err:
        raise SchemaError(f"extension turn does not parse: {err.code}: {err}") from err
    if not doc.turns:
        raise SchemaError("extension turn is empty")
    for t in doc.turns:
        if expect_human and t.speaker is Speaker.ROBOT:
            raise SchemaError("user turns must come from a human speaker")
    return doc.turns


_ARTICLES = frozenset({"a", "an", "the"})
_PUNCT_TABLE = str.maketrans({c: " " for c in string.punctuation})


def normalize_intent(text: str) -> str:
    """Lowercase, strip punctuation, drop articles, collapse whitespace."""
    words = text.lower().translate(_PUNCT_TABLE).split()
    return " ".join(w for w in words if w not in _ARTICLES)


def intents_match(inferred: str, original: str) -> bool:
    return normalize_intent(inferred) == normalize_intent(original)


def validate_intent(
    plan: ConversationPlan,
    original_instruction: str,
    client: ChatClient,
    tags: dict | None = None,
) -> IntentVerdict:
    """Ask a judge to recover the latent command and compare after normalization."""
    transcript = markup.render_markup(plan_to_markup(plan))
    raw = client.complete(
        fill_template("intent_judge", transcript=transcript),
        template_id="intent_judge",
        tags=tags or {},
    )
    data = _parse_json_reply(raw, ("intent",))
    inferred = str(data["intent"])
    if intents_match(inferred, original_instruction):
        return IntentVerdict.ok(inferred)
    return IntentVerdict.fail(inferred)


def check_ambiguity(plan: ConversationPlan, original_instruction: str) -> None:
    """The instruction must not appear verbatim in user turns before the
    robot's first confirmation turn (normalized substring scan)."""
    target = normalize_intent(original_instruction)
    if not target:
        return
    for t in plan_to_markup(plan).turns:
        if t.speaker is Speaker.ROBOT:
            break
        if target in normalize_intent(t.text):
            raise RuleViolation(
                "original instruction appears verbatim before the confirmation turn"
            )


def direct_text_markup(instruction: str) -> MarkupDoc:
    """Retention-set episodes: the plain instruction plus a robot acknowledgement."""
    sentence = instruction.strip().rstrip(".") + "."
    return markup.parse_markup(f"[S1] {sentence} [Robot] OK, I will do that. {markup.ACT_TAG}")
