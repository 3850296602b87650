"""Transcript markup grammar: parsing and canonical rendering.

Grammar
-------
A transcript is a flat string in which square-bracketed tags structure the
dialogue::

    [S1] [S2] [S3] [Robot]   start a turn for that speaker
    [Overlap]                start of the overlapped tail of the current turn;
                             the next tag must be [Overlap_Sx]
    [Overlap_S1/2/3]         the interrupting utterance; starts a turn for Sx
    [Sound]                  anchor for a non-verbal event at this position
    [SentimentCue]           anchor for a paralinguistic cue at this position
    [ACT]                    action onset; only in a Robot turn, turn-final

Normalization is one-way: the parser skips whitespace immediately after any
tag and strips trailing whitespace at turn boundaries; the canonical renderer
emits exactly one space after each turn-starting tag and one space between a
turn's last character and the next tag. ``parse(render(doc)) == doc`` for any
doc in canonical form (see :func:`check_doc`).
"""

from __future__ import annotations

import re

from .types import MarkupDoc, OverlapSpan, Speaker, Turn

ACT_TAG = "[ACT]"

_TAG_RE = re.compile(r"\[([^\[\]]*)\]")

_SPEAKER_TAGS = {
    "S1": Speaker.S1,
    "S2": Speaker.S2,
    "S3": Speaker.S3,
    "Robot": Speaker.ROBOT,
}

_OVERLAP_REPLY_RE = re.compile(r"^Overlap_S([123])$")


class MarkupError(ValueError):
    """Raised on any grammar violation; ``code`` is machine-readable."""

    def __init__(self, code: str, message: str, position: int | None = None):
        super().__init__(message)
        self.code = code
        self.position = position


# Error codes raised by parse_markup
UNKNOWN_TAG = "unknown_tag"
ORPHAN_TEXT = "orphan_text"
DANGLING_OVERLAP = "dangling_overlap"
STRAY_OVERLAP_REPLY = "stray_overlap_reply"
MISPLACED_ACT = "misplaced_act"
DUPLICATE_ACT = "duplicate_act"

# Error code raised by render_markup
INVALID_DOC = "invalid_doc"


class _TurnBuilder:
    def __init__(self, speaker: Speaker):
        self.speaker = speaker
        self.chunks: list[str] = []
        self.length = 0
        self.sound_anchors: list[int] = []
        self.sentiment_cues: list[int] = []
        self.overlap_start: int | None = None  # pending [Overlap]
        self.has_act = False

    def append_text(self, text: str) -> None:
        if text:
            self.chunks.append(text)
            self.length += len(text)

    def finish(self, interrupting: Speaker | None) -> Turn:
        text = "".join(self.chunks).rstrip()
        n = len(text)
        spans = ()
        if self.overlap_start is not None:
            spans = (OverlapSpan(min(self.overlap_start, n), n, interrupting),)
        return Turn(
            speaker=self.speaker,
            text=text,
            overlap_spans=spans,
            sound_anchors=tuple(min(p, n) for p in self.sound_anchors),
            sentiment_cues=tuple(min(p, n) for p in self.sentiment_cues),
            has_act=self.has_act,
        )


def parse_markup(text: str) -> MarkupDoc:
    """Parse a tagged transcript into a :class:`MarkupDoc`.

    Raises :class:`MarkupError` with one of the documented codes on any
    violation: ``unknown_tag``, ``orphan_text``, ``dangling_overlap``,
    ``stray_overlap_reply``, ``misplaced_act``, ``duplicate_act``.
    """
    turns: list[Turn] = []
    current: _TurnBuilder | None = None
    act_seen = False
    act_open = False  # inside the act turn, after [ACT]
    pos = 0

    def close_current(interrupting: Speaker | None, at: int) -> None:
        nonlocal current, act_open
        if current is None:
            return
        if current.overlap_start is not None and interrupting is None:
            raise MarkupError(
                DANGLING_OVERLAP,
                "overlap start without a following [Overlap_Sx] utterance",
                at,
            )
        turns.append(current.finish(interrupting))
        current = None
        act_open = False

    for m in _TAG_RE.finditer(text):
        between = text[pos : m.start()]
        pos = m.end()
        name = m.group(1)

        if between:
            if current is None:
                if between.strip():
                    raise MarkupError(
                        ORPHAN_TEXT, "text before the first speaker tag", m.start()
                    )
            else:
                if act_open and between.strip():
                    raise MarkupError(
                        MISPLACED_ACT, "text after the action-onset tag", m.start()
                    )
                if not act_open:
                    current.append_text(between)

        if name in _SPEAKER_TAGS:
            close_current(None, m.start())
            current = _TurnBuilder(_SPEAKER_TAGS[name])
            pos = _skip_ws(text, pos)
            continue

        reply = _OVERLAP_REPLY_RE.match(name)
        if reply:
            interrupting = _SPEAKER_TAGS[f"S{reply.group(1)}"]
            if current is None or current.overlap_start is None:
                raise MarkupError(
                    STRAY_OVERLAP_REPLY,
                    "[Overlap_Sx] without a preceding [Overlap] in the interrupted turn",
                    m.start(),
                )
            if interrupting is current.speaker:
                raise MarkupError(
                    DANGLING_OVERLAP,
                    "a speaker cannot interrupt their own turn",
                    m.start(),
                )
            close_current(interrupting, m.start())
            current = _TurnBuilder(interrupting)
            pos = _skip_ws(text, pos)
            continue

        if name not in ("Overlap", "Sound", "SentimentCue", "ACT"):
            raise MarkupError(UNKNOWN_TAG, f"unknown tag [{name}]", m.start())
        if current is None:
            raise MarkupError(ORPHAN_TEXT, f"[{name}] before the first speaker tag", m.start())
        if act_open:
            raise MarkupError(MISPLACED_ACT, "tag after the action-onset tag", m.start())

        if name == "Overlap":
            if current.overlap_start is not None:
                raise MarkupError(
                    DANGLING_OVERLAP, "nested overlap start in one turn", m.start()
                )
            current.overlap_start = current.length
            pos = _skip_ws(text, pos)
        elif name == "Sound":
            current.sound_anchors.append(current.length)
            pos = _skip_ws(text, pos)
        elif name == "SentimentCue":
            current.sentiment_cues.append(current.length)
            pos = _skip_ws(text, pos)
        else:  # ACT
            if act_seen:
                raise MarkupError(DUPLICATE_ACT, "more than one action-onset tag", m.start())
            if current.speaker is not Speaker.ROBOT:
                raise MarkupError(
                    MISPLACED_ACT, "action-onset tag outside a Robot turn", m.start()
                )
            if current.overlap_start is not None:
                raise MarkupError(
                    DANGLING_OVERLAP, "overlap left open at the action-onset tag", m.start()
                )
            current.has_act = True
            act_seen = True
            act_open = True
            pos = _skip_ws(text, pos)

    tail = text[pos:]
    if tail:
        if current is None:
            if tail.strip():
                raise MarkupError(ORPHAN_TEXT, "text before the first speaker tag", pos)
        elif act_open:
            if tail.strip():
                raise MarkupError(MISPLACED_ACT, "text after the action-onset tag", pos)
        else:
            current.append_text(tail)
    close_current(None, len(text))
    return MarkupDoc(turns=tuple(turns))


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def check_doc(doc: MarkupDoc) -> list[str]:
    """Structural problems that would prevent a doc from round-tripping.

    Returns human-readable findings; an empty list means the doc is in
    canonical form. Enforced: at most one overlap span per turn, spans run to
    the end of the turn text, the interrupting speaker opens the next turn,
    anchors lie in-bounds at non-whitespace positions and ascend, the
    action-onset marker is unique and sits on a Robot turn, and turn text
    carries no leading or trailing whitespace.
    """
    problems: list[str] = []
    act_turns = [i for i, t in enumerate(doc.turns) if t.has_act]
    if len(act_turns) > 1:
        problems.append("more than one action-onset turn")
    for i in act_turns:
        if doc.turns[i].speaker is not Speaker.ROBOT:
            problems.append(f"turn {i}: action-onset on a non-Robot turn")

    for i, t in enumerate(doc.turns):
        n = len(t.text)
        if t.text != t.text.strip():
            problems.append(f"turn {i}: leading or trailing whitespace in text")
        if len(t.overlap_spans) > 1:
            problems.append(f"turn {i}: multiple overlap spans")
        for span in t.overlap_spans:
            if not (0 <= span.start <= span.end == n):
                problems.append(f"turn {i}: overlap span must cover the turn tail")
            if span.interrupting is t.speaker:
                problems.append(f"turn {i}: self-interruption")
            if span.interrupting is Speaker.ROBOT:
                problems.append(f"turn {i}: Robot cannot be an interrupting speaker")
            if i + 1 >= len(doc.turns):
                problems.append(f"turn {i}: overlap span on the final turn")
            elif doc.turns[i + 1].speaker is not span.interrupting:
                problems.append(
                    f"turn {i}: next turn is not the interrupting speaker"
                )
            if span.start < n and t.text[span.start].isspace():
                problems.append(f"turn {i}: overlap span starts on whitespace")
        for kind, anchors in (("sound", t.sound_anchors), ("cue", t.sentiment_cues)):
            prev = -1
            for p in anchors:
                if not (0 <= p <= n):
                    problems.append(f"turn {i}: {kind} anchor out of bounds")
                elif p < n and t.text[p].isspace():
                    problems.append(f"turn {i}: {kind} anchor on whitespace")
                if p < prev:
                    problems.append(f"turn {i}: {kind} anchors not ascending")
                prev = p
    return problems


class InvalidDocError(ValueError):
    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.code = INVALID_DOC
        self.problems = problems


def render_markup(doc: MarkupDoc) -> str:
    """Serialize a doc to its canonical tagged string.

    Raises :class:`InvalidDocError` if the doc is not in canonical form.
    """
    problems = check_doc(doc)
    if problems:
        raise InvalidDocError(problems)

    parts: list[str] = []
    prev_span: OverlapSpan | None = None
    for t in doc.turns:
        if prev_span is not None:
            opener = f"[Overlap_{t.speaker.value}]"
        else:
            opener = f"[{t.speaker.value}]"
        body = _render_body(t)
        parts.append(f"{opener} {body}" if body else opener)
        prev_span = t.overlap_spans[0] if t.overlap_spans else None
    return " ".join(parts)


def _render_body(t: Turn) -> str:
    # Inline tags inserted back at their character offsets; at equal offsets
    # the canonical order is [SentimentCue], [Sound], [Overlap].
    inserts: list[tuple[int, int, str]] = []
    for p in t.sentiment_cues:
        inserts.append((p, 0, "[SentimentCue]"))
    for p in t.sound_anchors:
        inserts.append((p, 1, "[Sound]"))
    for span in t.overlap_spans:
        inserts.append((span.start, 2, "[Overlap]"))
    inserts.sort()

    out: list[str] = []
    cursor = 0
    for p, _, tag in inserts:
        out.append(t.text[cursor:p])
        out.append(tag)
        cursor = p
    out.append(t.text[cursor:])
    body = "".join(out)
    if t.has_act:
        body = f"{body} {ACT_TAG}" if body else ACT_TAG
    return body
