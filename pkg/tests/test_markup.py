"""Markup grammar: parsing, canonical rendering, round trips, rejections."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctxforge.episodes import (
    InvalidDocError,
    MarkupDoc,
    MarkupError,
    OverlapSpan,
    Speaker,
    Turn,
    parse_markup,
    render_markup,
)
from ctxforge.episodes import markup as mk
from markup_cases import MALFORMED_CASES


def test_single_tag_turn():
    doc = parse_markup("[S1]Hello")
    assert len(doc.turns) == 1
    t = doc.turns[0]
    assert t.speaker is Speaker.S1
    assert t.text == "Hello"
    assert t.overlap_spans == ()
    assert t.sound_anchors == ()


def test_overlap_example():
    doc = parse_markup("[S1] Apple or [Overlap]banana? [Overlap_S2] Banana!")
    assert len(doc.turns) == 2
    first, second = doc.turns
    assert first.text == "Apple or banana?"
    assert first.overlap_spans == (OverlapSpan(9, 16, Speaker.S2),)
    assert first.text[9:16] == "banana?"
    assert second.speaker is Speaker.S2
    assert second.text == "Banana!"


def test_sound_anchor_at_end():
    doc = parse_markup("[S2] Please close the oven door for me. [Sound]")
    (turn,) = doc.turns
    assert turn.sound_anchors == (len(turn.text),)


def test_sentiment_cue_position():
    doc = parse_markup("[S2] [SentimentCue] Hmm... not sure.")
    (turn,) = doc.turns
    assert turn.sentiment_cues == (0,)
    assert turn.text.startswith("Hmm")


def test_act_marker_turn_index():
    doc = parse_markup("[S1] Do it. [Robot] OK, I will do that. [ACT]")
    assert doc.act_marker == 1
    assert doc.turns[1].has_act
    assert doc.turns[1].text == "OK, I will do that."


def test_whitespace_normalization_is_one_way():
    a = parse_markup("[S1]Hello there")
    b = parse_markup("[S1]   Hello there")
    assert a == b


def test_empty_doc_renders_empty():
    assert render_markup(MarkupDoc()) == ""


def test_round_trip_is_canonical_fixed_point():
    s = "[Robot] Hi [ACT]"
    doc = parse_markup(s)
    assert render_markup(doc) == s
    assert parse_markup(render_markup(doc)) == doc


@pytest.mark.parametrize("text,code", MALFORMED_CASES)
def test_malformed_inputs_rejected_with_code(text, code):
    with pytest.raises(MarkupError) as exc:
        parse_markup(text)
    assert exc.value.code == code


def test_dialogue_corpus_parses_and_round_trips(dialogue_corpus):
    assert len(dialogue_corpus) == 12
    for name, text in dialogue_corpus.items():
        doc = parse_markup(text)
        assert doc.turns, name
        rendered = render_markup(doc)
        assert parse_markup(rendered) == doc, name
        # canonical rendering is a fixed point
        assert render_markup(parse_markup(rendered)) == rendered, name


def test_corpus_structure(dialogue_corpus):
    overlap_docs = [
        n for n, s in dialogue_corpus.items() if parse_markup(s).turns and any(
            t.overlap_spans for t in parse_markup(s).turns
        )
    ]
    assert sorted(overlap_docs) == ["overlapping_lid", "sim_overlapping_cheese"]
    act_docs = {n for n, s in dialogue_corpus.items() if parse_markup(s).act_marker is not None}
    assert len(act_docs) == 6  # the six full episodes; the sim dialogues stop pre-confirmation


def test_render_rejects_act_on_human_turn():
    doc = MarkupDoc(turns=(Turn(Speaker.S1, "hi", has_act=True),))
    with pytest.raises(InvalidDocError):
        render_markup(doc)


def test_render_rejects_span_not_reaching_turn_end():
    doc = MarkupDoc(
        turns=(
            Turn(Speaker.S1, "apple or banana", overlap_spans=(OverlapSpan(9, 12, Speaker.S2),)),
            Turn(Speaker.S2, "banana"),
        )
    )
    with pytest.raises(InvalidDocError):
        render_markup(doc)


def test_render_rejects_wrong_interrupter_followup():
    doc = MarkupDoc(
        turns=(
            Turn(Speaker.S1, "apple or banana", overlap_spans=(OverlapSpan(9, 15, Speaker.S2),)),
            Turn(Speaker.S3, "banana"),
        )
    )
    with pytest.raises(InvalidDocError):
        render_markup(doc)


# ---------------------------------------------------------------------------
# Property: parse(render(doc)) == doc for canonical docs.

_WORD = st.text(
    alphabet=st.characters(whitelist_categories=("Ll", "Lu", "Nd"), max_codepoint=0x24F),
    min_size=1,
    max_size=8,
)
_TEXT = st.lists(_WORD, min_size=1, max_size=6).map(" ".join)


def _non_ws_positions(text: str) -> list[int]:
    return [i for i, c in enumerate(text) if not c.isspace()] + [len(text)]


@st.composite
def _canonical_docs(draw) -> MarkupDoc:
    n_turns = draw(st.integers(min_value=0, max_value=5))
    turns: list[Turn] = []
    force_speaker: Speaker | None = None
    humans = [Speaker.S1, Speaker.S2, Speaker.S3]
    for i in range(n_turns):
        speaker = force_speaker or draw(st.sampled_from(humans + [Speaker.ROBOT]))
        force_speaker = None
        text = draw(_TEXT)
        positions = _non_ws_positions(text)
        sounds = tuple(sorted(draw(st.lists(st.sampled_from(positions), max_size=2))))
        cues = tuple(sorted(draw(st.lists(st.sampled_from(positions), max_size=2))))
        spans = ()
        last = i == n_turns - 1
        if speaker.is_human and not last and draw(st.booleans()):
            start = draw(st.sampled_from(positions))
            others = [s for s in humans if s is not speaker]
            interrupting = draw(st.sampled_from(others))
            spans = (OverlapSpan(start, len(text), interrupting),)
            force_speaker = interrupting
        turns.append(
            Turn(
                speaker=speaker,
                text=text,
                overlap_spans=spans,
                sound_anchors=sounds,
                sentiment_cues=cues,
            )
        )
    # optionally close with an action-onset turn
    if draw(st.booleans()):
        turns.append(Turn(Speaker.ROBOT, draw(_TEXT), has_act=True))
    return MarkupDoc(turns=tuple(turns))


@settings(max_examples=300, deadline=None)
@given(_canonical_docs())
def test_round_trip_property(doc):
    rendered = render_markup(doc)
    assert parse_markup(rendered) == doc
