"""Episode validation reports: one coded entry per violated invariant."""

import json

import pytest

from ctxforge.episodes import (
    ActionFrame,
    Episode,
    InstructionType,
    Provenance,
    SpeakerProfile,
    dump_record,
    episode_from_record,
    episode_to_record,
    parse_markup,
    validate_episode,
    validate_record,
)
from ctxforge.episodes import validate as vd


@pytest.fixture
def good_episode(tmp_path):
    wav = tmp_path / "ep.wav"
    wav.write_bytes(b"RIFF")
    frame = tmp_path / "frame0.png"
    frame.write_bytes(b"\x89PNG")
    doc = parse_markup(
        "[S1] Oh, look at that pot sitting there. [S2] Yeah, next to the towel."
        " [Robot] Do you need me to move the pot onto the towel?"
        " [S2] Uh, yeah, that'd be great. [Robot] Alright, moving it now. [ACT]"
    )
    return Episode(
        id="ep-0001",
        instruction_type=InstructionType.DYADIC,
        original_instruction="move pot onto the towel",
        conversation=doc,
        audio_ref=str(wav),
        frame_refs=(str(frame),),
        actions=(ActionFrame.from_list([0.1, -0.2, 0.0, 0.0, 0.0, 0.05, 1.0]),),
        speakers=(
            SpeakerProfile("v1", "adult", "male", "ref1.wav"),
            SpeakerProfile("v2", "adult", "female", "ref2.wav"),
        ),
        provenance=Provenance("demo", "traj-17"),
    )


def test_well_formed_episode_empty_report(good_episode):
    report = validate_episode(good_episode, check_paths=True)
    assert report.ok, report.codes()


def test_six_component_frame_flags_action_dim(good_episode):
    bad = Episode(
        **{
            **good_episode.__dict__,
            "actions": (ActionFrame.from_list([0.1, 0.2, 0.0, 0.0, 0.0, 0.5]),),
        }
    )
    assert vd.ACTION_DIM in validate_episode(bad).codes()


def test_two_act_markers_flag_multiplicity():
    record = {
        "id": "ep-bad",
        "instruction_type": "dyadic",
        "original_instruction": "move pot",
        "conversation": "[Robot] one [ACT] [S1] ok [Robot] two [ACT]",
        "audio_ref": "a.wav",
        "frame_refs": ["f.png"],
        "actions": [[0, 0, 0, 0, 0, 0, 0]],
        "speakers": [],
        "provenance": {"source_dataset": "demo", "trajectory_id": "t"},
    }
    assert vd.ACT_MULTIPLICITY in validate_record(record).codes()


def test_doc_level_multiplicity_flagged(good_episode):
    from ctxforge.episodes import MarkupDoc, Speaker, Turn

    doc = MarkupDoc(
        turns=(
            Turn(Speaker.ROBOT, "one", has_act=True),
            Turn(Speaker.ROBOT, "two", has_act=True),
        )
    )
    bad = Episode(**{**good_episode.__dict__, "conversation": doc})
    assert vd.ACT_MULTIPLICITY in validate_episode(bad).codes()


def test_missing_act_flagged(good_episode):
    doc = parse_markup("[S1] hello [S2] hi")
    bad = Episode(**{**good_episode.__dict__, "conversation": doc})
    assert vd.ACT_MISSING in validate_episode(bad).codes()


def test_empty_actions_and_frames(good_episode):
    bad = Episode(**{**good_episode.__dict__, "actions": (), "frame_refs": ()})
    codes = validate_episode(bad).codes()
    assert vd.ACTIONS_EMPTY in codes
    assert vd.FRAME_REFS_EMPTY in codes


def test_out_of_range_action(good_episode):
    bad = Episode(
        **{
            **good_episode.__dict__,
            "actions": (ActionFrame.from_list([2.0, 0, 0, 0, 0, 0, 0]),),
        }
    )
    assert vd.ACTION_RANGE in validate_episode(bad).codes()


def test_nonfinite_action(good_episode):
    bad = Episode(
        **{
            **good_episode.__dict__,
            "actions": (ActionFrame.from_list([float("nan"), 0, 0, 0, 0, 0, 0]),),
        }
    )
    assert vd.ACTION_NONFINITE in validate_episode(bad).codes()


def test_missing_speaker_profile(good_episode):
    bad = Episode(**{**good_episode.__dict__, "speakers": good_episode.speakers[:1]})
    assert vd.SPEAKER_PROFILE_MISSING in validate_episode(bad).codes()


def test_missing_files_reported(good_episode):
    bad = Episode(
        **{
            **good_episode.__dict__,
            "audio_ref": "/nonexistent/x.wav",
            "frame_refs": ("/nonexistent/f.png",),
        }
    )
    codes = validate_episode(bad, check_paths=True).codes()
    assert vd.AUDIO_FILE_MISSING in codes
    assert vd.FRAME_FILE_MISSING in codes


def test_record_round_trip(good_episode):
    record = episode_to_record(good_episode)
    back = episode_from_record(record)
    assert back == good_episode
    # and the serialized line is stable
    assert dump_record(back) == dump_record(good_episode)
    assert json.loads(dump_record(good_episode)) == json.loads(
        json.dumps(record, ensure_ascii=False, sort_keys=True)
    )


def test_record_missing_field_reported(good_episode):
    record = episode_to_record(good_episode)
    del record["actions"]
    report = validate_record(record)
    assert vd.FIELD_MISSING in report.codes()


def test_record_unknown_type(good_episode):
    record = episode_to_record(good_episode)
    record["instruction_type"] = "telepathic"
    assert vd.TYPE_UNKNOWN in validate_record(record).codes()
