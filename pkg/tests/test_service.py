"""Verification service: queue behavior, durability, agreement reporting."""

import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from ctxforge.dataset.sampling import ReviewBatch, ReviewItem
from ctxforge.service import (
    DuplicateVerdict,
    NoVerdicts,
    VerdictStore,
    agreement_report,
    create_app,
)

TYPES = ["sentiment", "overlapping", "non_verbal", "identity", "dyadic", "triadic"]


def make_batch(n: int, audio_dir=None, calibration: set[int] = frozenset()) -> ReviewBatch:
    items = []
    for i in range(n):
        audio_ref = ""
        if audio_dir is not None:
            audio_ref = str(audio_dir / f"ep-{i}.wav")
        items.append(
            ReviewItem(
                episode_id=f"ep-{i:03d}",
                instruction_type=TYPES[i % len(TYPES)],
                original_instruction=f"move item {i}",
                transcript=f"[S1] About item {i}. [Robot] On it. [ACT]",
                audio_ref=audio_ref,
                calibration=i in calibration,
            )
        )
    return ReviewBatch(batch_id="b1", manifest_path="m.jsonl", seed=0, items=items)


@pytest.fixture
def client(tmp_path):
    store = VerdictStore(tmp_path / "verdicts.jsonl")
    app = create_app(make_batch(3), store)
    return TestClient(app), store


def submit(client, episode_id, annotator, rec=True, fid=True):
    return client.post(
        "/api/verdicts",
        json={
            "episode_id": episode_id,
            "annotator_id": annotator,
            "intent_recoverable": rec,
            "phenomenon_fidelity": fid,
            "notes": "",
        },
    )


# --------------------------------------------------------------------------- queue


def test_fresh_batch_serves_item_zero(client):
    http, _ = client
    resp = http.get("/api/review/next", params={"annotator": "a1"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["index"] == 0
    assert body["episode_id"] == "ep-000"
    assert body["audio_url"].endswith("/audio")


def test_exhausted_queue_returns_204(client):
    http, _ = client
    for i in range(3):
        assert submit(http, f"ep-{i:03d}", "a1").status_code == 201
    resp = http.get("/api/review/next", params={"annotator": "a1"})
    assert resp.status_code == 204


def test_two_annotators_have_independent_frontiers(client):
    """Replay a scripted request log and check each annotator's frontier."""
    http, _ = client
    script = [
        ("next", "a1", 0),
        ("next", "a2", 0),
        ("submit", "a1", 0),
        ("next", "a1", 1),
        ("next", "a2", 0),
        ("submit", "a2", 0),
        ("submit", "a2", 1),
        ("next", "a2", 2),
        ("next", "a1", 1),
    ]
    for action, annotator, idx in script:
        if action == "next":
            resp = http.get("/api/review/next", params={"annotator": annotator})
            assert resp.status_code == 200
            assert resp.json()["index"] == idx, (action, annotator, idx)
        else:
            assert submit(http, f"ep-{idx:03d}", annotator).status_code == 201


def test_duplicate_verdict_conflicts(client):
    http, store = client
    assert submit(http, "ep-000", "a1").status_code == 201
    assert submit(http, "ep-000", "a1").status_code == 409
    assert store.count() == 1


def test_unknown_episode_404(client):
    http, _ = client
    assert submit(http, "ep-999", "a1").status_code == 404


def test_audio_endpoint_serves_wav(tmp_path):
    import numpy as np

    from ctxforge.audio import Waveform, write_wav

    audio_dir = tmp_path / "audio"
    audio_dir.mkdir()
    for i in range(2):
        write_wav(audio_dir / f"ep-{i}.wav", Waveform(0.1 * np.ones(1600)))
    store = VerdictStore(tmp_path / "v.jsonl")
    http = TestClient(create_app(make_batch(2, audio_dir=audio_dir), store))
    resp = http.get("/api/episodes/ep-000/audio")
    assert resp.status_code == 200
    assert resp.headers["content-type"] == "audio/wav"
    assert resp.content[:4] == b"RIFF"


def test_batch_metadata(client):
    http, _ = client
    body = http.get("/api/batch").json()
    assert body["n_items"] == 3
    assert sum(body["per_type"].values()) == 3


# --------------------------------------------------------------------------- report


def test_report_exact_ratios(client):
    http, _ = client
    submit(http, "ep-000", "a1", rec=True, fid=True)
    submit(http, "ep-001", "a1", rec=False, fid=True)
    submit(http, "ep-002", "a1", rec=False, fid=False)
    body = http.get("/api/report").json()
    assert body["n_verdicts"] == 3
    assert body["recoverable_rate"] == 33.3  # 1/3 to 0.1%
    assert body["fidelity_rate"] == 66.7


def test_report_replicates_headline_rate(tmp_path):
    store = VerdictStore(tmp_path / "v.jsonl")
    batch = make_batch(1000)
    for i in range(1000):
        store.submit(f"ep-{i:03d}", "a1", i >= 13, True)
    # 987 yes / 13 no on recoverability
    rep = agreement_report(store.verdicts(), batch)
    assert rep.n_verdicts == 1000
    assert rep.recoverable_rate == 98.7
    assert rep.fidelity_rate == 100.0


def test_report_all_yes(client):
    http, _ = client
    submit(http, "ep-000", "a1")
    assert http.get("/api/report").json()["recoverable_rate"] == 100.0


def test_report_no_verdicts_404(client):
    http, _ = client
    assert http.get("/api/report").status_code == 404


def test_report_consistency_with_raw_log(tmp_path, client):
    http, store = client
    submit(http, "ep-000", "a1", rec=True)
    submit(http, "ep-001", "a1", rec=False)
    served = http.get("/api/report").json()
    raw = [json.loads(line) for line in open(store.log_path)]
    yes = sum(1 for r in raw if r["intent_recoverable"])
    assert served["recoverable_rate"] == round(100.0 * yes / len(raw), 1)


def test_calibration_items_excluded(tmp_path):
    store = VerdictStore(tmp_path / "v.jsonl")
    batch = make_batch(4, calibration={0, 1})
    http = TestClient(create_app(batch, store))
    for i in range(4):
        submit(http, f"ep-{i:03d}", "a1", rec=(i < 2))  # yes only on calibration items
    body = http.get("/api/report").json()
    assert body["n_verdicts"] == 2
    assert body["recoverable_rate"] == 0.0


def test_report_type_filter(client):
    http, _ = client
    submit(http, "ep-000", "a1", rec=True)  # sentiment
    submit(http, "ep-001", "a1", rec=False)  # overlapping
    body = http.get("/api/report", params={"instruction_type": "sentiment"}).json()
    assert body["n_verdicts"] == 1
    assert body["recoverable_rate"] == 100.0


# --------------------------------------------------------------------------- durability


class InjectedCrash(RuntimeError):
    pass


def test_timestamps_monotone_per_annotator(tmp_path):
    store = VerdictStore(tmp_path / "v.jsonl")
    stamps = [store.submit(f"ep-{i}", "a1", True, True).timestamp for i in range(20)]
    assert all(b > a for a, b in zip(stamps, stamps[1:]))


def test_crash_between_append_and_ack_never_loses_acked(tmp_path):
    """Randomized crash points: acked verdicts survive restart, none double."""
    rng = np.random.default_rng(13)
    log = tmp_path / "v.jsonl"
    stages = ["before_append", "after_write", "after_fsync", "before_ack", None]
    acked: set[tuple[str, str]] = set()
    attempted = 0

    for trial in range(100):
        crash_at = stages[int(rng.integers(0, len(stages)))]
        state = {"armed": crash_at}

        def hook(stage, state=state):
            if state["armed"] == stage:
                raise InjectedCrash(stage)

        store = VerdictStore(log, fault_hook=hook)
        key = (f"ep-{trial:04d}", "a1")
        attempted += 1
        try:
            store.submit(key[0], "a1", True, True)
            acked.add(key)
        except InjectedCrash:
            pass
        finally:
            store.close()

    rebuilt = VerdictStore(log)
    keys = {(v.episode_id, v.annotator_id) for v in rebuilt.verdicts()}
    # every acked verdict survived
    assert acked <= keys
    # no double counting: index size equals distinct keys in the log
    raw_keys = []
    for line in open(log):
        line = line.strip()
        if line:
            d = json.loads(line)
            raw_keys.append((d["episode_id"], d["annotator_id"]))
    assert rebuilt.count() == len(set(raw_keys))
    assert len(raw_keys) == len(set(raw_keys))
    rebuilt.close()


def test_resubmission_after_recovery_conflicts(tmp_path):
    log = tmp_path / "v.jsonl"
    store = VerdictStore(log)
    store.submit("ep-1", "a1", True, True)
    store.close()
    again = VerdictStore(log)
    with pytest.raises(DuplicateVerdict):
        again.submit("ep-1", "a1", True, True)
    again.close()


def test_agreement_report_requires_verdicts():
    with pytest.raises(NoVerdicts):
        agreement_report([], make_batch(1))
