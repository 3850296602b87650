"""CLI surfaces: the forge pipeline on a small corpus, codec and demux tools."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from ctxforge import codec as codec_lib
from ctxforge.cli import codec, demux_cli, forge

runner = CliRunner()


@pytest.fixture(scope="module")
def mini_corpus(tmp_path_factory):
    """demo assets -> scripts -> audio -> packed manifest, built once."""
    root = tmp_path_factory.mktemp("mini")
    assets = root / "assets"
    r = runner.invoke(forge, ["demo", "--out", str(assets), "--seed", "1"])
    assert r.exit_code == 0, r.output
    drafts = root / "drafts.jsonl"
    r = runner.invoke(
        forge,
        [
            "script",
            "--seeds", str(assets / "seeds.jsonl"),
            "--types", "dyadic,overlapping,non_verbal,direct_text",
            "--out", str(drafts),
            "--mock", str(assets / "mock_responses.json"),
        ],
    )
    assert r.exit_code == 0, r.output
    audio_dir = root / "audio"
    r = runner.invoke(
        forge,
        [
            "audio",
            "--plans", str(drafts),
            "--voices", str(assets / "voices.jsonl"),
            "--events", str(assets / "events"),
            "--backgrounds", str(assets / "backgrounds"),
            "--seed", "1",
            "--out", str(audio_dir),
        ],
    )
    assert r.exit_code == 0, r.output
    manifest = root / "manifest.jsonl"
    r = runner.invoke(
        forge,
        [
            "pack",
            "--drafts", str(drafts),
            "--render", str(audio_dir / "render.jsonl"),
            "--seeds", str(assets / "seeds.jsonl"),
            "--out", str(manifest),
        ],
    )
    assert r.exit_code == 0, r.output
    return root, assets, manifest


def test_check_passes(mini_corpus):
    _, _, manifest = mini_corpus
    r = runner.invoke(forge, ["check", "--manifest", str(manifest)])
    assert r.exit_code == 0, r.output
    assert "zero violations" in r.output


def test_check_flags_missing_audio(mini_corpus, tmp_path):
    _, _, manifest = mini_corpus
    broken = tmp_path / "broken.jsonl"
    lines = manifest.read_text().splitlines()
    record = json.loads(lines[0])
    record["audio_ref"] = "/nonexistent.wav"
    broken.write_text(json.dumps(record) + "\n")
    r = runner.invoke(forge, ["check", "--manifest", str(broken)])
    assert r.exit_code == 1
    assert "AUDIO_FILE_MISSING" in r.output


def test_check_corruption_exit_code(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "x", broken\n')
    r = runner.invoke(forge, ["check", "--manifest", str(bad)])
    assert r.exit_code == 2


def test_stats_output(mini_corpus, tmp_path):
    _, _, manifest = mini_corpus
    out = tmp_path / "report.json"
    r = runner.invoke(forge, ["stats", "--manifest", str(manifest), "--out", str(out)])
    assert r.exit_code == 0, r.output
    report = json.loads(out.read_text())
    assert report["totals"]["episodes"] == 40
    assert report["per_type"] == {
        "direct_text": 10,
        "dyadic": 10,
        "non_verbal": 10,
        "overlapping": 10,
    }


def test_sample_batch(mini_corpus, tmp_path):
    _, _, manifest = mini_corpus
    out = tmp_path / "batch.json"
    r = runner.invoke(
        forge,
        ["sample", "--manifest", str(manifest), "--n", "8", "--seed", "5", "--stratify", "--out", str(out)],
    )
    assert r.exit_code == 0, r.output
    batch = json.loads(out.read_text())
    assert len(batch["items"]) == 8
    counts: dict[str, int] = {}
    for item in batch["items"]:
        counts[item["instruction_type"]] = counts.get(item["instruction_type"], 0) + 1
    assert sorted(counts.values()) == [2, 2, 2, 2]


def test_pack_is_reproducible(mini_corpus, tmp_path):
    root, assets, manifest = mini_corpus
    again = tmp_path / "again.jsonl"
    r = runner.invoke(
        forge,
        [
            "pack",
            "--drafts", str(root / "drafts.jsonl"),
            "--render", str(root / "audio" / "render.jsonl"),
            "--seeds", str(assets / "seeds.jsonl"),
            "--out", str(again),
        ],
    )
    assert r.exit_code == 0, r.output
    assert again.read_bytes() == manifest.read_bytes()


# --------------------------------------------------------------------------- codec cli


@pytest.fixture(scope="module")
def codec_model_path(tmp_path_factory):
    root = tmp_path_factory.mktemp("codec")
    chunks = root / "chunks.jsonl"
    rng = np.random.default_rng(2)
    with open(chunks, "w") as fh:
        for _ in range(60):
            fh.write(json.dumps(rng.uniform(-1, 1, (6, 7)).round(4).tolist()) + "\n")
    model = root / "model.cdc"
    r = runner.invoke(codec, ["train", "--chunks", str(chunks), "--out", str(model)])
    assert r.exit_code == 0, r.output
    return model


def test_codec_encode_decode_round_trip(codec_model_path):
    rng = np.random.default_rng(3)
    chunk = rng.uniform(-1, 1, (6, 7)).round(4).tolist()
    r = runner.invoke(
        codec,
        ["encode", "--model", str(codec_model_path), "--chunk", "-"],
        input=json.dumps(chunk),
    )
    assert r.exit_code == 0, r.output
    tokens = r.output.split()
    r = runner.invoke(
        codec,
        ["decode", "--model", str(codec_model_path), "--tokens", "-"],
        input=" ".join(tokens),
    )
    assert r.exit_code == 0, r.output
    decoded = np.asarray(json.loads(r.output))
    model = codec_lib.load_model(codec_model_path)
    assert np.max(np.abs(decoded - np.asarray(chunk))) <= codec_lib.round_trip_bound(model) + 1e-9


def test_demux_cli_segments_and_chunks(codec_model_path, tmp_path):
    model = codec_lib.load_model(codec_model_path)
    layout = {"text_size": 100, "act_marker_id": 100, "action_offset": 101}
    layout_path = tmp_path / "layout.json"
    layout_path.write_text(json.dumps(layout))
    chunk = np.zeros((6, 7))
    action_tokens = codec_lib.encode_chunk(chunk, model)
    stream = [1, 2, 100] + [101 + t for t in action_tokens] + [3]
    stream_text = "\n".join(str(t) for t in stream)

    r = runner.invoke(
        demux_cli, ["--layout", str(layout_path), "--emit", "segments"], input=stream_text
    )
    assert r.exit_code == 0, r.output
    kinds = [json.loads(line)["kind"] for line in r.output.strip().splitlines()]
    assert kinds == ["text", "action", "text"]

    r = runner.invoke(
        demux_cli,
        ["--layout", str(layout_path), "--emit", "chunks", "--model", str(codec_model_path)],
        input=stream_text,
    )
    assert r.exit_code == 0, r.output
    decoded = np.asarray(json.loads(r.output.strip()))
    assert np.allclose(decoded, 0.0)
