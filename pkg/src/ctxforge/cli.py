"""Command-line interface: the forge pipeline, the action codec, the demuxer.

Exit codes follow the corpus contract: 0 ok, 1 validation failures,
2 I/O corruption.
"""

from __future__ import annotations

import json
import sys

import click

from .audio.catalog import ClipCatalog
from .audio.render import VoicePool, render_episode_audio, write_render_manifest
from .audio.tts import HttpTtsClient, MockTtsClient
from .codec import TrainConfig as CodecTrainConfig
from .codec import decode_tokens, encode_chunk, load_model, save_model, train_codec
from .dataset.manifest import CorruptLine, DuplicateId, Manifest, check_manifest, pack_episodes
from .dataset.pack import build_episodes
from .dataset.sampling import mark_calibration, sample_for_review
from .dataset.shards import write_shards
from .dataset.stats import compute_stats
from .demux.stream import VocabLayout, decode_stream_actions
from .demux.stream import demux as demux_stream
from .demo import SOUND_TYPES, generate_demo_assets
from .episodes.types import InstructionType
from .scripting.chat import ChatClientConfig, HttpChatClient, MockChatClient
from .scripting.pipeline import load_drafts, run_scripting_stage, write_drafts
from .scripting.types import load_seed_records
from .audio.render import load_render_manifest

ALL_TYPES = ",".join(t.value for t in InstructionType)


@click.group()
def forge() -> None:
    """Build contextual-instruction episodes end to end."""


@forge.command("demo")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--seed", default=0, show_default=True)
def forge_demo(out_dir: str, seed: int) -> None:
    """Generate offline demo assets (seeds, voices, catalogs, mock replies)."""
    paths = generate_demo_assets(out_dir, seed=seed)
    for name, path in paths.items():
        click.echo(f"{name}: {path}")


@forge.command("script")
@click.option("--seeds", "seeds_path", required=True, type=click.Path(exists=True))
@click.option("--types", "types_csv", default=ALL_TYPES, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--cache", "cache_dir", default=None, type=click.Path())
@click.option("--endpoint", default=None)
@click.option("--model", default="default", show_default=True)
@click.option("--mock", "mock_path", default=None, type=click.Path(exists=True))
@click.option("--per-seed", default=0, show_default=True, help="variants per seed; 0 = every type")
@click.option("--sounds", "sounds_csv", default=",".join(SOUND_TYPES), show_default=True)
def forge_script(
    seeds_path, types_csv, out_path, cache_dir, endpoint, model, mock_path, per_seed, sounds_csv
) -> None:
    """Textual scripting: filter seeds, synthesize dialogues, extend, validate."""
    types = [InstructionType.from_string(t.strip()) for t in types_csv.split(",") if t.strip()]
    if mock_path:
        client = MockChatClient.from_file(mock_path)
    elif endpoint:
        client = HttpChatClient(
            ChatClientConfig(endpoint=endpoint, model=model, cache_dir=cache_dir)
        )
    else:
        raise click.UsageError("provide --endpoint or --mock")
    seeds = load_seed_records(seeds_path)
    sound_types = [s.strip() for s in sounds_csv.split(",") if s.strip()]
    outcome = run_scripting_stage(seeds, types, client, sound_types=sound_types, per_seed=per_seed)
    write_drafts(out_path, outcome.drafts)
    click.echo(
        f"drafts: {len(outcome.drafts)}  dropped seeds: {len(outcome.dropped_seeds)}"
        f"  failures: {len(outcome.failures)}"
    )
    for eid, stage, err in outcome.failures:
        click.echo(f"  FAIL {eid} [{stage}] {err}", err=True)
    if outcome.failures:
        sys.exit(1)


@forge.command("audio")
@click.option("--plans", "plans_path", required=True, type=click.Path(exists=True))
@click.option("--voices", "voices_path", required=True, type=click.Path(exists=True))
@click.option("--events", "events_dir", default=None, type=click.Path(exists=True))
@click.option("--backgrounds", "backgrounds_dir", default=None, type=click.Path(exists=True))
@click.option("--snr-min", default=0.0, show_default=True)
@click.option("--snr-max", default=20.0, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--tts", "tts_spec", default="mock", show_default=True, help="'mock' or an endpoint URL")
def forge_audio(
    plans_path, voices_path, events_dir, backgrounds_dir, snr_min, snr_max, seed, out_dir, tts_spec
) -> None:
    """Auditory realization: synthesize turns, place overlaps and events, mix."""
    drafts = load_drafts(plans_path)
    voices = VoicePool.load(voices_path)
    tts = MockTtsClient() if tts_spec == "mock" else HttpTtsClient(endpoint=tts_spec)
    events = ClipCatalog.load(events_dir) if events_dir else None
    backgrounds = ClipCatalog.load(backgrounds_dir) if backgrounds_dir else None
    results = []
    for draft in drafts:
        results.append(
            render_episode_audio(
                draft,
                voices,
                tts,
                out_dir,
                seed=seed,
                events=events,
                backgrounds=backgrounds,
                snr_range=(snr_min, snr_max),
            )
        )
    manifest_path = f"{out_dir.rstrip('/')}/render.jsonl"
    write_render_manifest(manifest_path, results)
    click.echo(f"rendered {len(results)} episodes -> {manifest_path}")


@forge.command("pack")
@click.option("--drafts", "drafts_path", required=True, type=click.Path(exists=True))
@click.option("--render", "render_path", required=True, type=click.Path(exists=True))
@click.option("--seeds", "seeds_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--shards", "shards_dir", default=None, type=click.Path())
@click.option("--check", "do_check", is_flag=True, help="validate the packed manifest")
@click.option("--snr-min", default=0.0, show_default=True)
@click.option("--snr-max", default=20.0, show_default=True)
def forge_pack(
    drafts_path, render_path, seeds_path, out_path, shards_dir, do_check, snr_min, snr_max
) -> None:
    """Pack episodes into a manifest (and optional shards)."""
    drafts = load_drafts(drafts_path)
    render_map = load_render_manifest(render_path)
    seeds = load_seed_records(seeds_path)
    episodes, skipped = build_episodes(drafts, render_map, seeds)
    manifest = pack_episodes(episodes, out_path)
    click.echo(f"packed {manifest.episode_count} episodes -> {out_path}")
    for eid, reason in skipped:
        click.echo(f"  SKIP {eid}: {reason}", err=True)
    if shards_dir:
        index = write_shards(out_path, shards_dir)
        click.echo(f"sharded into {len(set(index.values()))} archives -> {shards_dir}")
    if do_check:
        failures = check_manifest(out_path, check_paths=True, snr_bounds=(snr_min, snr_max))
        _report_failures(failures)
    if skipped:
        sys.exit(1)


def _report_failures(failures) -> None:
    if failures:
        for rep in failures:
            for v in rep.violations:
                click.echo(f"  VIOLATION {rep.episode_id}: {v.code} {v.detail}", err=True)
        sys.exit(1)
    click.echo("check: zero violations")


@forge.command("check")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--snr-min", default=0.0, show_default=True)
@click.option("--snr-max", default=20.0, show_default=True)
@click.option("--no-paths", is_flag=True, help="skip audio/frame existence checks")
def forge_check(manifest_path, snr_min, snr_max, no_paths) -> None:
    """Validate every episode record; exit 1 on violations, 2 on corruption."""
    try:
        failures = check_manifest(
            manifest_path, check_paths=not no_paths, snr_bounds=(snr_min, snr_max)
        )
    except (CorruptLine, DuplicateId) as err:
        click.echo(f"corrupt manifest: {err}", err=True)
        sys.exit(2)
    _report_failures(failures)


@forge.command("stats")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", default=None, type=click.Path())
@click.option("--no-audio", is_flag=True, help="skip reading audio headers")
def forge_stats(manifest_path, out_path, no_audio) -> None:
    """Exact corpus recount: totals, per-type histogram, duration histogram."""
    try:
        report = compute_stats(manifest_path, read_audio=not no_audio)
    except (CorruptLine, DuplicateId) as err:
        click.echo(f"corrupt manifest: {err}", err=True)
        sys.exit(2)
    payload = json.dumps(report.to_dict(), indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    click.echo(payload)


@forge.command("sample")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--n", "n", required=True, type=int)
@click.option("--seed", default=0, show_default=True)
@click.option("--stratify", is_flag=True)
@click.option("--calibration", "calibration_csv", default="", help="comma-separated episode ids")
@click.option("--out", "out_path", required=True, type=click.Path())
def forge_sample(manifest_path, n, seed, stratify, calibration_csv, out_path) -> None:
    """Draw a deterministic review batch for human verification."""
    batch = sample_for_review(manifest_path, n, seed=seed, stratify_by_type=stratify)
    ids = {s.strip() for s in calibration_csv.split(",") if s.strip()}
    if ids:
        mark_calibration(batch, ids)
    batch.save(out_path)
    click.echo(f"sampled {len(batch.items)} episodes -> {out_path}")


@forge.command("serve")
@click.option("--batch", "batch_path", required=True, type=click.Path(exists=True))
@click.option("--listen", default="127.0.0.1:8765", show_default=True)
@click.option("--log", "log_path", default="verdicts.jsonl", show_default=True, type=click.Path())
@click.option("--console", "console_dir", default=None, type=click.Path())
def forge_serve(batch_path, listen, log_path, console_dir) -> None:
    """Serve the review API (and the console bundle, if built)."""
    import uvicorn

    from .dataset.sampling import ReviewBatch
    from .service.app import create_app
    from .service.store import VerdictStore

    batch = ReviewBatch.load(batch_path)
    store = VerdictStore(log_path)
    app = create_app(batch, store, static_dir=console_dir)
    host, _, port = listen.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8765), log_level="warning")


# ---------------------------------------------------------------------------


@click.group()
def codec() -> None:
    """Discrete action tokenizer: train, encode, decode."""


def _read_chunk(source: str):
    data = sys.stdin.read() if source == "-" else open(source, encoding="utf-8").read()
    return json.loads(data)


@codec.command("train")
@click.option("--chunks", "chunks_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--q", default=0.01, show_default=True)
def codec_train(chunks_path, out_path, q) -> None:
    """Train on a JSONL corpus of chunk matrices (one N x 7 array per line)."""
    corpus = []
    with open(chunks_path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                corpus.append(json.loads(line))
    model = train_codec(corpus, CodecTrainConfig(q=q))
    save_model(model, out_path)
    click.echo(
        f"trained: {len(corpus)} chunks, {len(model.merges)} merges, "
        f"warnings: {list(model.warnings) or 'none'}"
    )


@codec.command("encode")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--chunk", "chunk_source", default="-", show_default=True)
def codec_encode(model_path, chunk_source) -> None:
    model = load_model(model_path)
    tokens = encode_chunk(_read_chunk(chunk_source), model)
    click.echo(" ".join(str(t) for t in tokens))


@codec.command("decode")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--tokens", "tokens_source", default="-", show_default=True)
def codec_decode(model_path, tokens_source) -> None:
    model = load_model(model_path)
    raw = sys.stdin.read() if tokens_source == "-" else open(tokens_source, encoding="utf-8").read()
    tokens = [int(t) for t in raw.split()]
    chunk = decode_tokens(tokens, model)
    click.echo(json.dumps([[round(float(v), 9) for v in row] for row in chunk]))


# ---------------------------------------------------------------------------


@click.command()
@click.option("--layout", "layout_path", required=True, type=click.Path(exists=True))
@click.option("--tokens", "tokens_source", default="-", show_default=True)
@click.option("--model", "model_path", default=None, type=click.Path(exists=True))
@click.option(
    "--emit",
    type=click.Choice(["segments", "chunks"]),
    default="segments",
    show_default=True,
)
def demux_cli(layout_path, tokens_source, model_path, emit) -> None:
    """Split a joint text/action id stream into segments or decoded chunks."""
    layout = VocabLayout.load(layout_path)
    raw = sys.stdin.read() if tokens_source == "-" else open(tokens_source, encoding="utf-8").read()
    stream = [int(t) for t in raw.split()]
    segments = demux_stream(stream, layout)
    if emit == "segments":
        for seg in segments:
            click.echo(json.dumps({"kind": seg.kind, "tokens": list(seg.tokens)}))
        return
    if not model_path:
        raise click.UsageError("--emit chunks requires --model")
    model = load_model(model_path)
    for chunk in decode_stream_actions(segments, model):
        click.echo(json.dumps([[round(float(v), 9) for v in row] for row in chunk]))


if __name__ == "__main__":
    forge()
