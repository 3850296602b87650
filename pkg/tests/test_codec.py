"""Action codec: transform identities, round-trip bounds, token framing.

The decode path is cross-checked against ``oracles.oracle_decode``, a
deliberately plain reimplementation (explicit loops, no shared transform
code).
"""

import math

import numpy as np
import pytest
from oracles import oracle_decode

from ctxforge import codec
from ctxforge.codec import dct


@pytest.mark.parametrize("n", [1, 2, 6, 17, 32])
def test_dct_orthonormal_round_trip(n):
    rng = np.random.default_rng(n)
    x = rng.uniform(-1, 1, size=(n, 3))
    assert np.max(np.abs(dct.inverse(dct.forward(x)) - x)) <= 1e-12


def test_constant_chunk_has_only_dc():
    chunk = np.full((6, 7), 0.5)
    coefs = dct.forward(chunk)
    # DC of a constant c over N frames is c * sqrt(N)
    assert np.allclose(coefs[0], 0.5 * math.sqrt(6), atol=1e-12)
    assert np.max(np.abs(coefs[1:])) <= 1e-12


@pytest.fixture(scope="module")
def random_model():
    rng = np.random.default_rng(7)
    corpus = [rng.uniform(-1, 1, size=(6, 7)) for _ in range(400)]
    return codec.train_codec(corpus), corpus


@pytest.fixture(scope="module")
def smooth_corpus():
    rng = np.random.default_rng(11)
    corpus = []
    for _ in range(1000):
        start = rng.uniform(-0.5, 0.5, size=7)
        slope = rng.uniform(-0.05, 0.05, size=7)
        t = np.arange(6)[:, None]
        corpus.append(np.clip(start[None, :] + slope[None, :] * t, -1, 1))
    return corpus


def test_zero_chunk_round_trips_exactly(random_model):
    model, _ = random_model
    tokens = codec.encode_chunk(np.zeros((6, 7)), model)
    assert tokens[0] == codec.BOS_ACT and tokens[-1] == codec.EOS_ACT
    out = codec.decode_tokens(tokens, model)
    assert np.array_equal(out, np.zeros((6, 7)))


def test_zero_corpus_trains_degenerate_model():
    corpus = [np.zeros((6, 7)) for _ in range(10)]
    model = codec.train_codec(corpus)
    assert model.scales == (1.0,) * 7
    assert len(model.warnings) == 7
    assert all(w.startswith("DEGENERATE_DIMENSION") for w in model.warnings)
    # the zero run still merges down to a couple of tokens
    tokens = codec.encode_chunk(np.zeros((6, 7)), model)
    assert len(tokens) < 2 + 42
    assert np.array_equal(codec.decode_tokens(tokens, model), np.zeros((6, 7)))


def test_empty_corpus_raises():
    with pytest.raises(codec.EmptyCorpus):
        codec.train_codec([])


def test_disjoint_corpora_same_base_different_merges():
    rng = np.random.default_rng(3)
    a = codec.train_codec([rng.uniform(-1, 1, (6, 7)) for _ in range(50)])
    smooth = []
    for _ in range(50):
        lvl = rng.uniform(-0.3, 0.3, size=7)
        smooth.append(np.tile(lvl, (6, 1)))
    b = codec.train_codec(smooth)
    assert a.base_alphabet == b.base_alphabet == 255
    assert a.merges != b.merges


def test_shape_mismatch():
    model = codec.train_codec([np.zeros((6, 7))])
    with pytest.raises(codec.ShapeMismatch):
        codec.encode_chunk(np.zeros((5, 7)), model)


def test_nonfinite_rejected():
    model = codec.train_codec([np.zeros((6, 7))])
    bad = np.zeros((6, 7))
    bad[0, 0] = np.nan
    with pytest.raises(codec.NonFinite):
        codec.encode_chunk(bad, model)


def test_round_trip_bound_and_oracle(random_model):
    model, _ = random_model
    bound = codec.round_trip_bound(model)
    rng = np.random.default_rng(23)
    for _ in range(200):
        x = rng.uniform(-1, 1, size=(6, 7))
        assert codec.encode_stats(x, model).n_saturated == 0
        tokens = codec.encode_chunk(x, model)
        assert all(0 <= t < codec.VOCAB_SIZE for t in tokens)
        y = codec.decode_tokens(tokens, model)
        assert np.max(np.abs(y - x)) <= bound
        assert np.max(np.abs(y - oracle_decode(tokens, model))) <= 1e-12


def test_reconstruction_idempotence(random_model):
    model, _ = random_model
    rng = np.random.default_rng(5)
    for _ in range(20):
        x = rng.uniform(-1, 1, size=(6, 7))
        y = codec.decode_tokens(codec.encode_chunk(x, model), model)
        z = codec.decode_tokens(codec.encode_chunk(y, model), model)
        assert np.array_equal(y, z)


def test_merges_compress_smooth_corpus(smooth_corpus):
    model = codec.train_codec(smooth_corpus)
    assert 0 < len(model.merges) <= codec.MAX_MERGES
    bare = codec.CodecModel(
        version=model.version,
        chunk_len=model.chunk_len,
        dims=model.dims,
        scales=model.scales,
        q=model.q,
        merges=(),
    )
    merged_len = np.mean([len(codec.encode_chunk(c, model)) for c in smooth_corpus])
    bare_len = np.mean([len(codec.encode_chunk(c, bare)) for c in smooth_corpus])
    assert merged_len < bare_len
    # monotonicity: no individual sequence gets longer
    for c in smooth_corpus[:100]:
        assert len(codec.encode_chunk(c, model)) <= len(codec.encode_chunk(c, bare))


def test_every_base_id_reachable(random_model):
    model, _ = random_model
    for sym in range(codec.BASE_ALPHABET):
        payload = [sym] * model.n_payload_symbols
        tokens = [codec.BOS_ACT, *payload, codec.EOS_ACT]
        out = codec.decode_tokens(tokens, model)
        assert out.shape == (6, 7)
        assert np.all(np.isfinite(out))


def test_malformed_sequences(random_model):
    model, _ = random_model
    good = codec.encode_chunk(np.zeros((6, 7)), model)
    with pytest.raises(codec.MalformedSequence):
        codec.decode_tokens(good[:-1], model)  # missing EOS
    with pytest.raises(codec.MalformedSequence):
        codec.decode_tokens(good[1:], model)  # missing BOS
    with pytest.raises(codec.MalformedSequence):
        codec.decode_tokens([codec.BOS_ACT, 2045, codec.EOS_ACT], model)  # unknown id
    with pytest.raises(codec.TruncatedPayload):
        codec.decode_tokens([codec.BOS_ACT, 1, 2, codec.EOS_ACT], model)


def test_model_artifact_round_trip(tmp_path, random_model):
    model, _ = random_model
    path = tmp_path / "model.cdc"
    codec.save_model(model, path)
    loaded = codec.load_model(path)
    assert loaded == model
    x = np.random.default_rng(1).uniform(-1, 1, (6, 7))
    assert codec.encode_chunk(x, loaded) == codec.encode_chunk(x, model)


def test_vocab_budget():
    assert codec.BASE_ALPHABET + codec.MAX_MERGES + 2 == codec.VOCAB_SIZE == 2048
    assert codec.BOS_ACT == 2046
    assert codec.EOS_ACT == 2047
