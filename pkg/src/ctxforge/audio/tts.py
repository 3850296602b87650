"""Speech synthesis clients: a generic HTTP client and a deterministic mock.

The real engine is external; this module only owns the client contract
(text + timbre reference in, waveform out), disk caching, and the resample
to the canonical 16 kHz.
"""

from __future__ import annotations

import hashlib
import os
from typing import Protocol

import numpy as np

from ..episodes.types import SpeakerProfile, Turn
from .dsp import resample
from .wave_io import CANONICAL_RATE, AudioError, Waveform, read_wav, read_wav_bytes, write_wav


class TtsServiceError(RuntimeError):
    pass


class EmptyAudio(AudioError):
    pass


class UnsupportedVoice(AudioError):
    pass


class TtsClient(Protocol):
    def synthesize(self, text: str, timbre_ref: str) -> Waveform: ...


def synthesize_turn(turn: Turn, voice: SpeakerProfile, client: TtsClient) -> Waveform:
    """One turn rendered in the given voice, resampled to 16 kHz."""
    if not turn.text.strip():
        raise ValueError("cannot synthesize an empty turn")
    if not voice.timbre_ref:
        raise UnsupportedVoice(f"voice {voice.id} has no timbre reference")
    clip = client.synthesize(turn.text, voice.timbre_ref)
    if len(clip) == 0:
        raise EmptyAudio(f"service returned no samples for voice {voice.id}")
    return resample(clip, CANONICAL_RATE)


class HttpTtsClient:
    """POSTs {"text", "voice"} and expects audio/wav bytes back.

    Responses are cached on disk keyed by SHA-256 of (text, voice, model) so
    reruns are offline and byte-stable.
    """

    def __init__(
        self,
        endpoint: str,
        model: str = "default",
        timeout: float = 60.0,
        max_retries: int = 2,
        cache_dir: str | None = None,
    ):
        if timeout <= 0 or max_retries < 0:
            raise ValueError("timeout must be positive and retries non-negative")
        self.endpoint = endpoint
        self.model = model
        self.timeout = timeout
        self.max_retries = max_retries
        self.cache_dir = cache_dir
        if cache_dir:
            os.makedirs(cache_dir, exist_ok=True)

    def _cache_path(self, text: str, timbre_ref: str) -> str | None:
        if not self.cache_dir:
            return None
        key = hashlib.sha256(
            "\x1f".join([text, timbre_ref, self.model]).encode("utf-8")
        ).hexdigest()
        return os.path.join(self.cache_dir, f"{key}.wav")

    def synthesize(self, text: str, timbre_ref: str) -> Waveform:
        path = self._cache_path(text, timbre_ref)
        if path and os.path.exists(path):
            return read_wav(path)

        import httpx

        last_err: Exception | None = None
        for _ in range(self.max_retries + 1):
            try:
                resp = httpx.post(
                    self.endpoint,
                    json={"text": text, "voice": timbre_ref, "model": self.model},
                    timeout=self.timeout,
                )
                resp.raise_for_status()
                clip = read_wav_bytes(resp.content)
                if path:
                    write_wav(path, clip)
                return clip
            except Exception as err:  # noqa: BLE001 - transport errors retried uniformly
                last_err = err
        raise TtsServiceError(f"speech synthesis failed after retries: {last_err}")


class MockTtsClient:
    """Deterministic speech-like synthesis for tests and offline forging.

    Pitch and cadence derive from a hash of the timbre reference, duration
    from the word count, and an amplitude envelope fakes syllables, so clips
    are stable across runs and clearly non-silent.
    """

    def __init__(self, rate: int = CANONICAL_RATE, amplitude: float = 0.25):
        self.rate = rate
        self.amplitude = amplitude

    def synthesize(self, text: str, timbre_ref: str) -> Waveform:
        seed_bytes = hashlib.sha256(f"{text}\x1f{timbre_ref}".encode("utf-8")).digest()
        rng = np.random.default_rng(int.from_bytes(seed_bytes[:8], "little"))
        f0 = 90.0 + (int.from_bytes(seed_bytes[8:10], "little") % 220)
        words = max(1, len(text.split()))
        n = round((0.25 + 0.16 * words) * self.rate)
        t = np.arange(n) / self.rate
        vibrato = 1.0 + 0.01 * np.sin(2 * np.pi * 5.0 * t)
        tone = (
            0.6 * np.sin(2 * np.pi * f0 * vibrato * t)
            + 0.3 * np.sin(2 * np.pi * 2 * f0 * t + 0.7)
            + 0.1 * np.sin(2 * np.pi * 3 * f0 * t + 1.9)
        )
        syllable_rate = 3.5 + (rng.random() * 1.5)
        envelope = 0.55 + 0.45 * np.sin(2 * np.pi * syllable_rate * t + rng.random() * 6.28)
        fade = min(n // 10, round(0.02 * self.rate))
        if fade > 0:
            ramp = np.linspace(0.0, 1.0, fade)
            envelope[:fade] *= ramp
            envelope[-fade:] *= ramp[::-1]
        noise = 0.02 * rng.standard_normal(n)
        return Waveform(self.amplitude * envelope * tone + noise, self.rate)
