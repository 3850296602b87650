"""Mono waveforms and RIFF/WAVE PCM16 I/O.

Samples are float64 with nominal range [-1, 1]; intermediate DSP may exceed
the range (headroom), the range is enforced when quantizing to PCM16. Writes
are dithered with seeded TPDF noise so files are bit-reproducible.
"""

from __future__ import annotations

import io
import wave
from dataclasses import dataclass

import numpy as np

CANONICAL_RATE = 16_000
PCM_FULL_SCALE = 32_767.0


class AudioError(ValueError):
    pass


@dataclass
class Waveform:
    samples: np.ndarray
    rate: int = CANONICAL_RATE

    def __post_init__(self) -> None:
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise AudioError("waveforms are mono (1-D)")
        if self.rate <= 0:
            raise AudioError("sample rate must be positive")
        if self.samples.size and not np.all(np.isfinite(self.samples)):
            raise AudioError("waveform contains non-finite samples")

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def duration(self) -> float:
        return len(self) / self.rate

    def peak(self) -> float:
        return float(np.max(np.abs(self.samples))) if len(self) else 0.0

    def rms(self) -> float:
        return float(np.sqrt(np.mean(np.square(self.samples)))) if len(self) else 0.0

    def in_range(self) -> bool:
        return self.peak() <= 1.0


def silence(duration_s: float, rate: int = CANONICAL_RATE) -> Waveform:
    return Waveform(np.zeros(max(0, round(duration_s * rate))), rate)


def _quantize(w: Waveform, dither_seed: int | None) -> np.ndarray:
    x = w.samples * PCM_FULL_SCALE
    if dither_seed is not None:
        rng = np.random.default_rng(dither_seed)
        x = x + (rng.random(x.size) - rng.random(x.size))  # TPDF, +/-1 LSB
    return np.clip(np.rint(x), -32768, 32767).astype("<i2")


def write_wav(path, w: Waveform, dither_seed: int | None = 0) -> None:
    with wave.open(str(path), "wb") as fh:
        fh.setnchannels(1)
        fh.setsampwidth(2)
        fh.setframerate(w.rate)
        fh.writeframes(_quantize(w, dither_seed).tobytes())


def wav_bytes(w: Waveform, dither_seed: int | None = 0) -> bytes:
    buf = io.BytesIO()
    with wave.open(buf, "wb") as fh:
        fh.setnchannels(1)
        fh.setsampwidth(2)
        fh.setframerate(w.rate)
        fh.writeframes(_quantize(w, dither_seed).tobytes())
    return buf.getvalue()


def read_wav(path) -> Waveform:
    with wave.open(str(path), "rb") as fh:
        return _decode(fh)


def read_wav_bytes(data: bytes) -> Waveform:
    with wave.open(io.BytesIO(data), "rb") as fh:
        return _decode(fh)


def _decode(fh: wave.Wave_read) -> Waveform:
    if fh.getnchannels() != 1:
        raise AudioError("only mono WAV files are supported")
    if fh.getsampwidth() != 2:
        raise AudioError("only 16-bit PCM WAV files are supported")
    raw = fh.readframes(fh.getnframes())
    ints = np.frombuffer(raw, dtype="<i2").astype(np.float64)
    return Waveform(np.clip(ints / PCM_FULL_SCALE, -1.0, 1.0), fh.getframerate())


def wav_format(path) -> tuple[int, int, int]:
    """(channels, sample_width_bytes, rate) straight from the header."""
    with wave.open(str(path), "rb") as fh:
        return fh.getnchannels(), fh.getsampwidth(), fh.getframerate()
