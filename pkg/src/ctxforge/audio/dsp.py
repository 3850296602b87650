"""Sample-rate conversion and SNR measurement.

The resampler is a 64-tap windowed-sinc interpolator (Kaiser window, beta=8)
evaluated at arbitrary positions, with the cutoff lowered to the output
Nyquist when downsampling. SNR is measured over the signal's active region:
25 ms frames with a 10 ms hop whose RMS clears a silence threshold, so that
leading and trailing TTS silence does not bias power estimates.
"""

from __future__ import annotations

import numpy as np

from .wave_io import AudioError, Waveform

RESAMPLE_TAPS = 64
KAISER_BETA = 8.0

FRAME_SECONDS = 0.025
HOP_SECONDS = 0.010
SILENCE_RMS = 1e-4


class SilentInput(AudioError):
    pass


def resample(w: Waveform, target_rate: int) -> Waveform:
    """Resample to ``target_rate``; duration is preserved within one output sample."""
    if target_rate <= 0:
        raise AudioError("target rate must be positive")
    if target_rate == w.rate:
        return Waveform(w.samples.copy(), w.rate)
    if len(w) == 0:
        return Waveform(np.zeros(0), target_rate)

    ratio = target_rate / w.rate
    n_out = round(len(w) * ratio)
    cutoff = min(1.0, ratio)  # relative to the input Nyquist
    half = RESAMPLE_TAPS // 2
    x = w.samples
    out = np.empty(n_out)
    k = np.arange(-half + 1, half + 1)  # 64 taps around the floor position

    block = 8192
    for lo in range(0, n_out, block):
        hi = min(lo + block, n_out)
        pos = np.arange(lo, hi) / ratio
        base = np.floor(pos).astype(np.int64)
        u = (pos - base)[:, None] - k[None, :]  # distance from the kernel center
        kernel = cutoff * np.sinc(cutoff * u) * _kaiser(u, half)
        idx = base[:, None] + k[None, :]
        valid = (idx >= 0) & (idx < len(x))
        gathered = x[np.clip(idx, 0, len(x) - 1)]
        out[lo:hi] = np.sum(np.where(valid, gathered, 0.0) * kernel, axis=1)
    return Waveform(out, target_rate)


def _kaiser(u: np.ndarray, half: int) -> np.ndarray:
    inside = np.clip(1.0 - np.square(u / half), 0.0, None)
    return np.i0(KAISER_BETA * np.sqrt(inside)) / np.i0(KAISER_BETA)


def active_mask(w: Waveform, threshold: float = SILENCE_RMS) -> np.ndarray:
    """Boolean per-sample mask of frames whose RMS clears the silence threshold."""
    n = len(w)
    mask = np.zeros(n, dtype=bool)
    if n == 0:
        return mask
    win = max(1, round(FRAME_SECONDS * w.rate))
    hop = max(1, round(HOP_SECONDS * w.rate))
    sq = np.square(w.samples)
    for start in range(0, n, hop):
        frame = sq[start : start + win]
        if np.sqrt(np.mean(frame)) >= threshold:
            mask[start : start + win] = True
        if start + win >= n:
            break
    return mask


def measure_snr(signal: Waveform, noise: Waveform) -> float:
    """10 * log10(P_signal / P_noise), both powers over the signal's active region."""
    if signal.rate != noise.rate:
        raise AudioError("signal and noise rates differ")
    if len(signal) != len(noise):
        raise AudioError("signal and noise lengths differ")
    mask = active_mask(signal)
    if not mask.any():
        raise SilentInput("signal has no active region")
    p_s = float(np.mean(np.square(signal.samples[mask])))
    p_n = float(np.mean(np.square(noise.samples[mask])))
    if p_n <= 0.0:
        raise SilentInput("noise is silent over the signal's active region")
    return 10.0 * np.log10(p_s / p_n)


def snr_gain(signal_rms: float, noise_rms: float, target_snr_db: float) -> float:
    """Scale for the noise so that signal/noise hits the target SNR."""
    if signal_rms <= 0.0:
        raise SilentInput("silent signal")
    if noise_rms <= 0.0:
        raise SilentInput("silent noise")
    return signal_rms / (noise_rms * 10.0 ** (target_snr_db / 20.0))
