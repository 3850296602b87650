"""Sample-accurate timeline assembly: turns, controlled overlaps, events, background."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dsp import SilentInput, active_mask, snr_gain
from .wave_io import CANONICAL_RATE, AudioError, Waveform

CROSSFADE_SECONDS = 0.010  # equal-power crossfade when looping background noise


class RateMismatch(AudioError):
    pass


class OverlapTooLong(AudioError):
    pass


class AnchorOutOfRange(AudioError):
    pass


class PeakOverflow(AudioError):
    pass


class SilentTimeline(SilentInput):
    pass


class SilentNoise(SilentInput):
    pass


@dataclass(frozen=True)
class Placement:
    clip: Waveform
    start_sample: int
    channel: str = "speech"  # speech | event | background

    @property
    def end_sample(self) -> int:
        return self.start_sample + len(self.clip)


@dataclass(frozen=True)
class OverlapSpec:
    """The interrupting turn starts ``overlap_seconds`` before the interrupted turn ends."""

    interrupted_turn: int
    interrupting_turn: int
    overlap_seconds: float


@dataclass(frozen=True)
class Timeline:
    placements: tuple[Placement, ...]
    total_len: int
    rate: int = CANONICAL_RATE

    @property
    def duration(self) -> float:
        return self.total_len / self.rate

    def render(self, hard_clip: bool = False) -> Waveform:
        out = np.zeros(self.total_len)
        for p in self.placements:
            out[p.start_sample : p.end_sample] += p.clip.samples
        if hard_clip:
            out = np.clip(out, -1.0, 1.0)
        return Waveform(out, self.rate)

    def realized_overlap(self, first: int, second: int) -> int:
        """Sample count in the intersection of two placements' spans."""
        a, b = self.placements[first], self.placements[second]
        return max(0, min(a.end_sample, b.end_sample) - max(a.start_sample, b.start_sample))


def assemble_timeline(
    clips: list[Waveform],
    gaps_seconds: list[float],
    overlaps: list[OverlapSpec] | None = None,
) -> Timeline:
    """Place turn clips in order: gap after each turn, overlaps pulling a turn
    into the previous one's tail.

    Without an overlap the next clip starts at the previous clip's end plus
    its gap; with one, the interrupting clip starts exactly
    ``round(overlap_seconds * rate)`` samples before the interrupted clip ends.
    """
    if not clips:
        return Timeline(placements=(), total_len=0)
    rate = clips[0].rate
    for c in clips:
        if c.rate != rate:
            raise RateMismatch("all turn clips must share one sample rate")
    if len(gaps_seconds) != len(clips) - 1:
        raise AudioError("need exactly one gap per adjacent clip pair")
    if any(g < 0 for g in gaps_seconds):
        raise AudioError("gaps must be non-negative")

    by_interrupting: dict[int, OverlapSpec] = {}
    for spec in overlaps or []:
        if not (0 <= spec.interrupted_turn < len(clips)) or not (
            0 <= spec.interrupting_turn < len(clips)
        ):
            raise AudioError("overlap spec references an unknown turn")
        if spec.interrupting_turn <= spec.interrupted_turn:
            raise AudioError("the interrupting turn must come after the interrupted one")
        if spec.overlap_seconds <= 0:
            raise AudioError("overlap must be positive")
        d = round(spec.overlap_seconds * rate)
        if d > len(clips[spec.interrupted_turn]):
            raise OverlapTooLong(
                f"{spec.overlap_seconds} s exceeds the interrupted clip duration"
            )
        by_interrupting[spec.interrupting_turn] = spec

    starts = [0] * len(clips)
    for k in range(1, len(clips)):
        spec = by_interrupting.get(k)
        if spec is None:
            starts[k] = starts[k - 1] + len(clips[k - 1]) + round(gaps_seconds[k - 1] * rate)
        else:
            d = round(spec.overlap_seconds * rate)
            starts[k] = starts[spec.interrupted_turn] + len(clips[spec.interrupted_turn]) - d

    placements = tuple(
        Placement(clip=c, start_sample=s, channel="speech") for c, s in zip(clips, starts)
    )
    total = max(p.end_sample for p in placements)
    return Timeline(placements=placements, total_len=total, rate=rate)


def insert_event(
    tl: Timeline,
    anchor_time_s: float,
    clip: Waveform,
    mode: str,
    hard_clip: bool = False,
) -> Timeline:
    """Insert a non-verbal event at the anchor.

    ``gap_insert`` opens a hole: every placement starting at or after the
    anchor shifts right by the clip length. ``overlay`` mixes the clip in
    additively; without ``hard_clip`` an overlay that would push the rendered
    sum past full scale raises PeakOverflow.
    """
    if clip.rate != tl.rate:
        raise RateMismatch("event clip rate differs from the timeline rate")
    if not (0 <= anchor_time_s <= tl.duration):
        raise AnchorOutOfRange(f"{anchor_time_s} s outside [0, {tl.duration:.3f}]")
    anchor = round(anchor_time_s * tl.rate)

    if mode == "gap_insert":
        shifted = tuple(
            replace(p, start_sample=p.start_sample + len(clip))
            if p.start_sample >= anchor
            else p
            for p in tl.placements
        )
        placements = shifted + (Placement(clip, anchor, "event"),)
        return Timeline(placements, tl.total_len + len(clip), tl.rate)

    if mode == "overlay":
        placements = tl.placements + (Placement(clip, anchor, "event"),)
        total = max(tl.total_len, anchor + len(clip))
        out = Timeline(placements, total, tl.rate)
        if not hard_clip:
            region = out.render().samples[anchor : anchor + len(clip)]
            if region.size and np.max(np.abs(region)) > 1.0:
                raise PeakOverflow("overlay would exceed full scale; enable hard clip")
        return out

    raise AudioError(f"unknown event mode {mode!r}")


def loop_to_length(noise: Waveform, n_samples: int) -> Waveform:
    """Tile noise to the target length with a short equal-power crossfade."""
    if len(noise) == 0:
        raise SilentNoise("empty noise clip")
    if len(noise) >= n_samples:
        return Waveform(noise.samples[:n_samples].copy(), noise.rate)
    xf = min(round(CROSSFADE_SECONDS * noise.rate), len(noise) // 2)
    out = noise.samples.copy()
    while out.size < n_samples:
        if xf > 0:
            theta = np.linspace(0.0, np.pi / 2.0, xf)
            head = noise.samples[:xf] * np.sin(theta)
            tail = out[-xf:] * np.cos(theta)
            out = np.concatenate([out[:-xf], tail + head, noise.samples[xf:]])
        else:
            out = np.concatenate([out, noise.samples])
    return Waveform(out[:n_samples], noise.rate)


def mix_background(tl: Timeline, noise: Waveform, target_snr_db: float) -> Waveform:
    """Rendered timeline plus noise scaled to hit the target SNR.

    Both powers are measured over the rendered signal's active region, so
    ``measure_snr(render(tl), gain * noise)`` lands on the target exactly.
    """
    if noise.rate != tl.rate:
        raise RateMismatch("background rate differs from the timeline rate")
    signal = tl.render()
    mask = active_mask(signal)
    if not mask.any():
        raise SilentTimeline("timeline renders silent")
    looped = loop_to_length(noise, tl.total_len)
    rms_s = float(np.sqrt(np.mean(np.square(signal.samples[mask]))))
    rms_n = float(np.sqrt(np.mean(np.square(looped.samples[mask]))))
    if rms_n <= 0.0:
        raise SilentNoise("background is silent over the active region")
    g = snr_gain(rms_s, rms_n, target_snr_db)
    return Waveform(signal.samples + g * looped.samples, tl.rate)
