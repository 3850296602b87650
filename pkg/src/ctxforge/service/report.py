"""Agreement reporting over the verdict log.

Calibration items are excluded from every denominator; rates are exact
yes/total ratios reported to 0.1%.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..dataset.sampling import ReviewBatch
from .store import NoVerdicts, Verdict


@dataclass
class TypeBreakdown:
    n: int
    recoverable_rate: float
    fidelity_rate: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "recoverable_rate": self.recoverable_rate,
            "fidelity_rate": self.fidelity_rate,
        }


@dataclass
class AgreementReport:
    n_verdicts: int
    recoverable_rate: float
    fidelity_rate: float
    per_type: dict[str, TypeBreakdown] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n_verdicts": self.n_verdicts,
            "recoverable_rate": self.recoverable_rate,
            "fidelity_rate": self.fidelity_rate,
            "per_type": {k: v.to_dict() for k, v in sorted(self.per_type.items())},
        }


def _rate(yes: int, total: int) -> float:
    return round(100.0 * yes / total, 1)


def agreement_report(
    verdicts: list[Verdict],
    batch: ReviewBatch,
    instruction_type: str | None = None,
) -> AgreementReport:
    item_types = {i.episode_id: i.instruction_type for i in batch.items}
    calibration = {i.episode_id for i in batch.items if i.calibration}

    counted = [
        v
        for v in verdicts
        if v.episode_id not in calibration
        and (instruction_type is None or item_types.get(v.episode_id) == instruction_type)
    ]
    if not counted:
        raise NoVerdicts("no countable verdicts recorded")

    n = len(counted)
    rec_yes = sum(1 for v in counted if v.intent_recoverable)
    fid_yes = sum(1 for v in counted if v.phenomenon_fidelity)

    per_type: dict[str, TypeBreakdown] = {}
    for t in sorted({item_types.get(v.episode_id, "") for v in counted}):
        sub = [v for v in counted if item_types.get(v.episode_id, "") == t]
        per_type[t] = TypeBreakdown(
            n=len(sub),
            recoverable_rate=_rate(sum(1 for v in sub if v.intent_recoverable), len(sub)),
            fidelity_rate=_rate(sum(1 for v in sub if v.phenomenon_fidelity), len(sub)),
        )
    return AgreementReport(
        n_verdicts=n,
        recoverable_rate=_rate(rec_yes, n),
        fidelity_rate=_rate(fid_yes, n),
        per_type=per_type,
    )
