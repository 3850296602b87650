from .app import create_app
from .report import AgreementReport, TypeBreakdown, agreement_report
from .store import DuplicateVerdict, NoVerdicts, StoreError, Verdict, VerdictStore

__all__ = [
    "AgreementReport",
    "DuplicateVerdict",
    "NoVerdicts",
    "StoreError",
    "TypeBreakdown",
    "Verdict",
    "VerdictStore",
    "agreement_report",
    "create_app",
]
