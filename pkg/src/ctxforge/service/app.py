"""HTTP surface for the human verification stage.

Endpoints:
    GET  /api/review/next?annotator=ID   next unjudged item, or 204
    GET  /api/episodes/{id}/audio        audio/wav bytes
    POST /api/verdicts                   201 created, 409 duplicate
    GET  /api/report                     agreement rates
    GET  /api/batch                      batch metadata
plus a static mount for the review console bundle.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, HTTPException, Query, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from ..dataset.sampling import ReviewBatch
from .report import agreement_report
from .store import DuplicateVerdict, NoVerdicts, VerdictStore


class ReviewItemOut(BaseModel):
    index: int
    episode_id: str
    instruction_type: str
    original_instruction: str
    transcript: str
    audio_url: str
    calibration: bool


class VerdictIn(BaseModel):
    episode_id: str
    annotator_id: str
    intent_recoverable: bool
    phenomenon_fidelity: bool
    notes: str = ""


class VerdictAck(BaseModel):
    episode_id: str
    annotator_id: str
    timestamp: float


class TypeBreakdownOut(BaseModel):
    n: int
    recoverable_rate: float
    fidelity_rate: float


class ReportOut(BaseModel):
    n_verdicts: int
    recoverable_rate: float
    fidelity_rate: float
    per_type: dict[str, TypeBreakdownOut] = Field(default_factory=dict)


class BatchOut(BaseModel):
    batch_id: str
    n_items: int
    n_calibration: int
    per_type: dict[str, int]


def create_app(
    batch: ReviewBatch,
    store: VerdictStore,
    static_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="episode review service")
    items_by_id = {i.episode_id: i for i in batch.items}

    @app.get("/api/review/next", response_model=ReviewItemOut, responses={204: {}})
    def next_item(annotator: str = Query(min_length=1)):
        for idx, item in enumerate(batch.items):
            if not store.has(item.episode_id, annotator):
                return ReviewItemOut(
                    index=idx,
                    episode_id=item.episode_id,
                    instruction_type=item.instruction_type,
                    original_instruction=item.original_instruction,
                    transcript=item.transcript,
                    audio_url=f"/api/episodes/{item.episode_id}/audio",
                    calibration=item.calibration,
                )
        return Response(status_code=204)

    @app.get("/api/episodes/{episode_id}/audio")
    def episode_audio(episode_id: str):
        item = items_by_id.get(episode_id)
        if item is None:
            raise HTTPException(404, "episode not in the loaded batch")
        if not item.audio_ref or not os.path.exists(item.audio_ref):
            raise HTTPException(404, "audio file not found")
        with open(item.audio_ref, "rb") as fh:
            return Response(content=fh.read(), media_type="audio/wav")

    @app.post("/api/verdicts", response_model=VerdictAck, status_code=201)
    def submit_verdict(v: VerdictIn):
        if v.episode_id not in items_by_id:
            raise HTTPException(404, "unknown episode for this batch")
        try:
            stored = store.submit(
                episode_id=v.episode_id,
                annotator_id=v.annotator_id,
                intent_recoverable=v.intent_recoverable,
                phenomenon_fidelity=v.phenomenon_fidelity,
                notes=v.notes,
            )
        except DuplicateVerdict as err:
            raise HTTPException(409, str(err)) from err
        return VerdictAck(
            episode_id=stored.episode_id,
            annotator_id=stored.annotator_id,
            timestamp=stored.timestamp,
        )

    @app.get("/api/report", response_model=ReportOut)
    def report(instruction_type: str | None = None):
        try:
            rep = agreement_report(store.verdicts(), batch, instruction_type)
        except NoVerdicts as err:
            raise HTTPException(404, str(err)) from err
        return ReportOut(**rep.to_dict())

    @app.get("/api/batch", response_model=BatchOut)
    def batch_meta():
        per_type: dict[str, int] = {}
        for i in batch.items:
            per_type[i.instruction_type] = per_type.get(i.instruction_type, 0) + 1
        return BatchOut(
            batch_id=batch.batch_id,
            n_items=len(batch.items),
            n_calibration=sum(1 for i in batch.items if i.calibration),
            per_type=per_type,
        )

    if static_dir and os.path.isdir(static_dir):
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="console")
    return app
