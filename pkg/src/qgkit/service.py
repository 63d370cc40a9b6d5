"""HTTP face of the annotation store.

Endpoints (all JSON, UTF-8):

    GET  /api/next?annotator=ID   next unannotated pair for the annotator,
                                  {"done": true} when finished
    POST /api/annotations         AnnotationRecord body, returns {"revision"}
    GET  /api/export?eval=ID      expanded records, latest revision per key
    GET  /api/progress            per-annotator completed/total
    GET  /api/questions           pair_id/question/answer for the eval set
    GET  /api/guidelines          category prompts, guidance, and skip rule

Questions are served with their answers but never with the source chunk,
so judgments about out-of-context interpretability stay blind.
"""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .annotation import GUIDELINES, AnnotationStore
from .metrics import AnnotationLabel


class LabelBody(BaseModel):
    acceptable: Literal["yes", "no", "skipped"]
    grammatical: Literal["yes", "no", "skipped"] = "skipped"
    interpretable: Literal["yes", "no", "skipped"] = "skipped"
    relevant: Literal["yes", "no", "skipped"] = "skipped"
    correct: Literal["yes", "no", "skipped"] = "skipped"


class AnnotationBody(BaseModel):
    pair_id: str
    annotator_id: str
    label: LabelBody
    submitted_at: str | None = None


def create_app(store: AnnotationStore) -> FastAPI:
    app = FastAPI(title="annotation service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/api/next")
    def next_question(annotator: str = Query(...)):
        try:
            state = store.assignment(annotator)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        pair = store.next_question(annotator)
        if pair is None:
            return {"done": True}
        return {
            "pair_id": pair.pair_id,
            "question": pair.question,
            "answer": pair.answer,
            "position": state.completed + 1,
            "total": len(store.eval_set.entries),
        }

    @app.post("/api/annotations")
    def record_annotation(body: AnnotationBody):
        label = AnnotationLabel(**body.label.model_dump())
        try:
            revision = store.record_annotation(
                body.pair_id, body.annotator_id, label, body.submitted_at
            )
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"revision": revision}

    @app.get("/api/export")
    def export(eval: str | None = None):
        try:
            records = store.export(eval)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return [record.to_dict() for record in records]

    @app.get("/api/progress")
    def progress():
        return store.progress()

    @app.get("/api/questions")
    def questions():
        return [
            {
                "pair_id": pid,
                "question": store.questions[pid].question,
                "answer": store.questions[pid].answer,
            }
            for pid in store.eval_set.entries
        ]

    @app.get("/api/guidelines")
    def guidelines():
        return GUIDELINES

    return app
