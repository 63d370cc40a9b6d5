"""Annotation collection: assignment queues, a durable append-only log,
and last-write-wins export.

Every submitted judgment is one JSON line in the log. Replaying the log
reconstructs the store exactly; a torn final line from a crash mid-write is
skipped on load. Resubmissions get a higher revision and shadow earlier
ones at export time.
"""

from __future__ import annotations

import datetime as _dt
import json
import logging
import os
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .metrics import AnnotationLabel, expand_annotation
from .pipeline import EvalSet, QAPair

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnnotationRecord:
    pair_id: str
    annotator_id: str
    label: AnnotationLabel  # raw, pre-expansion
    submitted_at: str
    revision: int

    def to_dict(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "annotator_id": self.annotator_id,
            "label": self.label.to_dict(),
            "submitted_at": self.submitted_at,
            "revision": self.revision,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnnotationRecord":
        return cls(
            pair_id=data["pair_id"],
            annotator_id=data["annotator_id"],
            label=AnnotationLabel.from_dict(data["label"]),
            submitted_at=data.get("submitted_at", ""),
            revision=int(data["revision"]),
        )


@dataclass(frozen=True)
class AssignmentState:
    annotator_id: str
    pending: tuple[str, ...]
    completed: int


def read_log(path: str | Path) -> list[AnnotationRecord]:
    """Replay an annotation log, skipping unparsable (torn) lines."""
    path = Path(path)
    records: list[AnnotationRecord] = []
    if not path.exists():
        return records
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                records.append(AnnotationRecord.from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                log.warning("skipping unreadable log line %d: %s", lineno, exc)
    return records


def latest_records(records: Iterable[AnnotationRecord]) -> dict[tuple[str, str], AnnotationRecord]:
    """Collapse to the highest revision per (pair_id, annotator_id)."""
    latest: dict[tuple[str, str], AnnotationRecord] = {}
    for record in records:
        key = (record.pair_id, record.annotator_id)
        if key not in latest or record.revision > latest[key].revision:
            latest[key] = record
    return latest


class AnnotationStore:
    """Single-writer store over one eval set.

    Annotators must be registered up front; each sees the eval set in its
    stored order and is served the lowest-ordered pair they have not yet
    annotated. Writes are serialized and flushed to disk before the call
    returns.
    """

    def __init__(
        self,
        log_path: str | Path,
        eval_set: EvalSet,
        questions: Mapping[str, QAPair],
        annotators: Iterable[str],
    ):
        missing = [pid for pid in eval_set.entries if pid not in questions]
        if missing:
            raise ValueError(f"eval-set pairs without question data: {sorted(missing)[:5]}")
        self.log_path = Path(log_path)
        self.eval_set = eval_set
        self.questions = dict(questions)
        self.annotators = list(dict.fromkeys(annotators))
        if not self.annotators:
            raise ValueError("at least one annotator required")
        self._lock = threading.Lock()
        self._latest = latest_records(read_log(self.log_path))

    # -- queries ----------------------------------------------------------

    def _check_annotator(self, annotator_id: str) -> None:
        if annotator_id not in self.annotators:
            raise KeyError(f"unknown annotator {annotator_id!r}")

    def assignment(self, annotator_id: str) -> AssignmentState:
        self._check_annotator(annotator_id)
        pending = tuple(
            pid for pid in self.eval_set.entries
            if (pid, annotator_id) not in self._latest
        )
        return AssignmentState(
            annotator_id=annotator_id,
            pending=pending,
            completed=len(self.eval_set.entries) - len(pending),
        )

    def next_question(self, annotator_id: str) -> QAPair | None:
        """The lowest-ordered unannotated pair for this annotator, or None
        when they are done."""
        state = self.assignment(annotator_id)
        if not state.pending:
            return None
        return self.questions[state.pending[0]]

    def progress(self) -> dict:
        total = len(self.eval_set.entries)
        return {
            annotator: {"completed": self.assignment(annotator).completed, "total": total}
            for annotator in self.annotators
        }

    # -- writes -----------------------------------------------------------

    def record_annotation(
        self,
        pair_id: str,
        annotator_id: str,
        label: AnnotationLabel,
        submitted_at: str | None = None,
    ) -> int:
        """Validate and append one judgment; returns the assigned revision.
        Resubmission of the same (pair, annotator) overrides at export."""
        self._check_annotator(annotator_id)
        if pair_id not in self.questions or pair_id not in self.eval_set.entries:
            raise KeyError(f"unknown pair {pair_id!r}")
        expand_annotation(label)  # raises on invalid skip usage
        with self._lock:
            previous = self._latest.get((pair_id, annotator_id))
            revision = (previous.revision if previous else 0) + 1
            record = AnnotationRecord(
                pair_id=pair_id,
                annotator_id=annotator_id,
                label=label,
                submitted_at=submitted_at or _dt.datetime.now(_dt.timezone.utc).isoformat(),
                revision=revision,
            )
            line = json.dumps(record.to_dict(), ensure_ascii=False)
            with open(self.log_path, "a", encoding="utf-8") as handle:
                handle.write(line + "\n")
                handle.flush()
                os.fsync(handle.fileno())
            self._latest[(pair_id, annotator_id)] = record
        return revision

    # -- export -----------------------------------------------------------

    def export(self, eval_id: str | None = None) -> list[AnnotationRecord]:
        """Expanded records at highest revision, ordered by
        (pair_id, annotator_id). May be partial; completeness is reported
        by progress()."""
        if eval_id is not None and eval_id != self.eval_set.eval_id:
            raise KeyError(f"unknown eval set {eval_id!r}")
        out: list[AnnotationRecord] = []
        for key in sorted(self._latest):
            record = self._latest[key]
            expanded = expand_annotation(record.label)
            out.append(AnnotationRecord(
                pair_id=record.pair_id,
                annotator_id=record.annotator_id,
                label=expanded,
                submitted_at=record.submitted_at,
                revision=record.revision,
            ))
        return out


def export_to_json(records: Iterable[AnnotationRecord]) -> str:
    """Canonical serialization used by the export endpoint and tests."""
    return json.dumps([r.to_dict() for r in records], ensure_ascii=False, indent=2) + "\n"


# Guideline copy served to annotators; the five categories and the skip
# rule mirror the store's validation exactly.
GUIDELINES: dict = {
    "skip_rule": (
        "If you answer yes to 'acceptable', the remaining four judgments are "
        "recorded as yes automatically and you move on. If you answer no, "
        "you must judge each of the remaining four explicitly."
    ),
    "categories": [
        {
            "category": "acceptable",
            "prompt": "Would you use this question as a flashcard, exactly as written?",
            "guidance": (
                "Say yes only when the question targets material worth studying, "
                "reads cleanly, and has a single defensible answer. You may say "
                "no even when every other criterion holds, for example when the "
                "question is too easy or too broad."
            ),
        },
        {
            "category": "grammatical",
            "prompt": "Is the question free of grammatical errors?",
            "guidance": (
                "Judge grammar only. Awkward but well-formed phrasing still "
                "counts as yes."
            ),
        },
        {
            "category": "interpretable",
            "prompt": "Does the question make sense on its own, without the source text?",
            "guidance": (
                "Say no when the question leans on unstated context, for "
                "example references to 'the previous example' or to items "
                "discussed elsewhere in the chapter."
            ),
        },
        {
            "category": "relevant",
            "prompt": "Does the question target material a course on this subject should test?",
            "guidance": (
                "Say yes for anything a thorough course would plausibly quiz. "
                "Say no for incidental details or worked-example trivia that "
                "do not support the chapter's main points."
            ),
        },
        {
            "category": "correct",
            "prompt": "Is the given answer a correct answer to the question?",
            "guidance": (
                "If several answers would be correct and the given one is "
                "among them, say yes. If the question is too broken to judge "
                "the answer at all, say yes here and mark the failure in the "
                "other categories."
            ),
        },
    ],
}
