"""End-to-end question generation over the three source modes.

For every passage the pipeline splits sentences, chunks them under the
token limit, and walks each sentence: highlight it, ask the backend for at
most one answer span, and turn each surviving span into one question. The
auto_summary mode first replaces each passage with its (chunk-wise)
summary. Provenance is kept on every pair; output order is
(chapter, section, chunk, sentence) by construction.
"""

from __future__ import annotations

import datetime as _dt
import json
import logging
import random
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import SourceDocument, SummarySet
from .gateway import (
    GatewayError,
    answer_question,
    extract_answer,
    generate_question,
    insert_highlights,
    summarize_long,
)
from .segmentation import Chunk, chunk as make_chunks, split_sentences
from .textnorm import strip_punct_fold

log = logging.getLogger(__name__)

SOURCE_KINDS = ("original", "human_summary", "auto_summary")

# Chunking headroom for the two highlight tokens inserted after chunking,
# so the chunk layout never depends on which sentence is highlighted.
HIGHLIGHT_TOKEN_MARGIN = 8


@dataclass(frozen=True)
class Passage:
    """One unit of input text with its provenance."""

    text: str
    doc_id: str = ""
    chapter_id: str = ""
    section_id: str = ""
    author_id: str | None = None


@dataclass(frozen=True)
class QAPair:
    pair_id: str
    question: str
    answer: str
    source_kind: str
    doc_id: str
    chapter_id: str
    section_id: str
    chunk_index: int
    sentence_index: int
    author_id: str | None
    run_id: str


@dataclass
class QuestionSet:
    run_id: str
    source_kind: str
    pairs: list[QAPair]
    manifest: dict


@dataclass(frozen=True)
class EvalSet:
    eval_id: str
    entries: tuple[str, ...]
    per_source_quota: int
    seed: int


@dataclass(frozen=True)
class QGConfig:
    token_limit: int = 512
    dedupe: bool = False
    roundtrip_filter: bool = False
    run_id: str | None = None
    seed: int = 0
    highlight_margin: int = HIGHLIGHT_TOKEN_MARGIN


def passages_from_document(doc: SourceDocument) -> list[Passage]:
    return [
        Passage(text, doc.doc_id, chapter_id, section_id)
        for chapter_id, section_id, text in doc.iter_sections()
    ]


def passages_from_summary_sets(
    summary_sets: Iterable[SummarySet],
    doc_id: str = "",
    granularity: str = "chapter",
) -> list[Passage]:
    """Build passages from human summaries, either one passage per summary
    entry ("section") or one per chapter with that author's section
    summaries concatenated in order ("chapter", the default)."""
    if granularity not in ("chapter", "section"):
        raise ValueError(f"unknown granularity {granularity!r}")
    passages: list[Passage] = []
    for sset in summary_sets:
        if granularity == "section":
            for entry in sset.entries:
                passages.append(
                    Passage(entry.summary_text, doc_id, entry.chapter_id,
                            entry.section_id, sset.author_id)
                )
        else:
            grouped: dict[str, list[str]] = {}
            for entry in sset.entries:
                grouped.setdefault(entry.chapter_id, []).append(entry.summary_text)
            for chapter_id, texts in grouped.items():
                passages.append(
                    Passage(" ".join(texts), doc_id, chapter_id, "", sset.author_id)
                )
    return passages


def _as_passages(source) -> list[Passage]:
    if isinstance(source, str):
        return [Passage(source)]
    if isinstance(source, SourceDocument):
        return passages_from_document(source)
    passages = list(source)
    if not all(isinstance(p, Passage) for p in passages):
        raise TypeError("source must be a string, SourceDocument, or iterable of Passage")
    return passages


def _answers_match(candidate: str, stored: str) -> bool:
    a, b = strip_punct_fold(candidate), strip_punct_fold(stored)
    if not a or not b:
        return False
    return a in b or b in a


def generate(source, source_kind: str, backend, config: QGConfig = QGConfig()) -> QuestionSet:
    """Run the answer-agnostic loop over `source` and return an ordered
    QuestionSet with a run manifest.

    Backend failures abort the run but keep the pairs generated so far,
    with a failure marker in the manifest.
    """
    if source_kind not in SOURCE_KINDS:
        raise ValueError(f"unknown source_kind {source_kind!r}")
    caps = backend.descriptor.capabilities
    needed = {"extract_answer", "generate_question"}
    if source_kind == "auto_summary":
        needed.add("summarize")
    if config.roundtrip_filter:
        needed.add("answer_question")
    missing = needed - caps
    if missing:
        raise GatewayError(
            f"backend {backend.descriptor.name!r} lacks capabilities {sorted(missing)}"
        )

    passages = _as_passages(source)
    run_id = config.run_id or f"{source_kind}-{backend.descriptor.name}"
    chunk_limit = max(1, config.token_limit - config.highlight_margin)

    manifest = {
        "run_id": run_id,
        "source_kind": source_kind,
        "backend": backend.descriptor.to_dict(),
        "token_counter": getattr(backend, "token_counter_name", "whitespace"),
        "token_limit": config.token_limit,
        "highlight_margin": config.highlight_margin,
        "seed": config.seed,
        "dedupe": config.dedupe,
        "roundtrip_filter": config.roundtrip_filter,
        "created_at": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }

    pairs: list[QAPair] = []
    total_sentences = 0
    serial = 0
    try:
        for passage in passages:
            text = passage.text
            if source_kind == "auto_summary":
                text = summarize_long(backend, text, config.token_limit)
            sentences = split_sentences(text, token_counter=backend.count_tokens)
            total_sentences += len(sentences)
            for part in make_chunks(sentences, chunk_limit):
                for local_index in range(len(part.sentences)):
                    hc = insert_highlights(part, local_index, marker=backend.highlight_marker)
                    span = extract_answer(backend, hc)
                    if span is None:
                        continue
                    question = generate_question(backend, part, span)
                    if config.roundtrip_filter:
                        candidate = answer_question(backend, part, question)
                        if not _answers_match(candidate, span.text):
                            continue
                    pairs.append(QAPair(
                        pair_id=f"{run_id}-{serial:05d}",
                        question=question,
                        answer=span.text,
                        source_kind=source_kind,
                        doc_id=passage.doc_id,
                        chapter_id=passage.chapter_id,
                        section_id=passage.section_id,
                        chunk_index=part.chunk_index,
                        sentence_index=local_index,
                        author_id=passage.author_id,
                        run_id=run_id,
                    ))
                    serial += 1
    except GatewayError as exc:
        manifest["failure"] = {"error": str(exc)}
        log.warning("generation aborted after %d pairs: %s", len(pairs), exc)
    else:
        if total_sentences == 0:
            raise ValueError("empty input")

    result = QuestionSet(run_id, source_kind, pairs, manifest)
    if config.dedupe:
        result = dedupe(result)
    result.manifest["pair_count"] = len(result.pairs)
    return result


def dedupe(qs: QuestionSet) -> QuestionSet:
    """Drop later pairs whose case-folded (question, answer) already
    appeared; order is preserved."""
    seen: set[tuple[str, str]] = set()
    kept: list[QAPair] = []
    for pair in qs.pairs:
        key = (pair.question.casefold(), pair.answer.casefold())
        if key in seen:
            continue
        seen.add(key)
        kept.append(pair)
    manifest = dict(qs.manifest)
    manifest["dedupe"] = True
    manifest["pair_count"] = len(kept)
    return QuestionSet(qs.run_id, qs.source_kind, kept, manifest)


def roundtrip_filter(qs: QuestionSet, backend, chunk_texts: Mapping[str, str]) -> QuestionSet:
    """Keep pairs whose question, re-answered by the backend over the
    originating chunk, round-trips to the stored answer (one contains the
    other after case folding and punctuation stripping).

    `chunk_texts` maps pair_id to the originating chunk text, which QAPair
    records do not carry themselves.
    """
    kept: list[QAPair] = []
    for pair in qs.pairs:
        if pair.pair_id not in chunk_texts:
            raise KeyError(f"no chunk text supplied for pair {pair.pair_id!r}")
        sentences = split_sentences(chunk_texts[pair.pair_id])
        context = Chunk(tuple(sentences), sum(s.token_count for s in sentences), 0)
        candidate = answer_question(backend, context, pair.question)
        if _answers_match(candidate, pair.answer):
            kept.append(pair)
    manifest = dict(qs.manifest)
    manifest["roundtrip_filter"] = True
    manifest["pair_count"] = len(kept)
    return QuestionSet(qs.run_id, qs.source_kind, kept, manifest)


def sample_eval_set(sets: Sequence[QuestionSet], quota: int = 100, seed: int = 0) -> EvalSet:
    """Sample `quota` pair ids uniformly without replacement from each
    question set, deterministically for a given seed."""
    if quota < 0:
        raise ValueError("quota must be >= 0")
    rng = random.Random(seed)
    entries: list[str] = []
    for qs in sets:
        ids = [p.pair_id for p in qs.pairs]
        if quota > len(ids):
            raise ValueError(
                f"quota {quota} exceeds the {len(ids)} pairs available in "
                f"{qs.source_kind!r} set {qs.run_id!r}"
            )
        entries.extend(rng.sample(ids, quota))
    if len(set(entries)) != len(entries):
        raise ValueError("duplicate pair ids across question sets")
    return EvalSet(
        eval_id=f"eval-s{seed}-q{quota}",
        entries=tuple(entries),
        per_source_quota=quota,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# persistence

def _manifest_path(path: Path) -> Path:
    return path.with_name(path.name + ".manifest.json")


def save_question_set(qs: QuestionSet, path: str | Path) -> None:
    """Write one QAPair per JSON line plus a sidecar manifest file."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as handle:
        for pair in qs.pairs:
            handle.write(json.dumps(asdict(pair), ensure_ascii=False) + "\n")
    _manifest_path(path).write_text(
        json.dumps(qs.manifest, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )


def load_question_set(path: str | Path) -> QuestionSet:
    path = Path(path)
    pairs: list[QAPair] = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                pairs.append(QAPair(**json.loads(line)))
    manifest: dict = {}
    sidecar = _manifest_path(path)
    if sidecar.exists():
        manifest = json.loads(sidecar.read_text(encoding="utf-8"))
    run_id = manifest.get("run_id") or (pairs[0].run_id if pairs else path.stem)
    source_kind = manifest.get("source_kind") or (pairs[0].source_kind if pairs else "original")
    return QuestionSet(run_id, source_kind, pairs, manifest)


def save_eval_set(eval_set: EvalSet, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps({
            "eval_id": eval_set.eval_id,
            "per_source_quota": eval_set.per_source_quota,
            "seed": eval_set.seed,
            "entries": list(eval_set.entries),
        }, ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )


def load_eval_set(path: str | Path) -> EvalSet:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return EvalSet(
        eval_id=data["eval_id"],
        entries=tuple(data["entries"]),
        per_source_quota=data["per_source_quota"],
        seed=data["seed"],
    )
