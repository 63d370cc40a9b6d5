"""Textbook ingest: cleaned chapter text, bolded key terms, summary sets.

Document format ("plain-sections"): UTF-8 text where a line starting
"## <chapter_id> <title>" opens a chapter, a line starting
"### <section_id>" opens a section, and every other line is body text for
the open section. Key terms are marked inline with ``**double asterisks**``
and are stripped from the stored section text after extraction.

Summary sets arrive as JSON Lines, one object per entry with fields
author_id, chapter_id, section_id, summary_text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Iterator, NamedTuple

from .segmentation import Sentence, split_sentences
from .textnorm import collapse_ws, fold

BOLD = "**"


@dataclass(frozen=True)
class KeyTerm:
    """A bolded textbook term; surface is trimmed with internal whitespace
    collapsed."""

    surface: str
    chapter_id: str


@dataclass(frozen=True)
class Chapter:
    chapter_id: str
    title: str
    sections: tuple[tuple[str, str], ...]  # (section_id, normalized text)


@dataclass(frozen=True)
class SourceDocument:
    doc_id: str
    chapters: tuple[Chapter, ...]
    key_terms: tuple[KeyTerm, ...]

    def iter_sections(self) -> Iterator[tuple[str, str, str]]:
        """Yield (chapter_id, section_id, text) in document order."""
        for ch in self.chapters:
            for section_id, text in ch.sections:
                yield ch.chapter_id, section_id, text


class SummaryEntry(NamedTuple):
    chapter_id: str
    section_id: str
    summary_text: str


@dataclass(frozen=True)
class SummarySet:
    """One author's summaries, at most one entry per (chapter, section)."""

    author_id: str
    entries: tuple[SummaryEntry, ...]


@dataclass(frozen=True)
class SummaryStats:
    key_term_coverage: float
    total_sentences: int
    avg_sentence_length: float


def _bold_spans(text: str) -> list[tuple[int, int]]:
    """Offsets of (open, close) marker positions; raises on an unmatched
    marker, reporting its character offset."""
    spans: list[tuple[int, int]] = []
    open_at: int | None = None
    pos = 0
    while True:
        hit = text.find(BOLD, pos)
        if hit == -1:
            break
        if open_at is None:
            open_at = hit
        else:
            spans.append((open_at, hit))
            open_at = None
        pos = hit + len(BOLD)
    if open_at is not None:
        raise ValueError(f"unbalanced bold marker at offset {open_at}")
    return spans


def extract_key_terms(marked_text: str, chapter_id: str) -> list[KeyTerm]:
    """One KeyTerm per maximal ``**...**`` span, case-insensitive duplicates
    collapsed keeping the first occurrence."""
    terms: list[KeyTerm] = []
    seen: set[str] = set()
    for start, end in _bold_spans(marked_text):
        surface = collapse_ws(marked_text[start + len(BOLD):end])
        if not surface:
            raise ValueError(f"empty key term at offset {start}")
        folded = surface.casefold()
        if folded in seen:
            continue
        seen.add(folded)
        terms.append(KeyTerm(surface, chapter_id))
    return terms


def strip_bold_markers(text: str) -> str:
    """Remove marker pairs, keeping the marked text."""
    out: list[str] = []
    pos = 0
    for start, end in _bold_spans(text):
        out.append(text[pos:start])
        out.append(text[start + len(BOLD):end])
        pos = end + len(BOLD)
    out.append(text[pos:])
    return "".join(out)


def parse_document(text: str, doc_id: str) -> SourceDocument:
    """Parse plain-sections text into a SourceDocument.

    Key terms are extracted per chapter before the bold markers are
    stripped from the stored section text.
    """
    if not text.strip():
        raise ValueError("empty document")

    chapters: list[dict] = []
    chapter_ids: set[str] = set()
    section: list[str] | None = None

    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.startswith("### "):
            header = line[4:].strip()
            if not header:
                raise ValueError(f"malformed section header at line {lineno}")
            if not chapters:
                raise ValueError(f"section header before any chapter at line {lineno}")
            section_id = header.split()[0]
            current = chapters[-1]
            if section_id in current["section_ids"]:
                raise ValueError(
                    f"duplicate section {section_id!r} in chapter {current['chapter_id']!r}"
                )
            current["section_ids"].add(section_id)
            section = []
            current["sections"].append((section_id, section))
        elif line.startswith("## "):
            header = line[3:].strip()
            if not header:
                raise ValueError(f"malformed chapter header at line {lineno}")
            chapter_id, _, title = header.partition(" ")
            if chapter_id in chapter_ids:
                raise ValueError(f"duplicate chapter {chapter_id!r}")
            chapter_ids.add(chapter_id)
            chapters.append({
                "chapter_id": chapter_id,
                "title": title.strip(),
                "sections": [],
                "section_ids": set(),
            })
            section = None
        elif line.strip():
            if section is None:
                raise ValueError(f"body text outside any section at line {lineno}")
            section.append(line)

    built: list[Chapter] = []
    key_terms: list[KeyTerm] = []
    for raw in chapters:
        sections: list[tuple[str, str]] = []
        chapter_terms: list[KeyTerm] = []
        seen: set[str] = set()
        for section_id, lines in raw["sections"]:
            marked = collapse_ws(" ".join(lines))
            for term in extract_key_terms(marked, raw["chapter_id"]):
                if term.surface.casefold() in seen:
                    continue
                seen.add(term.surface.casefold())
                chapter_terms.append(term)
            cleaned = collapse_ws(strip_bold_markers(marked))
            if not cleaned:
                raise ValueError(
                    f"empty section {section_id!r} in chapter {raw['chapter_id']!r}"
                )
            sections.append((section_id, cleaned))
        built.append(Chapter(raw["chapter_id"], raw["title"], tuple(sections)))
        key_terms.extend(chapter_terms)

    if not any(ch.sections for ch in built):
        raise ValueError("empty document")
    return SourceDocument(doc_id, tuple(built), tuple(key_terms))


def load_document(path: str | Path, format: str = "plain-sections") -> SourceDocument:
    if format != "plain-sections":
        raise ValueError(f"unknown document format {format!r}")
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_document(text, doc_id=path.stem)


def load_summary_sets(path: str | Path) -> list[SummarySet]:
    """Read a JSON Lines summary file into one SummarySet per author,
    preserving entry order."""
    by_author: dict[str, list[SummaryEntry]] = {}
    seen: set[tuple[str, str, str]] = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"bad summary entry at line {lineno}: {exc}") from exc
            author = obj["author_id"]
            entry = SummaryEntry(obj["chapter_id"], obj["section_id"], obj["summary_text"])
            if not entry.summary_text.strip():
                raise ValueError(f"empty summary_text at line {lineno}")
            key = (author, entry.chapter_id, entry.section_id)
            if key in seen:
                raise ValueError(f"duplicate summary entry {key} at line {lineno}")
            seen.add(key)
            by_author.setdefault(author, []).append(entry)
    return [SummarySet(author, tuple(entries)) for author, entries in by_author.items()]


SentenceSplitter = Callable[[str], "list[Sentence]"]


def summary_stats(
    summary_set: SummarySet,
    key_terms: Iterable[KeyTerm],
    splitter: SentenceSplitter = split_sentences,
) -> SummaryStats:
    """Key-term coverage plus sentence count and mean space-delimited
    sentence length for one author's summaries.

    Coverage is the fraction of key terms found (case-insensitive substring)
    in the concatenation of all summary texts.
    """
    terms = list(key_terms)
    if not terms:
        raise ValueError("no key terms")
    texts = [entry.summary_text for entry in summary_set.entries]
    combined = fold(" ".join(texts))
    covered = sum(1 for term in terms if fold(term.surface) in combined)

    sentences = [s for text in texts for s in splitter(text)]
    total_tokens = sum(len(s.text.split()) for s in sentences)
    avg = total_tokens / len(sentences) if sentences else 0.0
    return SummaryStats(
        key_term_coverage=covered / len(terms),
        total_sentences=len(sentences),
        avg_sentence_length=avg,
    )


def document_to_dict(doc: SourceDocument) -> dict:
    return {
        "doc_id": doc.doc_id,
        "chapters": [
            {
                "chapter_id": ch.chapter_id,
                "title": ch.title,
                "sections": [[sid, text] for sid, text in ch.sections],
            }
            for ch in doc.chapters
        ],
        "key_terms": [{"surface": t.surface, "chapter_id": t.chapter_id} for t in doc.key_terms],
    }


def document_from_dict(data: dict) -> SourceDocument:
    chapters = tuple(
        Chapter(
            ch["chapter_id"],
            ch.get("title", ""),
            tuple((sid, text) for sid, text in ch["sections"]),
        )
        for ch in data["chapters"]
    )
    terms = tuple(KeyTerm(t["surface"], t["chapter_id"]) for t in data.get("key_terms", []))
    return SourceDocument(data["doc_id"], chapters, terms)
