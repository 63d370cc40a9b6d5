"""Sentence splitting and token-bounded chunking.

Chunking never divides a sentence: a passage is split into the fewest
contiguous groups of whole sentences whose sizes are balanced (group
sentence-counts differ by at most one, larger groups first) and whose token
totals all fit the limit. A single sentence that exceeds the limit on its
own becomes its own flagged chunk and the rule applies independently to the
sentence runs around it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

TokenCounter = Callable[[str], int]


def count_ws_tokens(text: str) -> int:
    """Whitespace-delimited token count (the fallback counter)."""
    return len(text.split())


# Trailing abbreviations that do not end a sentence even when followed by
# an uppercase word. Compared case-insensitively against the whole token
# after stripping leading quotes/brackets.
ABBREVIATIONS = frozenset({
    "e.g.", "i.e.", "cf.", "vs.", "al.", "ca.",
    "fig.", "figs.", "eq.", "eqs.", "sec.", "secs.", "ch.", "chs.",
    "no.", "vol.", "dr.", "prof.", "mr.", "mrs.", "ms.", "st.",
})

_TERMINATORS = ".!?"
_OPENERS = "([{\"'“‘"


@dataclass(frozen=True)
class Sentence:
    """One sentence with its ordinal in the source and its token count
    under the active counter."""

    text: str
    index: int
    token_count: int


@dataclass(frozen=True)
class Chunk:
    """A contiguous group of sentences; `oversized` marks a single sentence
    that exceeds the token limit on its own."""

    sentences: tuple[Sentence, ...]
    total_tokens: int
    chunk_index: int
    oversized: bool = False

    @property
    def text(self) -> str:
        return " ".join(s.text for s in self.sentences)


def _is_abbreviation(token: str) -> bool:
    return token.lstrip(_OPENERS).casefold() in ABBREVIATIONS


def split_sentences(text: str, token_counter: TokenCounter = count_ws_tokens) -> list[Sentence]:
    """Split text into sentences at {. ! ?} followed by whitespace and an
    uppercase letter, unless the terminating token is a known abbreviation.

    Whitespace is normalized first, so joining the sentence texts with
    single spaces reconstructs the normalized input. Empty input yields an
    empty list.
    """
    tokens = text.split()
    if not tokens:
        return []
    sentences: list[Sentence] = []
    current: list[str] = []

    def flush() -> None:
        sentence_text = " ".join(current)
        count = max(1, token_counter(sentence_text))
        sentences.append(Sentence(sentence_text, len(sentences), count))
        current.clear()

    for pos, token in enumerate(tokens):
        current.append(token)
        if pos + 1 == len(tokens):
            break
        nxt = tokens[pos + 1]
        if token[-1] in _TERMINATORS and nxt[:1].isupper() and not _is_abbreviation(token):
            flush()
    flush()
    return sentences


def _balanced_sizes(n: int, k: int) -> list[int]:
    # sizes differ by at most one, larger groups first
    small, extra = divmod(n, k)
    return [small + 1] * extra + [small] * (k - extra)


def _partition_run(run: list[Sentence], token_limit: int, out: list[Chunk]) -> None:
    if not run:
        return
    n = len(run)
    for k in range(1, n + 1):
        sizes = _balanced_sizes(n, k)
        groups: list[list[Sentence]] = []
        start = 0
        for size in sizes:
            groups.append(run[start:start + size])
            start += size
        totals = [sum(s.token_count for s in g) for g in groups]
        if all(t <= token_limit for t in totals):
            for group, total in zip(groups, totals):
                out.append(Chunk(tuple(group), total, len(out)))
            return
    # unreachable: every sentence in the run fits individually
    raise AssertionError("no balanced partition found")


def chunk(sentences: Sequence[Sentence], token_limit: int = 512) -> list[Chunk]:
    """Group sentences into the fewest balanced contiguous chunks whose token
    totals fit `token_limit`.

    k is the smallest chunk count for which the balanced partition (group
    sizes ceil(n/k) then floor(n/k), larger groups first) keeps every group
    within the limit. Sentences that individually exceed the limit become
    their own chunks flagged `oversized`, and the rule applies independently
    to the runs between them.
    """
    if token_limit < 1:
        raise ValueError("token_limit must be >= 1")
    if not sentences:
        return []
    chunks: list[Chunk] = []
    run: list[Sentence] = []
    for sentence in sentences:
        if sentence.token_count > token_limit:
            _partition_run(run, token_limit, chunks)
            run = []
            chunks.append(Chunk((sentence,), sentence.token_count, len(chunks), oversized=True))
        else:
            run.append(sentence)
    _partition_run(run, token_limit, chunks)
    return chunks
