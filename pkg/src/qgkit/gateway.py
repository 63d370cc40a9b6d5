"""Uniform gateway to a text-to-text backend.

A backend supplies up to five capabilities: extract_answer,
generate_question, answer_question, summarize, and count_tokens. Answer
extraction is driven by highlight markers wrapped around one sentence of a
chunk; every extracted span is validated by substring search against the
highlighted sentence and the whole chunk, and spans found nowhere in the
chunk are rejected (logged, not fatal).

The deterministic FakeBackend lets the whole toolkit run with no model.
HttpBackend speaks a single-endpoint wire contract:

    POST <base_url>/v1/generate
    body  {"task": "extract_answer" | "generate_question" |
                   "answer_question" | "summarize",
           "input": str, "answer": str?}   ->   {"output": str}

where the optional "answer" field carries the task's conditioning string
(the answer span for question generation, the question for question
answering). Any non-200 response is a transport failure.
"""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass

import requests

from .segmentation import Chunk, chunk as make_chunks, count_ws_tokens, split_sentences
from .textnorm import strip_trailing_punct

log = logging.getLogger(__name__)

CAPABILITIES = frozenset({
    "extract_answer",
    "generate_question",
    "answer_question",
    "summarize",
    "count_tokens",
})

DEFAULT_MARKER = "⟨hl⟩"  # ⟨hl⟩, the fake backend's sentinel

BACKEND_URL_ENV = "QG_BACKEND_URL"


class GatewayError(RuntimeError):
    """Base class for backend-related failures."""


class CapabilityError(GatewayError):
    """Requested operation is outside the backend's declared capabilities."""


class TransportError(GatewayError):
    """The backend call itself failed."""


class SummarizationError(TransportError):
    """A chunk-level summarize call failed; `partial` holds the summaries
    completed before the failure."""

    def __init__(self, message: str, partial: list[str]):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class BackendDescriptor:
    name: str
    kind: str  # "plugin" | "http" | "fake"
    capabilities: frozenset[str]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "capabilities": sorted(self.capabilities),
        }


@dataclass(frozen=True)
class HighlightedContext:
    """A chunk rendered with one sentence wrapped in highlight markers."""

    chunk: Chunk
    sentence_index: int
    rendered_text: str
    marker: str

    @property
    def sentence_text(self) -> str:
        return self.chunk.sentences[self.sentence_index].text


@dataclass(frozen=True)
class AnswerSpan:
    text: str
    found_in_sentence: bool
    found_in_chunk: bool


def _require(backend, capability: str) -> None:
    if capability not in backend.descriptor.capabilities:
        raise CapabilityError(
            f"backend {backend.descriptor.name!r} does not support {capability!r}"
        )


def insert_highlights(target: Chunk, sentence_index: int, marker: str = DEFAULT_MARKER) -> HighlightedContext:
    """Wrap the indexed sentence of the chunk in a pair of marker tokens,
    leaving every other character unchanged."""
    if not 0 <= sentence_index < len(target.sentences):
        raise IndexError(
            f"sentence index {sentence_index} out of range for chunk of "
            f"{len(target.sentences)} sentences"
        )
    if not marker or any(c.isspace() for c in marker):
        raise ValueError("highlight marker must be a single whitespace-free token")
    texts = [s.text for s in target.sentences]
    rendered = " ".join(
        texts[:sentence_index] + [marker, texts[sentence_index], marker] + texts[sentence_index + 1:]
    )
    return HighlightedContext(target, sentence_index, rendered, marker)


def remove_highlights(rendered_text: str, marker: str = DEFAULT_MARKER) -> str:
    return " ".join(t for t in rendered_text.split() if t != marker)


def extract_answer(backend, hc: HighlightedContext) -> AnswerSpan | None:
    """Ask the backend for at most one answer span from the highlighted
    sentence. Spans absent from the chunk are rejected and logged."""
    _require(backend, "extract_answer")
    raw = backend.extract_answer(hc.rendered_text)
    text = (raw or "").strip()
    if not text:
        return None
    in_sentence = text in hc.sentence_text
    in_chunk = in_sentence or text in hc.chunk.text
    if not in_chunk:
        log.warning(
            "rejected extracted span %r: not found in chunk %d", text, hc.chunk.chunk_index
        )
        return None
    return AnswerSpan(text=text, found_in_sentence=in_sentence, found_in_chunk=True)


def generate_question(backend, context: Chunk, answer: AnswerSpan) -> str:
    _require(backend, "generate_question")
    if not answer.found_in_chunk:
        raise ValueError("answer span does not occur in the chunk")
    question = (backend.generate_question(context.text, answer.text) or "").strip()
    if not question:
        raise GatewayError("empty question")
    return question


def answer_question(backend, context: Chunk, question: str) -> str:
    _require(backend, "answer_question")
    if not context.sentences:
        raise ValueError("empty chunk")
    answer = (backend.answer_question(context.text, question) or "").strip()
    if not answer:
        raise GatewayError("empty answer")
    return answer


def summarize_long(backend, text: str, token_limit: int = 512) -> str:
    """Summarize text of any length: inputs within the token limit go
    through a single summarize call, longer inputs are chunked, summarized
    chunk by chunk, and the outputs joined with single spaces in order.

    A failure mid-way raises SummarizationError carrying the summaries
    completed so far.
    """
    _require(backend, "summarize")
    counter = backend.count_tokens if "count_tokens" in backend.descriptor.capabilities else count_ws_tokens
    sentences = split_sentences(text, token_counter=counter)
    if not sentences:
        raise ValueError("empty input")
    if sum(s.token_count for s in sentences) <= token_limit:
        return (backend.summarize(" ".join(s.text for s in sentences)) or "").strip()
    parts = make_chunks(sentences, token_limit)
    outputs: list[str] = []
    for part in parts:
        try:
            summary = (backend.summarize(part.text) or "").strip()
        except GatewayError as exc:
            raise SummarizationError(
                f"summarize failed on chunk {part.chunk_index + 1} of {len(parts)}: {exc}",
                partial=outputs,
            ) from exc
        if summary:
            outputs.append(summary)
    return " ".join(outputs)


def _capitalized_runs(tokens: list[str]) -> list[tuple[int, list[str]]]:
    """Maximal runs of two or more alphabetic tokens each starting with an
    uppercase letter, as (start position, tokens)."""
    runs: list[tuple[int, list[str]]] = []
    current: list[str] = []
    start = 0
    for i, token in enumerate(tokens):
        if token.isalpha() and token[:1].isupper():
            if not current:
                start = i
            current.append(token)
        else:
            if len(current) >= 2:
                runs.append((start, current))
            current = []
    if len(current) >= 2:
        runs.append((start, current))
    return runs


def _longest_token(tokens: list[str]) -> str:
    best = tokens[0]
    for token in tokens[1:]:
        if len(token) > len(best):
            best = token
    return best


class FakeBackend:
    """Deterministic stand-in for a fine-tuned model.

    Rules (referentially transparent, platform-independent):

    - count_tokens: whitespace-delimited count.
    - extract_answer: within the highlighted sentence, the first maximal
      run of alphabetic tokens each starting uppercase; a run starting at
      sentence position 0 is skipped unless it is the only candidate. With
      no such run, the longest token (earliest on ties). Trailing
      punctuation is stripped.
    - generate_question: "What is <answer>?".
    - answer_question: first maximal capitalized run in the chunk, else the
      longest token.
    - summarize: the first sentence of the input (lead-1).
    """

    def __init__(self, name: str = "fake"):
        self.descriptor = BackendDescriptor(name, "fake", CAPABILITIES)
        self.highlight_marker = DEFAULT_MARKER
        self.token_counter_name = "whitespace"

    def count_tokens(self, text: str) -> int:
        return len(text.split())

    def extract_answer(self, rendered_text: str) -> str:
        tokens = rendered_text.split()
        marker_positions = [i for i, t in enumerate(tokens) if t == self.highlight_marker]
        if len(marker_positions) >= 2:
            lo, hi = marker_positions[0], marker_positions[1]
            sentence_tokens = tokens[lo + 1:hi]
        else:
            sentence_tokens = tokens
        if not sentence_tokens:
            return ""
        runs = _capitalized_runs(sentence_tokens)
        non_initial = [r for r in runs if r[0] != 0]
        if non_initial:
            chosen = non_initial[0][1]
        elif runs:
            chosen = runs[0][1]
        else:
            chosen = [_longest_token(sentence_tokens)]
        return strip_trailing_punct(" ".join(chosen))

    def generate_question(self, context: str, answer: str) -> str:
        return f"What is {answer}?"

    def answer_question(self, context: str, question: str) -> str:
        tokens = context.split()
        if not tokens:
            return ""
        runs = _capitalized_runs(tokens)
        if runs:
            return " ".join(runs[0][1])
        return _longest_token(tokens)

    def summarize(self, text: str) -> str:
        sentences = split_sentences(text)
        return sentences[0].text if sentences else ""


class HttpBackend:
    """Backend reached over the /v1/generate wire contract documented in
    the module docstring. Token counting stays local (whitespace); a
    min_interval in seconds rate-limits consecutive calls."""

    def __init__(
        self,
        base_url: str,
        name: str = "http",
        highlight_marker: str = "<hl>",
        timeout: float = 60.0,
        min_interval: float = 0.0,
        session: requests.Session | None = None,
    ):
        self.descriptor = BackendDescriptor(name, "http", CAPABILITIES)
        self.base_url = base_url.rstrip("/")
        self.highlight_marker = highlight_marker
        self.token_counter_name = "whitespace"
        self.timeout = timeout
        self.min_interval = min_interval
        self._session = session or requests.Session()
        self._last_call = 0.0

    def count_tokens(self, text: str) -> int:
        return len(text.split())

    def _post(self, task: str, input_text: str, answer: str | None = None) -> str:
        if self.min_interval > 0:
            wait = self._last_call + self.min_interval - time.monotonic()
            if wait > 0:
                time.sleep(wait)
        payload: dict = {"task": task, "input": input_text}
        if answer is not None:
            payload["answer"] = answer
        try:
            response = self._session.post(
                f"{self.base_url}/v1/generate", json=payload, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise TransportError(f"backend request failed: {exc}") from exc
        finally:
            self._last_call = time.monotonic()
        if response.status_code != 200:
            raise TransportError(f"backend returned status {response.status_code}")
        try:
            return response.json()["output"]
        except (ValueError, KeyError) as exc:
            raise TransportError(f"malformed backend response: {exc}") from exc

    def extract_answer(self, rendered_text: str) -> str:
        return self._post("extract_answer", rendered_text)

    def generate_question(self, context: str, answer: str) -> str:
        return self._post("generate_question", context, answer=answer)

    def answer_question(self, context: str, question: str) -> str:
        return self._post("answer_question", context, answer=question)

    def summarize(self, text: str) -> str:
        return self._post("summarize", text)


def get_backend(name: str, env: dict | None = None):
    """Resolve a backend by CLI name. "http" reads the endpoint URL from
    QG_BACKEND_URL."""
    if name == "fake":
        return FakeBackend()
    if name == "http":
        environ = env if env is not None else os.environ
        url = environ.get(BACKEND_URL_ENV)
        if not url:
            raise ValueError(f"{BACKEND_URL_ENV} is not set; required for the http backend")
        return HttpBackend(url)
    raise ValueError(f"unknown backend {name!r} (expected 'fake' or 'http')")
