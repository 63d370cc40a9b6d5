import json
from dataclasses import asdict

import pytest

from qgkit.corpus import SummaryEntry, SummarySet, parse_document
from qgkit.gateway import FakeBackend, TransportError
from qgkit.pipeline import (
    Passage,
    QAPair,
    QGConfig,
    QuestionSet,
    dedupe,
    generate,
    load_eval_set,
    load_question_set,
    passages_from_document,
    passages_from_summary_sets,
    roundtrip_filter,
    sample_eval_set,
    save_eval_set,
    save_question_set,
)

TWO_SENTENCES = "Dynamic Programming was introduced in 1957. It solves subproblems."


def make_pair(i, run="r", **kw):
    fields = dict(
        pair_id=f"{run}-{i:05d}", question=f"What is thing {i}?", answer=f"thing {i}",
        source_kind="original", doc_id="d", chapter_id="c1", section_id="s1",
        chunk_index=0, sentence_index=i, author_id=None, run_id=run,
    )
    fields.update(kw)
    return QAPair(**fields)


def make_set(size, kind="original", run="r"):
    return QuestionSet(run, kind, [make_pair(i, run=run, source_kind=kind) for i in range(size)], {})


# -- generate ------------------------------------------------------------------

def test_generate_two_sentence_example():
    qs = generate(TWO_SENTENCES, "original", FakeBackend())
    assert [(p.question, p.answer) for p in qs.pairs] == [
        ("What is Dynamic Programming?", "Dynamic Programming"),
        ("What is subproblems?", "subproblems"),
    ]
    assert [(p.chunk_index, p.sentence_index) for p in qs.pairs] == [(0, 0), (0, 1)]
    assert all(p.source_kind == "original" for p in qs.pairs)
    assert qs.manifest["pair_count"] == 2


def test_generate_empty_input():
    with pytest.raises(ValueError, match="empty input"):
        generate("", "original", FakeBackend())


def test_generate_unknown_source_kind():
    with pytest.raises(ValueError, match="source_kind"):
        generate(TWO_SENTENCES, "extractive", FakeBackend())


def test_generate_records_provenance_from_document():
    doc = parse_document(
        "## c1 Title\n### s1\nAlpha Beta holds here.\n### s2\nGamma Delta holds there.\n",
        "book",
    )
    qs = generate(doc, "original", FakeBackend())
    assert [(p.doc_id, p.chapter_id, p.section_id) for p in qs.pairs] == [
        ("book", "c1", "s1"), ("book", "c1", "s2"),
    ]


def test_generate_pair_count_bounded_by_sentences():
    text = " ".join(f"Item {i} is listed here." for i in range(30))
    qs = generate(text, "original", FakeBackend())
    assert len(qs.pairs) <= 30


def test_generate_answers_are_chunk_substrings():
    text = " ".join(f"Alpha{i} Beta{i} explains point number {i}." for i in range(20))
    qs = generate(text, "original", FakeBackend())
    assert len(qs.pairs) == 20
    chunk_text = " ".join(text.split())
    for pair in qs.pairs:
        assert pair.answer in chunk_text


def test_generate_deterministic_minus_timestamps():
    def snapshot():
        qs = generate(TWO_SENTENCES, "original", FakeBackend(), QGConfig(run_id="fixed"))
        manifest = {k: v for k, v in qs.manifest.items() if k != "created_at"}
        return json.dumps([asdict(p) for p in qs.pairs]) + json.dumps(manifest, sort_keys=True)

    first = snapshot()
    assert all(snapshot() == first for _ in range(2))


def test_generate_auto_summary_mode():
    # lead-1 summarization keeps only the first sentence, so one pair remains
    qs = generate(TWO_SENTENCES, "auto_summary", FakeBackend())
    assert [(p.question, p.answer) for p in qs.pairs] == [
        ("What is Dynamic Programming?", "Dynamic Programming"),
    ]
    assert qs.source_kind == "auto_summary"


def test_generate_auto_summary_requires_summarize():
    from qgkit.gateway import CAPABILITIES, BackendDescriptor, GatewayError

    backend = FakeBackend()
    backend.descriptor = BackendDescriptor("fake", "fake", CAPABILITIES - {"summarize"})
    with pytest.raises(GatewayError, match="summarize"):
        generate(TWO_SENTENCES, "auto_summary", backend)


def test_generate_partial_failure_keeps_pairs():
    class FlakyBackend(FakeBackend):
        def __init__(self):
            super().__init__()
            self.calls = 0

        def extract_answer(self, rendered_text):
            self.calls += 1
            if self.calls > 1:
                raise TransportError("connection dropped")
            return super().extract_answer(rendered_text)

    qs = generate(TWO_SENTENCES, "original", FlakyBackend())
    assert len(qs.pairs) == 1
    assert "connection dropped" in qs.manifest["failure"]["error"]


def test_generate_human_summary_passages():
    sset = SummarySet("A1", (
        SummaryEntry("c1", "s1", "Alpha Beta is the key idea."),
        SummaryEntry("c1", "s2", "Gamma Delta follows from it."),
        SummaryEntry("c2", "s1", "Epsilon Zeta closes the loop."),
    ))
    passages = passages_from_summary_sets([sset], doc_id="book")
    assert [(p.chapter_id, p.section_id, p.author_id) for p in passages] == [
        ("c1", "", "A1"), ("c2", "", "A1"),
    ]
    assert passages[0].text == "Alpha Beta is the key idea. Gamma Delta follows from it."

    qs = generate(passages, "human_summary", FakeBackend())
    assert all(p.author_id == "A1" for p in qs.pairs)
    assert len(qs.pairs) == 3

    per_section = passages_from_summary_sets([sset], doc_id="book", granularity="section")
    assert [(p.chapter_id, p.section_id) for p in per_section] == [
        ("c1", "s1"), ("c1", "s2"), ("c2", "s1"),
    ]


def test_passages_granularity_validated():
    with pytest.raises(ValueError, match="granularity"):
        passages_from_summary_sets([], granularity="book")


# -- dedupe ----------------------------------------------------------------------

def test_dedupe_removes_repeats():
    qs = QuestionSet("r", "original", [
        make_pair(0, question="What is X?", answer="X"),
        make_pair(1, question="What is X?", answer="X"),
    ], {})
    assert [p.pair_id for p in dedupe(qs).pairs] == ["r-00000"]


def test_dedupe_case_folds():
    qs = QuestionSet("r", "original", [
        make_pair(0, question="What is X?", answer="Smoothing"),
        make_pair(1, question="what is x?", answer="smoothing"),
    ], {})
    assert len(dedupe(qs).pairs) == 1


def test_dedupe_identity_on_distinct():
    qs = make_set(5)
    assert [p.pair_id for p in dedupe(qs).pairs] == [p.pair_id for p in qs.pairs]


# -- roundtrip filter --------------------------------------------------------------

def test_roundtrip_keeps_matching_answers():
    chunk_text = "Dynamic Programming was introduced in 1957."
    qs = QuestionSet("r", "original", [
        make_pair(0, question="What is Dynamic Programming?", answer="Dynamic Programming"),
    ], {})
    out = roundtrip_filter(qs, FakeBackend(), {"r-00000": chunk_text})
    assert len(out.pairs) == 1


def test_roundtrip_drops_unrelated_answers():
    chunk_text = "Dynamic Programming was introduced in 1957."
    qs = QuestionSet("r", "original", [make_pair(0, answer="zebra")], {})
    out = roundtrip_filter(qs, FakeBackend(), {"r-00000": chunk_text})
    assert out.pairs == []


def test_roundtrip_empty_set():
    out = roundtrip_filter(QuestionSet("r", "original", [], {}), FakeBackend(), {})
    assert out.pairs == []


def test_generate_with_roundtrip_flag():
    qs = generate(TWO_SENTENCES, "original", FakeBackend(),
                  QGConfig(roundtrip_filter=True))
    # fake QA always answers "Dynamic Programming", so only that pair survives
    assert [p.answer for p in qs.pairs] == ["Dynamic Programming"]


# -- sampling ----------------------------------------------------------------------

def test_sample_eval_set_typical_pool_sizes():
    sets = [
        make_set(1208, "original", "orig"),
        make_set(667, "human_summary", "hum"),
        make_set(318, "auto_summary", "auto"),
    ]
    eval_set = sample_eval_set(sets, quota=100, seed=42)
    assert len(eval_set.entries) == 300
    assert len(set(eval_set.entries)) == 300
    by_run = {"orig": 0, "hum": 0, "auto": 0}
    for pid in eval_set.entries:
        by_run[pid.rsplit("-", 1)[0]] += 1
    assert by_run == {"orig": 100, "hum": 100, "auto": 100}


def test_sample_eval_set_quota_zero():
    assert sample_eval_set([make_set(5)], quota=0, seed=1).entries == ()


def test_sample_eval_set_quota_exceeds_pool():
    with pytest.raises(ValueError, match="quota 400 exceeds"):
        sample_eval_set([make_set(318, "auto_summary", "auto")], quota=400, seed=1)


def test_sample_eval_set_deterministic_and_seed_sensitive():
    sets = [
        make_set(1208, "original", "orig"),
        make_set(667, "human_summary", "hum"),
        make_set(318, "auto_summary", "auto"),
    ]
    base = sample_eval_set(sets, quota=100, seed=0).entries
    assert sample_eval_set(sets, quota=100, seed=0).entries == base
    distinct = {sample_eval_set(sets, quota=100, seed=s).entries for s in range(20)}
    assert len(distinct) == 20


# -- persistence ---------------------------------------------------------------------

def test_question_set_roundtrip(tmp_path):
    qs = generate(TWO_SENTENCES, "original", FakeBackend(), QGConfig(run_id="rt"))
    path = tmp_path / "qs.jsonl"
    save_question_set(qs, path)
    loaded = load_question_set(path)
    assert loaded.pairs == qs.pairs
    assert loaded.run_id == "rt"
    assert loaded.manifest["token_limit"] == 512
    # field names on the wire match the type definition exactly
    first = json.loads(path.read_text(encoding="utf-8").splitlines()[0])
    assert list(first) == [
        "pair_id", "question", "answer", "source_kind", "doc_id", "chapter_id",
        "section_id", "chunk_index", "sentence_index", "author_id", "run_id",
    ]


def test_eval_set_roundtrip(tmp_path):
    eval_set = sample_eval_set([make_set(10)], quota=3, seed=5)
    path = tmp_path / "eval.json"
    save_eval_set(eval_set, path)
    assert load_eval_set(path) == eval_set
