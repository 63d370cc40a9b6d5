import pytest

from qgkit.corpus import (
    KeyTerm,
    SummaryEntry,
    SummarySet,
    extract_key_terms,
    load_document,
    load_summary_sets,
    parse_document,
    strip_bold_markers,
    summary_stats,
)

DOC = """\
## ch2 Text Processing
### 2.1
The **minimum edit distance** algorithm compares two strings.
It counts insertions and deletions.

### 2.2
Counting **n-gram** frequencies is common. We revisit **n-gram** counts later.
"""


def test_parse_document_basic():
    doc = parse_document(DOC, "book")
    assert len(doc.chapters) == 1
    ch = doc.chapters[0]
    assert ch.chapter_id == "ch2"
    assert ch.title == "Text Processing"
    assert [sid for sid, _ in ch.sections] == ["2.1", "2.2"]
    # paragraphs joined, whitespace collapsed, markers stripped
    assert ch.sections[0][1] == (
        "The minimum edit distance algorithm compares two strings. "
        "It counts insertions and deletions."
    )
    assert [t.surface for t in doc.key_terms] == ["minimum edit distance", "n-gram"]


def test_load_document_roundtrip(tmp_path):
    path = tmp_path / "book.txt"
    path.write_text(DOC, encoding="utf-8")
    doc = load_document(path)
    assert doc.doc_id == "book"
    assert len(doc.chapters[0].sections) == 2


def test_load_document_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_document(tmp_path / "nope.txt")


def test_load_document_unknown_format(tmp_path):
    path = tmp_path / "book.txt"
    path.write_text(DOC, encoding="utf-8")
    with pytest.raises(ValueError, match="format"):
        load_document(path, format="latex")


def test_duplicate_section_rejected():
    text = "## c1 T\n### s1\nalpha.\n### s1\nbeta.\n"
    with pytest.raises(ValueError, match="duplicate section"):
        parse_document(text, "d")


def test_duplicate_chapter_rejected():
    text = "## c1 T\n### s1\nalpha.\n## c1 T2\n### s2\nbeta.\n"
    with pytest.raises(ValueError, match="duplicate chapter"):
        parse_document(text, "d")


def test_empty_document_rejected():
    with pytest.raises(ValueError, match="empty document"):
        parse_document("", "d")
    with pytest.raises(ValueError, match="empty document"):
        parse_document("## c1 Title\n", "d")


def test_body_outside_section_rejected():
    with pytest.raises(ValueError, match="outside any section"):
        parse_document("stray text\n## c1 T\n### s\nx.\n", "d")


def test_extract_key_terms_single():
    terms = extract_key_terms("the **minimum edit distance** algorithm", "ch2")
    assert [t.surface for t in terms] == ["minimum edit distance"]
    assert terms[0].chapter_id == "ch2"


def test_extract_key_terms_dedup_case_insensitive():
    terms = extract_key_terms("**n-gram** models and **N-gram** counts", "ch3")
    assert [t.surface for t in terms] == ["n-gram"]


def test_extract_key_terms_unbalanced():
    with pytest.raises(ValueError, match="offset 0"):
        extract_key_terms("**unclosed span", "ch2")
    with pytest.raises(ValueError, match="offset 8"):
        extract_key_terms("a **b** **c", "ch2")


def test_extract_key_terms_idempotent_on_rendered_output():
    terms = extract_key_terms("uses **alpha beta** and **Gamma**, plus **alpha  beta**", "c")
    rendered = " ".join(f"**{t.surface}**" for t in terms)
    again = extract_key_terms(rendered, "c")
    assert [t.surface for t in again] == [t.surface for t in terms]


def test_strip_bold_markers():
    assert strip_bold_markers("a **b** c **d**") == "a b c d"


def test_summary_stats_manual_tally():
    # hand-counted: "a b c." has 3 tokens, "d e." has 2; "a b" matches, "zz" does not
    sset = SummarySet("A1", (
        SummaryEntry("c1", "s1", "a b c."),
        SummaryEntry("c1", "s2", "d e."),
    ))
    terms = [KeyTerm("a b", "c1"), KeyTerm("zz", "c1")]
    stats = summary_stats(sset, terms)
    assert stats.key_term_coverage == 0.5
    assert stats.total_sentences == 2
    assert stats.avg_sentence_length == 2.5


def test_summary_stats_single_term_identity():
    sset = SummarySet("A1", (SummaryEntry("c1", "s1", "smoothing"),))
    stats = summary_stats(sset, [KeyTerm("smoothing", "c1")])
    assert stats.key_term_coverage == 1.0


def test_summary_stats_requires_key_terms():
    sset = SummarySet("A1", (SummaryEntry("c1", "s1", "text."),))
    with pytest.raises(ValueError, match="no key terms"):
        summary_stats(sset, [])


def test_summary_stats_coverage_monotone_under_extension():
    terms = [KeyTerm("alpha", "c"), KeyTerm("beta", "c"), KeyTerm("gamma", "c")]
    base = SummarySet("A1", (SummaryEntry("c", "s1", "Alpha is covered here."),))
    extended = SummarySet("A1", base.entries + (SummaryEntry("c", "s2", "And beta too."),))
    assert (
        summary_stats(extended, terms).key_term_coverage
        >= summary_stats(base, terms).key_term_coverage
    )


def test_summary_stats_avg_matches_ratio():
    entries = tuple(
        SummaryEntry("c", f"s{i}", f"Sentence {i} has several tokens here. Short one {i}.")
        for i in range(7)
    )
    stats = summary_stats(SummarySet("A2", entries), [KeyTerm("tokens", "c")])
    total_tokens = sum(len(e.summary_text.split()) for e in entries)
    assert abs(stats.avg_sentence_length - total_tokens / stats.total_sentences) < 1e-9


def test_load_summary_sets(tmp_path):
    path = tmp_path / "sums.jsonl"
    path.write_text(
        '{"author_id": "A1", "chapter_id": "c1", "section_id": "s1", "summary_text": "First."}\n'
        '{"author_id": "A2", "chapter_id": "c1", "section_id": "s1", "summary_text": "Other."}\n'
        '{"author_id": "A1", "chapter_id": "c1", "section_id": "s2", "summary_text": "Second."}\n',
        encoding="utf-8",
    )
    sets = load_summary_sets(path)
    assert [s.author_id for s in sets] == ["A1", "A2"]
    assert [e.section_id for e in sets[0].entries] == ["s1", "s2"]


def test_load_summary_sets_rejects_duplicates(tmp_path):
    path = tmp_path / "sums.jsonl"
    path.write_text(
        '{"author_id": "A1", "chapter_id": "c1", "section_id": "s1", "summary_text": "First."}\n'
        '{"author_id": "A1", "chapter_id": "c1", "section_id": "s1", "summary_text": "Again."}\n',
        encoding="utf-8",
    )
    with pytest.raises(ValueError, match="duplicate summary entry"):
        load_summary_sets(path)
