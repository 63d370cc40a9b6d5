"""Ingest a textbook export, pull out its bolded key terms, and profile the
accompanying human summaries.

Run from the repository root:

    python3 demos/01_ingest_and_stats.py
"""

from pathlib import Path

from qgkit import load_document, load_summary_sets, summary_stats
from qgkit.metrics import round_pct

DATA = Path(__file__).parent / "data"

# The ingest format is plain text: "## id title" opens a chapter,
# "### id" opens a section, and **double asterisks** mark key terms.
doc = load_document(DATA / "textbook.txt")
print(f"document {doc.doc_id!r}: {len(doc.chapters)} chapters")
for chapter in doc.chapters:
    print(f"  {chapter.chapter_id} ({chapter.title!r}): {len(chapter.sections)} sections")

print(f"\n{len(doc.key_terms)} bolded key terms:")
for term in doc.key_terms:
    print(f"  [{term.chapter_id}] {term.surface}")

# Summary sets are JSON Lines keyed by author. For each author we report
# what fraction of the key terms their summary mentions, how many sentences
# they wrote, and the mean sentence length in space-delimited tokens.
print("\nsummary statistics per author:")
for sset in load_summary_sets(DATA / "summaries.jsonl"):
    stats = summary_stats(sset, doc.key_terms)
    print(
        f"  {sset.author_id}: key-term coverage "
        f"{round_pct(stats.key_term_coverage):.1f}%, "
        f"{stats.total_sentences} sentences, "
        f"avg {stats.avg_sentence_length:.2f} tokens/sentence"
    )
