"""Generate question-answer pairs from the same textbook through all three
source modes, using the deterministic fake backend so no model is needed.

Run from the repository root:

    python3 demos/02_generate_questions.py
"""

from pathlib import Path

from qgkit import FakeBackend, generate, load_document, load_summary_sets
from qgkit.pipeline import QGConfig, passages_from_summary_sets, save_question_set

DATA = Path(__file__).parent / "data"
OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

doc = load_document(DATA / "textbook.txt")
backend = FakeBackend()

# Mode 1: the original text. One sentence is highlighted at a time, the
# backend proposes an answer span from it, and each surviving span becomes
# one question.
original = generate(doc, "original", backend, QGConfig(run_id="demo-original"))
print(f"original text: {len(original.pairs)} pairs")
for pair in original.pairs[:4]:
    print(f"  [{pair.chapter_id}/{pair.section_id}] {pair.question}  ->  {pair.answer}")

# Mode 2: human-written summaries. Each author's section summaries are
# concatenated per chapter before generation; provenance keeps the author.
summary_sets = load_summary_sets(DATA / "summaries.jsonl")
passages = passages_from_summary_sets(summary_sets, doc_id=doc.doc_id)
human = generate(passages, "human_summary", backend, QGConfig(run_id="demo-human"))
print(f"\nhuman summaries: {len(human.pairs)} pairs")
for pair in human.pairs[:4]:
    print(f"  [{pair.author_id} {pair.chapter_id}] {pair.question}  ->  {pair.answer}")

# Mode 3: automatic summaries. The input is summarized first (the fake
# backend keeps the first sentence of each chunk), then questioned.
auto = generate(doc, "auto_summary", backend, QGConfig(run_id="demo-auto"))
print(f"\nauto summaries: {len(auto.pairs)} pairs")
for pair in auto.pairs[:4]:
    print(f"  [{pair.chapter_id}/{pair.section_id}] {pair.question}  ->  {pair.answer}")

for qs, name in [(original, "original"), (human, "human_summary"), (auto, "auto_summary")]:
    path = OUT / f"questions_{name}.jsonl"
    save_question_set(qs, path)
    print(f"\nwrote {path}")
