"""Evaluate generated question sets: key-term coverage per source, then a
simulated three-annotator pass with majority votes and pairwise kappa.

Run demos/02_generate_questions.py first, then:

    python3 demos/03_coverage_and_agreement.py
"""

import random
from pathlib import Path

from qgkit import FakeBackend, generate, load_document, load_summary_sets
from qgkit.annotation import AnnotationRecord
from qgkit.metrics import (
    AnnotationLabel,
    agreement_report,
    key_term_coverage,
    render_agreement,
    render_coverage_rows,
)
from qgkit.pipeline import QGConfig, passages_from_summary_sets, sample_eval_set

DATA = Path(__file__).parent / "data"

doc = load_document(DATA / "textbook.txt")
backend = FakeBackend()
sets = [
    generate(doc, "original", backend, QGConfig(run_id="demo-original")),
    generate(
        passages_from_summary_sets(load_summary_sets(DATA / "summaries.jsonl"), doc_id=doc.doc_id),
        "human_summary", backend, QGConfig(run_id="demo-human"),
    ),
    generate(doc, "auto_summary", backend, QGConfig(run_id="demo-auto")),
]

# Coverage: which fraction of the textbook's bolded terms shows up in the
# questions, the answers, or either.
print("key-term coverage by source:")
print(render_coverage_rows([key_term_coverage(qs, doc.key_terms) for qs in sets]))

# Draw a small evaluation sample (the real protocol samples 100 per source)
# and simulate three annotators with different strictness levels.
eval_set = sample_eval_set(sets, quota=6, seed=13)
print(f"\nsampled eval set {eval_set.eval_id}: {len(eval_set.entries)} pairs")

rng = random.Random(4)
records = []
for pair_id in eval_set.entries:
    for annotator, acceptance_rate in [("A1", 0.7), ("A2", 0.5), ("A3", 0.45)]:
        if rng.random() < acceptance_rate:
            label = AnnotationLabel("yes")  # skip logic fills the rest
        else:
            label = AnnotationLabel(
                "no",
                grammatical="yes" if rng.random() < 0.9 else "no",
                interpretable="yes" if rng.random() < 0.6 else "no",
                relevant="yes" if rng.random() < 0.7 else "no",
                correct="yes" if rng.random() < 0.9 else "no",
            )
        records.append(AnnotationRecord(pair_id, annotator, label, "demo", 1))

report = agreement_report(records, eval_set, sets)
print("\n" + render_agreement(report))
