"""Evaluation metrics: key-term coverage, annotation skip-logic expansion,
majority vote, pairwise Cohen kappa, and the full agreement report.

Kappa follows (p_o - p_e) / (1 - p_e) with p_e from the two annotators'
marginals. When p_e is exactly 1 (both annotators constant on the same
class) the formula is 0/0; we return 1.0 when observed agreement is
perfect, else 0.0, and flag the pair as degenerate in the report.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Sequence

from .corpus import KeyTerm
from .pipeline import EvalSet, QuestionSet
from .textnorm import fold

YES = "yes"
NO = "no"
SKIPPED = "skipped"

CATEGORIES = ("acceptable", "grammatical", "interpretable", "relevant", "correct")


@dataclass(frozen=True)
class AnnotationLabel:
    """Five yes/no judgments; `skipped` is only legal on the non-acceptable
    fields, and only when acceptable is yes (see expand_annotation)."""

    acceptable: str = SKIPPED
    grammatical: str = SKIPPED
    interpretable: str = SKIPPED
    relevant: str = SKIPPED
    correct: str = SKIPPED

    def get(self, category: str) -> str:
        if category not in CATEGORIES:
            raise KeyError(f"unknown category {category!r}")
        return getattr(self, category)

    def to_dict(self) -> dict:
        return {c: getattr(self, c) for c in CATEGORIES}

    @classmethod
    def from_dict(cls, data: dict) -> "AnnotationLabel":
        values = {}
        for category in CATEGORIES:
            value = data.get(category, SKIPPED)
            if value not in (YES, NO, SKIPPED):
                raise ValueError(f"bad value {value!r} for {category!r}")
            values[category] = value
        return cls(**values)


ALL_YES = AnnotationLabel(YES, YES, YES, YES, YES)


@dataclass(frozen=True)
class CoverageReport:
    source_kind: str
    n: int
    pct_in_questions: float
    pct_in_answers: float
    pct_in_either: float
    per_term: tuple[tuple[str, bool, bool], ...]  # (term, in_q, in_a)

    def to_dict(self) -> dict:
        return {
            "source_kind": self.source_kind,
            "n": self.n,
            "pct_in_questions": self.pct_in_questions,
            "pct_in_answers": self.pct_in_answers,
            "pct_in_either": self.pct_in_either,
            "per_term": [
                {"term": t, "in_q": q, "in_a": a} for t, q, a in self.per_term
            ],
        }


@dataclass
class AgreementReport:
    annotators: tuple[str, ...]
    kappa_pairs: tuple[tuple[str, str], ...]
    per_annotator_yes_rate: dict  # category -> annotator -> fraction
    pairwise_kappa: dict          # category -> tuple of kappa per pair
    degenerate_pairs: dict        # category -> ["A1-A2", ...]
    majority_labels: dict         # pair_id -> category -> bool
    proportions_by_source: dict   # source_kind -> category -> fraction
    proportions_by_chapter: dict  # chapter_id -> category -> fraction

    def to_dict(self) -> dict:
        return {
            "annotators": list(self.annotators),
            "kappa_pairs": [list(p) for p in self.kappa_pairs],
            "per_annotator_yes_rate": self.per_annotator_yes_rate,
            "pairwise_kappa": {c: list(v) for c, v in self.pairwise_kappa.items()},
            "degenerate_pairs": self.degenerate_pairs,
            "majority_labels": self.majority_labels,
            "proportions_by_source": self.proportions_by_source,
            "proportions_by_chapter": self.proportions_by_chapter,
        }


def key_term_coverage(qs: QuestionSet, key_terms: Sequence[KeyTerm]) -> CoverageReport:
    """Fraction of key terms occurring as a (case-insensitive,
    whitespace-normalized) substring in any question, any answer, and in
    either."""
    if not key_terms:
        raise ValueError("no key terms")
    questions = [fold(p.question) for p in qs.pairs]
    answers = [fold(p.answer) for p in qs.pairs]
    per_term: list[tuple[str, bool, bool]] = []
    for term in key_terms:
        needle = fold(term.surface)
        in_q = any(needle in q for q in questions)
        in_a = any(needle in a for a in answers)
        per_term.append((term.surface, in_q, in_a))
    total = len(per_term)
    n_q = sum(1 for _, q, _a in per_term if q)
    n_a = sum(1 for _, _q, a in per_term if a)
    n_either = sum(1 for _, q, a in per_term if q or a)
    return CoverageReport(
        source_kind=qs.source_kind,
        n=len(qs.pairs),
        pct_in_questions=n_q / total,
        pct_in_answers=n_a / total,
        pct_in_either=n_either / total,
        per_term=tuple(per_term),
    )


def expand_annotation(raw: AnnotationLabel) -> AnnotationLabel:
    """Apply the skip rule: acceptable=yes materializes yes for all five
    categories; acceptable=no requires every other field to be answered."""
    if raw.acceptable == YES:
        return ALL_YES
    if raw.acceptable == NO:
        skipped = [c for c in CATEGORIES[1:] if raw.get(c) == SKIPPED]
        if skipped:
            raise ValueError(f"incomplete annotation: {', '.join(skipped)} skipped with acceptable=no")
        return raw
    raise ValueError("acceptable must be yes or no")


def majority_vote(labels: Sequence[AnnotationLabel], category: str) -> bool:
    """True iff at least 2 of exactly 3 expanded labels say yes."""
    if len(labels) != 3:
        raise ValueError(f"majority vote requires exactly 3 labels, got {len(labels)}")
    values = [label.get(category) for label in labels]
    if SKIPPED in values:
        raise ValueError("labels must be expanded before voting")
    return values.count(YES) >= 2


def _kappa(a: Sequence[bool], b: Sequence[bool]) -> tuple[float, bool]:
    if len(a) != len(b):
        raise ValueError(f"label vectors differ in length: {len(a)} vs {len(b)}")
    if not a:
        raise ValueError("empty label vectors")
    n = len(a)
    p_o = sum(1 for x, y in zip(a, b) if x == y) / n
    p_a = sum(a) / n
    p_b = sum(b) / n
    p_e = p_a * p_b + (1 - p_a) * (1 - p_b)
    if p_e == 1.0:
        return (1.0 if p_o == 1.0 else 0.0), True
    return (p_o - p_e) / (1 - p_e), False


def cohen_kappa(a: Sequence[bool], b: Sequence[bool]) -> float:
    value, _ = _kappa(a, b)
    return value


def round_pct(fraction: float) -> float:
    """Percentage at one decimal place, half away from zero."""
    return float(Decimal(repr(fraction * 100)).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def agreement_report(
    annotations: Iterable,
    eval_set: EvalSet,
    question_sets: Sequence[QuestionSet],
) -> AgreementReport:
    """Aggregate expanded annotations over an eval set: per-annotator yes
    rates, pairwise kappa per category in (A1-A2, A2-A3, A3-A1) order,
    majority labels, and majority proportions by source and by chapter.

    Every eval-set pair must carry exactly one label per annotator;
    missing combinations raise with the offending pair ids.
    """
    meta = {p.pair_id: p for qs in question_sets for p in qs.pairs}
    unknown = [pid for pid in eval_set.entries if pid not in meta]
    if unknown:
        raise ValueError(f"eval-set pairs missing from question sets: {sorted(unknown)[:5]}")

    eval_ids = set(eval_set.entries)
    labels: dict[str, dict[str, AnnotationLabel]] = {}
    for record in annotations:
        pair_id = record.pair_id
        annotator = record.annotator_id
        if pair_id not in eval_ids:
            continue
        per_pair = labels.setdefault(pair_id, {})
        if annotator in per_pair:
            raise ValueError(f"duplicate annotation for ({pair_id!r}, {annotator!r})")
        per_pair[annotator] = expand_annotation(record.label)

    annotators = tuple(sorted({a for per_pair in labels.values() for a in per_pair}))
    if len(annotators) != 3:
        raise ValueError(f"expected exactly 3 annotators, found {list(annotators)}")
    missing = [
        pid for pid in eval_set.entries
        if set(labels.get(pid, {})) != set(annotators)
    ]
    if missing:
        raise ValueError(f"pairs missing annotations: {sorted(missing)}")

    order = list(eval_set.entries)
    pairs_order = (
        (annotators[0], annotators[1]),
        (annotators[1], annotators[2]),
        (annotators[2], annotators[0]),
    )

    yes_rates: dict[str, dict[str, float]] = {}
    kappas: dict[str, tuple[float, ...]] = {}
    degenerate: dict[str, list[str]] = {}
    for category in CATEGORIES:
        vectors = {
            annot: [labels[pid][annot].get(category) == YES for pid in order]
            for annot in annotators
        }
        yes_rates[category] = {
            annot: sum(vec) / len(vec) for annot, vec in vectors.items()
        }
        values: list[float] = []
        flagged: list[str] = []
        for left, right in pairs_order:
            value, is_degenerate = _kappa(vectors[left], vectors[right])
            values.append(value)
            if is_degenerate:
                flagged.append(f"{left}-{right}")
        kappas[category] = tuple(values)
        if flagged:
            degenerate[category] = flagged

    majority: dict[str, dict[str, bool]] = {}
    for pid in order:
        triple = [labels[pid][annot] for annot in annotators]
        majority[pid] = {c: majority_vote(triple, c) for c in CATEGORIES}

    def proportions(group_of) -> dict:
        groups: dict[str, list[str]] = {}
        for pid in order:
            groups.setdefault(group_of(pid), []).append(pid)
        return {
            group: {
                c: sum(1 for pid in pids if majority[pid][c]) / len(pids)
                for c in CATEGORIES
            }
            for group, pids in groups.items()
        }

    return AgreementReport(
        annotators=annotators,
        kappa_pairs=pairs_order,
        per_annotator_yes_rate=yes_rates,
        pairwise_kappa=kappas,
        degenerate_pairs=degenerate,
        majority_labels=majority,
        proportions_by_source=proportions(lambda pid: meta[pid].source_kind),
        proportions_by_chapter=proportions(lambda pid: meta[pid].chapter_id),
    )


# ---------------------------------------------------------------------------
# plain-text rendering

def render_coverage_rows(reports: Sequence[CoverageReport]) -> str:
    lines = [f"{'source':<16}{'n':>6}{'in Qs':>9}{'in As':>9}{'either':>9}"]
    for report in reports:
        lines.append(
            f"{report.source_kind:<16}{report.n:>6}"
            f"{round_pct(report.pct_in_questions):>8.1f}%"
            f"{round_pct(report.pct_in_answers):>8.1f}%"
            f"{round_pct(report.pct_in_either):>8.1f}%"
        )
    return "\n".join(lines)


def render_agreement(report: AgreementReport) -> str:
    a1, a2, a3 = report.annotators
    pair_names = ", ".join(f"{l}-{r}" for l, r in report.kappa_pairs)
    lines = [f"{'category':<16}{a1:>8}{a2:>8}{a3:>8}    kappa ({pair_names})"]
    for category in CATEGORIES:
        rates = report.per_annotator_yes_rate[category]
        kappas = report.pairwise_kappa[category]
        flag = " [degenerate]" if category in report.degenerate_pairs else ""
        lines.append(
            f"{category:<16}"
            + "".join(f"{round_pct(rates[a]):>8.1f}" for a in report.annotators)
            + "    ("
            + ", ".join(f"{k:.2f}" for k in kappas)
            + f"){flag}"
        )

    def block(title: str, proportions: dict) -> None:
        lines.append("")
        lines.append(title)
        lines.append(f"{'group':<16}" + "".join(f"{c:>15}" for c in CATEGORIES))
        for group in sorted(proportions):
            row = proportions[group]
            lines.append(
                f"{group:<16}" + "".join(f"{round_pct(row[c]):>14.1f}%" for c in CATEGORIES)
            )

    block("majority proportions by source", report.proportions_by_source)
    block("majority proportions by chapter", report.proportions_by_chapter)
    return "\n".join(lines)
