"""Answer-agnostic question generation workbench for textbook flashcards.

Generates question-answer pairs from textbook text by highlighting one
sentence at a time and asking a text-to-text backend for an answer span and
a question, optionally summarizing the input first. Evaluation covers
key-term coverage, five-criteria human annotation with skip logic, and
pairwise inter-annotator agreement.
"""

from .corpus import (
    Chapter,
    KeyTerm,
    SourceDocument,
    SummaryEntry,
    SummarySet,
    SummaryStats,
    extract_key_terms,
    load_document,
    load_summary_sets,
    parse_document,
    summary_stats,
)
from .gateway import (
    AnswerSpan,
    BackendDescriptor,
    CapabilityError,
    FakeBackend,
    GatewayError,
    HighlightedContext,
    HttpBackend,
    SummarizationError,
    TransportError,
    answer_question,
    extract_answer,
    generate_question,
    get_backend,
    insert_highlights,
    remove_highlights,
    summarize_long,
)
from .metrics import (
    AgreementReport,
    AnnotationLabel,
    CoverageReport,
    agreement_report,
    cohen_kappa,
    expand_annotation,
    key_term_coverage,
    majority_vote,
)
from .pipeline import (
    EvalSet,
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
from .segmentation import Chunk, Sentence, chunk, count_ws_tokens, split_sentences

__version__ = "0.1.0"
