"""Command-line entry points.

Subcommands: ingest, generate, sample, coverage, agreement, report, serve.
The http backend reads its endpoint from the QG_BACKEND_URL environment
variable.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import annotation, corpus, metrics, pipeline
from .gateway import get_backend


def _load_document_any(path: str) -> corpus.SourceDocument:
    p = Path(path)
    if p.suffix == ".json":
        return corpus.document_from_dict(json.loads(p.read_text(encoding="utf-8")))
    return corpus.load_document(p)


def _load_question_sets(paths: list[str]) -> list[pipeline.QuestionSet]:
    return [pipeline.load_question_set(p) for p in paths]


def _key_terms_from_file(path: str) -> list[corpus.KeyTerm]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return [corpus.KeyTerm(t["surface"], t["chapter_id"]) for t in data]


def cmd_ingest(args: argparse.Namespace) -> int:
    doc = corpus.load_document(args.document)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "document.json").write_text(
        json.dumps(corpus.document_to_dict(doc), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )
    (out / "key_terms.json").write_text(
        json.dumps(
            [{"surface": t.surface, "chapter_id": t.chapter_id} for t in doc.key_terms],
            ensure_ascii=False, indent=2,
        ) + "\n",
        encoding="utf-8",
    )
    n_sections = sum(len(ch.sections) for ch in doc.chapters)
    print(f"ingested {doc.doc_id}: {len(doc.chapters)} chapters, "
          f"{n_sections} sections, {len(doc.key_terms)} key terms")

    if args.summaries:
        stats_out = {}
        for sset in corpus.load_summary_sets(args.summaries):
            stats = corpus.summary_stats(sset, doc.key_terms)
            stats_out[sset.author_id] = {
                "key_term_coverage": stats.key_term_coverage,
                "total_sentences": stats.total_sentences,
                "avg_sentence_length": stats.avg_sentence_length,
            }
            print(f"summary {sset.author_id}: coverage "
                  f"{metrics.round_pct(stats.key_term_coverage):.1f}%, "
                  f"{stats.total_sentences} sentences, "
                  f"avg {stats.avg_sentence_length:.2f} tokens")
        (out / "summary_stats.json").write_text(
            json.dumps(stats_out, indent=2) + "\n", encoding="utf-8"
        )
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    backend = get_backend(args.backend)
    source_kind = args.source.replace("-", "_")
    config = pipeline.QGConfig(
        token_limit=args.token_limit,
        dedupe=args.dedupe,
        roundtrip_filter=args.roundtrip_filter,
        run_id=args.run_id,
        seed=args.seed,
    )

    if source_kind == "human_summary":
        if not args.summaries:
            print("error: --summaries is required for --source human-summary", file=sys.stderr)
            return 2
        summary_sets = corpus.load_summary_sets(args.summaries)
        if args.author:
            summary_sets = [s for s in summary_sets if s.author_id == args.author]
            if not summary_sets:
                print(f"error: no summaries by author {args.author!r}", file=sys.stderr)
                return 2
        source = pipeline.passages_from_summary_sets(
            summary_sets, doc_id=args.doc_id, granularity=args.granularity
        )
    else:
        if not args.document:
            print(f"error: --document is required for --source {args.source}", file=sys.stderr)
            return 2
        source = _load_document_any(args.document)

    qs = pipeline.generate(source, source_kind, backend, config)
    pipeline.save_question_set(qs, args.out)
    print(f"wrote {len(qs.pairs)} pairs to {args.out}")
    if "failure" in qs.manifest:
        print(f"warning: run aborted early: {qs.manifest['failure']['error']}", file=sys.stderr)
        return 1
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    sets = _load_question_sets(args.questions)
    eval_set = pipeline.sample_eval_set(sets, quota=args.quota, seed=args.seed)
    pipeline.save_eval_set(eval_set, args.out)
    print(f"wrote eval set {eval_set.eval_id} with {len(eval_set.entries)} entries to {args.out}")
    return 0


def cmd_coverage(args: argparse.Namespace) -> int:
    key_terms = _key_terms_from_file(args.key_terms)
    reports = [
        metrics.key_term_coverage(qs, key_terms)
        for qs in _load_question_sets(args.questions)
    ]
    print(metrics.render_coverage_rows(reports))
    if args.out:
        Path(args.out).write_text(
            json.dumps([r.to_dict() for r in reports], ensure_ascii=False, indent=2) + "\n",
            encoding="utf-8",
        )
    return 0


def _build_agreement(args: argparse.Namespace) -> metrics.AgreementReport:
    eval_set = pipeline.load_eval_set(args.eval)
    sets = _load_question_sets(args.questions)
    records = annotation.latest_records(annotation.read_log(args.log)).values()
    expanded = [
        annotation.AnnotationRecord(
            pair_id=r.pair_id,
            annotator_id=r.annotator_id,
            label=metrics.expand_annotation(r.label),
            submitted_at=r.submitted_at,
            revision=r.revision,
        )
        for r in records
    ]
    return metrics.agreement_report(expanded, eval_set, sets)


def cmd_agreement(args: argparse.Namespace) -> int:
    report = _build_agreement(args)
    print(metrics.render_agreement(report))
    if args.out:
        Path(args.out).write_text(
            json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n",
            encoding="utf-8",
        )
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    document: dict = {}
    if args.key_terms:
        key_terms = _key_terms_from_file(args.key_terms)
        reports = [
            metrics.key_term_coverage(qs, key_terms)
            for qs in _load_question_sets(args.questions)
        ]
        print("key-term coverage")
        print(metrics.render_coverage_rows(reports))
        print()
        document["coverage"] = [r.to_dict() for r in reports]
    agreement = _build_agreement(args)
    print(metrics.render_agreement(agreement))
    document["agreement"] = agreement.to_dict()
    if args.out:
        Path(args.out).write_text(
            json.dumps(document, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    eval_set = pipeline.load_eval_set(args.eval)
    questions = {
        p.pair_id: p
        for qs in _load_question_sets(args.questions)
        for p in qs.pairs
    }
    store = annotation.AnnotationStore(
        log_path=args.log,
        eval_set=eval_set,
        questions=questions,
        annotators=[a.strip() for a in args.annotators.split(",") if a.strip()],
    )
    app = create_app(store)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qgkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a plain-sections document and extract key terms")
    p.add_argument("--document", required=True)
    p.add_argument("--summaries", help="summary-set JSONL for Table-2 style statistics")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("generate", help="generate question-answer pairs")
    p.add_argument("--source", required=True,
                   choices=["original", "human-summary", "auto-summary"])
    p.add_argument("--backend", required=True, help="'fake' or 'http'")
    p.add_argument("--document", help="ingested document.json or plain-sections text")
    p.add_argument("--summaries", help="summary-set JSONL (human-summary mode)")
    p.add_argument("--author", help="restrict to one summary author")
    p.add_argument("--granularity", choices=["chapter", "section"], default="chapter")
    p.add_argument("--doc-id", default="", help="doc id recorded on summary-mode pairs")
    p.add_argument("--token-limit", type=int, default=512)
    p.add_argument("--dedupe", action="store_true")
    p.add_argument("--roundtrip-filter", action="store_true")
    p.add_argument("--run-id")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output JSONL path")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sample", help="sample an evaluation set from question sets")
    p.add_argument("--questions", nargs="+", required=True)
    p.add_argument("--quota", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("coverage", help="key-term coverage of question sets")
    p.add_argument("--questions", nargs="+", required=True)
    p.add_argument("--key-terms", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("agreement", help="annotator agreement from an annotation log")
    p.add_argument("--log", required=True)
    p.add_argument("--eval", required=True)
    p.add_argument("--questions", nargs="+", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("report", help="combined coverage + agreement report")
    p.add_argument("--log", required=True)
    p.add_argument("--eval", required=True)
    p.add_argument("--questions", nargs="+", required=True)
    p.add_argument("--key-terms")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the annotation service")
    p.add_argument("--eval", required=True)
    p.add_argument("--questions", nargs="+", required=True)
    p.add_argument("--log", required=True)
    p.add_argument("--annotators", default="A1,A2,A3")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
