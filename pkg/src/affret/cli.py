"""Command-line front end: build a case base, query it, or run an eval batch.

Exit codes: 0 success, 1 bad input (unreadable files, malformed formats,
out-of-range parameters, usage errors), 2 unexpected internal failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .casebase import BuildConfig, load_case_base, populate_case_base, save_case_base
from .errors import AffretError
from .harness import emit_report, load_qrels, load_queries, run_experiment
from .lexicon import load_lexicon
from .retrieval import build_index, rerank, retrieve_top_k
from .affordance import compute_query_affordance
from .segmenter import tokenize
from .stopwords import load_stopwords

log = logging.getLogger("affret")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affret",
        description="Affordance-guided retrieval over block-segmented web pages.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="segment a corpus and persist its case base")
    build.add_argument("--corpus", required=True, help="directory of .html/.htm files")
    build.add_argument("--lexicon", required=True, help="topic lexicon file (TSV)")
    build.add_argument("--out", required=True, help="case base output path")
    build.add_argument("--k-terms", type=int, default=20, help="top terms kept per block (default 20)")
    build.add_argument("--tau", type=float, default=0.5, help="link-to-text noise threshold (default 0.5)")
    build.add_argument("--stopwords", default=None, help="optional stop-word file, one word per line")
    build.add_argument("--workers", type=int, default=1, help="parallel document workers (default 1)")

    query = sub.add_parser("query", help="run a single ad-hoc text query")
    query.add_argument("--cb", required=True, help="case base file from `build`")
    query.add_argument("--text", required=True, help="query text")
    query.add_argument("--k", type=int, default=10, help="candidate pool size (default 10)")
    query.add_argument("--alpha", type=float, default=0.0, help="blend weight: 0 pure affordance, 1 pure baseline")
    query.add_argument("--use-revised", action="store_true", help="compare against feedback-revised vectors")
    query.add_argument("--stopwords", default=None, help="optional stop-word file, one word per line")

    ev = sub.add_parser("eval", help="run a query batch and write CSV reports")
    ev.add_argument("--cb", required=True, help="case base file from `build`")
    ev.add_argument("--queries", required=True, help="topic file of <top> blocks")
    ev.add_argument("--out", required=True, help="report output directory")
    ev.add_argument("--k", type=int, default=10, help="candidate pool size (default 10)")
    ev.add_argument("--alpha", type=float, default=0.0, help="blend weight: 0 pure affordance, 1 pure baseline")
    ev.add_argument("--use-desc", action="store_true", help="append <desc> tokens to the title query")
    ev.add_argument("--qrels", default=None, help="relevance judgments for precision@k columns")
    ev.add_argument("--eta", type=float, default=0.0, help="feedback rate; > 0 revises top-k vectors per query")
    ev.add_argument("--stopwords", default=None, help="optional stop-word file, one word per line")
    ev.add_argument("--workers", type=int, default=1, help="parallel query workers, ignored when eta > 0")

    return parser


def _stop_words(path: str | None) -> frozenset[str] | None:
    return load_stopwords(path) if path else None


def _cmd_build(args: argparse.Namespace) -> int:
    config = BuildConfig(k_terms=args.k_terms, tau=args.tau)
    lexicon = load_lexicon(args.lexicon)
    cb = populate_case_base(
        args.corpus, lexicon, config, stop_words=_stop_words(args.stopwords), workers=args.workers
    )
    save_case_base(cb, args.out)
    log.info("wrote %d cases to %s", len(cb.cases), args.out)
    return 0


def _cmd_query(args: argparse.Namespace) -> int:
    cb = load_case_base(args.cb)
    config = BuildConfig(k_retrieve=args.k, alpha=args.alpha)
    index = build_index(cb)
    stop_words = _stop_words(args.stopwords)
    tokens = tokenize(args.text, stop_words)
    if not tokens:
        print("query is empty after stop-wording", file=sys.stderr)
        return 1
    pool = retrieve_top_k(tokens, index, cb, config.k_retrieve)
    if not pool:
        print("no matching cases")
        return 0
    query_av = compute_query_affordance(tokens, cb.lexicon)
    ranked = rerank(pool, query_av, cb, alpha=config.alpha, use_revised=args.use_revised)
    print(f"{'rank':>4}  {'doc_id':<40}  {'final':>9}  {'cosine':>8}  {'base_rank':>9}")
    for entry in ranked.entries:
        print(
            f"{entry.final_rank:>4}  {entry.doc_id:<40}  {entry.final_score:>9.6f}"
            f"  {entry.affordance_cosine:>8.6f}  {entry.baseline_rank:>9}"
        )
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    cb = load_case_base(args.cb)
    config = BuildConfig(k_retrieve=args.k, alpha=args.alpha, eta=args.eta)
    index = build_index(cb)
    stop_words = _stop_words(args.stopwords)
    queries = load_queries(args.queries, stop_words)
    qrels = load_qrels(args.qrels) if args.qrels else None
    report = run_experiment(
        cb, index, queries, config, use_desc=args.use_desc, qrels=qrels, workers=args.workers
    )
    rows_path, summary_path = emit_report(report, args.out)
    log.info("wrote %s and %s", rows_path, summary_path)
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; usage errors are input errors here
        code = exc.code if isinstance(exc.code, int) else 0
        return 1 if code != 0 else 0
    try:
        if args.command == "build":
            return _cmd_build(args)
        if args.command == "query":
            return _cmd_query(args)
        return _cmd_eval(args)
    except (AffretError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
