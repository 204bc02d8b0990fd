"""Case base construction and persistence.

One case per admitted document: a problem description (the top-k
discriminative terms of each block, weighted by block-local tf-idf) plus a
solution (the document's affordance vector and id). The build is two-pass so
document frequencies exist before term selection; pass order is sorted by
doc_id, which makes rebuilds bit-identical.

Persistence is line-delimited JSON with sorted keys and floats quantized to
12 significant digits *at construction time*, so the in-memory case base and
its file round-trip losslessly and rebuilds compare byte-for-byte.
"""

from __future__ import annotations

import json
import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .affordance import AffordanceVector, compute_block_affordance, compute_doc_affordance, normalize_av
from .errors import CaseBaseBuildError, CaseBaseFormatError, CompatibilityError, DimensionError, InputError, ParseError
from .lexicon import Lexicon, Topic
from .segmenter import RawDocument, dedupe_sentences, extract_block_text, parse_document, segment_blocks, tokenize

logger = logging.getLogger(__name__)


def round12(x: float) -> float:
    """Quantize to 12 significant digits (the serialization precision)."""
    return float(f"{x:.12g}")


@dataclass
class BuildConfig:
    """Pipeline dials; defaults match the CLI."""

    k_terms: int = 20
    tau: float = 0.5
    k_retrieve: int = 10
    alpha: float = 0.0
    eta: float = 0.0

    def __post_init__(self):
        if self.k_terms < 1:
            raise InputError("k_terms must be >= 1")
        if not 0.0 <= self.tau <= 1.0:
            raise InputError("tau must lie in [0, 1]")
        if self.k_retrieve < 1:
            raise InputError("k_retrieve must be >= 1")
        if not 0.0 <= self.alpha <= 1.0:
            raise InputError("alpha must lie in [0, 1]")
        if not 0.0 <= self.eta <= 1.0:
            raise InputError("eta must lie in [0, 1]")


@dataclass
class CorpusStats:
    df: dict[str, int]
    n_cases: int


@dataclass
class Case:
    doc_id: str
    prob_desc: dict[str, float]
    av: AffordanceVector
    av_revised: AffordanceVector


@dataclass
class CaseBase:
    lexicon_fingerprint: str
    cases: list[Case]
    corpus_stats: CorpusStats
    lexicon: Lexicon
    config: BuildConfig
    _by_id: dict[str, Case] = field(default=None, repr=False, compare=False)

    def case(self, doc_id: str) -> Case:
        if self._by_id is None:
            self._by_id = {c.doc_id: c for c in self.cases}
        return self._by_id[doc_id]


def selection_idf(term: str, stats: CorpusStats) -> float:
    """Smoothed idf used for discriminative-term selection."""
    return math.log(1.0 + stats.n_cases / (1.0 + stats.df.get(term, 0)))


def select_top_k_terms(tokens: list[str], corpus_stats: CorpusStats, k: int) -> list[tuple[str, float]]:
    """The k distinct highest tf-idf terms of a block, ties broken by term order.

    tf is the in-block count; fewer than k distinct tokens returns them all.
    """
    tf = Counter(tokens)
    weighted = [(term, round12(count * selection_idf(term, corpus_stats))) for term, count in tf.items()]
    weighted.sort(key=lambda tw: (-tw[1], tw[0]))
    return weighted[:k]


def _block_token_lists(
    doc: RawDocument, tau: float, stop_words: frozenset[str] | None
) -> list[list[str]]:
    """Run segment -> link filter -> dedupe -> tokenize; noise blocks drop out."""
    token_lists = []
    for block in segment_blocks(doc):
        text = extract_block_text(block, tau)
        if not text:
            continue
        token_lists.append(tokenize(dedupe_sentences(text), stop_words))
    return token_lists


def _case_from_tokens(
    doc_id: str,
    block_tokens: list[list[str]],
    lexicon: Lexicon,
    config: BuildConfig,
    corpus_stats: CorpusStats,
) -> Case | None:
    selected: set[str] = set()
    max_tf: Counter = Counter()
    for tokens in block_tokens:
        for term, _ in select_top_k_terms(tokens, corpus_stats, config.k_terms):
            selected.add(term)
        for term, count in Counter(tokens).items():
            if count > max_tf[term]:
                max_tf[term] = count
    if not selected:
        return None
    prob_desc = {
        term: round12(max_tf[term] * selection_idf(term, corpus_stats))
        for term in sorted(selected)
    }
    block_avs = [compute_block_affordance(tokens, lexicon) for tokens in block_tokens]
    av = compute_doc_affordance(block_avs, m=lexicon.m)
    return Case(doc_id=doc_id, prob_desc=prob_desc, av=av, av_revised=list(av))


def build_case(
    doc: RawDocument,
    lexicon: Lexicon,
    config: BuildConfig,
    corpus_stats: CorpusStats,
    stop_words: frozenset[str] | None = None,
) -> Case | None:
    """Build one case, or None when every block filters out as noise."""
    block_tokens = _block_token_lists(doc, config.tau, stop_words)
    case = _case_from_tokens(doc.doc_id, block_tokens, lexicon, config, corpus_stats)
    if case is None:
        logger.info("skipping %s: no admissible text blocks", doc.doc_id)
    return case


def _corpus_files(corpus_dir: Path) -> list[tuple[str, Path]]:
    files = [
        (p.relative_to(corpus_dir).as_posix(), p)
        for p in corpus_dir.rglob("*")
        if p.is_file() and p.suffix.lower() in (".html", ".htm")
    ]
    files.sort(key=lambda item: item[0])
    return files


def populate_case_base(
    corpus_dir: str | Path,
    lexicon: Lexicon,
    config: BuildConfig,
    stop_words: frozenset[str] | None = None,
    workers: int = 1,
) -> CaseBase:
    """Two-pass batch build over a directory of .html/.htm files.

    Pass 1 tokenizes every document and accumulates document frequencies;
    pass 2 constructs cases in sorted doc_id order. Documents that fail to
    parse or contain no admissible text are skipped with a logged diagnostic.
    The worker count only parallelizes the per-document pipeline; outputs are
    identical for any worker count.
    """
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise InputError(f"corpus directory not found: {corpus_dir}")
    files = _corpus_files(corpus_dir)

    def pipeline(item: tuple[str, Path]) -> tuple[str, list[list[str]] | None]:
        doc_id, path = item
        try:
            doc = parse_document(path.read_bytes(), doc_id, source_path=path)
        except ParseError as exc:
            logger.warning("skipping %s: %s", doc_id, exc)
            return doc_id, None
        return doc_id, _block_token_lists(doc, config.tau, stop_words)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(pipeline, files))
    else:
        results = [pipeline(item) for item in files]

    df: Counter = Counter()
    n_cases = 0
    tokenized: list[tuple[str, list[list[str]]]] = []
    for doc_id, block_tokens in results:
        if block_tokens is None:
            continue
        doc_terms = {term for tokens in block_tokens for term in tokens}
        if not doc_terms:
            logger.info("skipping %s: no admissible text blocks", doc_id)
            continue
        df.update(doc_terms)
        n_cases += 1
        tokenized.append((doc_id, block_tokens))

    stats = CorpusStats(df=dict(df), n_cases=n_cases)
    cases = []
    for doc_id, block_tokens in tokenized:
        case = _case_from_tokens(doc_id, block_tokens, lexicon, config, stats)
        if case is not None:
            cases.append(case)
    if not cases:
        raise CaseBaseBuildError(f"no admissible cases in {corpus_dir}")
    return CaseBase(
        lexicon_fingerprint=lexicon.fingerprint(),
        cases=cases,
        corpus_stats=stats,
        lexicon=lexicon,
        config=config,
    )


def _dump(record: dict) -> str:
    return json.dumps(record, sort_keys=True) + "\n"


def save_case_base(cb: CaseBase, path: str | Path) -> None:
    """Write line-delimited JSON: header, one line per case, corpus stats, lexicon."""
    lines = [
        _dump(
            {
                "config": asdict(cb.config),
                "lexicon_fingerprint": cb.lexicon_fingerprint,
                "m": cb.lexicon.m,
                "N": cb.corpus_stats.n_cases,
            }
        )
    ]
    for case in cb.cases:
        lines.append(
            _dump(
                {
                    "doc_id": case.doc_id,
                    "prob_desc": [[t, round12(w)] for t, w in sorted(case.prob_desc.items())],
                    "av": [round12(v) for v in case.av],
                    "av_revised": [round12(v) for v in case.av_revised],
                }
            )
        )
    lines.append(_dump({"corpus_stats": {"df": cb.corpus_stats.df, "N": cb.corpus_stats.n_cases}}))
    lines.append(
        _dump(
            {
                "lexicon": {
                    "topics": [
                        {"name": t.name, "terms": sorted(t.terms), "miscellaneous": t.miscellaneous}
                        for t in cb.lexicon.topics
                    ]
                }
            }
        )
    )
    Path(path).write_text("".join(lines), encoding="utf-8")


def load_case_base(path: str | Path, lexicon: Lexicon | None = None) -> CaseBase:
    """Read a saved case base; verify fingerprint when an active lexicon is given."""
    try:
        raw_lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CaseBaseFormatError(f"cannot read case base: {exc}") from exc
    if not raw_lines:
        raise CaseBaseFormatError(f"{path}: empty case base file")

    def parse_line(line: str, lineno: int) -> dict:
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CaseBaseFormatError(f"{path}: line {lineno} is not valid JSON ({exc})") from exc
        if not isinstance(record, dict):
            raise CaseBaseFormatError(f"{path}: line {lineno} is not an object")
        return record

    header = parse_line(raw_lines[0], 1)
    required = {"config", "lexicon_fingerprint", "m", "N"}
    if not required.issubset(header):
        raise CaseBaseFormatError(f"{path}: header missing keys {sorted(required - set(header))}")
    try:
        config = BuildConfig(**header["config"])
    except (TypeError, InputError) as exc:
        raise CaseBaseFormatError(f"{path}: bad config in header ({exc})") from exc
    m = header["m"]

    cases: list[Case] = []
    stats: CorpusStats | None = None
    embedded: Lexicon | None = None
    for lineno, line in enumerate(raw_lines[1:], start=2):
        record = parse_line(line, lineno)
        if "doc_id" in record:
            try:
                case = Case(
                    doc_id=record["doc_id"],
                    prob_desc={t: float(w) for t, w in record["prob_desc"]},
                    av=[float(v) for v in record["av"]],
                    av_revised=[float(v) for v in record["av_revised"]],
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise CaseBaseFormatError(f"{path}: malformed case at line {lineno} ({exc})") from exc
            if len(case.av) != m or len(case.av_revised) != m:
                raise CaseBaseFormatError(
                    f"{path}: case {case.doc_id!r} has dimension {len(case.av)}, header says {m}"
                )
            cases.append(case)
        elif "corpus_stats" in record:
            body = record["corpus_stats"]
            stats = CorpusStats(df={t: int(v) for t, v in body["df"].items()}, n_cases=int(body["N"]))
        elif "lexicon" in record:
            embedded = Lexicon(
                topics=[
                    Topic(
                        name=t["name"],
                        terms=frozenset(t["terms"]),
                        miscellaneous=bool(t["miscellaneous"]),
                    )
                    for t in record["lexicon"]["topics"]
                ]
            )
        else:
            raise CaseBaseFormatError(f"{path}: unrecognized record at line {lineno}")

    if stats is None or embedded is None:
        raise CaseBaseFormatError(f"{path}: truncated case base (missing trailing records)")
    if embedded.m != m:
        raise CaseBaseFormatError(f"{path}: embedded lexicon dimension {embedded.m} != header m {m}")
    if embedded.fingerprint() != header["lexicon_fingerprint"]:
        raise CaseBaseFormatError(f"{path}: embedded lexicon does not match header fingerprint")
    if lexicon is not None:
        if lexicon.fingerprint() != header["lexicon_fingerprint"]:
            raise CompatibilityError(
                f"{path}: case base was built against a different lexicon "
                f"(m={m}, active m={lexicon.m})"
            )
    return CaseBase(
        lexicon_fingerprint=header["lexicon_fingerprint"],
        cases=cases,
        corpus_stats=stats,
        lexicon=embedded,
        config=config,
    )


def revise_case_affordance(case: Case, query_av: AffordanceVector, eta: float) -> Case:
    """Nudge the revised vector toward the query's affordance profile.

    The update adds ``eta * unit(query_av) * |av_revised|``, a step
    proportional to the vector's own length, so feedback strength scales with
    the case rather than with raw query counts. The stored raw counts in
    ``av`` are never touched; ``eta = 0`` disables feedback entirely.
    """
    if not 0.0 <= eta <= 1.0:
        raise InputError("eta must lie in [0, 1]")
    if len(query_av) != len(case.av_revised):
        raise DimensionError(f"dimension mismatch: {len(query_av)} vs {len(case.av_revised)}")
    if eta == 0.0:
        return case
    direction = normalize_av(query_av)
    scale = eta * math.hypot(*case.av_revised)
    case.av_revised = [round12(v + scale * d) for v, d in zip(case.av_revised, direction)]
    return case
