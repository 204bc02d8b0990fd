"""Query answering: lexical candidate retrieval, then affordance re-ranking.

Stage one scores query tokens against each case's problem description with a
coord * sum(tf * idf^2 * norm) formula over exact term matches and keeps the
top-k nonzero scorers. Stage two compares the query's affordance vector with
each candidate's by cosine and orders the pool by

    final = alpha * minmax(baseline over pool) + (1 - alpha) * cosine

so alpha = 0 is the pure affordance ordering and alpha = 1 reproduces the
baseline ordering exactly.

All term iteration during score summation is in sorted order: float addition
is not associative, and a fixed order is what makes ranking byte-stable
across runs and worker counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .affordance import AffordanceVector, cosine_sim
from .casebase import Case, CaseBase, selection_idf
from .errors import CaseBaseBuildError, InputError


@dataclass
class Query:
    """A parsed topic: tokenized title/desc plus the raw narrative, stored unused."""

    query_id: str
    title: list[str]
    desc: list[str] = field(default_factory=list)
    narr: str = ""


@dataclass
class InvertedIndex:
    # postings: term -> [(case ordinal, tf)] sorted by ordinal
    postings: dict[str, list[tuple[int, int]]]
    doc_norms: list[float]
    n_cases: int
    ordinals: dict[str, int]
    case_tfs: list[dict[str, int]]

    def idf(self, term: str) -> float:
        df = len(self.postings.get(term, ()))
        return 1.0 + math.log(self.n_cases / (df + 1.0))


class Candidate(NamedTuple):
    case: Case
    baseline_score: float


@dataclass
class ResultEntry:
    doc_id: str
    baseline_score: float
    affordance_cosine: float
    final_score: float
    baseline_rank: int
    final_rank: int


@dataclass
class RankedResult:
    entries: list[ResultEntry]


def build_index(cb: CaseBase) -> InvertedIndex:
    """Inverted index over problem-description terms.

    Term frequencies are recovered from the stored weights (weight divided by
    the term's selection idf gives back the build-time count exactly, since
    weights are quantized well past integer resolution).
    """
    if not cb.cases:
        raise CaseBaseBuildError("cannot index an empty case base")
    postings: dict[str, list[tuple[int, int]]] = {}
    case_tfs: list[dict[str, int]] = []
    ordinals: dict[str, int] = {}
    doc_norms: list[float] = []
    for ordinal, case in enumerate(cb.cases):
        ordinals[case.doc_id] = ordinal
        doc_norms.append(1.0 / math.sqrt(len(case.prob_desc)))
        tfs: dict[str, int] = {}
        for term in sorted(case.prob_desc):
            tf = max(1, round(case.prob_desc[term] / selection_idf(term, cb.corpus_stats)))
            tfs[term] = tf
            postings.setdefault(term, []).append((ordinal, tf))
        case_tfs.append(tfs)
    return InvertedIndex(
        postings=postings,
        doc_norms=doc_norms,
        n_cases=len(cb.cases),
        ordinals=ordinals,
        case_tfs=case_tfs,
    )


def baseline_score(q_tokens: list[str], case: Case, index: InvertedIndex) -> float:
    """Lexical score of one case: coord(q,c) * sum over matched terms of
    tf * idf^2 * norm, with query terms counted once each."""
    q_terms = sorted(set(q_tokens))
    if not q_terms:
        return 0.0
    ordinal = index.ordinals[case.doc_id]
    tfs = index.case_tfs[ordinal]
    matched = [t for t in q_terms if t in tfs]
    if not matched:
        return 0.0
    coord = len(matched) / len(q_terms)
    total = 0.0
    for t in matched:
        total += tfs[t] * index.idf(t) ** 2 * index.doc_norms[ordinal]
    return coord * total


def retrieve_top_k(q_tokens: list[str], index: InvertedIndex, cb: CaseBase, k: int) -> list[Candidate]:
    """Top-k cases by baseline score via the posting lists.

    Only cases with a nonzero score qualify, so fewer than k candidates may
    come back. Ties break by ascending doc_id. Equivalent to scoring every
    case directly and sorting.
    """
    if k < 1:
        raise InputError("k must be >= 1")
    q_terms = sorted(set(q_tokens))
    if not q_terms:
        return []
    sums: dict[int, float] = {}
    matches: dict[int, int] = {}
    for t in q_terms:
        postings = index.postings.get(t)
        if not postings:
            continue
        idf_sq = index.idf(t) ** 2
        for ordinal, tf in postings:
            sums[ordinal] = sums.get(ordinal, 0.0) + tf * idf_sq * index.doc_norms[ordinal]
            matches[ordinal] = matches.get(ordinal, 0) + 1
    scored = [
        Candidate(case=cb.cases[ordinal], baseline_score=(matches[ordinal] / len(q_terms)) * total)
        for ordinal, total in sums.items()
    ]
    scored.sort(key=lambda c: (-c.baseline_score, c.case.doc_id))
    return scored[:k]


def rerank(
    candidates: list[Candidate],
    query_av: AffordanceVector,
    cb: CaseBase,
    alpha: float = 0.0,
    use_revised: bool = False,
) -> RankedResult:
    """Order the candidate pool by blended affordance/baseline score.

    ``candidates`` must arrive baseline-sorted (as retrieve_top_k returns
    them); their positions define baseline_rank. The baseline component is
    min-max normalized over the pool (a constant pool contributes 0). The
    result is a permutation of the input pool.
    """
    if not 0.0 <= alpha <= 1.0:
        raise InputError("alpha must lie in [0, 1]")
    if not candidates:
        return RankedResult(entries=[])
    scores = [c.baseline_score for c in candidates]
    lo, hi = min(scores), max(scores)
    span = hi - lo
    entries = []
    for i, cand in enumerate(candidates):
        av = cand.case.av_revised if use_revised else cand.case.av
        cosine = cosine_sim(query_av, av)
        norm_baseline = (cand.baseline_score - lo) / span if span > 0 else 0.0
        entries.append(
            ResultEntry(
                doc_id=cand.case.doc_id,
                baseline_score=cand.baseline_score,
                affordance_cosine=cosine,
                final_score=alpha * norm_baseline + (1.0 - alpha) * cosine,
                baseline_rank=i + 1,
                final_rank=0,
            )
        )
    entries.sort(key=lambda e: (-e.final_score, e.doc_id))
    for rank, entry in enumerate(entries, start=1):
        entry.final_rank = rank
    return RankedResult(entries=entries)
