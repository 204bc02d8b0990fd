"""Topic lexicon: ordered topics with term sets that drive affordance scoring.

File format, one topic per line, ``#`` comments allowed:

    Beaches<TAB>beach,sand,shore,hill station
    Miscellaneous<TAB>*

``*`` marks the single catch-all topic whose count is the number of token
occurrences matching no other topic. Topic order is significant: element i of
every affordance vector refers to topic i for the life of a case base.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InputError, LexiconFormatError

_TERM_TOKEN = re.compile(r"[^\W_]+")


def _term_tokens(term: str) -> tuple[str, ...]:
    return tuple(_TERM_TOKEN.findall(term.casefold()))


@dataclass
class Topic:
    name: str
    terms: frozenset[str]
    miscellaneous: bool = False
    # n-gram lookup tables keyed by phrase length, built on first use
    _ngrams: dict[int, set[tuple[str, ...]]] | None = field(
        default=None, repr=False, compare=False
    )

    def ngrams(self) -> dict[int, set[tuple[str, ...]]]:
        if self._ngrams is None:
            table: dict[int, set[tuple[str, ...]]] = {}
            for term in self.terms:
                toks = _term_tokens(term)
                table.setdefault(len(toks), set()).add(toks)
            self._ngrams = table
        return self._ngrams


@dataclass
class Lexicon:
    topics: list[Topic]

    def __post_init__(self):
        if not self.topics:
            raise LexiconFormatError("lexicon has no topics")
        names = [t.name for t in self.topics]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise LexiconFormatError(f"duplicate topic name: {dup!r}")
        misc = [t for t in self.topics if t.miscellaneous]
        if len(misc) > 1:
            raise LexiconFormatError("more than one miscellaneous topic")
        for t in self.topics:
            if t.miscellaneous and t.terms:
                raise LexiconFormatError(f"miscellaneous topic {t.name!r} must have no terms")
            if not t.miscellaneous and not t.terms:
                raise LexiconFormatError(f"topic {t.name!r} has no terms")

    @property
    def m(self) -> int:
        return len(self.topics)

    def fingerprint(self) -> str:
        """Stable hash binding a case base to this exact lexicon."""
        return hashlib.sha256(serialize_lexicon(self).encode("utf-8")).hexdigest()

    def match_counts(self, tokens: list[str]) -> list[int]:
        """Per-topic matched-occurrence counts for an already tokenized text.

        Each named topic counts its term occurrences (multiplicity included,
        phrases matched longest-first over contiguous tokens); the
        miscellaneous topic counts the token occurrences no named topic
        matched.
        """
        folded = [t.casefold() for t in tokens]
        counts = [0] * len(self.topics)
        matched_anywhere: set[int] = set()
        for i, topic in enumerate(self.topics):
            if topic.miscellaneous:
                continue
            count, consumed = _scan(folded, topic.ngrams())
            counts[i] = count
            matched_anywhere |= consumed
        for i, topic in enumerate(self.topics):
            if topic.miscellaneous:
                counts[i] = len(folded) - len(matched_anywhere)
        return counts


def _scan(tokens: list[str], ngrams: dict[int, set[tuple[str, ...]]]) -> tuple[int, set[int]]:
    lengths = sorted(ngrams, reverse=True)
    count = 0
    consumed: set[int] = set()
    i = 0
    while i < len(tokens):
        for length in lengths:
            if i + length <= len(tokens) and tuple(tokens[i : i + length]) in ngrams[length]:
                count += 1
                consumed.update(range(i, i + length))
                i += length
                break
        else:
            i += 1
    return count, consumed


def match_count(tokens: list[str], topic: Topic, lexicon: Lexicon | None = None) -> int:
    """Occurrences of a topic's terms in a token list, multiplicity included.

    For the miscellaneous topic the count is complementary (tokens matching
    no other topic), which requires the owning lexicon.
    """
    if topic.miscellaneous:
        if lexicon is None:
            raise InputError("miscellaneous match_count needs the owning lexicon")
        index = next(i for i, t in enumerate(lexicon.topics) if t.miscellaneous)
        return lexicon.match_counts(tokens)[index]
    count, _ = _scan([t.casefold() for t in tokens], topic.ngrams())
    return count


def _canonical_terms(raw_terms: str, topic_name: str) -> frozenset[str]:
    terms = set()
    for piece in raw_terms.split(","):
        piece = piece.strip()
        if not piece:
            continue
        toks = _term_tokens(piece)
        if not toks:
            raise LexiconFormatError(f"topic {topic_name!r}: term {piece!r} has no word characters")
        terms.add(" ".join(toks))
    return frozenset(terms)


def load_lexicon(path: str | Path) -> Lexicon:
    """Parse a lexicon file; terms are case-folded and deduplicated per topic."""
    topics: list[Topic] = []
    with open(path, encoding="utf-8") as fin:
        for lineno, line in enumerate(fin, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if "\t" not in line:
                raise LexiconFormatError(f"line {lineno}: expected 'name<TAB>terms'")
            name, _, raw_terms = line.partition("\t")
            name = name.strip()
            if not name:
                raise LexiconFormatError(f"line {lineno}: empty topic name")
            if raw_terms.strip() == "*":
                topics.append(Topic(name=name, terms=frozenset(), miscellaneous=True))
            else:
                topics.append(Topic(name=name, terms=_canonical_terms(raw_terms, name)))
    return Lexicon(topics=topics)


def serialize_lexicon(lexicon: Lexicon) -> str:
    """Canonical text form: topic order preserved, terms sorted."""
    lines = []
    for topic in lexicon.topics:
        body = "*" if topic.miscellaneous else ",".join(sorted(topic.terms))
        lines.append(f"{topic.name}\t{body}")
    return "\n".join(lines) + "\n"


def save_lexicon(lexicon: Lexicon, path: str | Path) -> None:
    Path(path).write_text(serialize_lexicon(lexicon), encoding="utf-8")
