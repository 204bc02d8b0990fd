"""HTML block segmentation and text cleanup.

A web page is decomposed into blocks scoped by ``table``, ``p``, and ``div``
elements. Blocks are the topical unit everything downstream scores, so the
segmentation rules matter:

- Every visible text node belongs to its *nearest* open segmenting element.
  A ``<div>`` wrapper therefore never swallows the ``<p>`` children that carry
  the actual text: the split happens at the deepest segmenting elements that
  directly contain text.
- Visible text outside any segmenting element is collected into one synthetic
  block appended after the element blocks.
- Heading (``h1``-``h6``), ``br``, ``hr``, ``li`` and ``tr`` boundaries are
  kept as explicit sentence breaks (rendered as ``"\\n"``) so that later
  duplicate-sentence elimination does not merge a heading into its body text.
- Markup is repaired permissively: unclosed elements are closed at end of
  input, a new segmenting element closes an open ``<p>``, and stray end tags
  are ignored. The only hard failure is an undecodable byte stream.
- ``script``/``style``/``head`` content is invisible and never extracted.

Per block we count visible (non-whitespace) characters inside and outside
anchor elements; the link-to-text ratio built from those counts is the noise
signal used to drop navigational blocks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from html.parser import HTMLParser
from pathlib import Path

from .errors import ParseError
from .stopwords import DEFAULT_STOPWORDS

SEGMENT_TAGS = {"table", "p", "div"}
TAG_KINDS = {"table": "table", "p": "paragraph", "div": "div"}
BREAK_TAGS = {"h1", "h2", "h3", "h4", "h5", "h6", "br", "hr", "li", "tr", "td", "th"}
INVISIBLE_TAGS = {"script", "style", "noscript", "template", "head", "title"}
VOID_TAGS = {"br", "hr", "img", "input", "meta", "link", "area", "base", "col", "embed", "source", "track", "wbr"}

# Private-use sentinel standing in for a retained heading/paragraph boundary
# until whitespace collapsing turns it into a single "\n".
BREAK_MARK = ""

_WS_RUN = re.compile(r"\s+")
_BREAK_RUN = re.compile(f" ?(?:{BREAK_MARK} ?)+")
_TOKEN = re.compile(r"[^\W_]+")
_SENTENCE_SPLIT = re.compile(r"([.!?]|\n)")


@dataclass(frozen=True)
class RawDocument:
    """A parsed document ready for segmentation."""

    doc_id: str
    source_path: str | None
    raw: bytes
    markup: str


@dataclass(frozen=True)
class Block:
    """One structural segment of a page.

    ``segments`` preserves the linked/unlinked interleaving needed to drop
    anchor text later; a ``(BREAK_MARK, False)`` entry marks a retained
    heading or paragraph boundary. ``text`` is the full clean rendering,
    anchors included.
    """

    index: int
    tag_kind: str
    linked_chars: int
    unlinked_chars: int
    text: str
    segments: tuple[tuple[str, bool], ...] = field(repr=False)


def parse_document(raw: bytes, doc_id: str, source_path: str | Path | None = None) -> RawDocument:
    """Decode raw bytes into a document; rejects empty or undecodable input.

    Numeric character references (hex or decimal) in the markup are decoded
    to their code points during segmentation, so multilingual content stored
    as character references survives extraction.
    """
    if not raw:
        raise ParseError(f"{doc_id}: empty document")
    try:
        markup = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{doc_id}: undecodable byte stream ({exc})") from exc
    return RawDocument(
        doc_id=doc_id,
        source_path=str(source_path) if source_path is not None else None,
        raw=raw,
        markup=markup,
    )


class _Accumulator:
    __slots__ = ("tag_kind", "segments")

    def __init__(self, tag_kind: str):
        self.tag_kind = tag_kind
        self.segments: list[tuple[str, bool]] = []

    def has_text(self) -> bool:
        return any(seg != BREAK_MARK and seg.strip() for seg, _ in self.segments)


class _BlockWalker(HTMLParser):
    """Event-driven walker assigning text to its nearest segmenting element."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        # stack frames: (tag, accumulator-or-None for non-segmenting tags)
        self.stack: list[tuple[str, _Accumulator | None]] = []
        self.accumulators: list[_Accumulator] = []
        self.synthetic = _Accumulator("synthetic")
        self.anchor_depth = 0
        self.invisible_depth = 0

    def _target(self) -> _Accumulator:
        for _, acc in reversed(self.stack):
            if acc is not None:
                return acc
        return self.synthetic

    def _append(self, text: str):
        if self.invisible_depth == 0 and text:
            self._target().segments.append((text, self.anchor_depth > 0))

    def handle_starttag(self, tag, attrs):
        if tag in INVISIBLE_TAGS:
            self.invisible_depth += 1
            return
        if tag == "a":
            self.anchor_depth += 1
            return
        if tag in SEGMENT_TAGS:
            # A new segmenting element closes an open <p>: paragraphs do not
            # nest, and real pages rely on that implicit close.
            for i in range(len(self.stack) - 1, -1, -1):
                if self.stack[i][1] is not None:
                    if self.stack[i][0] == "p":
                        del self.stack[i:]
                    break
            # The nested element is a paragraph boundary in its parent's flow.
            self._append(BREAK_MARK)
            acc = _Accumulator(TAG_KINDS[tag])
            self.accumulators.append(acc)
            self.stack.append((tag, acc))
            return
        if tag in BREAK_TAGS:
            self._append(BREAK_MARK)
        if tag not in VOID_TAGS:
            self.stack.append((tag, None))

    def handle_endtag(self, tag):
        if tag in INVISIBLE_TAGS:
            self.invisible_depth = max(0, self.invisible_depth - 1)
            return
        if tag == "a":
            self.anchor_depth = max(0, self.anchor_depth - 1)
            return
        if tag in BREAK_TAGS:
            self._append(BREAK_MARK)
        for i in range(len(self.stack) - 1, -1, -1):
            if self.stack[i][0] == tag:
                del self.stack[i:]
                if tag in SEGMENT_TAGS:
                    self._append(BREAK_MARK)
                return
        # stray end tag: ignore

    def handle_data(self, data):
        self._append(data.replace(BREAK_MARK, ""))


def _render(segments, include_linked: bool) -> str:
    parts = []
    for text, linked in segments:
        if text == BREAK_MARK:
            parts.append(BREAK_MARK)
        elif include_linked or not linked:
            parts.append(text)
    joined = _WS_RUN.sub(" ", "".join(parts))
    return _BREAK_RUN.sub("\n", joined).strip(" \n")


def _count_visible(segments, linked: bool) -> int:
    return sum(
        len(text) - sum(ch.isspace() for ch in text)
        for text, is_linked in segments
        if text != BREAK_MARK and is_linked == linked
    )


def segment_blocks(doc: RawDocument) -> list[Block]:
    """Split a document into blocks, one per text-bearing segmenting element.

    Stray text outside every ``table``/``p``/``div`` becomes a trailing
    synthetic block; a tag-free document therefore yields exactly one block.
    Elements without directly contained text produce no block.
    """
    walker = _BlockWalker()
    walker.feed(doc.markup)
    walker.close()

    ordered = [acc for acc in walker.accumulators if acc.has_text()]
    if walker.synthetic.has_text():
        ordered.append(walker.synthetic)

    blocks = []
    for index, acc in enumerate(ordered):
        segments = tuple(acc.segments)
        blocks.append(
            Block(
                index=index,
                tag_kind=acc.tag_kind,
                linked_chars=_count_visible(segments, linked=True),
                unlinked_chars=_count_visible(segments, linked=False),
                text=_render(segments, include_linked=True),
                segments=segments,
            )
        )
    return blocks


def link_to_text_ratio(block: Block) -> float:
    """Fraction of the block's visible characters that sit inside anchors."""
    total = block.linked_chars + block.unlinked_chars
    if total == 0:
        return 0.0
    return block.linked_chars / total


def extract_block_text(block: Block, threshold: float = 0.5) -> str:
    """Clean text of a block, skipping anchor text in link-heavy blocks.

    When the link-to-text ratio exceeds ``threshold`` the hyperlinked text is
    dropped and only the remaining body text is returned; an empty result
    signals a navigational noise block the caller should discard.
    """
    include_linked = link_to_text_ratio(block) <= threshold
    return _render(block.segments, include_linked=include_linked)


def _collapse_repeated_phrases(tokens: list[str], min_len: int = 3) -> list[str]:
    # Immediately repeated phrase of >= min_len tokens collapses to one
    # occurrence; longest candidates first, rescanning until stable.
    changed = True
    while changed:
        changed = False
        for length in range(len(tokens) // 2, min_len - 1, -1):
            for i in range(len(tokens) - 2 * length + 1):
                first = [t.casefold() for t in tokens[i : i + length]]
                second = [t.casefold() for t in tokens[i + length : i + 2 * length]]
                if first == second:
                    del tokens[i + length : i + 2 * length]
                    changed = True
                    break
            if changed:
                break
    return tokens


def dedupe_sentences(text: str) -> str:
    """Drop repeated sentences and immediately repeated in-sentence phrases.

    Sentences are delimited by terminal punctuation or a retained boundary
    marker. A normalized (case-folded, whitespace-collapsed) sentence seen
    once is removed on every later occurrence; inside a sentence a phrase of
    three or more tokens immediately repeating collapses to one occurrence.
    Idempotent: applying it twice changes nothing further.
    """
    pieces = _SENTENCE_SPLIT.split(text)
    kept: list[tuple[str, str]] = []
    seen: set[str] = set()
    for i in range(0, len(pieces), 2):
        delim = pieces[i + 1] if i + 1 < len(pieces) else ""
        tokens = pieces[i].split()
        if not tokens:
            continue
        tokens = _collapse_repeated_phrases(tokens)
        sentence = " ".join(tokens)
        key = sentence.casefold()
        if key in seen:
            continue
        seen.add(key)
        kept.append((sentence, delim))

    out: list[str] = []
    for j, (sentence, delim) in enumerate(kept):
        out.append(sentence)
        if delim == "\n":
            out.append("\n")
        elif delim:
            out.append(delim)
            if j + 1 < len(kept):
                out.append(" ")
    return "".join(out)


def tokenize(text: str, stop_words: frozenset[str] | None = None) -> list[str]:
    """Case-folded, punctuation-free tokens in document order, stop words removed."""
    stops = DEFAULT_STOPWORDS if stop_words is None else stop_words
    return [t for t in _TOKEN.findall(text.casefold()) if t not in stops]
