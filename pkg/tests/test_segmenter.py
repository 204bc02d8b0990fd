"""Block segmentation, noise filtering, and text cleanup."""

from __future__ import annotations

import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affret import (
    ParseError,
    dedupe_sentences,
    extract_block_text,
    link_to_text_ratio,
    parse_document,
    segment_blocks,
    tokenize,
)

from conftest import fuzz_html

MARKUP_LEAK = re.compile(r"<[a-zA-Z/!]")


def blocks_of(markup: str):
    return segment_blocks(parse_document(markup.encode("utf-8"), "t"))


class TestParseDocument:
    def test_minimal_well_formed(self):
        doc = parse_document(b"<p>hi</p>", "d1")
        assert doc.doc_id == "d1"
        assert doc.markup == "<p>hi</p>"

    def test_hex_character_reference_decodes(self):
        doc = parse_document(b"<p>&#x41;</p>", "d2")
        blocks = segment_blocks(doc)
        assert [b.text for b in blocks] == ["A"]

    def test_decimal_character_reference_decodes(self):
        blocks = blocks_of("<p>&#2309;</p>")
        assert [b.text for b in blocks] == ["अ"]

    def test_empty_bytes_rejected(self):
        with pytest.raises(ParseError):
            parse_document(b"", "d3")

    def test_undecodable_bytes_name_the_document(self):
        with pytest.raises(ParseError, match="bad-doc"):
            parse_document(b"\xff\xfe\xfa", "bad-doc")


class TestSegmentBlocks:
    def test_two_disjoint_segments(self):
        blocks = blocks_of("<div>a</div><p>b</p>")
        assert [b.text for b in blocks] == ["a", "b"]
        assert [b.tag_kind for b in blocks] == ["div", "paragraph"]
        assert [b.index for b in blocks] == [0, 1]

    def test_bare_text_yields_synthetic_block(self):
        blocks = blocks_of("plain text only")
        assert len(blocks) == 1
        assert blocks[0].tag_kind == "synthetic"
        assert blocks[0].text == "plain text only"

    def test_nested_paragraphs_split_at_deepest(self):
        blocks = blocks_of("<div><p>x</p><p>y</p></div>")
        assert [b.text for b in blocks] == ["x", "y"]
        assert all(b.tag_kind == "paragraph" for b in blocks)

    def test_wrapper_text_around_nested_paragraph_stays_with_wrapper(self):
        blocks = blocks_of("<div>intro<p>x</p>end</div>")
        assert [b.text for b in blocks] == ["intro\nend", "x"]

    def test_table_cells_do_not_glue_words(self):
        blocks = blocks_of("<table><tr><td>cell one</td><td>cell two</td></tr></table>")
        assert blocks[0].text == "cell one\ncell two"

    def test_trailing_text_outside_tags_forms_synthetic_block(self):
        blocks = blocks_of("<p>body</p>loose tail")
        assert [b.text for b in blocks] == ["body", "loose tail"]
        assert blocks[1].tag_kind == "synthetic"

    def test_unclosed_tags_are_repaired(self):
        blocks = blocks_of("<div>open forever<p>inner")
        assert [b.text for b in blocks] == ["open forever", "inner"]

    def test_new_segmenting_tag_closes_open_paragraph(self):
        blocks = blocks_of("<p>first<p>second</p>")
        assert [b.text for b in blocks] == ["first", "second"]

    def test_stray_end_tags_ignored(self):
        blocks = blocks_of("</div></p><p>fine</p>")
        assert [b.text for b in blocks] == ["fine"]

    def test_script_and_style_are_invisible(self):
        blocks = blocks_of("<p>keep</p><script>var beach = 1;</script><style>p{}</style>")
        assert [b.text for b in blocks] == ["keep"]

    def test_headings_become_sentence_breaks(self):
        blocks = blocks_of("<div><h2>Goa</h2>beaches here</div>")
        assert blocks[0].text == "Goa\nbeaches here"

    def test_deterministic(self):
        markup = fuzz_html(7)
        doc = parse_document(markup.encode("utf-8"), "t")
        assert segment_blocks(doc) == segment_blocks(doc)


class TestLinkToTextRatio:
    def test_no_anchors(self):
        (block,) = blocks_of("<p>12345</p>")
        assert block.linked_chars == 0
        assert block.unlinked_chars == 5
        assert link_to_text_ratio(block) == 0.0

    def test_all_anchor_block(self):
        (block,) = blocks_of('<p><a href="#">12345</a></p>')
        assert link_to_text_ratio(block) == 1.0

    def test_quarter_linked(self):
        (block,) = blocks_of('<p><a href="#">ab</a> cdefgh</p>')
        assert block.linked_chars == 2
        assert block.unlinked_chars == 6
        assert link_to_text_ratio(block) == 0.25

    def test_empty_block_counts_as_zero(self):
        # only whitespace: both counts zero, ratio pinned to 0
        blocks = blocks_of("<p>   </p><p>real</p>")
        assert all(0.0 <= link_to_text_ratio(b) <= 1.0 for b in blocks)


class TestExtractBlockText:
    def test_below_threshold_unchanged(self):
        (block,) = blocks_of("<p>goa beach</p>")
        assert link_to_text_ratio(block) == 0.0
        assert extract_block_text(block, 0.5) == "goa beach"

    def test_pure_link_block_empties(self):
        (block,) = blocks_of('<p><a href="#">home about contact</a></p>')
        assert link_to_text_ratio(block) == 1.0
        assert extract_block_text(block, 0.5) == ""

    def test_link_heavy_block_keeps_only_body_text(self):
        anchor = "home about contact sitemap navigation bookmarks search"
        (block,) = blocks_of(f'<p><a href="#">{anchor}</a> beach resorts</p>')
        assert link_to_text_ratio(block) == pytest.approx(0.8)
        assert extract_block_text(block, 0.5) == "beach resorts"

    def test_threshold_boundary_keeps_anchors(self):
        # ratio equal to tau is not "more": anchors stay
        (block,) = blocks_of('<p><a href="#">abcd</a> efgh</p>')
        assert link_to_text_ratio(block) == 0.5
        assert extract_block_text(block, 0.5) == "abcd efgh"


class TestDedupeSentences:
    def test_exact_duplicate_sentence(self):
        assert dedupe_sentences("A b. A b.") == "A b."

    def test_first_occurrence_wins(self):
        assert dedupe_sentences("x. y. x.") == "x. y."

    def test_phrase_collapse(self):
        assert dedupe_sentences("visit goa beach visit goa beach now.") == "visit goa beach now."

    def test_two_token_repeat_is_kept(self):
        # phrase collapse needs three or more tokens
        assert dedupe_sentences("goa beach goa beach.") == "goa beach goa beach."

    def test_case_folded_matching(self):
        assert dedupe_sentences("Goa Beach. goa beach.") == "Goa Beach."

    def test_newline_boundaries_count_as_sentence_ends(self):
        assert dedupe_sentences("heading\nheading\nbody") == "heading\nbody"

    @given(st.integers(min_value=0, max_value=500))
    @settings(max_examples=60, deadline=None)
    def test_idempotent_on_fuzz_blocks(self, seed):
        doc = parse_document(fuzz_html(seed).encode("utf-8"), "f")
        for block in segment_blocks(doc):
            once = dedupe_sentences(extract_block_text(block, 0.5))
            assert dedupe_sentences(once) == once


class TestTokenize:
    def test_stop_words_removed(self):
        assert tokenize("The Taj Mahal") == ["taj", "mahal"]

    def test_empty_input(self):
        assert tokenize("") == []

    def test_punctuation_stripped_repeats_preserved(self):
        assert tokenize("beach, beach!") == ["beach", "beach"]

    def test_custom_stop_word_list(self):
        assert tokenize("the beach", stop_words=frozenset({"beach"})) == ["the"]

    def test_underscore_is_not_a_word_character(self):
        assert tokenize("goa_beach") == ["goa", "beach"]


class _VisibleCounter:
    """Independent count of visible non-whitespace characters."""

    def __init__(self, markup: str):
        from html.parser import HTMLParser

        class P(HTMLParser):
            def __init__(self):
                super().__init__(convert_charrefs=True)
                self.depth = 0
                self.count = 0

            def handle_starttag(self, tag, attrs):
                if tag in ("script", "style", "noscript", "template", "head", "title"):
                    self.depth += 1

            def handle_endtag(self, tag):
                if tag in ("script", "style", "noscript", "template", "head", "title"):
                    self.depth = max(0, self.depth - 1)

            def handle_data(self, data):
                if self.depth == 0:
                    self.count += sum(1 for ch in data if not ch.isspace() and ch != "")

        p = P()
        p.feed(markup)
        p.close()
        self.count = p.count


class TestFuzzProperties:
    @given(st.integers(min_value=0, max_value=2000))
    @settings(max_examples=120, deadline=None)
    def test_ratio_bounds_and_no_markup_leakage(self, seed):
        markup = fuzz_html(seed)
        doc = parse_document(markup.encode("utf-8"), "f")
        blocks = segment_blocks(doc)
        for block in blocks:
            assert 0.0 <= link_to_text_ratio(block) <= 1.0
            for threshold in (0.0, 0.5, 1.0):
                assert not MARKUP_LEAK.search(extract_block_text(block, threshold))
            assert not MARKUP_LEAK.search(block.text)

    @given(st.integers(min_value=0, max_value=2000))
    @settings(max_examples=120, deadline=None)
    def test_char_counts_bounded_by_document_total(self, seed):
        markup = fuzz_html(seed)
        doc = parse_document(markup.encode("utf-8"), "f")
        blocks = segment_blocks(doc)
        total = sum(b.linked_chars + b.unlinked_chars for b in blocks)
        assert total <= _VisibleCounter(markup).count

    @given(st.integers(min_value=0, max_value=2000))
    @settings(max_examples=60, deadline=None)
    def test_block_indices_contiguous(self, seed):
        doc = parse_document(fuzz_html(seed).encode("utf-8"), "f")
        blocks = segment_blocks(doc)
        assert [b.index for b in blocks] == list(range(len(blocks)))
