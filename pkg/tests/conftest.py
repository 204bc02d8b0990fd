"""Shared fixtures: small lexica, corpus builders, and a malformed-HTML fuzzer."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from affret import BuildConfig, Lexicon, Topic, populate_case_base

TOURISM_WORDS = [
    "beach", "sand", "surf", "temple", "shrine", "monastery", "trail",
    "summit", "ridge", "museum", "gallery", "curry", "spice", "bazaar",
    "festival", "lantern", "harbor", "ferry", "sunrise", "valley",
]

FILLER_WORDS = [
    "visitors", "season", "local", "guide", "morning", "evening", "region",
    "village", "coast", "travel", "route", "history", "stone", "river",
    "garden", "market", "quiet", "famous", "ancient", "nearby",
]


@pytest.fixture
def lexicon3() -> Lexicon:
    """Beaches, Spirituality, and a catch-all: the smallest interesting shape."""
    return Lexicon(
        topics=[
            Topic(name="Beaches", terms=frozenset({"beach", "sand"})),
            Topic(name="Spirituality", terms=frozenset({"temple"})),
            Topic(name="Miscellaneous", terms=frozenset(), miscellaneous=True),
        ]
    )


@pytest.fixture
def lexicon_no_misc() -> Lexicon:
    return Lexicon(
        topics=[
            Topic(name="Beaches", terms=frozenset({"beach"})),
            Topic(name="Accommodation", terms=frozenset({"resorts"})),
            Topic(name="Food", terms=frozenset({"curry"})),
        ]
    )


def write_corpus(root: Path, pages: dict[str, str]) -> Path:
    root.mkdir(parents=True, exist_ok=True)
    for name, markup in pages.items():
        target = root / name
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(markup, encoding="utf-8")
    return root


@pytest.fixture
def make_corpus(tmp_path):
    def build(pages: dict[str, str], subdir: str = "corpus") -> Path:
        return write_corpus(tmp_path / subdir, pages)

    return build


@pytest.fixture
def small_case_base(make_corpus, lexicon3):
    corpus = make_corpus(
        {
            "beach.html": "<p>beach sand beach holiday</p><p>sand castles by the beach</p>",
            "temple.html": "<p>temple visit temple gardens</p>",
            "mixed.html": "<div>beach temple walk</div><p>quiet village market</p>",
        }
    )
    return populate_case_base(corpus, lexicon3, BuildConfig(k_terms=5))


def fuzz_html(seed: int) -> str:
    """Deterministically malformed HTML: unclosed tags, stray closers, junk."""
    rng = random.Random(seed)
    words = TOURISM_WORDS + FILLER_WORDS
    pieces = []
    for _ in range(rng.randint(3, 14)):
        roll = rng.random()
        text = " ".join(rng.choices(words, k=rng.randint(1, 8)))
        if roll < 0.18:
            pieces.append(f"<div>{text}")  # left open on purpose
        elif roll < 0.36:
            tag = rng.choice(["p", "div", "table"])
            pieces.append(f"<{tag}>{text}</{tag}>")
        elif roll < 0.46:
            pieces.append(f"</{rng.choice(['p', 'div', 'span', 'b'])}>")
        elif roll < 0.56:
            pieces.append(f"<a href='#{rng.randint(0, 9)}'>{text}</a>")
        elif roll < 0.64:
            pieces.append(f"<script>var x = '{text}';</script>")
        elif roll < 0.72:
            pieces.append(f"<h{rng.randint(1, 6)}>{text}")
        elif roll < 0.80:
            pieces.append(f"&#x{rng.randint(0x41, 0x7A):x}; {text} &amp; more")
        elif roll < 0.88:
            pieces.append(f"<table><tr><td>{text}<td>{text}</table>")
        else:
            pieces.append(f"{text} < {rng.randint(1, 99)} items")
    return "".join(pieces)
