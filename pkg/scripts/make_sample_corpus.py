#!/usr/bin/env python3
"""Generate the bundled sample data: 20 tourism pages, lexicon, queries, qrels.

Deterministic for a fixed seed, so rerunning the script reproduces the
checked-in files byte for byte. The pages deliberately exercise the whole
pipeline: nested block tags, anchor-heavy navigation strips, duplicate
sentences, character references, tables, and a couple of unclosed tags.
"""

from __future__ import annotations

import argparse
import random
from pathlib import Path

TOPICS: dict[str, list[str]] = {
    "Beaches": ["beach", "sand", "surf", "shore", "tide", "lagoon"],
    "Hiking": ["trail", "trek", "summit", "ridge", "hike", "hill station"],
    "Wildlife": ["safari", "tiger", "elephant", "sanctuary", "birdwatching"],
    "Museums": ["museum", "gallery", "exhibit", "artifact", "curator"],
    "Spirituality": ["temple", "shrine", "monastery", "pilgrimage", "ashram"],
    "Accommodation": ["hotel", "resort", "hostel", "homestay", "lodge"],
    "Food": ["curry", "spice", "cuisine", "thali", "street food"],
    "Shopping": ["bazaar", "handicraft", "emporium", "souvenir", "boutique"],
    "Nightlife": ["club", "pub", "casino", "karaoke"],
    "Transport": ["ferry", "rickshaw", "railway", "airport", "highway"],
    "Sports": ["cricket", "kayaking", "snorkeling", "paragliding", "rafting"],
    "Festivals": ["festival", "carnival", "procession", "lantern", "parade"],
    "Heritage": ["fort", "palace", "monument", "ruins", "citadel"],
    "Nature": ["waterfall", "valley", "forest", "meadow", "canyon"],
    "Adventure": ["zipline", "bungee", "caving", "expedition"],
    "Wellness": ["spa", "yoga", "massage", "ayurveda", "retreat"],
    "Photography": ["viewpoint", "sunrise", "sunset", "panorama"],
}

FILLER = [
    "visitors", "travellers", "season", "local", "guides", "morning",
    "evening", "region", "village", "coast", "route", "history", "quiet",
    "famous", "nearby", "plan", "trip", "guesthouse", "weather", "map",
]

NAV_WORDS = ["home", "about", "contact", "sitemap", "bookings", "offers", "languages", "help"]

# primary theme, secondary theme per document
DOC_THEMES = [
    ("Beaches", "Sports"), ("Beaches", "Accommodation"), ("Beaches", "Photography"),
    ("Hiking", "Nature"), ("Hiking", "Adventure"), ("Wildlife", "Nature"),
    ("Wildlife", "Photography"), ("Museums", "Heritage"), ("Spirituality", "Festivals"),
    ("Spirituality", "Heritage"), ("Accommodation", "Wellness"), ("Food", "Shopping"),
    ("Food", "Nightlife"), ("Shopping", "Transport"), ("Nightlife", "Festivals"),
    ("Transport", "Beaches"), ("Sports", "Adventure"), ("Festivals", "Heritage"),
    ("Nature", "Wellness"), ("Heritage", "Museums"),
]

QUERIES = [
    ("S1", "beach surf holiday", "Sunny shoreline destinations with surfing.",
     "Pages describing beach and surf activities are relevant."),
    ("S2", "temple pilgrimage", "Sacred sites and pilgrimage routes.",
     "Pages about shrines, monasteries, or pilgrimages are relevant."),
    ("S3", "wildlife safari", "Where to see large animals in the wild.",
     "Sanctuary and safari pages are relevant."),
    ("S4", "street food bazaar", "Local food stalls and shopping streets.",
     "Food and market pages are relevant."),
    ("S5", "trek summit trail", "Multi day hiking routes.", ""),
]

QRELS_THEMES = {"S1": "Beaches", "S2": "Spirituality", "S3": "Wildlife", "S4": "Food", "S5": "Hiking"}


def sentence(rng: random.Random, theme_words: list[str], k: int) -> str:
    words = rng.sample(theme_words, min(k, len(theme_words))) + rng.sample(FILLER, 2)
    rng.shuffle(words)
    return " ".join(words).capitalize() + "."


def nav_strip(rng: random.Random) -> str:
    links = "".join(f'<a href="/{w}">{w}</a> ' for w in rng.sample(NAV_WORDS, 5))
    return f"<div>{links}</div>"


def page(rng: random.Random, primary: str, secondary: str, index: int) -> str:
    main_words = [w for term in TOPICS[primary] for w in term.split()]
    side_words = [w for term in TOPICS[secondary] for w in term.split()]
    title = f"{primary} and {secondary} guide {index:02d}"
    body = [f"<h1>{title}</h1>", nav_strip(rng)]

    lead = sentence(rng, main_words, 3)
    body.append(f"<p>{lead} {sentence(rng, main_words, 2)}</p>")
    if index % 4 == 0:
        # duplicated sentence, should be eliminated downstream
        body.append(f"<p>{lead} {lead}</p>")
    if index % 5 == 0:
        body.append(
            "<table><tr><td>{}</td><td>{}</td></tr></table>".format(
                sentence(rng, side_words, 2), sentence(rng, main_words, 2)
            )
        )
    else:
        body.append(f"<div>{sentence(rng, side_words, 3)}</div>")
    if index % 7 == 0:
        body.append(f"<p>Entry fee &#x20b9;{rng.randint(10, 500)} per person.")  # left open
    body.append(f"<p>{sentence(rng, main_words + side_words, 4)}</p>")
    return "\n".join(body) + "\n"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dest", default=str(Path(__file__).resolve().parent.parent / "sample"))
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    dest = Path(args.dest)
    corpus = dest / "corpus"
    corpus.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)

    for i, (primary, secondary) in enumerate(DOC_THEMES):
        (corpus / f"doc{i:02d}.html").write_text(page(rng, primary, secondary, i), encoding="utf-8")

    lexicon_lines = [f"{name}\t{','.join(terms)}" for name, terms in TOPICS.items()]
    lexicon_lines.append("Miscellaneous\t*")
    (dest / "lexicon.tsv").write_text("\n".join(lexicon_lines) + "\n", encoding="utf-8")

    topic_blocks = []
    for qid, title, desc, narr in QUERIES:
        block = [f"<top>", f"<num> {qid} </num>", f"<title> {title} </title>"]
        if desc:
            block.append(f"<desc> {desc} </desc>")
        if narr:
            block.append(f"<narr> {narr} </narr>")
        block.append("</top>")
        topic_blocks.append("\n".join(block))
    (dest / "queries.txt").write_text("\n\n".join(topic_blocks) + "\n", encoding="utf-8")

    qrels_lines = []
    for qid, theme in QRELS_THEMES.items():
        for i, (primary, secondary) in enumerate(DOC_THEMES):
            label = 1 if theme in (primary, secondary) else 0
            qrels_lines.append(f"{qid}\tdoc{i:02d}.html\t{label}")
    (dest / "qrels.tsv").write_text("\n".join(qrels_lines) + "\n", encoding="utf-8")

    print(f"wrote {len(DOC_THEMES)} pages, lexicon, queries, qrels under {dest}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
