"""Brute-force reference calculations for cross-checking the graph math.

Works on plain corpora: dict of doc_id -> set of (source, sign, target)
tuples. Deliberately written from the definitions with counters and
fractions, independent of the package implementation.
"""

from __future__ import annotations

import random
from fractions import Fraction

SIGNS = ("positive", "neutral", "negative")


def words_of(corpus: dict) -> set[str]:
    out = set()
    for triples in corpus.values():
        for s, _, t in triples:
            out.add(s)
            out.add(t)
    return out


def pairs_of(corpus: dict) -> set[tuple[str, str]]:
    return {(s, t) for triples in corpus.values() for s, _, t in triples}


def degree(corpus: dict, word: str) -> int:
    return sum(
        1
        for triples in corpus.values()
        if any(word in (s, t) for s, _, t in triples)
    )


def pair_doc_count(corpus: dict, pair: tuple[str, str]) -> int:
    return sum(
        1
        for triples in corpus.values()
        if any((s, t) == pair for s, _, t in triples)
    )


def total_pair_indicators(corpus: dict) -> int:
    return sum(len({(s, t) for s, _, t in triples}) for triples in corpus.values())


def edge_weight(corpus: dict, pair: tuple[str, str]) -> Fraction:
    return Fraction(pair_doc_count(corpus, pair), total_pair_indicators(corpus))


def signed_pair_doc_count(corpus: dict, sign: str, pair: tuple[str, str]) -> int:
    return sum(
        1
        for triples in corpus.values()
        if any((s, t) == pair and g == sign for s, g, t in triples)
    )


def sign_total(corpus: dict, sign: str) -> int:
    return sum(
        len({(s, t) for s, g, t in triples if g == sign})
        for triples in corpus.values()
    )


def sign_weight(corpus: dict, sign: str, pair: tuple[str, str]) -> Fraction:
    denom = sign_total(corpus, sign)
    if denom == 0:
        return Fraction(0)
    return Fraction(signed_pair_doc_count(corpus, sign, pair), denom)


def dominant_sign(corpus: dict, pair: tuple[str, str], basis: str = "eq3") -> str:
    if basis == "raw":
        scores = {s: signed_pair_doc_count(corpus, s, pair) for s in SIGNS}
    else:
        scores = {s: sign_weight(corpus, s, pair) for s in SIGNS}
    best = max(scores.values())
    winners = [s for s in SIGNS if scores[s] == best]
    return winners[0] if len(winners) == 1 else "neutral"


def random_corpus(
    rng: random.Random,
    max_articles: int = 10,
    max_words: int = 15,
    max_triples: int = 40,
) -> dict[str, set[tuple[str, str, str]]]:
    n_words = rng.randint(2, max_words)
    words = [f"w{i}" for i in range(n_words)]
    n_docs = rng.randint(1, max_articles)
    corpus: dict[str, set] = {}
    for _ in range(rng.randint(1, max_triples)):
        doc = f"d{rng.randint(1, n_docs)}"
        source, target = rng.sample(words, 2)
        corpus.setdefault(doc, set()).add((source, rng.choice(SIGNS), target))
    return corpus
