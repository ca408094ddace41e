"""Verb dictionary: harvesting, human classification, cue resolution.

Categories follow the five-way scheme (positive, negative, neutral, depend,
none) plus the bookkeeping state `unclassified` for harvested-but-unreviewed
lemmas. "depend" verbs carry no sign of their own; the cue lexicon resolves
them per occurrence.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import InvalidCategory, UnknownVerb
from .nlp import SentenceRecord, Token
from .storage import atomic_write_text

CATEGORIES = ("positive", "negative", "neutral", "depend", "none")
ALL_CATEGORIES = CATEGORIES + ("unclassified",)

SIGNED_CATEGORIES = ("positive", "negative", "neutral")


@dataclass
class VerbEntry:
    lemma: str
    category: str
    annotator: str = ""
    timestamp: str = ""  # ISO-8601 UTC; empty for seed/unclassified entries
    note: str = ""

    def __post_init__(self) -> None:
        if self.category not in ALL_CATEGORIES:
            raise InvalidCategory(f"category {self.category!r} for {self.lemma!r}")


@dataclass
class CueLexicon:
    positive_cues: frozenset[str] = frozenset({"positive", "positively"})
    negative_cues: frozenset[str] = frozenset({"negative", "negatively"})
    window: int = 6

    def __post_init__(self) -> None:
        self.positive_cues = frozenset(self.positive_cues)
        self.negative_cues = frozenset(self.negative_cues)
        if self.positive_cues & self.negative_cues:
            raise InvalidCategory("cue sets overlap")
        if self.window < 1:
            raise InvalidCategory("cue window must be >= 1")


# The worked examples shipped as the starting dictionary.
SEED_VERBS: dict[str, str] = {
    "increase": "positive", "improve": "positive", "enhance": "positive",
    "reduce": "negative", "prevent": "negative", "constrain": "negative",
    "relate": "neutral", "link": "neutral", "associate": "neutral",
    "have": "depend", "affect": "depend", "influence": "depend", "show": "depend",
    "adopt": "none", "cope": "none", "implement": "none",
}

_TSV_HEADER = ["lemma", "category", "annotator", "timestamp", "note"]


class VerbDictionary:
    """Lemma -> VerbEntry mapping persisted as a tab-separated file."""

    def __init__(self, entries: dict[str, VerbEntry] | None = None, path: str | Path | None = None):
        self.entries: dict[str, VerbEntry] = dict(entries or {})
        self.path = Path(path) if path else None

    @classmethod
    def with_seed(cls, path: str | Path | None = None) -> "VerbDictionary":
        entries = {lemma: VerbEntry(lemma, cat) for lemma, cat in SEED_VERBS.items()}
        return cls(entries, path)

    @classmethod
    def load(cls, path: str | Path) -> "VerbDictionary":
        path = Path(path)
        entries: dict[str, VerbEntry] = {}
        lines = path.read_text(encoding="utf-8").splitlines()
        for i, line in enumerate(lines):
            if i == 0 or not line.strip():
                continue
            cells = line.split("\t")
            cells += [""] * (len(_TSV_HEADER) - len(cells))
            lemma, category, annotator, timestamp, note = cells[:5]
            entries[lemma] = VerbEntry(lemma, category, annotator, timestamp, note)
        return cls(entries, path)

    def save(self, path: str | Path | None = None) -> None:
        target = Path(path) if path else self.path
        if target is None:
            raise ValueError("no path to save the dictionary to")
        rows = ["\t".join(_TSV_HEADER)]
        for lemma in sorted(self.entries):
            e = self.entries[lemma]
            cells = [e.lemma, e.category, e.annotator, e.timestamp, e.note]
            rows.append("\t".join(re.sub(r"[\t\n\r]", " ", c) for c in cells))
        atomic_write_text(target, "\n".join(rows) + "\n")
        self.path = target

    def get(self, lemma: str) -> VerbEntry | None:
        return self.entries.get(lemma)

    def category(self, lemma: str) -> str | None:
        e = self.entries.get(lemma)
        return e.category if e else None

    def add_unclassified(self, lemma: str) -> None:
        self.entries.setdefault(lemma, VerbEntry(lemma, "unclassified"))

    def classify(self, lemma: str, category: str, annotator: str = "", note: str = "") -> VerbEntry:
        """Record a human decision and persist it atomically."""
        if category not in CATEGORIES:
            raise InvalidCategory(f"category must be one of {CATEGORIES}, got {category!r}")
        if lemma not in self.entries:
            raise UnknownVerb(f"{lemma!r} was never harvested or seeded")
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        entry = VerbEntry(lemma, category, annotator, stamp, note)
        self.entries[lemma] = entry
        if self.path is not None:
            self.save()
        return entry

    def pending(self) -> list[str]:
        return [l for l in sorted(self.entries) if self.entries[l].category == "unclassified"]

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, lemma: str) -> bool:
        return lemma in self.entries


def harvest_verbs(sentences: list[SentenceRecord]) -> list[tuple[str, int]]:
    """Verb lemmas by descending frequency, ties alphabetical. AUX excluded."""
    counts: dict[str, int] = {}
    for rec in sentences:
        for tok in rec.tokens:
            if tok.upos == "VERB":
                counts[tok.lemma] = counts.get(tok.lemma, 0) + 1
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


def sample_sentences(
    lemma: str,
    sentences: list[SentenceRecord],
    n: int = 10,
    seed: int = 0,
) -> list[SentenceRecord]:
    """Uniform sample (no replacement) of sentences using `lemma` as a verb."""
    candidates = [
        rec
        for rec in sentences
        if any(t.upos == "VERB" and t.lemma == lemma for t in rec.tokens)
    ]
    if not candidates:
        raise UnknownVerb(f"{lemma!r} does not occur as a verb")
    candidates.sort(key=lambda r: (r.doc_id, r.section_tag, r.sent_index))
    k = min(n, len(candidates))
    return random.Random(seed).sample(candidates, k)


def resolve_depend(
    verb_index: int,
    tokens: list[Token],
    cues: CueLexicon,
    dictionary: VerbDictionary,
) -> str:
    """Sign of a depend-verb occurrence from nearby cue words."""
    sign, _ = resolve_depend_detail(verb_index, tokens, cues, dictionary)
    return sign


def resolve_depend_detail(
    verb_index: int,
    tokens: list[Token],
    cues: CueLexicon,
    dictionary: VerbDictionary,
) -> tuple[str, int | None]:
    """(sign, cue token index or None).

    Scans up to `window` tokens after the verb, stopping early at another
    dictionary verb. If the window holds no cue, the single token immediately
    before the verb is checked for adverb cues ("positively influences");
    that preceding check goes beyond the stated following-words rule.
    """
    end = min(len(tokens), verb_index + 1 + cues.window)
    for i in range(verb_index + 1, end):
        lemma = tokens[i].lemma
        if tokens[i].upos == "VERB" and dictionary.category(lemma) in CATEGORIES:
            break
        if lemma in cues.positive_cues:
            return "positive", i
        if lemma in cues.negative_cues:
            return "negative", i
    if verb_index > 0:
        before = tokens[verb_index - 1].lemma
        if before in cues.positive_cues:
            return "positive", verb_index - 1
        if before in cues.negative_cues:
            return "negative", verb_index - 1
    return "neutral", None
