"""Relation extraction: finding sentences to signed triples.

A triple connects the nearest noun/adjective phrase before a classified verb
to the nearest one after it, a windowed POS heuristic with no parsing. Verbs
categorized none (or still unclassified) emit nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .nlp import SentenceRecord, Token
from .verblex import CueLexicon, VerbDictionary, resolve_depend_detail

_EXTRACTING = ("positive", "negative", "neutral", "depend")


@dataclass
class PhraseRule:
    content_pos: frozenset[str] = frozenset({"ADJ", "NOUN", "PROPN"})
    skip_pos: frozenset[str] = frozenset({"DET", "ADP", "AUX", "ADV", "PART", "NUM"})
    gap: int = 5
    max_phrase_len: int = 4

    def __post_init__(self) -> None:
        self.content_pos = frozenset(self.content_pos)
        self.skip_pos = frozenset(self.skip_pos)
        if self.content_pos & self.skip_pos:
            raise ValueError("content_pos and skip_pos overlap")
        if self.gap < 0 or self.max_phrase_len < 1:
            raise ValueError("gap must be >= 0 and max_phrase_len >= 1")


@dataclass
class RelationTriple:
    doc_id: str
    sentence_key: tuple[str, int]  # (section_tag, sent_index)
    source_label: str
    target_label: str
    verb_lemma: str
    sign: str
    span: tuple[int, int] = (0, 0)
    sentence_text: str = ""

    def to_row(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "section": self.sentence_key[0],
            "sent_index": self.sentence_key[1],
            "source": self.source_label,
            "verb": self.verb_lemma,
            "sign": self.sign,
            "target": self.target_label,
            "span": list(self.span),
            "sentence": self.sentence_text,
        }

    @classmethod
    def from_row(cls, row: dict) -> "RelationTriple":
        return cls(
            doc_id=row["doc_id"],
            sentence_key=(row["section"], row["sent_index"]),
            source_label=row["source"],
            target_label=row["target"],
            verb_lemma=row["verb"],
            sign=row["sign"],
            span=tuple(row.get("span", (0, 0))),
            sentence_text=row.get("sentence", ""),
        )


def _content_run(tokens: list[Token], at: int, rule: PhraseRule) -> tuple[int, int]:
    """Widest contiguous content_pos run containing index `at` (inclusive)."""
    lo = at
    while lo - 1 >= 0 and tokens[lo - 1].upos in rule.content_pos:
        lo -= 1
    hi = at
    while hi + 1 < len(tokens) and tokens[hi + 1].upos in rule.content_pos:
        hi += 1
    return lo, hi


def _search(tokens: list[Token], start: int, step: int, rule: PhraseRule) -> int | None:
    """Index of the first content token scanning from `start`, or None."""
    skipped = 0
    i = start
    while 0 <= i < len(tokens):
        upos = tokens[i].upos
        if upos in rule.content_pos:
            return i
        if upos in rule.skip_pos and skipped < rule.gap:
            skipped += 1
            i += step
            continue
        return None
    return None


def extract_phrases(
    tokens: list[Token],
    verb_index: int,
    rule: PhraseRule | None = None,
    target_search_from: int | None = None,
) -> tuple[tuple[str, tuple[int, int]], tuple[str, tuple[int, int]]] | None:
    """((source_label, src_span), (target_label, tgt_span)) or None.

    Spans are (token_lo, token_hi) inclusive. The source phrase is the content
    run ending nearest before the verb; the target the one starting nearest
    after it (or after `target_search_from` when given). Long runs keep their
    last `max_phrase_len` tokens on the source side, first on the target side.
    """
    rule = rule or PhraseRule()
    src_at = _search(tokens, verb_index - 1, -1, rule)
    if src_at is None:
        return None
    tgt_start = verb_index + 1 if target_search_from is None else target_search_from
    tgt_at = _search(tokens, tgt_start, +1, rule)
    if tgt_at is None:
        return None
    s_lo, s_hi = _content_run(tokens, src_at, rule)
    t_lo, t_hi = _content_run(tokens, tgt_at, rule)
    s_lo = max(s_lo, s_hi - rule.max_phrase_len + 1)
    t_hi = min(t_hi, t_lo + rule.max_phrase_len - 1)
    source = " ".join(t.lemma for t in tokens[s_lo : s_hi + 1])
    target = " ".join(t.lemma for t in tokens[t_lo : t_hi + 1])
    if not source or not target:
        return None
    return (source, (s_lo, s_hi)), (target, (t_lo, t_hi))


def extract_relations(
    sentence: SentenceRecord,
    dictionary: VerbDictionary,
    cues: CueLexicon | None = None,
    rule: PhraseRule | None = None,
    depend_no_cue: str = "neutral",
    negation_flip: bool = False,
) -> list[RelationTriple]:
    """One triple per classified verb occurrence with phrases on both sides.

    depend_no_cue: "neutral" keeps cueless depend occurrences as neutral;
    "drop" discards them. negation_flip optionally inverts the sign when a
    negation particle sits within two tokens before the verb (off by default).
    """
    cues = cues or CueLexicon()
    rule = rule or PhraseRule()
    tokens = sentence.tokens
    out: list[RelationTriple] = []
    for i, tok in enumerate(tokens):
        if tok.upos != "VERB":
            continue
        category = dictionary.category(tok.lemma)
        if category not in _EXTRACTING:
            continue
        target_from: int | None = None
        if category == "depend":
            sign, cue_index = resolve_depend_detail(i, tokens, cues, dictionary)
            if cue_index is None and depend_no_cue == "drop":
                continue
            if cue_index is not None and cue_index > i:
                # The cue names the association itself ("a positive
                # correlation with X"); skip past its content run so the
                # target is X, not the cue phrase.
                _, run_hi = _content_run(tokens, cue_index, rule)
                target_from = run_hi + 1
        else:
            sign = category
        if negation_flip and sign in ("positive", "negative"):
            for back in range(max(0, i - 2), i):
                if tokens[back].lemma in ("not", "n't", "never", "no"):
                    sign = "negative" if sign == "positive" else "positive"
                    break
        phrases = extract_phrases(tokens, i, rule, target_search_from=target_from)
        if phrases is None:
            continue
        (source, (s_lo, _)), (target, (_, t_hi)) = phrases
        span = (tokens[s_lo].start, tokens[t_hi].end)
        out.append(
            RelationTriple(
                doc_id=sentence.doc_id,
                sentence_key=(sentence.section_tag, sentence.sent_index),
                source_label=source,
                target_label=target,
                verb_lemma=tok.lemma,
                sign=sign,
                span=span,
                sentence_text=sentence.text,
            )
        )
    return out


def dedup_relations(triples: list[RelationTriple]) -> list[RelationTriple]:
    """Drop repeats of the same finding in the same article.

    The key deliberately ignores the section tag: a sentence sliced into two
    sections (mixed headings) must count once.
    """
    seen: set[tuple] = set()
    out: list[RelationTriple] = []
    for t in triples:
        key = (t.doc_id, " ".join(t.sentence_text.split()), t.source_label, t.verb_lemma, t.target_label)
        if key in seen:
            continue
        seen.add(key)
        out.append(t)
    return out
