"""Sentence segmentation, tokenization, POS tagging, and lemmatization.

The builtin tagger is a deterministic rule tagger: closed-class word lists,
a research-verb lexicon with contextual disambiguation, suffix rules, and a
noun default. It exists so the pipeline runs with no external models; the
AdapterTagger protocol lets a child process supply better tags when one is
available. Tagset: NOUN, PROPN, ADJ, VERB, AUX, DET, ADP, ADV, PART, NUM,
PUNCT, OTHER.
"""

from __future__ import annotations

import json
import re
import subprocess
from dataclasses import dataclass
from typing import Iterable, Protocol

from .errors import TaggerUnavailable

UPOS_TAGS = frozenset(
    ["NOUN", "PROPN", "ADJ", "VERB", "AUX", "DET", "ADP", "ADV", "PART", "NUM", "PUNCT", "OTHER"]
)


@dataclass
class Token:
    surface: str
    lemma: str
    upos: str
    start: int
    end: int


# ---------------------------------------------------------------- sentences

_ABBREVIATIONS = {
    "al", "fig", "figs", "e.g", "i.e", "vs", "cf", "etc", "dr", "mr", "mrs",
    "ms", "prof", "st", "no", "eq", "eqs", "tab", "ca", "approx", "resp",
    "ref", "refs", "sec", "ch", "vol", "pp", "p",
}

_BOUNDARY = re.compile(r"([.!?])\s+(?=[\"'(\[]?[A-Z0-9])")


def split_sentences(text: str) -> list[str]:
    """Split on sentence terminators, guarding abbreviations and decimals."""
    sentences: list[str] = []
    for paragraph in re.split(r"\n\s*\n", text):
        flat = re.sub(r"\s+", " ", paragraph).strip()
        if not flat:
            continue
        start = 0
        for m in _BOUNDARY.finditer(flat):
            before = flat[start : m.start()]
            last_word = re.search(r"[\w.]+$", before)
            if last_word:
                w = last_word.group(0).lower().rstrip(".")
                if w in _ABBREVIATIONS or re.fullmatch(r"[a-z]", w):
                    continue
            sentences.append(flat[start : m.end(1)])
            start = m.end()
        tail = flat[start:].strip()
        if tail:
            sentences.append(tail)
    return sentences


_TOKEN = re.compile(r"\d+\.\d+|\w+(?:[-']\w+)*|[^\w\s]")


def tokenize(sentence: str) -> list[tuple[str, int, int]]:
    """Surface strings with (start, end) character offsets."""
    return [(m.group(0), m.start(), m.end()) for m in _TOKEN.finditer(sentence)]


# ------------------------------------------------------------------ lexicon

_DETERMINERS = {
    "a", "an", "the", "this", "that", "these", "those", "each", "every",
    "some", "any", "no", "both", "either", "neither", "all", "such", "its",
    "their", "his", "her", "our", "your", "my", "another", "other", "several",
    "many", "few", "most",
}

# Prepositions and conjunctions share one skippable class: for phrase search
# "and"/"or" must be hoppable exactly like "of"/"in".
_ADPOSITIONS = {
    "of", "in", "for", "on", "with", "at", "by", "from", "as", "into",
    "about", "between", "among", "through", "during", "within", "across",
    "under", "over", "toward", "towards", "against", "per", "via", "upon",
    "without", "along", "despite", "amid", "onto", "like", "throughout",
    "and", "or", "but", "nor", "although", "though", "because", "while",
    "whereas", "if", "when", "since", "after", "before", "until", "unless",
    "than", "whether",
}

_AUXILIARIES = {
    "am", "is", "are", "was", "were", "be", "been", "being",
    "do", "does", "did",
    "will", "would", "can", "could", "may", "might", "shall", "should",
    "must", "cannot",
    "don't", "doesn't", "didn't", "won't", "can't", "isn't", "aren't",
    "wasn't", "weren't", "hasn't", "haven't", "hadn't", "shouldn't",
    "wouldn't", "couldn't", "mustn't",
}

_ADVERBS = {
    "very", "also", "however", "thus", "therefore", "moreover", "furthermore",
    "often", "more", "less", "least", "well", "further", "rather",
    "so", "then", "here", "there", "now", "almost", "again", "still", "yet",
    "even", "too", "quite", "always", "never", "sometimes", "instead",
    "hence", "indeed", "perhaps", "already", "elsewhere", "together",
}

_PARTICLES = {"not", "to", "n't"}

_PRONOUNS = {
    "i", "you", "he", "she", "it", "we", "they", "them", "him", "us", "me",
    "who", "whom", "whose", "which", "what", "themselves", "itself",
    "himself", "herself", "ourselves", "one's", "there's", "it's",
}

_NUMBER_WORDS = {
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve", "twenty", "thirty", "forty", "fifty",
    "hundred", "thousand", "million", "billion", "first", "second", "third",
}

_COMMON_ADJECTIVES = {
    "new", "high", "low", "good", "bad", "large", "small", "important",
    "strong", "weak", "old", "young", "poor", "rich", "big", "great",
    "key", "main", "severe", "future", "long", "short", "same", "own",
    "human", "adaptive", "extreme", "whole", "overall",
    # -al is too ambiguous for a suffix rule (capital, proposal, survival),
    # so the frequent -al adjectives are listed instead
    "social", "local", "natural", "national", "financial", "agricultural",
    "environmental", "institutional", "rural", "urban", "global", "regional",
    "physical", "structural", "cultural", "political", "general",
    "prone", "robust", "aware", "distinct", "diverse",
}

# Words whose -ly/-s/-ed shape would mislead the suffix rules.
_TAG_EXCEPTIONS = {
    "early": "ADJ", "only": "ADV", "likely": "ADJ", "family": "NOUN",
    "supply": "NOUN", "elderly": "ADJ", "monthly": "ADJ", "yearly": "ADJ",
    "daily": "ADJ", "weekly": "ADJ", "analysis": "NOUN", "basis": "NOUN",
    "crisis": "NOUN", "status": "NOUN", "focus": "NOUN", "census": "NOUN",
    "consensus": "NOUN", "perhaps": "ADV", "whereas": "ADP", "always": "ADV",
    "across": "ADP", "process": "NOUN", "access": "NOUN", "business": "NOUN",
    "data": "NOUN", "media": "NOUN", "criteria": "NOUN",
}

# Verbs likely to act as predicates in findings prose. Inflections are
# derived below so each form maps back to its lemma.
_VERB_HINTS = [
    "increase", "reduce", "improve", "enhance", "prevent", "constrain",
    "relate", "link", "associate", "affect", "influence", "show", "adopt",
    "cope", "implement", "decrease", "raise", "lower", "promote",
    "facilitate", "hinder", "limit", "strengthen", "weaken", "determine",
    "shape", "drive", "foster", "mitigate", "exacerbate", "find", "suggest",
    "indicate", "demonstrate", "reveal", "report", "examine", "support",
    "confirm", "predict", "moderate", "mediate", "depend", "lead",
    "contribute", "correlate", "cause", "impede", "enable", "encourage",
    "discourage", "undermine", "boost", "amplify", "dampen", "accelerate",
    "erode", "trigger", "follow", "precede", "require", "help", "harm",
    "benefit", "worsen", "buffer", "offset", "shift", "alter", "change",
    "vary", "differ", "grow", "decline", "rise", "fall", "expand", "shrink",
    "use", "need", "seek", "make", "provide", "play", "remain", "appear",
    "seem", "tend", "occur", "exist", "include", "involve", "argue",
    "observe", "note", "highlight", "emphasize", "stress", "matter",
]

_DOUBLING = {"stop", "plan", "prefer", "occur", "permit", "omit", "submit", "dampen"}


def _s_form(verb: str) -> str:
    if re.search(r"(?:s|x|z|ch|sh|o)$", verb):
        return verb + "es"
    if re.search(r"[^aeiou]y$", verb):
        return verb[:-1] + "ies"
    return verb + "s"


def _ed_form(verb: str) -> str | None:
    if verb in _IRREGULAR_PAST_OF:
        return None  # handled by the irregular table
    if verb.endswith("e"):
        return verb + "d"
    if re.search(r"[^aeiou]y$", verb):
        return verb[:-1] + "ied"
    if verb in _DOUBLING:
        return verb + verb[-1] + "ed"
    return verb + "ed"


def _ing_form(verb: str) -> str:
    if verb.endswith("e") and not verb.endswith(("ee", "ye", "oe")):
        return verb[:-1] + "ing"
    if verb in _DOUBLING:
        return verb + verb[-1] + "ing"
    return verb + "ing"


_IRREGULAR_VERBS = {
    "found": "find", "showed": "show", "shown": "show", "had": "have",
    "has": "have", "was": "be", "were": "be", "been": "be", "is": "be",
    "are": "be", "am": "be", "did": "do", "does": "do", "done": "do",
    "led": "lead", "made": "make", "gave": "give", "given": "give",
    "took": "take", "taken": "take", "grew": "grow", "grown": "grow",
    "rose": "rise", "risen": "rise", "fell": "fall", "fallen": "fall",
    "became": "become", "brought": "bring", "bought": "buy",
    "thought": "think", "held": "hold", "kept": "keep", "left": "leave",
    "met": "meet", "ran": "run", "said": "say", "saw": "see", "seen": "see",
    "went": "go", "gone": "go", "wrote": "write", "written": "write",
    "built": "build", "dealt": "deal", "felt": "feel", "got": "get",
    "gotten": "get", "knew": "know", "known": "know", "lost": "lose",
    "meant": "mean", "paid": "pay", "sought": "seek", "sold": "sell",
    "spent": "spend", "stood": "stand", "told": "tell",
    "understood": "understand", "drove": "drive", "driven": "drive",
    "drew": "draw", "drawn": "draw", "chose": "choose", "chosen": "choose",
    "arose": "arise", "arisen": "arise", "came": "come", "began": "begin",
    "begun": "begin", "underwent": "undergo",
}
_IRREGULAR_PAST_OF = set(_IRREGULAR_VERBS.values())

# form -> (lemma, kind) where kind is one of s/ed/ing/base
_VERB_FORMS: dict[str, tuple[str, str]] = {}
for _v in _VERB_HINTS:
    _VERB_FORMS.setdefault(_v, (_v, "base"))
    _VERB_FORMS.setdefault(_s_form(_v), (_v, "s"))
    _ed = _ed_form(_v)
    if _ed:
        _VERB_FORMS.setdefault(_ed, (_v, "ed"))
    _VERB_FORMS.setdefault(_ing_form(_v), (_v, "ing"))
for _form, _lemma in _IRREGULAR_VERBS.items():
    _VERB_FORMS.setdefault(_form, (_lemma, "ed"))

_IRREGULAR_NOUNS = {
    "children": "child", "women": "woman", "men": "man", "people": "people",
    "lives": "life", "countries": "country", "policies": "policy",
    "studies": "study", "bodies": "body", "strategies": "strategy",
}

# forms whose stems end in -it/-eat where the silent-e heuristic misfires
_LEMMA_FIXES = {
    "controlled": "control", "labelled": "label", "modelled": "model",
    "visited": "visit", "visiting": "visit",
    "edited": "edit", "editing": "edit",
    "limited": "limit", "limiting": "limit",
    "exhibited": "exhibit", "exhibiting": "exhibit",
    "inhibited": "inhibit", "inhibiting": "inhibit",
    "benefited": "benefit", "benefiting": "benefit",
    "profited": "profit", "audited": "audit", "credited": "credit",
    "deposited": "deposit", "merited": "merit", "inherited": "inherit",
    "elicited": "elicit", "recruited": "recruit",
    "heated": "heat", "heating": "heat",
    "treated": "treat", "treating": "treat",
    "repeated": "repeat", "repeating": "repeat",
    "defeated": "defeat", "seated": "seat",
}

_PARTICIPLE_EXTRA = {w for w, v in _IRREGULAR_VERBS.items() if w.endswith("n")} | {
    "shown", "found", "made", "held", "kept", "left", "built", "met", "lost",
    "sought", "spent", "told", "understood", "done", "been",
}


def _noun_lemma(word: str) -> str:
    if word in _IRREGULAR_NOUNS:
        return _IRREGULAR_NOUNS[word]
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if re.search(r"(?:sses|shes|ches|xes|zes)$", word):
        return word[:-2]
    if word.endswith("ss") or word.endswith("is") or word.endswith("us"):
        return word
    if word.endswith("s") and len(word) > 3 and not word.endswith("ous"):
        return word[:-1]
    return word


def _verb_lemma(word: str) -> str:
    if word in _LEMMA_FIXES:
        return _LEMMA_FIXES[word]
    if word in _IRREGULAR_VERBS:
        return _IRREGULAR_VERBS[word]
    if word in _VERB_FORMS:
        return _VERB_FORMS[word][0]
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if re.search(r"(?:sses|shes|ches|xes|zes|oes)$", word):
        return word[:-2]
    if word.endswith("s") and not word.endswith(("ss", "us", "is")):
        return word[:-1]
    if word.endswith("ied") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("ed") and len(word) > 3:
        stem = word[:-2]
        if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] in "bdgmnprt":
            return stem[:-1]
        if re.search(r"(?:[^aeiou][cgsvz]|at|it|ut|iz|as|os|us)$", stem) and not stem.endswith("ss"):
            return stem + "e"
        return stem
    if word.endswith("ing") and len(word) > 4:
        stem = word[:-3]
        if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] in "bdgmnprt":
            return stem[:-1]
        if re.search(r"(?:[^aeiou][cgsvz]|at|it|ut|iz|as|os|us)$", stem) and not stem.endswith("ss"):
            return stem + "e"
        return stem
    return word


def _lemma_for(word: str, upos: str) -> str:
    low = word.lower()
    if "-" in low and len(low) > 1:
        head, _, tail = low.rpartition("-")
        if tail:
            return head + "-" + _lemma_for(tail, upos)
    if upos == "VERB" or upos == "AUX":
        return _verb_lemma(low)
    if upos == "NOUN":
        return _noun_lemma(low)
    return low


# ------------------------------------------------------------------- tagger

class Tagger(Protocol):
    def tag(self, spans: list[tuple[str, int, int]]) -> list[Token]:
        ...


_PUNCT_RE = re.compile(r"^[^\w]+$")
_NUM_RE = re.compile(r"^\d+(?:\.\d+)?$|^\d[\d,]*$")
_NOUN_SUFFIX = re.compile(r"(?:tion|sion|ment|ness|ity|ance|ence|ship|hood|ism|ure|age|ist|er|or)$")
_ADJ_SUFFIX = re.compile(r"(?:ous|ive|able|ible|ic|ful|less|ish|ant|ent)$")


def _looks_participial(word: str) -> bool:
    low = word.lower()
    return low.endswith("ed") or low in _PARTICIPLE_EXTRA


class BuiltinTagger:
    """Rule tagger: closed classes, verb lexicon with context, suffixes."""

    name = "builtin"

    def tag(self, spans: list[tuple[str, int, int]]) -> list[Token]:
        tags: list[str] = []
        surfaces = [s for s, _, _ in spans]
        for i, surface in enumerate(surfaces):
            tags.append(self._tag_one(surface, i, surfaces, tags))
        return [
            Token(surface, _lemma_for(surface, upos), upos, start, end)
            for (surface, start, end), upos in zip(spans, tags)
        ]

    def _tag_one(self, surface: str, i: int, surfaces: list[str], tags: list[str]) -> str:
        low = surface.lower()
        # context tag, looking through coordinating conjunctions so that
        # "reduces X and improves Y" tags both verbs alike
        j = i - 1
        while j >= 0 and surfaces[j].lower() in ("and", "or", "but", "nor", ","):
            j -= 1
        prev = tags[j] if j >= 0 else None

        if _PUNCT_RE.match(surface):
            return "PUNCT"
        if _NUM_RE.match(surface):
            return "NUM"
        if low in _NUMBER_WORDS:
            return "NUM"
        if low in _TAG_EXCEPTIONS:
            return _TAG_EXCEPTIONS[low]
        if low == "that" and prev == "VERB":
            # complementizer: "results show that ..."
            return "ADP"
        if low in _DETERMINERS:
            return "DET"
        if low in _ADPOSITIONS:
            return "ADP"
        if low in _PARTICLES:
            return "PART"
        if low in _PRONOUNS:
            return "OTHER"
        if low in _ADVERBS:
            return "ADV"
        if "-" in low and len(low) > 1:
            tail = low.rpartition("-")[2]
            if tail in _COMMON_ADJECTIVES or (_ADJ_SUFFIX.search(tail) and len(tail) > 4):
                return "ADJ"
            if tail.endswith(("ed", "ing")) and len(tail) > 3:
                return "ADJ"
        if low in _COMMON_ADJECTIVES:
            return "ADJ"
        if low in ("have", "has", "had"):
            nxt = self._next_significant(surfaces, i)
            return "AUX" if nxt is not None and _looks_participial(nxt) else "VERB"
        if low in _AUXILIARIES:
            return "AUX"

        if surface[:1].isupper() and i > 0 and not surface.isupper():
            if low not in _VERB_FORMS:
                return "PROPN"

        if low in _VERB_FORMS:
            lemma, kind = _VERB_FORMS[low]
            if kind == "ing":
                if prev == "AUX":
                    return "VERB"
                if prev in ("DET", "ADP", "NUM", None):
                    # attributive before a nominal ("a growing hazard"),
                    # gerund otherwise ("flooding is", "after flooding .")
                    return "ADJ" if self._nominal_follows(surfaces, i) else "NOUN"
                return "ADJ"
            if kind == "ed":
                if prev in ("NOUN", "PROPN", "OTHER", "ADV", "AUX", "PART", "VERB"):
                    return "VERB"
                return "ADJ"
            # base and third-person forms
            if prev in ("DET", "ADJ", "ADP", "NUM"):
                return "NOUN"
            if prev is None:
                return "NOUN"
            if kind == "base" and prev in ("NOUN", "PROPN") and i + 1 < len(surfaces):
                # noun compound whose head verb follows: "climate change increases"
                nxt = surfaces[i + 1].lower()
                if nxt in _VERB_FORMS and _VERB_FORMS[nxt][1] in ("s", "ed"):
                    return "NOUN"
            return "VERB"

        if low.endswith("ly") and len(low) > 3:
            return "ADV"
        if _NOUN_SUFFIX.search(low) and len(low) > 4:
            return "NOUN"
        if _ADJ_SUFFIX.search(low) and len(low) > 4:
            return "ADJ"
        if low.endswith("ing") and len(low) > 4:
            if prev == "AUX":
                return "VERB"
            if prev in ("DET", "ADP", "NUM", None):
                return "ADJ" if self._nominal_follows(surfaces, i) else "NOUN"
            return "ADJ"
        if low.endswith("ed") and len(low) > 3:
            if prev in ("AUX", "ADV", "PART"):
                return "VERB"
            if prev in ("NOUN", "PROPN", "OTHER"):
                return "VERB"
            return "ADJ"
        return "NOUN"

    @staticmethod
    def _next_significant(surfaces: list[str], i: int) -> str | None:
        for j in range(i + 1, len(surfaces)):
            if surfaces[j].lower() in ("not", "n't", "also", "already", "never"):
                continue
            return surfaces[j]
        return None

    @staticmethod
    def _nominal_follows(surfaces: list[str], i: int) -> bool:
        if i + 1 >= len(surfaces):
            return False
        nxt = surfaces[i + 1].lower()
        return not (
            _PUNCT_RE.match(nxt) or nxt in _AUXILIARIES or nxt in _ADPOSITIONS
        )


class AdapterTagger:
    """Tags through a child process speaking line-delimited JSON.

    One request line is a JSON array of surface strings; the reply line is a
    JSON array of {surface, lemma, upos} objects of the same length. Requests
    on one adapter are strictly sequential.
    """

    name = "adapter"

    def __init__(self, command: list[str]):
        self.command = list(command)
        try:
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                text=True,
                encoding="utf-8",
            )
        except OSError as exc:
            raise TaggerUnavailable(f"cannot start {self.command[0]!r}: {exc}") from exc

    def close(self) -> None:
        if self._proc.poll() is None:
            self._proc.terminate()
            try:
                self._proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self._proc.kill()

    def tag(self, spans: list[tuple[str, int, int]]) -> list[Token]:
        surfaces = [s for s, _, _ in spans]
        request = json.dumps(surfaces, ensure_ascii=False)
        try:
            assert self._proc.stdin is not None and self._proc.stdout is not None
            self._proc.stdin.write(request + "\n")
            self._proc.stdin.flush()
            reply = self._proc.stdout.readline()
        except (OSError, ValueError, AssertionError) as exc:
            raise TaggerUnavailable(f"adapter pipe failure: {exc}") from exc
        if not reply:
            raise TaggerUnavailable("adapter closed its output")
        try:
            rows = json.loads(reply)
        except json.JSONDecodeError as exc:
            raise TaggerUnavailable(f"adapter sent invalid JSON: {exc}") from exc
        if not isinstance(rows, list) or len(rows) != len(spans):
            raise TaggerUnavailable("adapter reply length mismatch")
        out: list[Token] = []
        for row, (surface, start, end) in zip(rows, spans):
            if not isinstance(row, dict):
                raise TaggerUnavailable("adapter reply row is not an object")
            lemma = row.get("lemma")
            upos = row.get("upos")
            if not lemma or not isinstance(lemma, str):
                raise TaggerUnavailable("adapter lemma missing")
            if upos not in UPOS_TAGS:
                raise TaggerUnavailable(f"adapter upos {upos!r} outside tagset")
            out.append(Token(surface, lemma, upos, start, end))
        return out


@dataclass
class SentenceRecord:
    doc_id: str
    section_tag: str
    sent_index: int
    text: str
    tokens: list[Token]


def sentence_records(
    doc_id: str,
    section_tag: str,
    text: str,
    tagger: Tagger,
) -> Iterable[SentenceRecord]:
    for idx, sentence in enumerate(split_sentences(text)):
        spans = tokenize(sentence)
        yield SentenceRecord(doc_id, section_tag, idx, sentence, tagger.tag(spans))
