"""Text normalization and IMRAD sectioning.

Cleaning rules are ordered Python regular expressions (MULTILINE is always
on). Citation removal runs before the non-ASCII strip so dashes inside year
ranges still match. Whitespace collapse keeps line breaks: heading detection
and the line-anchored boilerplate rules both depend on line structure.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

from .errors import NoFindingsText, RuleCompileError

_NAME = r"[A-Z][\w'’-]+"
_YEAR = r"(?:19|20)\d\d[a-z]?"
_CITE_ENTRY = (
    rf"{_NAME}(?:\s+(?:{_NAME}|et al\.?|and|&))*\s*,\s*{_YEAR}"
    rf"(?:\s*[-–]\s*{_YEAR})?(?:\s*,\s*p{{1,2}}\.?\s*\d+(?:\s*[-–]\s*\d+)?)?"
)


@dataclass
class CleaningRule:
    """One ordered find/replace step of the normalizer."""

    name: str
    pattern: str
    replacement: str = ""

    def __post_init__(self) -> None:
        try:
            self._compiled = re.compile(self.pattern, re.MULTILINE)
        except re.error as exc:
            raise RuleCompileError(f"rule {self.name!r}: {exc}") from exc

    def apply(self, text: str) -> str:
        return self._compiled.sub(self.replacement, text)


def default_rules() -> list[CleaningRule]:
    return [
        CleaningRule("urls", r"(?:https?://|www\.)\S+"),
        CleaningRule(
            "parenthetical-citations",
            rf"\(\s*(?:see\s+(?:also\s+)?|e\.g\.,?\s*|cf\.\s*)?{_CITE_ENTRY}(?:\s*;\s*{_CITE_ENTRY})*\s*\)",
        ),
        CleaningRule(
            "narrative-citations",
            rf"{_NAME}(?:\s+(?:and|&)\s+{_NAME})*\s+et al\.?\s*\(\s*{_YEAR}\s*\)",
        ),
        CleaningRule(
            "boilerplate-lines",
            r"(?i)^.*(?:\(c\)\s*\d|©|copyright\s|all rights reserved"
            r"|downloaded from|journal homepage|creative commons"
            r"|this article is licensed|corresponding author"
            r"|doi:\s*\S+|\bdoi\.org/)\S*.*$",
        ),
        CleaningRule("page-number-lines", r"^\s*\d{1,4}\s*$"),
        CleaningRule("email-lines", r"^\s*\S+@\S+\.\S+\s*$"),
    ]


def _ascii_fold(text: str) -> str:
    decomposed = unicodedata.normalize("NFKD", text)
    return decomposed.encode("ascii", "ignore").decode("ascii")


def _collapse_whitespace(text: str) -> str:
    def repl(m: re.Match) -> str:
        return "\n\n" if m.group(0).count("\n") >= 2 else ("\n" if "\n" in m.group(0) else " ")

    collapsed = re.sub(r"\s+", repl, text)
    return collapsed.strip()


def normalize_text(raw_text: str, rules: list[CleaningRule] | None = None) -> str:
    """Apply cleaning rules in order, fold to ASCII, collapse whitespace.

    The pass repeats until the text stops changing: cleaning can surface new
    matches, e.g. a Unicode fraction folding into a bare page-number line.
    Capped in case a custom rule's replacement grows the text.
    """
    active = default_rules() if rules is None else rules
    text = raw_text
    for _ in range(8):
        prev = text
        for rule in active:
            text = rule.apply(text)
        text = _collapse_whitespace(_ascii_fold(text))
        if text == prev:
            return text
    return text


SECTION_NAMES = ("introduction", "methods", "results", "discussion", "conclusions", "other")

# canonical section -> accepted heading phrases (lowercase)
DEFAULT_HEADING_LEXICON: dict[str, tuple[str, ...]] = {
    "introduction": ("introduction", "background"),
    "methods": ("methods", "methodology", "materials and methods", "data and methods"),
    "results": ("results", "findings", "results and discussion"),
    "discussion": ("discussion", "results and discussion"),
    "conclusions": ("conclusion", "conclusions", "concluding remarks"),
}

_NUMBERING = re.compile(r"^(?:(?:\d+(?:\.\d+)*|[ivxlcdm]+)[.):]?\s+)+", re.IGNORECASE)


@dataclass
class SectionedDocument:
    doc_id: str
    sections: dict[str, str]
    heading_spans: list[tuple[str, int, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def _heading_canonicals(line: str, alias_map: dict[str, list[str]]) -> list[str]:
    stripped = line.strip()
    if not stripped or len(stripped.split()) > 8:
        return []
    bare = _NUMBERING.sub("", stripped).rstrip(" .:").lower()
    bare = re.sub(r"\s+", " ", bare)
    return alias_map.get(bare, [])


def detect_imrad(
    clean_text: str,
    heading_lexicon: dict[str, tuple[str, ...]] | None = None,
    doc_id: str = "",
) -> SectionedDocument:
    """Slice text into IMRAD sections by matching heading lines.

    Text between consecutive matched headings belongs to the earlier heading's
    section; anything before the first heading goes to `other`. The first
    occurrence of a canonical section wins; later repeats are left as body
    text. A heading such as "Results and Discussion" fills both sections with
    the same slice.
    """
    lexicon = DEFAULT_HEADING_LEXICON if heading_lexicon is None else heading_lexicon
    alias_map: dict[str, list[str]] = {}
    for canonical, phrases in lexicon.items():
        for phrase in phrases:
            alias_map.setdefault(phrase.lower(), []).append(canonical)

    sections = {name: "" for name in SECTION_NAMES}
    spans: list[tuple[str, int, str]] = []
    warnings: list[str] = []

    # (char offset of line start, heading text, canonicals) for each hit
    hits: list[tuple[int, int, str, list[str]]] = []
    seen: set[str] = set()
    offset = 0
    for line in clean_text.split("\n"):
        canonicals = [c for c in _heading_canonicals(line, alias_map) if c not in seen]
        if canonicals:
            hits.append((offset, offset + len(line), line.strip(), canonicals))
            seen.update(canonicals)
        offset += len(line) + 1

    if not hits:
        sections["other"] = clean_text
        warnings.append("NoSectionsFound")
        return SectionedDocument(doc_id, sections, [], warnings)

    sections["other"] = clean_text[: hits[0][0]].strip()
    for i, (start, line_end, heading, canonicals) in enumerate(hits):
        body_end = hits[i + 1][0] if i + 1 < len(hits) else len(clean_text)
        body = clean_text[line_end:body_end].strip()
        for canonical in canonicals:
            sections[canonical] = body
            spans.append((heading, start, canonical))
    return SectionedDocument(doc_id, sections, spans, warnings)


FINDING_SECTIONS = ("results", "discussion", "conclusions")


def select_finding_sections(doc: SectionedDocument) -> list[tuple[str, str]]:
    """The extraction surface: results, discussion, conclusions, in order."""
    out = [(tag, doc.sections.get(tag, "")) for tag in FINDING_SECTIONS]
    out = [(tag, text) for tag, text in out if text]
    if not out:
        raise NoFindingsText(f"{doc.doc_id or 'document'}: no findings text")
    return out
