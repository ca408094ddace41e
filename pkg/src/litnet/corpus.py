"""Document store: PDF ingestion, metadata merge, keyword filter.

A corpus lives in one directory: corpus.jsonl (one record per line) plus a
pdfs/ subfolder. No database, everything diff-able.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from pathlib import Path

from . import pdftext
from .errors import AmbiguousMatch, ConfigError
from .storage import read_jsonl, write_jsonl

STATUSES = ("ingested", "normalized", "sectioned", "failed")


@dataclass
class DocumentRecord:
    doc_id: str
    title: str = ""
    abstract: str = ""
    year: int | None = None
    areas: list[str] = field(default_factory=list)
    pdf_path: str = ""
    raw_text: str = ""
    status: str = "ingested"
    warnings: list[str] = field(default_factory=list)

    def to_row(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "title": self.title,
            "abstract": self.abstract,
            "year": self.year,
            "areas": sorted(self.areas),
            "pdf_path": self.pdf_path,
            "raw_text": self.raw_text,
            "status": self.status,
            "warnings": self.warnings,
        }

    @classmethod
    def from_row(cls, row: dict) -> "DocumentRecord":
        return cls(
            doc_id=row["doc_id"],
            title=row.get("title", ""),
            abstract=row.get("abstract", ""),
            year=row.get("year"),
            areas=list(row.get("areas", [])),
            pdf_path=row.get("pdf_path", ""),
            raw_text=row.get("raw_text", ""),
            status=row.get("status", "ingested"),
            warnings=list(row.get("warnings", [])),
        )


def slugify(name: str) -> str:
    stem = Path(name).stem.lower()
    slug = re.sub(r"[^a-z0-9]+", "-", stem).strip("-")
    return slug or "doc"


def extract_pdf_text(pdf_path: str | Path) -> str:
    """Plain text of a PDF, pages joined by single newlines."""
    return pdftext.extract_text(pdf_path)


LOGICAL_FIELDS = ("id", "title", "abstract", "year", "areas")


@dataclass
class MetadataTable:
    rows: list[dict]
    column_map: dict[str, str]

    def __post_init__(self) -> None:
        missing = {"title", "year"} - set(self.column_map)
        if missing:
            raise ConfigError(f"column_map must cover title and year; missing {sorted(missing)}")

    @classmethod
    def load(cls, path: str | Path, column_map: dict[str, str]) -> "MetadataTable":
        text = Path(path).read_text(encoding="utf-8-sig")
        first_line = text.splitlines()[0] if text.splitlines() else ""
        delimiter = "\t" if "\t" in first_line else ","
        reader = csv.DictReader(io.StringIO(text), delimiter=delimiter)
        rows = [dict(r) for r in reader]
        return cls(rows, column_map)

    def field_of(self, row: dict, logical: str) -> str:
        column = self.column_map.get(logical)
        if column is None:
            return ""
        return (row.get(column) or "").strip()


def _join_key(text: str) -> str:
    return re.sub(r"\s+", " ", text).strip().lower()


def merge_metadata(records: list[DocumentRecord], meta: MetadataTable) -> list[DocumentRecord]:
    """Fill title/abstract/year/areas from the table; join on id, else title.

    Unmatched records pass through with a warning. Duplicate join keys in the
    table are an error: the match would be arbitrary.
    """
    by_id: dict[str, dict] = {}
    by_title: dict[str, dict] = {}
    for row in meta.rows:
        rid = _join_key(meta.field_of(row, "id"))
        if rid:
            if rid in by_id:
                raise AmbiguousMatch(f"metadata id {rid!r} appears twice")
            by_id[rid] = row
        title = _join_key(meta.field_of(row, "title"))
        if title:
            if title in by_title:
                raise AmbiguousMatch(f"metadata title {title!r} appears twice")
            by_title[title] = row

    out: list[DocumentRecord] = []
    for rec in records:
        row = by_id.get(_join_key(rec.doc_id))
        if row is None:
            row = by_title.get(_join_key(rec.title))
        if row is None:
            if "NoMetadataMatch" not in rec.warnings:
                rec.warnings.append("NoMetadataMatch")
            out.append(rec)
            continue
        title = meta.field_of(row, "title")
        if title:
            rec.title = title
        abstract = meta.field_of(row, "abstract")
        if abstract:
            rec.abstract = abstract
        year_text = meta.field_of(row, "year")
        if year_text:
            try:
                rec.year = int(year_text)
            except ValueError:
                rec.warnings.append(f"BadYear:{year_text}")
        areas_text = meta.field_of(row, "areas")
        if areas_text:
            rec.areas = sorted(
                {a.strip() for a in re.split(r"[;,]", areas_text) if a.strip()}
            )
        out.append(rec)
    return out


def filter_by_keywords(
    records: list[DocumentRecord],
    keywords: list[str],
    fields: tuple[str, ...] = ("title", "abstract"),
) -> list[DocumentRecord]:
    """Keep records with any keyword as a whole word in any selected field."""
    if not keywords:
        raise ConfigError("keyword filter called with no keywords")
    patterns = [re.compile(rf"\b{re.escape(k)}\b", re.IGNORECASE) for k in keywords]
    kept = []
    for rec in records:
        haystacks = [getattr(rec, f, "") for f in fields]
        if any(p.search(h) for p in patterns for h in haystacks if h):
            kept.append(rec)
    return kept


class CorpusStore:
    """corpus.jsonl in a corpus directory; single writer, many readers."""

    def __init__(self, corpus_dir: str | Path):
        self.dir = Path(corpus_dir)
        self.path = self.dir / "corpus.jsonl"

    def load(self) -> list[DocumentRecord]:
        if not self.path.exists():
            return []
        return [DocumentRecord.from_row(r) for r in read_jsonl(self.path)]

    def save(self, records: list[DocumentRecord]) -> None:
        self.dir.mkdir(parents=True, exist_ok=True)
        write_jsonl(self.path, [r.to_row() for r in records])

    def pdf_dir(self) -> Path:
        return self.dir / "pdfs"


def ingest_pdfs(
    pdf_paths: list[Path],
) -> tuple[list[DocumentRecord], list[tuple[Path, str]]]:
    """Extract every PDF; (records, failures). Failed files become status=failed."""
    records: list[DocumentRecord] = []
    failures: list[tuple[Path, str]] = []
    seen: set[str] = set()
    for path in sorted(pdf_paths):
        doc_id = slugify(path.name)
        suffix = 2
        while doc_id in seen:
            doc_id = f"{slugify(path.name)}-{suffix}"
            suffix += 1
        seen.add(doc_id)
        try:
            text = pdftext.extract_text(path)
        except (pdftext.UnreadablePdf, pdftext.EmptyDocument) as exc:
            records.append(
                DocumentRecord(doc_id, pdf_path=str(path), status="failed", warnings=[str(exc)])
            )
            failures.append((path, str(exc)))
            continue
        records.append(DocumentRecord(doc_id, pdf_path=str(path), raw_text=text))
    return records, failures
