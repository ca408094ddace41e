"""Stage orchestration: resumable file-based pipeline over a corpus directory.

Each stage reads the previous stage's artifact and writes its own. A manifest
records input digests at completion, so a rerun skips any stage whose inputs
are unchanged and whose outputs still exist. One run per corpus directory,
enforced by a lock file.
"""

from __future__ import annotations

import json
import os
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import yaml

from . import __version__
from .config import PipelineConfig
from .corpus import CorpusStore, MetadataTable, filter_by_keywords, ingest_pdfs, merge_metadata
from .errors import (
    ConfigError,
    LockHeld,
    MissingPriorStage,
    NoFindingsText,
    RuleCompileError,
)
from .findnet import build_graph, build_incidence
from .graphio import export_wordcloud, render_svg, to_dot, to_graphml, to_json_dict, from_json_dict
from .nlp import AdapterTagger, BuiltinTagger, SentenceRecord, Token, sentence_records
from .relex import PhraseRule, RelationTriple, dedup_relations, extract_relations
from .storage import (
    atomic_write_text,
    canonical_json,
    read_jsonl,
    sha256_file,
    write_jsonl,
    write_tsv,
)
from .textprep import (
    CleaningRule,
    SectionedDocument,
    default_rules,
    detect_imrad,
    normalize_text,
    select_finding_sections,
)
from .verblex import CueLexicon, VerbDictionary, harvest_verbs

STAGES = ("ingest", "normalize", "sectionize", "tagsents", "harvest", "extract", "graph", "render")

ARTIFACTS = {
    "ingest": ("corpus.jsonl",),
    "normalize": ("normalized.jsonl",),
    "sectionize": ("sections.jsonl",),
    "tagsents": ("sentences.jsonl",),
    "harvest": ("verb_counts.tsv",),
    "extract": ("relations.jsonl",),
    "graph": ("graph.json", "graph.graphml", "graph.dot", "wordcloud.tsv"),
    "render": ("graph.svg",),
}


@dataclass
class StageResult:
    stage: str
    skipped: bool = False
    failures: list[str] = field(default_factory=list)
    outputs: list[Path] = field(default_factory=list)
    message: str = ""


# ------------------------------------------------------------------- locking

@contextmanager
def corpus_lock(corpus_dir: str | Path):
    """Exclusive lock on a corpus directory for the duration of a run."""
    lock_path = Path(corpus_dir) / ".lock"
    lock_path.parent.mkdir(parents=True, exist_ok=True)
    try:
        fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise LockHeld(
            f"{lock_path} exists; another run may be active (delete it if stale)"
        ) from None
    try:
        os.write(fd, str(os.getpid()).encode())
        os.close(fd)
        yield
    finally:
        try:
            lock_path.unlink()
        except OSError:
            pass


# ------------------------------------------------------------------ manifest

class RunManifest:
    def __init__(self, corpus_dir: str | Path):
        self.path = Path(corpus_dir) / "manifest.json"
        self.data: dict = {"tool_version": __version__, "stages": {}}
        if self.path.exists():
            try:
                self.data = json.loads(self.path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError):
                pass
        self.data.setdefault("stages", {})

    def recorded_inputs(self, stage: str) -> dict | None:
        entry = self.data["stages"].get(stage)
        return entry.get("inputs") if entry else None

    def record(self, stage: str, inputs: dict, outputs: list[Path]) -> None:
        self.data["tool_version"] = __version__
        self.data["stages"][stage] = {
            "inputs": inputs,
            "outputs": [p.name for p in outputs],
            "completed": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        }
        atomic_write_text(self.path, canonical_json(self.data))

    def refresh_input(self, earlier_stages: list[str], name: str, digest: str) -> None:
        """Re-pin `name` for stages whose input file a later stage rewrote in place."""
        changed = False
        for stage in earlier_stages:
            entry = self.data["stages"].get(stage)
            if entry and name in entry.get("inputs", {}):
                if entry["inputs"][name] != digest:
                    entry["inputs"][name] = digest
                    changed = True
        if changed:
            atomic_write_text(self.path, canonical_json(self.data))


def _digest_or_absent(path: Path) -> str:
    return sha256_file(path) if path.exists() else "absent"


def _stage_inputs(stage: str, config: PipelineConfig) -> dict[str, str]:
    d = Path(config.corpus_dir)
    inputs: dict[str, str] = {"config": config.stage_digest(stage)}
    if stage == "ingest":
        for pdf in sorted(config.pdf_dir().glob("*.pdf")):
            inputs[f"pdf:{pdf.name}"] = sha256_file(pdf)
        if config.metadata_file:
            inputs["metadata"] = _digest_or_absent(Path(config.metadata_file))
    elif stage == "normalize":
        inputs["corpus.jsonl"] = _digest_or_absent(d / "corpus.jsonl")
    elif stage == "sectionize":
        inputs["normalized.jsonl"] = _digest_or_absent(d / "normalized.jsonl")
    elif stage == "tagsents":
        inputs["sections.jsonl"] = _digest_or_absent(d / "sections.jsonl")
    elif stage == "harvest":
        inputs["sentences.jsonl"] = _digest_or_absent(d / "sentences.jsonl")
        inputs["verbs"] = _digest_or_absent(config.verbs_path)
    elif stage == "extract":
        inputs["sentences.jsonl"] = _digest_or_absent(d / "sentences.jsonl")
        inputs["verbs"] = _digest_or_absent(config.verbs_path)
    elif stage == "graph":
        inputs["relations.jsonl"] = _digest_or_absent(d / "relations.jsonl")
        inputs["sentences.jsonl"] = _digest_or_absent(d / "sentences.jsonl")
    elif stage == "render":
        inputs["graph.json"] = _digest_or_absent(d / "graph.json")
    return inputs


# ---------------------------------------------------------------- file forms

def read_sentences(corpus_dir: str | Path) -> list[SentenceRecord]:
    path = Path(corpus_dir) / "sentences.jsonl"
    if not path.exists():
        raise MissingPriorStage("sentences.jsonl missing; run tagsents first")
    out: list[SentenceRecord] = []
    for row in read_jsonl(path):
        tokens = [Token(t["surface"], t["lemma"], t["upos"], t["start"], t["end"]) for t in row["tokens"]]
        out.append(SentenceRecord(row["doc_id"], row["section"], row["sent_index"], row["text"], tokens))
    return out


def read_relations(corpus_dir: str | Path) -> list[RelationTriple]:
    path = Path(corpus_dir) / "relations.jsonl"
    if not path.exists():
        raise MissingPriorStage("relations.jsonl missing; run extract first")
    return [RelationTriple.from_row(r) for r in read_jsonl(path)]


def _load_cleaning_rules(config: PipelineConfig) -> list[CleaningRule]:
    if config.cleaning_rules_file is None:
        return default_rules()
    try:
        raw = yaml.safe_load(Path(config.cleaning_rules_file).read_text(encoding="utf-8")) or []
    except yaml.YAMLError as exc:
        raise ConfigError(f"cleaning rules file is not valid YAML: {exc}") from exc
    rules = []
    for item in raw:
        try:
            rules.append(
                CleaningRule(str(item["name"]), str(item["pattern"]), str(item.get("replacement", "")))
            )
        except KeyError as exc:
            raise ConfigError(f"cleaning rule missing field {exc}") from exc
    return rules


def _load_heading_lexicon(config: PipelineConfig) -> dict[str, tuple[str, ...]] | None:
    if config.heading_lexicon_file is None:
        return None
    try:
        raw = yaml.safe_load(Path(config.heading_lexicon_file).read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"heading lexicon file is not valid YAML: {exc}") from exc
    return {str(k): tuple(str(p) for p in v) for k, v in raw.items()}


def _make_tagger(config: PipelineConfig):
    if config.tagger == "adapter":
        return AdapterTagger(config.adapter_command)
    return BuiltinTagger()


def make_cue_lexicon(config: PipelineConfig) -> CueLexicon:
    return CueLexicon(
        positive_cues=frozenset(config.positive_cues),
        negative_cues=frozenset(config.negative_cues),
        window=config.cue_window,
    )


def make_phrase_rule(config: PipelineConfig) -> PhraseRule:
    return PhraseRule(gap=config.phrase_gap, max_phrase_len=config.max_phrase_len)


# ------------------------------------------------------------------- stages

def _stage_ingest(config: PipelineConfig) -> StageResult:
    pdf_dir = config.pdf_dir()
    if not pdf_dir.is_dir():
        raise ConfigError(f"no pdfs directory at {pdf_dir}")
    pdfs = sorted(pdf_dir.glob("*.pdf"))
    if not pdfs:
        raise ConfigError(f"no PDF files in {pdf_dir}")
    records, failures = ingest_pdfs(pdfs)
    ok = [r for r in records if r.status != "failed"]
    failed = [r for r in records if r.status == "failed"]
    if config.metadata_file:
        meta = MetadataTable.load(config.metadata_file, config.column_map)
        ok = merge_metadata(ok, meta)
    if config.keywords:
        ok = filter_by_keywords(ok, config.keywords, tuple(config.keyword_fields))
    store = CorpusStore(config.corpus_dir)
    store.save(ok + failed)
    return StageResult(
        "ingest",
        failures=[f"{p.name}: {msg}" for p, msg in failures],
        outputs=[store.path],
        message=f"{len(ok)} documents ingested, {len(failed)} failed",
    )


def _stage_normalize(config: PipelineConfig) -> StageResult:
    store = CorpusStore(config.corpus_dir)
    if not store.path.exists():
        raise MissingPriorStage("corpus.jsonl missing; run ingest first")
    try:
        rules = _load_cleaning_rules(config)
    except RuleCompileError as exc:
        raise ConfigError(str(exc)) from exc
    records = store.load()
    rows = []
    failures = []
    for rec in records:
        if rec.status == "failed" or not rec.raw_text:
            continue
        clean = normalize_text(rec.raw_text, rules)
        if not clean:
            rec.status = "failed"
            rec.warnings.append("EmptyAfterCleaning")
            failures.append(f"{rec.doc_id}: empty after cleaning")
            continue
        rows.append({"doc_id": rec.doc_id, "clean_text": clean})
        if rec.status == "ingested":
            rec.status = "normalized"
    out = Path(config.corpus_dir) / "normalized.jsonl"
    write_jsonl(out, rows)
    store.save(records)
    return StageResult("normalize", failures=failures, outputs=[out, store.path],
                       message=f"{len(rows)} documents normalized")


def _stage_sectionize(config: PipelineConfig) -> StageResult:
    d = Path(config.corpus_dir)
    src = d / "normalized.jsonl"
    if not src.exists():
        raise MissingPriorStage("normalized.jsonl missing; run normalize first")
    lexicon = _load_heading_lexicon(config)
    store = CorpusStore(config.corpus_dir)
    records = {r.doc_id: r for r in store.load()}
    rows = []
    for row in read_jsonl(src):
        doc = detect_imrad(row["clean_text"], lexicon, doc_id=row["doc_id"])
        rows.append(
            {
                "doc_id": doc.doc_id,
                "sections": doc.sections,
                "heading_spans": [list(s) for s in doc.heading_spans],
                "warnings": doc.warnings,
            }
        )
        rec = records.get(doc.doc_id)
        if rec is not None:
            for w in doc.warnings:
                if w not in rec.warnings:
                    rec.warnings.append(w)
            if rec.status == "normalized":
                rec.status = "sectioned"
    out = d / "sections.jsonl"
    write_jsonl(out, rows)
    store.save(list(records.values()))
    return StageResult("sectionize", outputs=[out, store.path],
                       message=f"{len(rows)} documents sectioned")


def _stage_tagsents(config: PipelineConfig) -> StageResult:
    d = Path(config.corpus_dir)
    src = d / "sections.jsonl"
    if not src.exists():
        raise MissingPriorStage("sections.jsonl missing; run sectionize first")
    tagger = _make_tagger(config)
    rows = []
    failures = []
    try:
        for row in read_jsonl(src):
            doc = SectionedDocument(row["doc_id"], row["sections"], [], row.get("warnings", []))
            try:
                parts = select_finding_sections(doc)
            except NoFindingsText:
                failures.append(f"{row['doc_id']}: no findings text")
                continue
            for tag, text in parts:
                for rec in sentence_records(row["doc_id"], tag, text, tagger):
                    rows.append(
                        {
                            "doc_id": rec.doc_id,
                            "section": rec.section_tag,
                            "sent_index": rec.sent_index,
                            "text": rec.text,
                            "tokens": [
                                {
                                    "surface": t.surface,
                                    "lemma": t.lemma,
                                    "upos": t.upos,
                                    "start": t.start,
                                    "end": t.end,
                                }
                                for t in rec.tokens
                            ],
                        }
                    )
    finally:
        if hasattr(tagger, "close"):
            tagger.close()
    out = d / "sentences.jsonl"
    write_jsonl(out, rows)
    return StageResult("tagsents", failures=failures, outputs=[out],
                       message=f"{len(rows)} sentences tagged")


def _stage_harvest(config: PipelineConfig) -> StageResult:
    sentences = read_sentences(config.corpus_dir)
    counts = harvest_verbs(sentences)
    d = Path(config.corpus_dir)
    counts_path = d / "verb_counts.tsv"
    write_tsv(counts_path, ["lemma", "frequency"], [(l, str(c)) for l, c in counts])
    verbs_path = config.verbs_path
    dictionary = VerbDictionary.load(verbs_path) if verbs_path.exists() else VerbDictionary.with_seed()
    for lemma, _ in counts:
        dictionary.add_unclassified(lemma)
    dictionary.save(verbs_path)
    pending = len(dictionary.pending())
    return StageResult("harvest", outputs=[counts_path, verbs_path],
                       message=f"{len(counts)} verb lemmas; {pending} unclassified")


def _stage_extract(config: PipelineConfig) -> StageResult:
    sentences = read_sentences(config.corpus_dir)
    verbs_path = config.verbs_path
    if not verbs_path.exists():
        raise MissingPriorStage(f"{verbs_path.name} missing; run harvest first")
    dictionary = VerbDictionary.load(verbs_path)
    cues = make_cue_lexicon(config)
    rule = make_phrase_rule(config)
    triples: list[RelationTriple] = []
    for rec in sentences:
        triples.extend(
            extract_relations(
                rec,
                dictionary,
                cues,
                rule,
                depend_no_cue=config.depend_no_cue,
                negation_flip=config.negation_flip,
            )
        )
    triples = dedup_relations(triples)
    out = Path(config.corpus_dir) / "relations.jsonl"
    write_jsonl(out, [t.to_row() for t in triples])
    return StageResult("extract", outputs=[out], message=f"{len(triples)} relations")


def _stage_graph(config: PipelineConfig) -> StageResult:
    d = Path(config.corpus_dir)
    triples = read_relations(config.corpus_dir)
    sentences_path = d / "sentences.jsonl"
    if sentences_path.exists():
        n_articles = len({row["doc_id"] for row in read_jsonl(sentences_path)})
    else:
        n_articles = None
    incidence = build_incidence(triples)
    graph = build_graph(
        incidence,
        n_articles=n_articles or None,
        sign_basis=config.sign_basis,
        rings=config.rings,
    )
    json_path = d / "graph.json"
    atomic_write_text(json_path, canonical_json(to_json_dict(graph)))
    graphml_path = d / "graph.graphml"
    atomic_write_text(graphml_path, to_graphml(graph))
    dot_path = d / "graph.dot"
    atomic_write_text(dot_path, to_dot(graph))
    cloud_path = d / "wordcloud.tsv"
    write_tsv(cloud_path, ["label", "degree"], [(l, str(c)) for l, c in export_wordcloud(graph)])
    return StageResult(
        "graph",
        outputs=[json_path, graphml_path, dot_path, cloud_path],
        message=f"{len(graph.words)} nodes, {len(graph.edges)} edges over {graph.n_articles} articles",
    )


def _stage_render(config: PipelineConfig) -> StageResult:
    d = Path(config.corpus_dir)
    src = d / "graph.json"
    if not src.exists():
        raise MissingPriorStage("graph.json missing; run graph first")
    graph = from_json_dict(json.loads(src.read_text(encoding="utf-8")))
    svg = render_svg(graph, mode="cluster")
    out = d / "graph.svg"
    atomic_write_text(out, svg)
    return StageResult("render", outputs=[out], message="graph.svg written")


_STAGE_FNS = {
    "ingest": _stage_ingest,
    "normalize": _stage_normalize,
    "sectionize": _stage_sectionize,
    "tagsents": _stage_tagsents,
    "harvest": _stage_harvest,
    "extract": _stage_extract,
    "graph": _stage_graph,
    "render": _stage_render,
}

# files a stage rewrites in place that earlier stages also read; their
# recorded digests must be re-pinned or those stages would rerun forever
_REWRITES = {"normalize": ("corpus.jsonl",), "sectionize": ("corpus.jsonl",)}


def run_stage(stage: str, config: PipelineConfig, force: bool = False) -> StageResult:
    """Run one stage, or skip it when inputs are unchanged and outputs exist."""
    if stage not in _STAGE_FNS:
        raise ConfigError(f"unknown stage {stage!r}")
    d = Path(config.corpus_dir)
    manifest = RunManifest(d)
    current = _stage_inputs(stage, config)
    outputs_exist = all((d / name).exists() for name in ARTIFACTS[stage]) and (
        stage != "harvest" or config.verbs_path.exists()
    )
    if not force and outputs_exist and manifest.recorded_inputs(stage) == current:
        return StageResult(stage, skipped=True, message="inputs unchanged")
    result = _STAGE_FNS[stage](config)
    manifest.record(stage, _stage_inputs(stage, config), result.outputs)
    earlier = list(STAGES[: STAGES.index(stage)])
    for name in _REWRITES.get(stage, ()):
        manifest.refresh_input(earlier, name, _digest_or_absent(d / name))
    return result


def run_all(config: PipelineConfig, force: bool = False) -> list[StageResult]:
    return [run_stage(stage, config, force=force) for stage in STAGES]
