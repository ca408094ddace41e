"""HTTP API over a built corpus directory.

Read endpoints serve an immutable snapshot; rebuilds construct a fresh
snapshot aside and swap it in only on success, so clients never observe a
half-built graph. Verb classification writes go through the dictionary and
are serialized by a lock.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import FileResponse, HTMLResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .config import PipelineConfig
from .errors import (
    GraphNotBuilt,
    InvalidCategory,
    LitnetError,
    LockHeld,
    MissingPriorStage,
    RebuildInProgress,
    UnknownVerb,
    UnknownWord,
)
from .findnet import FilterSpec, FindingsGraph, build_graph, build_incidence, filter_graph
from .graphio import to_json_dict
from .nlp import SentenceRecord
from .pipeline import corpus_lock, read_relations, read_sentences, run_stage
from .relex import RelationTriple
from .storage import canonical_json, read_jsonl
from .verblex import CATEGORIES, VerbDictionary, harvest_verbs, sample_sentences

PLACEHOLDER_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>litnet</title></head>
<body><h1>litnet API</h1>
<p>The web UI bundle is not built. The JSON API is live under <code>/api/</code>.</p>
</body></html>"""


@dataclass
class Snapshot:
    """One fully built, immutable view of the corpus artifacts."""

    graph: FindingsGraph
    graph_bytes: bytes
    relations: list[RelationTriple]
    metadata: dict[str, dict]


@dataclass
class ApiSession:
    config: PipelineConfig
    dirty: bool = False
    _snapshot: Snapshot | None = None
    _dictionary: VerbDictionary | None = None
    _sentences: list[SentenceRecord] | None = None
    _load_lock: threading.Lock = field(default_factory=threading.Lock)
    _write_lock: threading.Lock = field(default_factory=threading.Lock)
    _rebuild_lock: threading.Lock = field(default_factory=threading.Lock)

    # -------------------------------------------------------------- loading

    def _read_metadata(self) -> dict[str, dict]:
        path = Path(self.config.corpus_dir) / "corpus.jsonl"
        if not path.exists():
            return {}
        return {
            row["doc_id"]: {"title": row.get("title", ""), "year": row.get("year")}
            for row in read_jsonl(path)
        }

    def _build_snapshot(self) -> Snapshot:
        d = Path(self.config.corpus_dir)
        graph_path = d / "graph.json"
        if not graph_path.exists():
            raise GraphNotBuilt(f"{graph_path} missing; run the graph stage first")
        relations = read_relations(d)
        sentences = self.sentences()
        n_articles = len({rec.doc_id for rec in sentences})
        graph = build_graph(
            build_incidence(relations),
            n_articles=n_articles,
            sign_basis=self.config.sign_basis,
            rings=self.config.rings,
        )
        return Snapshot(graph, graph_path.read_bytes(), relations, self._read_metadata())

    def snapshot(self) -> Snapshot:
        if self._snapshot is None:
            with self._load_lock:
                if self._snapshot is None:
                    self._snapshot = self._build_snapshot()
        return self._snapshot

    def sentences(self) -> list[SentenceRecord]:
        if self._sentences is None:
            self._sentences = read_sentences(self.config.corpus_dir)
        return self._sentences

    def dictionary(self) -> VerbDictionary:
        if self._dictionary is None:
            path = self.config.verbs_path
            if not path.exists():
                raise MissingPriorStage(f"{path} missing; run harvest first")
            self._dictionary = VerbDictionary.load(path)
        return self._dictionary

    # -------------------------------------------------------------- actions

    def classify(self, lemma: str, category: str) -> dict:
        with self._write_lock:
            entry = self.dictionary().classify(lemma, category)
            self.dirty = True
            return {
                "lemma": entry.lemma,
                "category": entry.category,
                "dirty": self.dirty,
                "pending": len(self.dictionary().pending()),
            }

    def rebuild(self) -> dict:
        if not self._rebuild_lock.acquire(blocking=False):
            raise RebuildInProgress("rebuild already running")
        try:
            old = self._snapshot
            try:
                with corpus_lock(self.config.corpus_dir):
                    stages = [run_stage(s, self.config) for s in ("extract", "graph")]
            except LockHeld as exc:
                raise RebuildInProgress(str(exc)) from None
            fresh = self._build_snapshot()
            self._snapshot = fresh
            self.dirty = False
            counts = _edge_changes(old.graph if old else None, fresh.graph)
            counts["stages"] = [
                {"stage": r.stage, "skipped": r.skipped, "message": r.message} for r in stages
            ]
            counts["dirty"] = self.dirty
            return counts
        finally:
            self._rebuild_lock.release()


def _edge_changes(old: FindingsGraph | None, new: FindingsGraph) -> dict:
    new_edges = {(e.source, e.target): e.dominant_sign for e in new.edges}
    old_edges = {} if old is None else {(e.source, e.target): e.dominant_sign for e in old.edges}
    added = len(set(new_edges) - set(old_edges))
    removed = len(set(old_edges) - set(new_edges))
    sign_changed = sum(
        1 for pair in set(new_edges) & set(old_edges) if new_edges[pair] != old_edges[pair]
    )
    return {
        "edges_added": added,
        "edges_removed": removed,
        "edges_sign_changed": sign_changed,
        "edges_total": len(new_edges),
    }


class CategoryBody(BaseModel):
    category: str


def _ui_dir() -> Path | None:
    override = os.environ.get("LITNET_UI_DIR")
    candidates = [Path(override)] if override else []
    candidates.append(Path(__file__).resolve().parents[2] / "frontend" / "dist")
    for cand in candidates:
        if cand.is_dir() and (cand / "index.html").exists():
            return cand
    return None


def create_app(config: PipelineConfig, ui_dir: str | Path | None = None) -> FastAPI:
    session = ApiSession(config)
    app = FastAPI(title="litnet", docs_url=None, redoc_url=None)
    app.state.session = session

    ui = Path(ui_dir) if ui_dir is not None else _ui_dir()

    @app.get("/api/graph")
    def get_graph(
        ego_in: str | None = Query(default=None),
        ego_out: str | None = Query(default=None),
        targets: str | None = Query(default=None),
        clusters: int | None = Query(default=None, ge=1),
        sample_n: int | None = Query(default=None, ge=0),
        sample_seed: int | None = Query(default=None),
    ):
        try:
            snap = session.snapshot()
        except (GraphNotBuilt, MissingPriorStage) as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        spec = FilterSpec(
            ego_in=ego_in,
            ego_out=ego_out,
            targets_any=frozenset(t.strip() for t in targets.split(",") if t.strip())
            if targets
            else None,
            top_clusters=clusters,
            article_sample_n=sample_n,
            article_sample_seed=sample_seed
            if sample_seed is not None
            else config.sample_seed,
        )
        if spec.is_identity():
            return Response(content=snap.graph_bytes, media_type="application/json")
        try:
            view = filter_graph(snap.graph, spec, sign_basis=config.sign_basis, rings=config.rings)
        except UnknownWord as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return Response(content=canonical_json(to_json_dict(view)), media_type="application/json")

    @app.get("/api/provenance")
    def get_provenance(source: str = Query(...), target: str = Query(...)):
        try:
            snap = session.snapshot()
        except (GraphNotBuilt, MissingPriorStage) as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        rows = [
            r for r in snap.relations if r.source_label == source and r.target_label == target
        ]
        if not rows:
            raise HTTPException(status_code=404, detail=f"no relation {source!r} -> {target!r}")
        entries = []
        for r in rows:
            meta = snap.metadata.get(r.doc_id, {})
            entries.append(
                {
                    "doc_id": r.doc_id,
                    "title": meta.get("title", ""),
                    "year": meta.get("year"),
                    "sentence": r.sentence_text,
                    "verb": r.verb_lemma,
                    "sign": r.sign,
                }
            )
        entries.sort(key=lambda e: (e["doc_id"], e["sentence"]))
        return {"source": source, "target": target, "entries": entries}

    @app.get("/api/verbs")
    def get_verbs():
        try:
            dictionary = session.dictionary()
            counts = dict(harvest_verbs(session.sentences()))
        except (MissingPriorStage, LitnetError) as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        pending = sorted(dictionary.pending(), key=lambda l: (-counts.get(l, 0), l))
        return {
            "pending": [{"lemma": l, "count": counts.get(l, 0)} for l in pending],
            "classified": len(dictionary) - len(pending),
            "total": len(dictionary),
            "dirty": session.dirty,
        }

    @app.get("/api/verbs/{lemma}/sample")
    def get_verb_sample(
        lemma: str,
        n: int = Query(default=10, ge=1),
        seed: int | None = Query(default=None),
    ):
        try:
            sents = sample_sentences(
                lemma,
                session.sentences(),
                n=n,
                seed=seed if seed is not None else config.sample_seed,
            )
        except UnknownVerb as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except MissingPriorStage as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        out = []
        for rec in sents:
            span = next(
                ((t.start, t.end) for t in rec.tokens if t.upos == "VERB" and t.lemma == lemma),
                None,
            )
            out.append(
                {
                    "doc_id": rec.doc_id,
                    "section": rec.section_tag,
                    "sent_index": rec.sent_index,
                    "text": rec.text,
                    "verb_start": span[0] if span else None,
                    "verb_end": span[1] if span else None,
                }
            )
        return {"lemma": lemma, "sentences": out}

    @app.post("/api/verbs/{lemma}")
    def post_verb(lemma: str, body: CategoryBody):
        if body.category not in CATEGORIES:
            raise HTTPException(
                status_code=400,
                detail=f"category must be one of {sorted(CATEGORIES)}, got {body.category!r}",
            )
        try:
            return session.classify(lemma, body.category)
        except UnknownVerb as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except InvalidCategory as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except MissingPriorStage as exc:
            raise HTTPException(status_code=409, detail=str(exc))

    @app.post("/api/rebuild")
    def post_rebuild():
        try:
            return session.rebuild()
        except (RebuildInProgress, MissingPriorStage, GraphNotBuilt) as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except LitnetError as exc:
            raise HTTPException(status_code=500, detail=str(exc))

    if ui is not None and (ui / "assets").is_dir():
        app.mount("/assets", StaticFiles(directory=ui / "assets"), name="assets")

    @app.get("/", include_in_schema=False)
    def index():
        if ui is not None:
            return FileResponse(ui / "index.html")
        return HTMLResponse(PLACEHOLDER_PAGE)

    return app
