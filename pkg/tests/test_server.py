"""HTTP API behaviour against a fully built corpus."""

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

import litnet.server as server
from conftest import load_corpus_config
from litnet.server import create_app
from litnet.synth import generate_corpus


@pytest.fixture
def client(corpus_copy):
    app = create_app(load_corpus_config(corpus_copy))
    with TestClient(app) as c:
        yield c


def graph_payload(client, **params) -> dict:
    resp = client.get("/api/graph", params=params)
    assert resp.status_code == 200, resp.text
    return resp.json()


def edge_map(payload: dict) -> dict[tuple[str, str], str]:
    return {(e["source"], e["target"]): e["dominant_sign"] for e in payload["edges"]}


def node_labels(payload: dict) -> set[str]:
    return {n["label"] for n in payload["nodes"]}


class TestGraphEndpoint:
    def test_unfiltered_graph_is_the_exported_file(self, client, corpus_copy):
        resp = client.get("/api/graph")
        assert resp.status_code == 200
        assert resp.headers["content-type"].startswith("application/json")
        assert resp.content == (corpus_copy / "graph.json").read_bytes()

    def test_ego_in_keeps_sources_pointing_at_the_word(self, client):
        full = graph_payload(client)
        expected_edges = {p for p in edge_map(full) if p[1] == "awareness"}
        assert expected_edges  # the corpus supports this query
        view = graph_payload(client, ego_in="awareness")
        assert set(edge_map(view)) == expected_edges
        assert node_labels(view) == {"awareness"} | {s for s, _ in expected_edges}

    def test_ego_out_keeps_targets_of_the_word(self, client):
        full = graph_payload(client)
        expected_edges = {p for p in edge_map(full) if p[0] == "education"}
        assert expected_edges
        view = graph_payload(client, ego_out="education")
        assert set(edge_map(view)) == expected_edges
        assert node_labels(view) == {"education"} | {t for _, t in expected_edges}

    def test_targets_filter_keeps_edges_into_listed_words(self, client):
        full = graph_payload(client)
        wanted = {"awareness", "vulnerability"}
        expected_edges = {p for p in edge_map(full) if p[1] in wanted}
        view = graph_payload(client, targets="awareness,vulnerability")
        assert set(edge_map(view)) == expected_edges
        involved = {w for pair in expected_edges for w in pair}
        assert node_labels(view) == involved | (wanted & node_labels(full))

    def test_cluster_filter_shrinks_the_graph(self, client):
        full = graph_payload(client)
        view = graph_payload(client, clusters=1)
        assert 0 < len(view["nodes"]) < len(full["nodes"])
        labels = node_labels(view)
        assert labels <= node_labels(full)
        assert all(e["source"] in labels and e["target"] in labels for e in view["edges"])

    def test_article_sample_is_seed_stable(self, client):
        first = client.get("/api/graph", params={"sample_n": 4, "sample_seed": 5})
        second = client.get("/api/graph", params={"sample_n": 4, "sample_seed": 5})
        assert first.content == second.content
        view = first.json()
        assert node_labels(view) <= node_labels(graph_payload(client))
        if view["edges"]:
            assert sum(e["weight"] for e in view["edges"]) == pytest.approx(1.0)

    def test_article_sample_of_zero_is_empty(self, client):
        view = graph_payload(client, sample_n=0)
        assert view["nodes"] == [] and view["edges"] == []

    def test_filters_compose(self, client):
        view = graph_payload(client, ego_in="awareness", clusters=1)
        labels = node_labels(view)
        assert labels <= node_labels(graph_payload(client, ego_in="awareness"))
        assert all(e["target"] == "awareness" for e in view["edges"])

    def test_unknown_ego_word_is_404(self, client):
        for params in ({"ego_in": "zzz"}, {"ego_out": "zzz"}):
            resp = client.get("/api/graph", params=params)
            assert resp.status_code == 404
            assert "zzz" in resp.json()["detail"]

    def test_unknown_target_words_give_an_empty_view(self, client):
        # targets is a set filter, so absent words simply match nothing
        view = graph_payload(client, targets="zzz")
        assert view["nodes"] == [] and view["edges"] == []

    def test_missing_graph_artifact_is_409(self, corpus_copy):
        (corpus_copy / "graph.json").unlink()
        with TestClient(create_app(load_corpus_config(corpus_copy))) as c:
            resp = c.get("/api/graph")
        assert resp.status_code == 409
        assert "graph" in resp.json()["detail"]

    def test_unbuilt_corpus_is_409(self, tmp_path):
        dest = tmp_path / "c"
        generate_corpus(dest, include_broken=False)
        with TestClient(create_app(load_corpus_config(dest))) as c:
            assert c.get("/api/graph").status_code == 409
            assert c.get("/api/verbs").status_code == 409


class TestProvenance:
    def test_entries_match_the_relation_store(self, client, corpus_copy):
        rows = [
            json.loads(line)
            for line in (corpus_copy / "relations.jsonl").read_text("utf-8").splitlines()
        ]
        matching = [r for r in rows if r["source"] == "education" and r["target"] == "awareness"]
        assert matching
        meta = {
            json.loads(line)["doc_id"]: json.loads(line)
            for line in (corpus_copy / "corpus.jsonl").read_text("utf-8").splitlines()
        }
        resp = client.get(
            "/api/provenance", params={"source": "education", "target": "awareness"}
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["source"] == "education" and body["target"] == "awareness"
        expected = sorted(
            (
                {
                    "doc_id": r["doc_id"],
                    "title": meta[r["doc_id"]]["title"],
                    "year": meta[r["doc_id"]]["year"],
                    "sentence": r["sentence"],
                    "verb": r["verb"],
                    "sign": r["sign"],
                }
                for r in matching
            ),
            key=lambda e: (e["doc_id"], e["sentence"]),
        )
        assert body["entries"] == expected

    def test_unknown_pair_is_404(self, client):
        resp = client.get("/api/provenance", params={"source": "education", "target": "zzz"})
        assert resp.status_code == 404

    def test_both_words_are_required(self, client):
        assert client.get("/api/provenance", params={"source": "education"}).status_code == 422


class TestVerbEndpoints:
    def test_pending_listing(self, client):
        body = client.get("/api/verbs").json()
        assert body["pending"] == [{"lemma": "matter", "count": 1}]
        assert body["classified"] == body["total"] - 1
        assert body["dirty"] is False

    def test_sample_is_seeded_and_spans_the_verb(self, client):
        resp = client.get("/api/verbs/increase/sample", params={"n": 2, "seed": 7})
        assert resp.status_code == 200
        body = resp.json()
        assert body["lemma"] == "increase"
        assert len(body["sentences"]) == 2
        for sent in body["sentences"]:
            surface = sent["text"][sent["verb_start"] : sent["verb_end"]]
            assert surface.lower().startswith("increas")
        again = client.get("/api/verbs/increase/sample", params={"n": 2, "seed": 7})
        assert again.json() == body

    def test_sample_validates_inputs(self, client):
        assert client.get("/api/verbs/zzz/sample").status_code == 404
        assert client.get("/api/verbs/increase/sample", params={"n": 0}).status_code == 422

    def test_classify_marks_session_dirty(self, client):
        resp = client.post("/api/verbs/matter", json={"category": "positive"})
        assert resp.status_code == 200
        body = resp.json()
        assert body == {"lemma": "matter", "category": "positive", "dirty": True, "pending": 0}
        assert client.get("/api/verbs").json()["dirty"] is True

    def test_classification_persists_to_disk(self, client, corpus_copy):
        client.post("/api/verbs/matter", json={"category": "negative"})
        verbs = (corpus_copy / "verbs.tsv").read_text("utf-8")
        row = next(l for l in verbs.splitlines() if l.startswith("matter\t"))
        assert row.split("\t")[1] == "negative"

    def test_bad_category_is_400(self, client):
        for category in ("bogus", "unclassified"):
            resp = client.post("/api/verbs/matter", json={"category": category})
            assert resp.status_code == 400

    def test_unknown_verb_is_404(self, client):
        assert client.post("/api/verbs/zzz", json={"category": "positive"}).status_code == 404


class TestRebuild:
    def test_clean_rebuild_skips_and_changes_nothing(self, client):
        before = client.get("/api/graph").content
        body = client.post("/api/rebuild").json()
        assert body["edges_added"] == 0
        assert body["edges_removed"] == 0
        assert body["edges_sign_changed"] == 0
        assert body["dirty"] is False
        assert [s["stage"] for s in body["stages"]] == ["extract", "graph"]
        assert all(s["skipped"] for s in body["stages"])
        assert client.get("/api/graph").content == before

    def test_new_classification_adds_the_supported_edge(self, client):
        old = edge_map(graph_payload(client))
        client.post("/api/verbs/adopt", json={"category": "positive"})
        body = client.post("/api/rebuild").json()
        new = edge_map(graph_payload(client))
        assert body["edges_added"] == len(set(new) - set(old)) == 1
        assert body["edges_removed"] == 0
        assert body["edges_sign_changed"] == 0
        assert body["edges_total"] == len(new) == len(old) + 1
        assert body["dirty"] is False
        assert not any(s["skipped"] for s in body["stages"])
        assert new[("farmer", "new practice")] == "positive"
        assert client.get("/api/verbs").json()["dirty"] is False

    def test_reclassification_flips_edge_signs(self, client):
        old = edge_map(graph_payload(client))
        client.post("/api/verbs/reduce", json={"category": "positive"})
        body = client.post("/api/rebuild").json()
        new = edge_map(graph_payload(client))
        flipped = {p for p in set(old) & set(new) if old[p] != new[p]}
        assert body["edges_sign_changed"] == len(flipped) == 3
        assert body["edges_added"] == 0 and body["edges_removed"] == 0
        assert all(new[p] == "positive" for p in flipped)

    def test_rebuild_refreshes_provenance(self, client):
        client.post("/api/verbs/adopt", json={"category": "positive"})
        assert (
            client.get(
                "/api/provenance", params={"source": "farmer", "target": "new practice"}
            ).status_code
            == 404
        )
        client.post("/api/rebuild")
        resp = client.get(
            "/api/provenance", params={"source": "farmer", "target": "new practice"}
        )
        assert resp.status_code == 200
        assert resp.json()["entries"][0]["verb"] == "adopt"

    def test_concurrent_rebuild_is_409(self, client):
        session = client.app.state.session
        assert session._rebuild_lock.acquire(blocking=False)
        try:
            resp = client.post("/api/rebuild")
            assert resp.status_code == 409
            assert "already running" in resp.json()["detail"]
        finally:
            session._rebuild_lock.release()
        assert client.post("/api/rebuild").status_code == 200

    def test_pipeline_lock_blocks_rebuild(self, client, corpus_copy):
        (corpus_copy / ".lock").write_text("", "utf-8")
        try:
            resp = client.post("/api/rebuild")
            assert resp.status_code == 409
            assert "another run may be active" in resp.json()["detail"]
        finally:
            (corpus_copy / ".lock").unlink()


class TestUiServing:
    def test_placeholder_page_without_a_bundle(self, corpus_copy, monkeypatch):
        monkeypatch.setattr(server, "_ui_dir", lambda: None)
        with TestClient(create_app(load_corpus_config(corpus_copy))) as c:
            resp = c.get("/")
        assert resp.status_code == 200
        assert "web UI bundle is not built" in resp.text

    def test_explicit_bundle_dir_is_served(self, corpus_copy, tmp_path):
        dist = tmp_path / "dist"
        (dist / "assets").mkdir(parents=True)
        (dist / "index.html").write_text("<html><body>bundled ui</body></html>", "utf-8")
        (dist / "assets" / "app.js").write_text("console.log('ui')", "utf-8")
        with TestClient(create_app(load_corpus_config(corpus_copy), ui_dir=dist)) as c:
            assert "bundled ui" in c.get("/").text
            asset = c.get("/assets/app.js")
            assert asset.status_code == 200
            assert "console.log" in asset.text

    def test_environment_override_locates_the_bundle(self, corpus_copy, tmp_path, monkeypatch):
        dist = tmp_path / "dist"
        dist.mkdir()
        (dist / "index.html").write_text("<html><body>env ui</body></html>", "utf-8")
        monkeypatch.setenv("LITNET_UI_DIR", str(dist))
        with TestClient(create_app(load_corpus_config(corpus_copy))) as c:
            assert "env ui" in c.get("/").text
