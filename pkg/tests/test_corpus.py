import pytest

from litnet.corpus import (
    CorpusStore,
    DocumentRecord,
    MetadataTable,
    filter_by_keywords,
    ingest_pdfs,
    merge_metadata,
    slugify,
)
from litnet.errors import AmbiguousMatch, ConfigError

from conftest import FIXTURES


class TestSlugify:
    def test_lowercases_and_dashes(self):
        assert slugify("Flood Risk (2021).pdf") == "flood-risk-2021"

    def test_strips_extension_only_once(self):
        assert slugify("study.v2.pdf") == "study-v2"

    def test_degenerate_name(self):
        assert slugify("!!!.pdf") == "doc"


def record(doc_id="d1", title="", abstract="", raw_text="body"):
    return DocumentRecord(doc_id, title=title, abstract=abstract, raw_text=raw_text)


def table(rows, column_map=None):
    column_map = column_map or {
        "id": "id", "title": "title", "abstract": "abstract", "year": "year", "areas": "areas",
    }
    return MetadataTable(rows, column_map)


class TestMetadataTable:
    def test_column_map_must_cover_title_and_year(self):
        with pytest.raises(ConfigError):
            MetadataTable([], {"title": "t"})

    def test_load_autodetects_comma(self, tmp_path):
        path = tmp_path / "meta.csv"
        path.write_text("id,title,year\nd1,Flood study,2020\n", encoding="utf-8")
        meta = MetadataTable.load(path, {"id": "id", "title": "title", "year": "year"})
        assert meta.field_of(meta.rows[0], "title") == "Flood study"

    def test_load_autodetects_tab(self, tmp_path):
        path = tmp_path / "meta.tsv"
        path.write_text("id\ttitle\tyear\nd1\tFlood study\t2020\n", encoding="utf-8")
        meta = MetadataTable.load(path, {"id": "id", "title": "title", "year": "year"})
        assert meta.field_of(meta.rows[0], "year") == "2020"

    def test_load_strips_utf8_bom(self, tmp_path):
        path = tmp_path / "meta.csv"
        path.write_bytes("﻿id,title,year\nd1,T,2020\n".encode("utf-8"))
        meta = MetadataTable.load(path, {"id": "id", "title": "title", "year": "year"})
        assert meta.field_of(meta.rows[0], "id") == "d1"

    def test_custom_column_names(self, tmp_path):
        path = tmp_path / "meta.csv"
        path.write_text("Key,Article Title,Pub Year\nd1,T,2019\n", encoding="utf-8")
        meta = MetadataTable.load(
            path, {"id": "Key", "title": "Article Title", "year": "Pub Year"}
        )
        assert meta.field_of(meta.rows[0], "year") == "2019"


class TestMergeMetadata:
    def test_join_by_id(self):
        recs = merge_metadata(
            [record("d1")],
            table([{"id": "d1", "title": "Floods", "year": "2020", "abstract": "A", "areas": ""}]),
        )
        assert recs[0].title == "Floods"
        assert recs[0].year == 2020
        assert recs[0].abstract == "A"

    def test_join_by_title_normalizes_case_and_space(self):
        recs = merge_metadata(
            [record(title="X")],
            table([{"id": "", "title": "x ", "year": "2018", "abstract": "", "areas": ""}]),
        )
        assert recs[0].year == 2018
        assert recs[0].warnings == []

    def test_unmatched_record_kept_with_warning(self):
        recs = merge_metadata(
            [record("orphan", title="Nothing like it")],
            table([{"id": "other", "title": "Other", "year": "2020", "abstract": "", "areas": ""}]),
        )
        assert recs[0].year is None
        assert "NoMetadataMatch" in recs[0].warnings

    def test_duplicate_title_key_is_ambiguous(self):
        rows = [
            {"id": "", "title": "Same", "year": "2020", "abstract": "", "areas": ""},
            {"id": "", "title": " same", "year": "2021", "abstract": "", "areas": ""},
        ]
        with pytest.raises(AmbiguousMatch):
            merge_metadata([record(title="Same")], table(rows))

    def test_duplicate_id_key_is_ambiguous(self):
        rows = [
            {"id": "d1", "title": "A", "year": "2020", "abstract": "", "areas": ""},
            {"id": "d1", "title": "B", "year": "2021", "abstract": "", "areas": ""},
        ]
        with pytest.raises(AmbiguousMatch):
            merge_metadata([record("d1")], table(rows))

    def test_bad_year_recorded_as_warning(self):
        recs = merge_metadata(
            [record("d1")],
            table([{"id": "d1", "title": "T", "year": "n.d.", "abstract": "", "areas": ""}]),
        )
        assert recs[0].year is None
        assert any(w.startswith("BadYear:") for w in recs[0].warnings)

    def test_areas_split_and_sorted(self):
        recs = merge_metadata(
            [record("d1")],
            table([{"id": "d1", "title": "T", "year": "2020", "abstract": "", "areas": "SOCI; ENVI,AGRI"}]),
        )
        assert recs[0].areas == ["AGRI", "ENVI", "SOCI"]

    def test_raw_text_never_mutated(self):
        rec = record("d1", raw_text="original body")
        merge_metadata(
            [rec],
            table([{"id": "d1", "title": "T", "year": "2020", "abstract": "", "areas": ""}]),
        )
        assert rec.raw_text == "original body"


class TestKeywordFilter:
    def make(self):
        return [
            record("d1", title="Farmer choices in wet seasons"),
            record("d2", abstract="agricultural policy outlook"),
            record("d3", title="Fisheries", abstract="ocean catch"),
            record("d4", abstract="支 agriculture matters"),
        ]

    def test_title_hit_kept(self):
        kept = filter_by_keywords(self.make(), ["farmer", "agriculture"])
        assert "d1" in [r.doc_id for r in kept]

    def test_whole_word_rule_drops_stem_matches(self):
        kept = filter_by_keywords(self.make(), ["agriculture"])
        assert [r.doc_id for r in kept] == ["d4"]

    def test_no_hit_dropped(self):
        kept = filter_by_keywords(self.make(), ["farmer"])
        assert "d3" not in [r.doc_id for r in kept]

    def test_case_insensitive(self):
        kept = filter_by_keywords([record("d1", title="FARMER life")], ["farmer"])
        assert len(kept) == 1

    def test_result_is_subset_and_idempotent(self):
        records = self.make()
        kept = filter_by_keywords(records, ["farmer", "agriculture"])
        assert all(r in records for r in kept)
        assert filter_by_keywords(kept, ["farmer", "agriculture"]) == kept

    def test_respects_field_selection(self):
        kept = filter_by_keywords(self.make(), ["agriculture"], fields=("title",))
        assert kept == []

    def test_empty_keywords_rejected(self):
        with pytest.raises(ConfigError):
            filter_by_keywords(self.make(), [])


class TestIngest:
    def test_batch_continues_past_failures(self, tmp_path):
        import shutil

        for name in ("two_col.pdf", "handmade.pdf", "not_a_pdf.pdf"):
            shutil.copy(FIXTURES / name, tmp_path / name)
        paths = sorted(tmp_path.glob("*.pdf"))
        records, failures = ingest_pdfs(paths)
        assert len(records) == 3
        by_id = {r.doc_id: r for r in records}
        assert by_id["two-col"].status == "ingested"
        assert by_id["two-col"].raw_text
        assert by_id["not-a-pdf"].status == "failed"
        assert by_id["not-a-pdf"].raw_text == ""
        assert len(failures) == 1

    def test_doc_id_collision_gets_suffix(self, tmp_path):
        import shutil

        (tmp_path / "a").mkdir()
        (tmp_path / "b").mkdir()
        shutil.copy(FIXTURES / "handmade.pdf", tmp_path / "a" / "study.pdf")
        shutil.copy(FIXTURES / "handmade.pdf", tmp_path / "b" / "study.pdf")
        records, _ = ingest_pdfs([tmp_path / "a" / "study.pdf", tmp_path / "b" / "study.pdf"])
        assert sorted(r.doc_id for r in records) == ["study", "study-2"]

    def test_deterministic_over_input_order(self, tmp_path):
        import shutil

        shutil.copy(FIXTURES / "handmade.pdf", tmp_path / "one.pdf")
        shutil.copy(FIXTURES / "two_col.pdf", tmp_path / "two.pdf")
        forward, _ = ingest_pdfs([tmp_path / "one.pdf", tmp_path / "two.pdf"])
        backward, _ = ingest_pdfs([tmp_path / "two.pdf", tmp_path / "one.pdf"])
        assert [r.doc_id for r in forward] == [r.doc_id for r in backward]


class TestStore:
    def test_round_trip(self, tmp_path):
        store = CorpusStore(tmp_path)
        records = [
            DocumentRecord("d1", title="T", year=2020, areas=["ENVI"], raw_text="body", status="normalized"),
            DocumentRecord("d2", status="failed", warnings=["UnreadablePdf"]),
        ]
        store.save(records)
        loaded = store.load()
        assert loaded == records

    def test_missing_file_loads_empty(self, tmp_path):
        assert CorpusStore(tmp_path / "nowhere").load() == []

    def test_one_json_object_per_line(self, tmp_path):
        import json

        store = CorpusStore(tmp_path)
        store.save([DocumentRecord("d1", raw_text="x"), DocumentRecord("d2", raw_text="y")])
        lines = (tmp_path / "corpus.jsonl").read_text(encoding="utf-8").strip().split("\n")
        assert len(lines) == 2
        assert json.loads(lines[0])["doc_id"] == "d1"
