import random
from datetime import datetime

import pytest

from litnet.errors import InvalidCategory, UnknownVerb
from litnet.nlp import SentenceRecord, Token
from litnet.verblex import (
    CATEGORIES,
    CueLexicon,
    VerbDictionary,
    VerbEntry,
    harvest_verbs,
    resolve_depend,
    resolve_depend_detail,
    sample_sentences,
)


def T(surface, upos, lemma=None):
    lemma = surface.lower() if lemma is None else lemma
    return Token(surface, lemma, upos, 0, len(surface))


def sent(doc_id, idx, *tokens, section="results"):
    text = " ".join(t.surface for t in tokens)
    return SentenceRecord(doc_id, section, idx, text, list(tokens))


def verb_sentence(doc_id, idx, lemma):
    return sent(doc_id, idx, T("Flooding", "NOUN", "flooding"), T(lemma + "s", "VERB", lemma), T("risk", "NOUN"))


class TestHarvest:
    def test_repeated_verb_counted(self):
        sents = [verb_sentence("d1", i, "increase") for i in range(3)]
        assert harvest_verbs(sents) == [("increase", 3)]

    def test_no_verbs(self):
        assert harvest_verbs([sent("d1", 0, T("floods", "NOUN"))]) == []

    def test_alphabetical_tie_break(self):
        sents = [
            verb_sentence("d1", 0, "reduce"),
            verb_sentence("d1", 1, "adopt"),
            verb_sentence("d2", 0, "reduce"),
            verb_sentence("d2", 1, "adopt"),
        ]
        assert harvest_verbs(sents) == [("adopt", 2), ("reduce", 2)]

    def test_descending_frequency_first(self):
        sents = [verb_sentence("d1", i, "improve") for i in range(2)]
        sents.append(verb_sentence("d2", 0, "zone"))
        assert harvest_verbs(sents) == [("improve", 2), ("zone", 1)]

    def test_aux_excluded(self):
        s = sent("d1", 0, T("Flooding", "NOUN"), T("is", "AUX", "be"), T("rising", "VERB", "rise"))
        assert harvest_verbs([s]) == [("rise", 1)]

    def test_non_verb_use_of_lemma_ignored(self):
        s = sent("d1", 0, T("increase", "NOUN"), T("matters", "VERB", "matter"))
        assert harvest_verbs([s]) == [("matter", 1)]


class TestSample:
    def make(self, count):
        return [verb_sentence(f"d{i:02d}", i, "increase") for i in range(count)]

    def test_fewer_available_than_requested_returns_all(self):
        got = sample_sentences("increase", self.make(4), n=10, seed=7)
        assert len(got) == 4
        assert {r.doc_id for r in got} == {"d00", "d01", "d02", "d03"}

    def test_same_seed_same_sample(self):
        pool = self.make(25)
        a = sample_sentences("increase", pool, n=10, seed=3)
        b = sample_sentences("increase", pool, n=10, seed=3)
        assert [(r.doc_id, r.sent_index) for r in a] == [(r.doc_id, r.sent_index) for r in b]

    def test_large_pool_matches_reference_sampler(self):
        pool = self.make(25)
        got = sample_sentences("increase", pool, n=10, seed=11)
        keys = [(r.doc_id, r.section_tag, r.sent_index) for r in got]
        assert len(set(keys)) == 10
        ordered = sorted(pool, key=lambda r: (r.doc_id, r.section_tag, r.sent_index))
        want = random.Random(11).sample(ordered, 10)
        assert keys == [(r.doc_id, r.section_tag, r.sent_index) for r in want]

    def test_different_seeds_usually_differ(self):
        pool = self.make(25)
        a = sample_sentences("increase", pool, n=10, seed=1)
        b = sample_sentences("increase", pool, n=10, seed=2)
        assert [r.doc_id for r in a] != [r.doc_id for r in b]

    def test_unknown_lemma_raises(self):
        with pytest.raises(UnknownVerb):
            sample_sentences("teleport", self.make(3))

    def test_only_verb_usage_counts(self):
        noun_only = [sent("d1", 0, T("increase", "NOUN"))]
        with pytest.raises(UnknownVerb):
            sample_sentences("increase", noun_only)


class TestDictionary:
    def test_seed_entries_match_shipped_examples(self):
        d = VerbDictionary.with_seed()
        assert d.category("increase") == "positive"
        assert d.category("adopt") == "none"
        assert d.category("relate") == "neutral"
        assert d.category("have") == "depend"
        assert d.category("reduce") == "negative"

    def test_classify_updates_and_stamps(self, tmp_path):
        d = VerbDictionary.with_seed(tmp_path / "verbs.tsv")
        d.add_unclassified("mitigate")
        entry = d.classify("mitigate", "negative", annotator="rk")
        assert entry.category == "negative"
        assert entry.annotator == "rk"
        datetime.fromisoformat(entry.timestamp)

    def test_classify_persists_to_disk(self, tmp_path):
        path = tmp_path / "verbs.tsv"
        d = VerbDictionary.with_seed(path)
        d.save()
        d.add_unclassified("worsen")
        d.classify("worsen", "negative")
        reloaded = VerbDictionary.load(path)
        assert reloaded.category("worsen") == "negative"

    def test_classify_unknown_lemma_raises(self):
        with pytest.raises(UnknownVerb):
            VerbDictionary.with_seed().classify("teleport", "positive")

    def test_classify_bad_category_raises(self):
        d = VerbDictionary.with_seed()
        with pytest.raises(InvalidCategory):
            d.classify("increase", "sideways")

    def test_entry_bad_category_raises(self):
        with pytest.raises(InvalidCategory):
            VerbEntry("x", "sideways")

    def test_unclassified_not_settable_via_classify(self):
        d = VerbDictionary.with_seed()
        with pytest.raises(InvalidCategory):
            d.classify("increase", "unclassified")

    def test_round_trip_lossless(self, tmp_path):
        path = tmp_path / "verbs.tsv"
        d = VerbDictionary.with_seed(path)
        d.add_unclassified("erode")
        d.entries["erode"] = VerbEntry("erode", "negative", "ann", "2026-01-02T03:04:05+00:00", "coastal")
        d.save()
        reloaded = VerbDictionary.load(path)
        assert reloaded.entries == d.entries

    def test_saved_file_is_tabular_with_header(self, tmp_path):
        path = tmp_path / "verbs.tsv"
        VerbDictionary.with_seed(path).save()
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "lemma\tcategory\tannotator\ttimestamp\tnote"
        assert all(line.count("\t") == 4 for line in lines[1:])
        lemmas = [line.split("\t")[0] for line in lines[1:]]
        assert lemmas == sorted(lemmas)

    def test_note_control_characters_flattened(self, tmp_path):
        path = tmp_path / "verbs.tsv"
        d = VerbDictionary.with_seed(path)
        d.add_unclassified("spill")
        d.entries["spill"] = VerbEntry("spill", "none", note="tab\there\nline")
        d.save()
        assert VerbDictionary.load(path).entries["spill"].note == "tab here line"

    def test_pending_lists_unclassified_sorted(self):
        d = VerbDictionary.with_seed()
        d.add_unclassified("worsen")
        d.add_unclassified("erode")
        assert d.pending() == ["erode", "worsen"]
        d.classify("erode", "negative")
        assert d.pending() == ["worsen"]

    def test_add_unclassified_never_overwrites(self):
        d = VerbDictionary.with_seed()
        d.add_unclassified("increase")
        assert d.category("increase") == "positive"

    def test_last_write_wins(self, tmp_path):
        d = VerbDictionary.with_seed(tmp_path / "verbs.tsv")
        d.classify("have", "neutral")
        d.classify("have", "depend")
        assert d.category("have") == "depend"


class TestCueLexicon:
    def test_defaults(self):
        cues = CueLexicon()
        assert "positive" in cues.positive_cues
        assert "negatively" in cues.negative_cues
        assert cues.window == 6

    def test_overlapping_cue_sets_rejected(self):
        with pytest.raises(InvalidCategory):
            CueLexicon(positive_cues={"strong"}, negative_cues={"strong", "weak"})

    def test_window_must_be_positive(self):
        with pytest.raises(InvalidCategory):
            CueLexicon(window=0)


def depend_tokens(*words):
    """Tokens for '<subject> have <words...>' with `have` at index 1."""
    toks = [T("Incomes", "NOUN", "income"), T("have", "VERB", "have")]
    for w in words:
        upos = "VERB" if w in ("reduce", "increase") else ("ADJ" if w in ("positive", "negative") else "NOUN")
        toks.append(T(w, upos))
    return toks


class TestResolveDepend:
    def setup_method(self):
        self.cues = CueLexicon()
        self.dictionary = VerbDictionary.with_seed()

    def resolve(self, toks, index=1):
        return resolve_depend(index, toks, self.cues, self.dictionary)

    def test_positive_correlation(self):
        toks = depend_tokens("a", "positive", "correlation", "with", "adaptation")
        assert self.resolve(toks) == "positive"

    def test_negative_association(self):
        toks = depend_tokens("a", "negative", "association", "with", "migration")
        assert self.resolve(toks) == "negative"

    def test_no_cue_defaults_neutral(self):
        toks = depend_tokens("implications", "for", "policy")
        assert self.resolve(toks) == "neutral"

    def test_first_cue_wins_when_both_present(self):
        toks = depend_tokens("negative", "then", "positive", "effects")
        assert self.resolve(toks) == "negative"

    def test_cue_beyond_window_ignored(self):
        toks = depend_tokens("a", "b", "c", "d", "e", "f", "positive")
        assert self.resolve(toks) == "neutral"

    def test_scan_stops_at_next_dictionary_verb(self):
        # `reduce` is a classified verb, so the cue after it belongs to the
        # next clause and must not color this one
        toks = depend_tokens("effects", "reduce", "positive", "outcomes")
        assert self.resolve(toks) == "neutral"

    def test_unclassified_verb_does_not_stop_scan(self):
        toks = [
            T("Incomes", "NOUN", "income"),
            T("have", "VERB", "have"),
            T("galvanize", "VERB", "galvanize"),
            T("positive", "ADJ"),
        ]
        assert self.resolve(toks) == "positive"

    def test_preceding_adverb_cue_checked_last(self):
        toks = [T("Income", "NOUN"), T("positively", "ADV"), T("affects", "VERB", "affect"), T("trust", "NOUN")]
        assert resolve_depend(2, toks, self.cues, self.dictionary) == "positive"

    def test_following_cue_outranks_preceding(self):
        toks = [
            T("Income", "NOUN"),
            T("positively", "ADV"),
            T("affects", "VERB", "affect"),
            T("negative", "ADJ"),
            T("outcomes", "NOUN", "outcome"),
        ]
        assert resolve_depend(2, toks, self.cues, self.dictionary) == "negative"

    def test_detail_reports_cue_index(self):
        toks = depend_tokens("a", "positive", "correlation")
        sign, idx = resolve_depend_detail(1, toks, self.cues, self.dictionary)
        assert sign == "positive"
        assert toks[idx].surface == "positive"

    def test_detail_reports_none_without_cue(self):
        toks = depend_tokens("implications")
        assert resolve_depend_detail(1, toks, self.cues, self.dictionary) == ("neutral", None)

    def test_sign_is_always_signed_category(self):
        for words in (["positive"], ["negative"], ["x"]):
            assert self.resolve(depend_tokens(*words)) in ("positive", "negative", "neutral")

    def test_categories_tuple_stable(self):
        assert CATEGORIES == ("positive", "negative", "neutral", "depend", "none")
