import pytest

from pparg.corpus import Lemmatizer, default_lemmatizer
from pparg.corpus.lemmas import load_exceptions


class TestDefaultLemmatizer:
    @pytest.fixture
    def lem(self):
        return default_lemmatizer()

    @pytest.mark.parametrize(
        "form,lemma",
        [
            ("hid", "hide"),
            ("went", "go"),
            ("took", "take"),
            ("was", "be"),
            ("thought", "think"),
        ],
    )
    def test_irregulars_from_exceptions(self, lem, form, lemma):
        assert lem(form) == lemma

    @pytest.mark.parametrize(
        "form,lemma",
        [
            ("opened", "open"),
            ("walks", "walk"),
            ("talked", "talk"),
            ("watches", "watch"),
            ("carries", "carry"),
            ("danced", "dance"),
        ],
    )
    def test_regular_suffix_rules(self, lem, form, lemma):
        assert lem(form) == lemma

    def test_case_insensitive(self, lem):
        assert lem("Hid") == "hide"
        assert lem("OPENED") == "open"

    def test_uninflected_token_passes_through(self, lem):
        assert lem("put") == "put"
        assert lem("window") == "window"


class TestVocabGuided:
    def test_vocab_picks_correct_candidate(self):
        lem = default_lemmatizer(vocab={"make", "run", "place"})
        assert lem("making") == "make"
        assert lem("running") == "run"
        assert lem("placed") == "place"

    def test_doubling_kept_when_vocab_says_so(self):
        lem = default_lemmatizer(vocab={"tell", "fall"})
        assert lem("telling") == "tell"
        assert lem("falling") == "fall"

    def test_with_vocab_builds_new_instance(self):
        base = default_lemmatizer()
        scoped = base.with_vocab({"stuff"})
        assert scoped("stuffing") == "stuff"
        assert base.vocab is None


class TestNoVocabHeuristics:
    def test_undoubles_short_stem_consonants(self):
        lem = Lemmatizer(exceptions={})
        assert lem("stopped") == "stop"
        assert lem("sitting") == "sit"

    def test_keeps_double_l(self):
        lem = Lemmatizer(exceptions={})
        assert lem("telling") == "tell"
        assert lem("rolled") == "roll"

    def test_restores_e_after_hard_consonants(self):
        lem = Lemmatizer(exceptions={})
        assert lem("danced") == "dance"


class TestExceptionsFile:
    def test_load(self, tmp_path):
        path = tmp_path / "exc.tsv"
        path.write_text("# irregulars\nhid\thide\nwent\tgo\n")
        table = load_exceptions(path)
        assert table == {"hid": "hide", "went": "go"}

    def test_conflicting_rows_rejected(self, tmp_path):
        path = tmp_path / "exc.tsv"
        path.write_text("hid\thide\nhid\thid\n")
        with pytest.raises(ValueError, match="conflicting"):
            load_exceptions(path)

    def test_malformed_row_rejected(self, tmp_path):
        path = tmp_path / "exc.tsv"
        path.write_text("hid hide\n")
        with pytest.raises(ValueError, match="TAB"):
            load_exceptions(path)
