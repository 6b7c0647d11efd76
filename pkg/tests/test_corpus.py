import json

import pytest
from hypothesis import given, strategies as st

from ibsumm.corpus import (
    CorpusError,
    Sentence,
    filter_by_length,
    load_corpus,
    segment,
    tokenize,
    write_corpus,
)

from conftest import write_jsonl


def make(index, n_words):
    tokens = tuple(f"w{i}" for i in range(n_words))
    return Sentence(index=index, text=" ".join(tokens), tokens=tokens)


class TestSegment:
    def test_two_period_split(self):
        sents = segment("A cat sat. It purred.")
        assert [s.tokens for s in sents] == [("a", "cat", "sat"), ("it", "purred")]
        assert [s.index for s in sents] == [0, 1]

    def test_abbreviation_guard(self):
        sents = segment("See Fig. 2 for details.")
        assert len(sents) == 1

    def test_single_letter_initial_guard(self):
        assert len(segment("As shown by J. Smith the result holds.")) == 1
        assert len(segment("This holds, i.e. The claim is true.")) == 1

    def test_question_and_exclamation(self):
        sents = segment("Is it true? Yes! It is.")
        assert [s.text for s in sents] == ["Is it true?", "Yes!", "It is."]

    def test_empty_input(self):
        assert segment("") == ()
        assert segment("   \n  ") == ()

    def test_no_split_before_lowercase(self):
        assert len(segment("we observe x. then y follows")) == 1

    @given(st.text(alphabet=st.characters(codec="ascii"), max_size=200))
    def test_idempotent_on_own_output(self, text):
        for sentence in segment(text):
            assert len(segment(sentence.text)) == 1


class TestTokenize:
    def test_lowercase_alnum_runs(self):
        assert tokenize("Self-attention (2021)!") == ("self", "attention", "2021")

    def test_retokenizing_tokens_is_identity(self):
        tokens = tokenize("The IB-based Model, v2.0")
        assert tokenize(" ".join(tokens)) == tokens


class TestFilterByLength:
    def test_boundary_filter(self):
        sents = [make(0, 3), make(1, 10), make(2, 200)]
        kept = filter_by_length(sents, 8, 80)
        assert [s.index for s in kept] == [1]

    def test_identity_bounds(self):
        sents = [make(i, n) for i, n in enumerate([1, 50, 10**4])]
        assert filter_by_length(sents, 1, 10**9) == sents

    def test_inclusive_bounds(self):
        sents = [make(0, 8), make(1, 80)]
        assert filter_by_length(sents, 8, 80) == sents

    def test_idempotent(self):
        sents = [make(i, n) for i, n in enumerate([3, 9, 15, 90])]
        once = filter_by_length(sents, 8, 80)
        assert filter_by_length(once, 8, 80) == once

    def test_bad_bounds(self):
        with pytest.raises(ValueError):
            filter_by_length([], 10, 5)


class TestLoadCorpus:
    def records(self):
        return [
            {"article_id": f"doc-{i}",
             "article_text": ["One sentence here.", "Another sentence."],
             "abstract_text": ["A reference."],
             "category": "cs"}
            for i in range(3)
        ]

    def test_passthrough(self, tmp_path):
        path = write_jsonl(tmp_path / "c.jsonl", self.records())
        docs = load_corpus(path)
        assert [d.id for d in docs] == ["doc-0", "doc-1", "doc-2"]
        assert docs[0].sentences[1].text == "Another sentence."

    def test_limit(self, tmp_path):
        path = write_jsonl(tmp_path / "c.jsonl", self.records())
        assert [d.id for d in load_corpus(path, limit=2)] == ["doc-0", "doc-1"]

    def test_presplit_sentence_count(self, tmp_path):
        texts = [f"Sentence number {i} of this long article." for i in range(203)]
        path = write_jsonl(tmp_path / "c.jsonl",
                           [{"article_id": "long", "article_text": texts}])
        [doc] = load_corpus(path)
        assert len(doc.sentences) == 203
        assert [s.index for s in doc.sentences] == list(range(203))

    def test_raw_text_is_segmented(self, tmp_path):
        path = write_jsonl(tmp_path / "c.jsonl",
                           [{"article_id": "raw", "raw_text": "A cat sat. It purred."}])
        [doc] = load_corpus(path)
        assert len(doc.sentences) == 2

    def test_malformed_line_skipped(self, tmp_path):
        path = tmp_path / "c.jsonl"
        good = json.dumps(self.records()[0])
        path.write_text(good + "\nnot json\n" +
                        json.dumps({"article_id": "x"}) + "\n")
        docs = load_corpus(path)
        assert [d.id for d in docs] == ["doc-0"]

    def test_zero_valid_documents_fatal(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text("garbage\n")
        with pytest.raises(CorpusError):
            load_corpus(path)

    def test_empty_document_skipped(self, tmp_path):
        recs = [{"article_id": "empty", "article_text": ["  ", ""]},
                self.records()[0]]
        path = write_jsonl(tmp_path / "c.jsonl", recs)
        assert [d.id for d in load_corpus(path)] == ["doc-0"]

    def test_both_text_fields_is_error(self, tmp_path):
        recs = [{"article_id": "dup", "article_text": ["A."], "raw_text": "A."},
                self.records()[0]]
        path = write_jsonl(tmp_path / "c.jsonl", recs)
        assert [d.id for d in load_corpus(path)] == ["doc-0"]

    def test_round_trip(self, tmp_path):
        path = write_jsonl(tmp_path / "c.jsonl", self.records())
        docs = load_corpus(path)
        out = tmp_path / "rt.jsonl"
        write_corpus(docs, out)
        again = load_corpus(out)
        assert [d.id for d in again] == [d.id for d in docs]
        for a, b in zip(again, docs):
            assert [s.text for s in a.sentences] == [s.text for s in b.sentences]
            assert [s.text for s in a.reference] == [s.text for s in b.reference]
            assert a.category == b.category
