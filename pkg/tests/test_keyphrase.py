import random

import pytest

from ibsumm.corpus import Document, Sentence, tokenize
from ibsumm.keyphrase import (
    extract_candidates,
    load_stopwords,
    score_candidates,
    top_keyphrases,
)


def doc_from_texts(texts, doc_id="d"):
    sentences = tuple(
        Sentence(index=i, text=t, tokens=tokenize(t)) for i, t in enumerate(texts)
    )
    return Document(id=doc_id, sentences=sentences)


def brute_force_scores(candidates):
    """Independent deg/freq computation: rebuild the word co-occurrence
    counts from scratch with plain loops."""
    words = {w for cand in candidates for w in cand}
    freq = {w: sum(cand.count(w) for cand in candidates) for w in words}
    deg = {}
    for w in words:
        extra = sum((len(c) - 1) * c.count(w) for c in candidates)
        deg[w] = freq[w] + extra
    return {
        cand: sum(deg[w] / freq[w] for w in cand)
        for cand in set(candidates)
    }


class TestExtractCandidates:
    def test_single_delimiter_split(self):
        cands = extract_candidates([("deep", "learning", "is", "useful")], {"is"})
        assert cands == [("deep", "learning"), ("useful",)]

    def test_all_stopwords(self):
        assert extract_candidates([("the", "of", "and")], {"the", "of", "and"}) == []

    def test_duplicates_preserved(self):
        toks = tokenize("the information bottleneck helps")
        cands = extract_candidates([toks, toks], {"the", "helps"})
        assert cands.count(("information", "bottleneck")) == 2

    def test_numeric_singleton_dropped(self):
        cands = extract_candidates([("in", "2021", "we", "ran", "tests")],
                                   {"in", "we"})
        assert ("2021",) not in cands
        assert ("ran", "tests") in cands

    def test_empty_stopword_set_rejected(self):
        with pytest.raises(ValueError):
            extract_candidates([("a",)], set())


class TestScoreCandidates:
    def test_two_word_phrase(self):
        scores = score_candidates([("a", "b")])
        assert scores[("a", "b")] == pytest.approx(4.0)

    def test_singleton(self):
        assert score_candidates([("x",)])[("x",)] == pytest.approx(1.0)

    def test_shared_word(self):
        scores = score_candidates([("a", "b"), ("a",)])
        # freq(a)=2 deg(a)=3, freq(b)=1 deg(b)=2
        assert scores[("a", "b")] == pytest.approx(3.5)
        assert scores[("a",)] == pytest.approx(1.5)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_brute_force(self, seed):
        rng = random.Random(seed)
        vocab = ["ion", "flux", "beam", "core", "node", "mesh"]
        candidates = [
            tuple(rng.choices(vocab, k=rng.randint(1, 3)))
            for _ in range(rng.randint(3, 12))
        ]
        assert score_candidates(candidates) == pytest.approx(
            brute_force_scores(candidates)
        )


class TestTopKeyphrases:
    def test_fewer_than_k(self):
        doc = doc_from_texts(["deep learning is useful for parsing"])
        phrases = top_keyphrases(doc, k=10)
        assert 0 < len(phrases) <= 10

    def test_default_k_is_ten(self):
        import inspect
        assert inspect.signature(top_keyphrases).parameters["k"].default == 10

    def test_tie_break_earlier_occurrence_first(self):
        stops = frozenset({"and", "the"})
        doc = doc_from_texts(["zebra and yak", "aardvark and bison"])
        phrases = top_keyphrases(doc, k=4, stopwords=stops)
        scores = [p.score for p in phrases]
        assert scores[0] == scores[1]
        assert phrases[0].words == ("zebra",)  # earlier in the document

    def test_prefix_property(self, sample_documents):
        doc = sample_documents[0]
        k5 = top_keyphrases(doc, k=5)
        k10 = top_keyphrases(doc, k=10)
        assert [p.words for p in k5] == [p.words for p in k10][:5]

    def test_phrases_occur_contiguously(self, sample_documents):
        doc = sample_documents[1]
        for phrase in top_keyphrases(doc, k=10):
            found = any(
                s.tokens[i:i + len(phrase.words)] == phrase.words
                for s in doc.sentences
                for i in range(len(s.tokens))
            )
            assert found, phrase

    def test_invariant_under_sentence_reordering(self, sample_documents):
        doc = sample_documents[2]
        shuffled = Document(
            id=doc.id,
            sentences=tuple(
                Sentence(index=i, text=s.text, tokens=s.tokens)
                for i, s in enumerate(reversed(doc.sentences))
            ),
        )
        orig = {p.words: p.score for p in top_keyphrases(doc, k=50)}
        moved = {p.words: p.score for p in top_keyphrases(shuffled, k=50)}
        assert orig == pytest.approx(moved)

    def test_no_stopwords_inside_phrases(self, sample_documents):
        stops = load_stopwords()
        for doc in sample_documents[:3]:
            for phrase in top_keyphrases(doc, k=10):
                assert not set(phrase.words) & stops
