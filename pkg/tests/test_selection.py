import math

import numpy as np
import pytest

from ibsumm.corpus import Document, Sentence, tokenize
from ibsumm.selection import (
    CandidateSet,
    ScoredSentence,
    category_view,
    keyword_view,
    score_sentences,
    select_top_n,
)


def scored(index, total):
    s = Sentence(index=index, text=f"s{index}", tokens=(f"s{index}",))
    return ScoredSentence(sentence=s, view_scores=(), total=total)


class TestKeywordView:
    def test_identical_vector_max_score(self):
        v = np.array([0.2, 0.9])
        score = keyword_view(v, [v])
        assert score.contribution == pytest.approx(0.0)
        assert score.p == pytest.approx(1.0)

    def test_negative_cosine_clamped(self):
        score = keyword_view(np.array([1.0, 0.0]),
                             [np.array([-0.981, -0.196])], epsilon=0.01)
        assert score.contribution == pytest.approx(0.01 * math.log(0.01))

    def test_two_half_similar_keyphrases(self):
        # two keyphrases at cosine 0.5 each
        s = np.array([1.0, 0.0])
        k = np.array([1.0, math.sqrt(3.0)])
        score = keyword_view(s, [k, k])
        assert score.contribution == pytest.approx(2 * 0.5 * math.log(0.5), abs=1e-9)

    def test_similarity_sum_mode(self):
        s = np.array([1.0, 0.0])
        k = np.array([1.0, math.sqrt(3.0)])
        score = keyword_view(s, [k, k], mode="similarity-sum")
        assert score.contribution == pytest.approx(1.0, abs=1e-9)

    def test_contribution_nonpositive_in_eq4(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            s = rng.normal(size=4)
            ks = [rng.normal(size=4) for _ in range(3)]
            assert keyword_view(s, ks).contribution <= 0.0

    def test_empty_keyphrases_rejected(self):
        with pytest.raises(ValueError):
            keyword_view(np.zeros(2), [])


class TestCategoryView:
    def test_certain_class_scores_zero(self):
        score = category_view(np.array([1.0, 0.0]), ["a", "b"], "a")
        assert score.contribution == pytest.approx(0.0)

    def test_global_minimum_at_one_over_e(self):
        p = 1 / math.e
        dist = np.array([p, 1 - p])
        score = category_view(dist, ["a", "b"], "a")
        assert score.contribution == pytest.approx(-1 / math.e)

    def test_uniform_hundred_classes(self):
        labels = [f"l{i}" for i in range(100)]
        dist = np.full(100, 0.01)
        score = category_view(dist, labels, "l7")
        assert score.p == pytest.approx(0.01)
        assert score.contribution == pytest.approx(0.01 * math.log(0.01))

    def test_max_class_when_no_target(self):
        score = category_view(np.array([0.2, 0.5, 0.3]), ["a", "b", "c"])
        assert score.p == pytest.approx(0.5)

    def test_unknown_target_rejected(self):
        with pytest.raises(ValueError):
            category_view(np.array([0.5, 0.5]), ["a", "b"], "zzz")

    def test_unnormalized_rejected(self):
        with pytest.raises(ValueError):
            category_view(np.array([0.5, 0.4]), ["a", "b"], "a")


def make_doc(texts):
    return Document(id="d", sentences=tuple(
        Sentence(index=i, text=t, tokens=tokenize(t)) for i, t in enumerate(texts)
    ))


class TestScoreSentences:
    def score(self, sample_documents, embedder, **kwargs):
        from ibsumm.keyphrase import top_keyphrases
        doc = sample_documents[0]
        return doc, score_sentences(
            doc, embedder, top_keyphrases(doc, k=10), **kwargs
        )

    def test_doubling_beta_doubles_totals(self, sample_documents, embedder):
        _, base = self.score(sample_documents, embedder, beta=1.0)
        _, doubled = self.score(sample_documents, embedder, beta=2.0)
        for a, b in zip(base, doubled):
            assert b.total == pytest.approx(2 * a.total)

    def test_scaling_preserves_ranking(self, sample_documents, embedder):
        _, base = self.score(sample_documents, embedder, beta=1.0)
        _, scaled = self.score(sample_documents, embedder, beta=7.5)
        top_base = select_top_n(base, 10).indices
        top_scaled = select_top_n(scaled, 10).indices
        assert top_base == top_scaled

    def test_permutation_covariant(self, embedder, sample_documents):
        doc = sample_documents[3]
        from ibsumm.keyphrase import top_keyphrases
        keyphrases = top_keyphrases(doc, k=10)
        reversed_doc = Document(id=doc.id, sentences=tuple(
            Sentence(index=i, text=s.text, tokens=s.tokens)
            for i, s in enumerate(reversed(doc.sentences))
        ))
        by_text = {
            s.sentence.text: s.total
            for s in score_sentences(doc, embedder, keyphrases)
        }
        for s in score_sentences(reversed_doc, embedder, keyphrases):
            assert s.total == pytest.approx(by_text[s.sentence.text])

    def test_all_filtered_out_warns_empty(self, embedder, caplog):
        doc = make_doc(["too short"])
        from ibsumm.keyphrase import Keyphrase
        result = score_sentences(doc, embedder, [Keyphrase(("graph",), 1.0)],
                                 min_words=8, max_words=80)
        assert result == []


class TestSelectTopN:
    def test_hand_sort(self):
        cs = select_top_n([scored(0, -0.1), scored(1, -0.5), scored(2, -0.2)], 2)
        assert cs.indices == [0, 2]

    def test_tie_break_smaller_index(self):
        cs = select_top_n(
            [scored(4, -0.3), scored(9, -0.3), scored(1, -0.1)], 2
        )
        assert cs.indices == [1, 4]

    def test_n_larger_than_available(self):
        cs = select_top_n([scored(0, 0.0), scored(1, -1.0)], 50)
        assert len(cs.members) == 2

    def test_output_strictly_increasing(self):
        import random
        rng = random.Random(11)
        pool = [scored(i, rng.uniform(-1, 0)) for i in range(30)]
        rng.shuffle(pool)
        cs = select_top_n(pool, 10)
        assert all(a < b for a, b in zip(cs.indices, cs.indices[1:]))

    def test_default_candidate_count_is_fifty(self):
        from ibsumm.pipeline import PipelineConfig
        assert PipelineConfig().top_n == 50
