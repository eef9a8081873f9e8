import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from urgency.errors import ConfigError, DataError
from urgency.featurize import (
    EmbeddingMatrix,
    FeaturizerConfig,
    align_embeddings,
    build_vocabulary,
    load_embeddings,
    vectorize,
)
from urgency.preprocess import TokenizedPost


def docs_of(*token_lists):
    return [TokenizedPost(post_id=str(i), tokens=tuple(t)) for i, t in enumerate(token_lists)]


class TestConfig:
    def test_validation(self):
        with pytest.raises(ConfigError):
            FeaturizerConfig(mode="nope")
        with pytest.raises(ConfigError):
            FeaturizerConfig(ngram_min=2, ngram_max=1)
        with pytest.raises(ConfigError):
            FeaturizerConfig(min_df=0.5, max_df=0.5)


class TestBuildVocabulary:
    def test_tiny_exhaustive(self):
        vocab = build_vocabulary(docs_of(["a", "b"], ["a"]), FeaturizerConfig(mode="bow"))
        assert vocab.terms == ["a", "b"]
        assert vocab.doc_freq == {"a": 2, "b": 1}
        assert vocab.n_docs == 2

    def test_bigrams(self):
        vocab = build_vocabulary(
            docs_of(["x", "y", "z"]),
            FeaturizerConfig(mode="bow", ngram_min=2, ngram_max=2),
        )
        assert vocab.terms == ["x y", "y z"]

    def test_unigram_and_bigram_combined(self):
        vocab = build_vocabulary(
            docs_of(["x", "y"]),
            FeaturizerConfig(mode="bow", ngram_min=1, ngram_max=2),
        )
        assert vocab.terms == ["x", "x y", "y"]

    def test_df_cutoffs_whole_document_semantics(self):
        # 4 docs; "common" in all 4, "rare" in 1, "mid" in 2
        docs = docs_of(
            ["common", "rare"],
            ["common", "mid"],
            ["common", "mid"],
            ["common"],
        )
        config = FeaturizerConfig(mode="bow", min_df=0.3, max_df=0.9)
        # ceil(0.3*4)=2, floor(0.9*4)=3 -> only "mid" survives
        vocab = build_vocabulary(docs, config)
        assert vocab.terms == ["mid"]

    def test_empty_vocabulary_error_names_cutoffs(self):
        docs = docs_of(["a"], ["a"])
        with pytest.raises(DataError, match="min_df"):
            build_vocabulary(docs, FeaturizerConfig(mode="bow", min_df=0.0, max_df=0.4))

    def test_no_nonempty_docs(self):
        with pytest.raises(DataError):
            build_vocabulary(docs_of([], []), FeaturizerConfig(mode="bow"))

    @given(
        st.lists(
            st.lists(st.sampled_from("abcdef"), min_size=1, max_size=8),
            min_size=1,
            max_size=12,
        )
    )
    def test_no_cutoff_keeps_exactly_distinct_terms(self, token_lists):
        docs = docs_of(*token_lists)
        vocab = build_vocabulary(docs, FeaturizerConfig(mode="bow"))
        brute = set()
        for toks in token_lists:
            brute.update(toks)
        assert set(vocab.terms) == brute
        for term, df in vocab.doc_freq.items():
            assert df == sum(1 for toks in token_lists if term in toks)

    @given(
        st.lists(
            st.lists(st.sampled_from("abcd"), min_size=1, max_size=6),
            min_size=2,
            max_size=10,
        ),
        st.floats(min_value=0.0, max_value=0.49),
        st.floats(min_value=0.51, max_value=1.0),
    )
    def test_cutoff_bounds_property(self, token_lists, min_df, max_df):
        docs = docs_of(*token_lists)
        config = FeaturizerConfig(mode="bow", min_df=min_df, max_df=max_df)
        n = len(docs)
        lo, hi = math.ceil(min_df * n), math.floor(max_df * n)
        try:
            vocab = build_vocabulary(docs, config)
        except DataError:
            all_df = {}
            for toks in token_lists:
                for t in set(toks):
                    all_df[t] = all_df.get(t, 0) + 1
            assert all(not (lo <= df <= hi) for df in all_df.values())
            return
        for term in vocab.terms:
            assert lo <= vocab.doc_freq[term] <= hi


class TestVectorize:
    def test_bow_counts(self):
        docs = docs_of(["a", "b", "a"], ["b"])
        config = FeaturizerConfig(mode="bow")
        vocab = build_vocabulary(docs, config)
        X = vectorize(docs, vocab, config)
        assert X.row_pairs(0) == [(0, 2.0), (1, 1.0)]
        assert X.row_pairs(1) == [(1, 1.0)]

    def test_tfidf_matches_stated_formula(self):
        # idf(t) = ln((1+n)/(1+df)) + 1 with n=2: idf(a)=1+ln(1.5), idf(b)=1
        docs = docs_of(["a", "b", "a"], ["b"])
        config = FeaturizerConfig(mode="tfidf")
        vocab = build_vocabulary(docs, config)
        X = vectorize(docs, vocab, config).toarray()
        idf_a = math.log(3 / 2) + 1.0
        raw0 = [2.0 * idf_a, 1.0]
        norm0 = math.sqrt(raw0[0] ** 2 + raw0[1] ** 2)
        expected0 = [raw0[0] / norm0, raw0[1] / norm0]
        assert X[0] == pytest.approx(expected0, abs=1e-12)
        assert X[1] == pytest.approx([0.0, 1.0], abs=1e-12)

    def test_oov_only_doc_gives_zero_row(self):
        docs = docs_of(["a"], ["b"])
        config = FeaturizerConfig(mode="bow")
        vocab = build_vocabulary(docs_of(["a"]), config)
        X = vectorize(docs, vocab, config)
        assert X.row_pairs(1) == []

    def test_tfidf_rows_unit_norm(self):
        rng = np.random.default_rng(0)
        docs = docs_of(*[
            [rng.choice(list("abcdefgh")) for _ in range(rng.integers(1, 10))]
            for _ in range(30)
        ])
        config = FeaturizerConfig(mode="tfidf")
        vocab = build_vocabulary(docs, config)
        X = vectorize(docs, vocab, config).toarray()
        norms = np.linalg.norm(X, axis=1)
        nz = norms > 0
        assert np.allclose(norms[nz], 1.0, atol=1e-9)

    def test_bow_row_sums_equal_invocab_token_count(self):
        docs = docs_of(["a", "b", "a", "zz"], ["b", "zz"])
        config = FeaturizerConfig(mode="bow")
        vocab = build_vocabulary(docs_of(["a", "b"], ["b"]), config)
        X = vectorize(docs, vocab, config).toarray()
        assert X[0].sum() == 3  # "zz" is out of vocabulary
        assert X[1].sum() == 1

    def test_unitize_bow(self):
        docs = docs_of(["a", "a", "b"])
        config = FeaturizerConfig(mode="bow", unitize=True)
        vocab = build_vocabulary(docs, config)
        X = vectorize(docs, vocab, config).toarray()
        assert np.linalg.norm(X[0]) == pytest.approx(1.0, abs=1e-12)

    def test_deterministic(self):
        docs = docs_of(["a", "b"], ["b", "c"], ["a", "c", "c"])
        config = FeaturizerConfig(mode="tfidf")
        vocab = build_vocabulary(docs, config)
        X1 = vectorize(docs, vocab, config)
        X2 = vectorize(docs, vocab, config)
        assert np.array_equal(X1.data, X2.data)
        assert np.array_equal(X1.indices, X2.indices)
        assert np.array_equal(X1.indptr, X2.indptr)


class TestEmbeddings:
    def write(self, tmp_path, content):
        path = tmp_path / "emb.tsv"
        path.write_text(content)
        return path

    def test_load_valid(self, tmp_path):
        rows = ["#dim=3", "p1\t0.1\t0.2\t0.3", "p2\t1\t2\t3", "p3\t-1\t0\t0.5"]
        emb = load_embeddings(self.write(tmp_path, "\n".join(rows) + "\n"))
        assert emb.n_rows == 3 and emb.dim == 3
        assert emb.rows[1].tolist() == [1.0, 2.0, 3.0]

    def test_arity_violation(self, tmp_path):
        path = self.write(tmp_path, "#dim=3\np1\t0.1\t0.2\n")
        with pytest.raises(DataError, match="line 2"):
            load_embeddings(path)

    def test_empty_file(self, tmp_path):
        with pytest.raises(DataError, match="empty"):
            load_embeddings(self.write(tmp_path, ""))

    def test_header_only(self, tmp_path):
        with pytest.raises(DataError, match="no embedding rows"):
            load_embeddings(self.write(tmp_path, "#dim=2\n"))

    def test_missing_header(self, tmp_path):
        with pytest.raises(DataError, match="#dim"):
            load_embeddings(self.write(tmp_path, "p1\t1\t2\n"))

    def test_duplicate_id(self, tmp_path):
        path = self.write(tmp_path, "#dim=1\np1\t1\np1\t2\n")
        with pytest.raises(DataError, match="duplicate"):
            load_embeddings(path)

    def test_non_numeric(self, tmp_path):
        path = self.write(tmp_path, "#dim=1\np1\tx\n")
        with pytest.raises(DataError, match="non-numeric"):
            load_embeddings(path)

    def test_alignment(self, tmp_path):
        emb = load_embeddings(self.write(tmp_path, "#dim=2\na\t1\t2\nb\t3\t4\n"))
        M = align_embeddings(emb, ["b", "a"])
        assert M.tolist() == [[3.0, 4.0], [1.0, 2.0]]
        with pytest.raises(DataError, match="missing|lacks"):
            align_embeddings(emb, ["a", "zz"])
