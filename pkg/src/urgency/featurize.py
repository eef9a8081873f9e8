"""Bag-of-words / TF-IDF sparse featurization and dense embedding loading.

TF-IDF uses the smoothed inverse document frequency
``idf(t) = ln((1 + n_docs) / (1 + doc_freq[t])) + 1`` followed by L2
normalization of each nonzero row, so matrices are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError

__all__ = [
    "FeaturizerConfig",
    "Vocabulary",
    "SparseFeatureMatrix",
    "EmbeddingMatrix",
    "build_vocabulary",
    "vectorize",
    "load_embeddings",
    "align_embeddings",
]


@dataclass(frozen=True)
class FeaturizerConfig:
    mode: str = "tfidf"  # "bow" | "tfidf"
    ngram_min: int = 1
    ngram_max: int = 1
    min_df: float = 0.0
    max_df: float = 1.0
    unitize: bool = False

    def __post_init__(self):
        if self.mode not in ("bow", "tfidf"):
            raise ConfigError(f"featurizer mode must be bow or tfidf, got {self.mode!r}")
        if not (1 <= self.ngram_min <= self.ngram_max):
            raise ConfigError(
                f"need 1 <= ngram_min <= ngram_max, got ({self.ngram_min}, {self.ngram_max})"
            )
        if not (0.0 <= self.min_df < self.max_df <= 1.0):
            raise ConfigError(
                f"need 0 <= min_df < max_df <= 1, got ({self.min_df}, {self.max_df})"
            )


@dataclass
class Vocabulary:
    terms: list[str]
    index: dict[str, int]
    doc_freq: dict[str, int]
    n_docs: int

    def __len__(self) -> int:
        return len(self.terms)

    def idf(self) -> np.ndarray:
        out = np.empty(len(self.terms))
        for j, t in enumerate(self.terms):
            out[j] = math.log((1.0 + self.n_docs) / (1.0 + self.doc_freq[t])) + 1.0
        return out


@dataclass
class SparseFeatureMatrix:
    """CSR triple; within each row the column indices are strictly increasing."""

    n_rows: int
    n_cols: int
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray

    def row_pairs(self, i: int):
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return list(zip(self.indices[lo:hi].tolist(), self.data[lo:hi].tolist()))

    def toarray(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols))
        for i in range(self.n_rows):
            lo, hi = self.indptr[i], self.indptr[i + 1]
            out[i, self.indices[lo:hi]] = self.data[lo:hi]
        return out


@dataclass
class EmbeddingMatrix:
    n_rows: int
    dim: int
    rows: np.ndarray
    row_ids: list[str]
    _id_index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        self._id_index = {pid: i for i, pid in enumerate(self.row_ids)}


def _ngrams(tokens, ngram_min: int, ngram_max: int):
    n_tok = len(tokens)
    for n in range(ngram_min, ngram_max + 1):
        for i in range(n_tok - n + 1):
            yield " ".join(tokens[i : i + n])


def build_vocabulary(docs, config: FeaturizerConfig) -> Vocabulary:
    """Document-frequency counting with proportion cutoffs.

    A term is kept when ceil(min_df * n_docs) <= doc_freq <= floor(max_df * n_docs).
    """
    n_docs = len(docs)
    if n_docs == 0 or all(len(d.tokens) == 0 for d in docs):
        raise DataError("cannot build a vocabulary from zero non-empty documents")
    doc_freq: dict[str, int] = {}
    for doc in docs:
        for term in set(_ngrams(doc.tokens, config.ngram_min, config.ngram_max)):
            doc_freq[term] = doc_freq.get(term, 0) + 1
    lo = math.ceil(config.min_df * n_docs)
    hi = math.floor(config.max_df * n_docs)
    kept = {t: c for t, c in doc_freq.items() if lo <= c <= hi}
    if not kept:
        raise DataError(
            f"vocabulary empty after document-frequency cutoffs "
            f"min_df={config.min_df} (>= {lo} docs), max_df={config.max_df} (<= {hi} docs)"
        )
    terms = sorted(kept)
    return Vocabulary(
        terms=terms,
        index={t: j for j, t in enumerate(terms)},
        doc_freq=kept,
        n_docs=n_docs,
    )


def vectorize(docs, vocab: Vocabulary, config: FeaturizerConfig) -> SparseFeatureMatrix:
    """Term counts (bow) or L2-normalized tf-idf rows; OOV terms are ignored."""
    index = vocab.index
    idf = vocab.idf() if config.mode == "tfidf" else None
    indptr = np.zeros(len(docs) + 1, dtype=np.int64)
    all_indices: list[np.ndarray] = []
    all_data: list[np.ndarray] = []
    nnz = 0
    for i, doc in enumerate(docs):
        counts: dict[int, int] = {}
        for term in _ngrams(doc.tokens, config.ngram_min, config.ngram_max):
            j = index.get(term)
            if j is not None:
                counts[j] = counts.get(j, 0) + 1
        cols = np.fromiter(sorted(counts), dtype=np.int64, count=len(counts))
        vals = np.array([float(counts[c]) for c in cols.tolist()])
        if len(cols):
            if config.mode == "tfidf":
                vals = vals * idf[cols]
                vals /= math.sqrt(float(np.dot(vals, vals)))
            elif config.unitize:
                vals = vals / math.sqrt(float(np.dot(vals, vals)))
        nnz += len(cols)
        indptr[i + 1] = nnz
        all_indices.append(cols)
        all_data.append(vals)
    return SparseFeatureMatrix(
        n_rows=len(docs),
        n_cols=len(vocab),
        indptr=indptr,
        indices=np.concatenate(all_indices) if all_indices else np.zeros(0, dtype=np.int64),
        data=np.concatenate(all_data) if all_data else np.zeros(0),
    )


def load_embeddings(path) -> EmbeddingMatrix:
    """Read the documented embedding file: '#dim=<d>' header, then
    post_id<TAB>v1<TAB>...<TAB>vd lines."""
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot open embedding file {path}: {exc}") from exc
    with fh:
        header = fh.readline()
        if not header:
            raise DataError(f"{path}: empty embedding file")
        header = header.strip()
        if not header.startswith("#dim="):
            raise DataError(f"{path}: line 1: expected '#dim=<d>' header, got {header!r}")
        try:
            dim = int(header[len("#dim=") :])
        except ValueError:
            raise DataError(f"{path}: line 1: bad dimension in {header!r}")
        if dim < 1:
            raise DataError(f"{path}: line 1: dimension must be >= 1, got {dim}")
        ids: list[str] = []
        seen: set[str] = set()
        vectors: list[np.ndarray] = []
        for line_no, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != dim + 1:
                raise DataError(
                    f"{path}: line {line_no}: expected {dim} values, got {len(parts) - 1}"
                )
            pid = parts[0]
            if pid in seen:
                raise DataError(f"{path}: line {line_no}: duplicate post_id {pid!r}")
            seen.add(pid)
            try:
                vec = np.array([float(x) for x in parts[1:]])
            except ValueError:
                raise DataError(f"{path}: line {line_no}: non-numeric field")
            if not np.all(np.isfinite(vec)):
                raise DataError(f"{path}: line {line_no}: non-finite value")
            ids.append(pid)
            vectors.append(vec)
    if not vectors:
        raise DataError(f"{path}: no embedding rows after header")
    return EmbeddingMatrix(n_rows=len(vectors), dim=dim, rows=np.vstack(vectors), row_ids=ids)


def align_embeddings(emb: EmbeddingMatrix, post_ids) -> np.ndarray:
    """Rows of `emb` reordered to match post_ids; missing ids are an error."""
    missing = [pid for pid in post_ids if pid not in emb._id_index]
    if missing:
        shown = ", ".join(missing[:10])
        more = f" (+{len(missing) - 10} more)" if len(missing) > 10 else ""
        raise DataError(f"embedding file lacks vectors for post ids: {shown}{more}")
    sel = np.array([emb._id_index[pid] for pid in post_ids], dtype=np.int64)
    return emb.rows[sel]
