"""Versioned JSON model files.

One document stores the learner tag, hyperparameters, fitted parameters,
featurizer state (vocabulary + document frequencies, or the embedding
width), the seed, and provenance. Floats serialize via repr so predictions
round-trip bit-exactly; support vectors are stored sparsely.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .featurize import FeaturizerConfig, Vocabulary
from .models import (
    BoostedModel,
    DecisionTree,
    ForestModel,
    LinearModel,
    MlpModel,
    SvrModel,
)
from .report import atomic_write_text

FORMAT_VERSION = 1
SUPPORTED_VERSIONS = (1,)


@dataclass
class FeaturizerState:
    kind: str  # "bow" | "tfidf" | "embeddings"
    config: FeaturizerConfig | None = None
    vocab: Vocabulary | None = None
    dim: int | None = None


def dataset_provenance(path) -> dict:
    """Dataset hash plus its mtime (stable across identical runs, unlike
    wall-clock time, so model files stay byte-identical)."""
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    stat = os.stat(path)
    return {
        "dataset": str(path),
        "sha256": digest.hexdigest(),
        "dataset_mtime_ns": stat.st_mtime_ns,
    }


def _arr(a) -> list:
    return np.asarray(a).tolist()


def _sparse_rows(X: np.ndarray) -> dict:
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for row in X:
        nz = np.flatnonzero(row)
        indices.extend(nz.tolist())
        data.extend(row[nz].tolist())
        indptr.append(len(indices))
    return {"n_cols": int(X.shape[1]), "indptr": indptr, "indices": indices, "data": data}


def _dense_rows(doc: dict) -> np.ndarray:
    n_rows = len(doc["indptr"]) - 1
    out = np.zeros((n_rows, doc["n_cols"]))
    indices = doc["indices"]
    data = doc["data"]
    for i in range(n_rows):
        lo, hi = doc["indptr"][i], doc["indptr"][i + 1]
        out[i, indices[lo:hi]] = data[lo:hi]
    return out


def _tree_doc(tree: DecisionTree) -> dict:
    doc = {
        "feature": _arr(tree.feature),
        "threshold": _arr(tree.threshold),
        "left": _arr(tree.left),
        "right": _arr(tree.right),
    }
    if tree.counts is not None:
        doc["counts"] = _arr(tree.counts)
    if tree.values is not None:
        doc["values"] = _arr(tree.values)
    return doc


def _tree_from(doc: dict) -> DecisionTree:
    n = len(doc["feature"])
    for key in ("threshold", "left", "right"):
        if len(doc[key]) != n:
            raise DataError(f"model file: tree array {key!r} length mismatch")
    return DecisionTree(
        feature=np.array(doc["feature"], dtype=np.int64),
        threshold=np.array(doc["threshold"]),
        left=np.array(doc["left"], dtype=np.int64),
        right=np.array(doc["right"], dtype=np.int64),
        counts=np.array(doc["counts"], dtype=np.int64) if "counts" in doc else None,
        values=np.array(doc["values"]) if "values" in doc else None,
    )


def _model_doc(model) -> dict:
    if isinstance(model, LinearModel):
        return {
            "type": "linear",
            "weights": _arr(model.weights),
            "bias": model.bias,
            "clamp_range": list(model.clamp_range) if model.clamp_range else None,
            "ridge_alpha": model.ridge_alpha,
            "degenerate": model.degenerate,
        }
    if isinstance(model, SvrModel):
        return {
            "type": "svr",
            "support_vectors": _sparse_rows(model.support_vectors),
            "dual_coefs": _arr(model.dual_coefs),
            "bias": model.bias,
            "gamma": model.gamma,
            "C": model.C,
            "epsilon": model.epsilon,
            "tol": model.tol,
            "n_features": model.n_features,
            "n_iter": model.n_iter,
            "max_violation": model.max_violation,
            "converged": model.converged,
        }
    if isinstance(model, ForestModel):
        return {
            "type": "forest",
            "trees": [_tree_doc(t) for t in model.trees],
            "classes": _arr(model.classes),
            "n_features": model.n_features,
            "feature_subsample": model.feature_subsample,
            "seed": model.seed,
        }
    if isinstance(model, BoostedModel):
        return {
            "type": "boosted",
            "stages": [[_tree_doc(t) for t in trees] for trees in model.stages],
            "classes": _arr(model.classes),
            "n_features": model.n_features,
            "learning_rate": model.learning_rate,
            "base_score": model.base_score,
            "n_rounds": model.n_rounds,
            "max_depth": model.max_depth,
            "l2_lambda": model.l2_lambda,
            "seed": model.seed,
            "train_log": list(model.train_log),
        }
    if isinstance(model, MlpModel):
        return {
            "type": "mlp",
            "w1": _arr(model.w1),
            "b1": _arr(model.b1),
            "w2": _arr(model.w2),
            "b2": _arr(model.b2),
            "w3": _arr(model.w3),
            "b3": _arr(model.b3),
            "dropout_rate": model.dropout_rate,
            "task": model.task,
            "seed": model.seed,
            "train_log": list(model.train_log),
        }
    if isinstance(model, dict) and "mean" in model:
        return {"type": "mean", "mean": model["mean"]}
    raise DataError(f"cannot serialize model of type {type(model).__name__}")


def _model_from(doc: dict):
    kind = doc.get("type")
    if kind == "linear":
        return LinearModel(
            weights=np.array(doc["weights"]),
            bias=doc["bias"],
            clamp_range=tuple(doc["clamp_range"]) if doc["clamp_range"] else None,
            ridge_alpha=doc["ridge_alpha"],
            degenerate=doc["degenerate"],
        )
    if kind == "svr":
        sv = _dense_rows(doc["support_vectors"])
        coefs = np.array(doc["dual_coefs"])
        if sv.shape[0] != coefs.shape[0]:
            raise DataError("model file: support vector / dual coef count mismatch")
        if sv.shape[0] and sv.shape[1] != doc["n_features"]:
            raise DataError("model file: support vector width != n_features")
        return SvrModel(
            support_vectors=sv,
            dual_coefs=coefs,
            bias=doc["bias"],
            gamma=doc["gamma"],
            C=doc["C"],
            epsilon=doc["epsilon"],
            tol=doc["tol"],
            n_features=doc["n_features"],
            n_iter=doc["n_iter"],
            max_violation=doc["max_violation"],
            converged=doc["converged"],
        )
    if kind == "forest":
        return ForestModel(
            trees=[_tree_from(t) for t in doc["trees"]],
            classes=np.array(doc["classes"]),
            n_features=doc["n_features"],
            feature_subsample=doc["feature_subsample"],
            seed=doc["seed"],
        )
    if kind == "boosted":
        return BoostedModel(
            stages=[[_tree_from(t) for t in trees] for trees in doc["stages"]],
            classes=np.array(doc["classes"]),
            n_features=doc["n_features"],
            learning_rate=doc["learning_rate"],
            base_score=doc["base_score"],
            n_rounds=doc["n_rounds"],
            max_depth=doc["max_depth"],
            l2_lambda=doc["l2_lambda"],
            seed=doc["seed"],
            train_log=list(doc["train_log"]),
        )
    if kind == "mlp":
        model = MlpModel(
            w1=np.array(doc["w1"]),
            b1=np.array(doc["b1"]),
            w2=np.array(doc["w2"]),
            b2=np.array(doc["b2"]),
            w3=np.array(doc["w3"]),
            b3=np.array(doc["b3"]),
            dropout_rate=doc["dropout_rate"],
            task=doc["task"],
            seed=doc["seed"],
            train_log=list(doc["train_log"]),
        )
        if model.w1.shape[1] != model.w2.shape[0] or model.w2.shape[1] != model.w3.shape[0]:
            raise DataError("model file: inconsistent layer shapes")
        return model
    if kind == "mean":
        return {"mean": doc["mean"]}
    raise DataError(f"model file: unknown model type {kind!r}")


def _featurizer_doc(state: FeaturizerState) -> dict:
    if state.kind == "embeddings":
        return {"kind": "embeddings", "dim": state.dim}
    cfg = state.config
    return {
        "kind": state.kind,
        "config": {
            "mode": cfg.mode,
            "ngram_min": cfg.ngram_min,
            "ngram_max": cfg.ngram_max,
            "min_df": cfg.min_df,
            "max_df": cfg.max_df,
            "unitize": cfg.unitize,
        },
        "terms": state.vocab.terms,
        "doc_freq": [state.vocab.doc_freq[t] for t in state.vocab.terms],
        "n_docs": state.vocab.n_docs,
    }


def _featurizer_from(doc: dict) -> FeaturizerState:
    if doc["kind"] == "embeddings":
        return FeaturizerState(kind="embeddings", dim=doc["dim"])
    cfg = FeaturizerConfig(**doc["config"])
    terms = list(doc["terms"])
    vocab = Vocabulary(
        terms=terms,
        index={t: j for j, t in enumerate(terms)},
        doc_freq=dict(zip(terms, doc["doc_freq"])),
        n_docs=doc["n_docs"],
    )
    return FeaturizerState(kind=doc["kind"], config=cfg, vocab=vocab)


def save_model(
    path,
    learner: str,
    task: str,
    model,
    featurizer: FeaturizerState,
    hyperparameters: dict,
    seed: int,
    provenance: dict,
) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "learner": learner,
        "task": task,
        "seed": seed,
        "hyperparameters": hyperparameters,
        "featurizer": _featurizer_doc(featurizer),
        "model": _model_doc(model),
        "provenance": provenance,
    }
    atomic_write_text(path, json.dumps(doc, indent=1, sort_keys=True) + "\n")


def load_model(path):
    """Returns (learner tag, task, model object, FeaturizerState, full doc)."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot open model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: truncated or invalid model file: {exc}") from exc
    version = doc.get("format_version")
    if version not in SUPPORTED_VERSIONS:
        raise DataError(
            f"{path}: unsupported format_version {version!r}; supported: {SUPPORTED_VERSIONS}"
        )
    for key in ("learner", "task", "model", "featurizer"):
        if key not in doc:
            raise DataError(f"{path}: model file missing {key!r}")
    model = _model_from(doc["model"])
    state = _featurizer_from(doc["featurizer"])
    return doc["learner"], doc["task"], model, state, doc
