"""The six learners: linear/ridge regression, random forest, gradient
boosting, epsilon-SVR, and the feed-forward network."""

import numpy as np

from ..featurize import SparseFeatureMatrix


def as_dense(X) -> np.ndarray:
    """Accept SparseFeatureMatrix or array-like; models work on dense float64."""
    if isinstance(X, SparseFeatureMatrix):
        return X.toarray()
    return np.asarray(X, dtype=np.float64)


from .linear import LinearModel, fit_linear, fit_ordinal_ridge, predict_linear  # noqa: E402
from .svr import SvrModel, fit_svr, predict_svr, rbf_kernel  # noqa: E402
from .tree import (  # noqa: E402
    BoostedModel,
    DecisionTree,
    ForestModel,
    fit_boosted,
    fit_forest,
    predict_boosted,
    predict_forest,
)
from .nn import MlpModel, init_mlp, predict_mlp, train_mlp  # noqa: E402

__all__ = [
    "as_dense",
    "LinearModel",
    "fit_linear",
    "fit_ordinal_ridge",
    "predict_linear",
    "SvrModel",
    "fit_svr",
    "predict_svr",
    "rbf_kernel",
    "DecisionTree",
    "ForestModel",
    "BoostedModel",
    "fit_forest",
    "predict_forest",
    "fit_boosted",
    "predict_boosted",
    "MlpModel",
    "init_mlp",
    "train_mlp",
    "predict_mlp",
]
