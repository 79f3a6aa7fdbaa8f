"""Shared builders for the test suite."""

from pathlib import Path

import numpy as np

from deceptlens.gbm import TreeEnsemble, TreeNode

FIXTURES = Path(__file__).parent / "fixtures"


def leaf(weight, cover=1.0):
    return TreeNode(cover=float(cover), weight=float(weight))


def split(feature, threshold, left, right):
    return TreeNode(
        cover=left.cover + right.cover,
        feature=feature,
        threshold=float(threshold),
        left=left,
        right=right,
    )


def random_tree(rng, n_features, max_depth, features=None):
    if max_depth == 0 or rng.random() < 0.25:
        return leaf(rng.normal())
    pool = range(n_features) if features is None else features
    j = int(rng.choice(list(pool)))
    return split(
        j,
        rng.uniform(0.0, 1.0),
        random_tree(rng, n_features, max_depth - 1, features),
        random_tree(rng, n_features, max_depth - 1, features),
    )


def random_ensemble(rng, n_features, n_trees=5, max_depth=3, features=None):
    """Random tree structures over [0,1]-valued features, for explainer tests."""
    trees = tuple(random_tree(rng, n_features, max_depth, features) for _ in range(n_trees))
    return TreeEnsemble(
        trees=trees,
        base_score=float(rng.normal() * 0.3),
        learning_rate=0.3,
        feature_names=tuple(f"f{j}" for j in range(n_features)),
    )


def random_labeled_data(rng, n_rows, n_features):
    """Feature matrix plus labels from a noisy random linear rule, both classes."""
    while True:
        X = rng.normal(size=(n_rows, n_features))
        w = rng.normal(size=n_features)
        y = ((X @ w + 0.5 * rng.normal(size=n_rows)) > 0).astype(np.int64)
        if 0 < y.sum() < n_rows:
            return X, y


def xor_fixture():
    rows = np.loadtxt(FIXTURES / "xor.csv", delimiter=",", skiprows=1)
    return rows[:, :2], rows[:, 2].astype(np.int64)
