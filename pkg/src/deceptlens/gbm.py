"""Gradient-boosted regression trees for binary classification.

Trains an ensemble of shallow trees with the second-order logistic boosting
objective: per-round gradients g = p - y and hessians h = p(1 - p), exact
greedy split search over midpoint thresholds, L2-regularized leaf weights
-G/(H + lambda) stored post-shrinkage, and a split accepted only when its
regularized gain clears gamma. The ensemble predicts an additive log-odds
margin, which keeps per-feature attributions additive downstream.

Training is fully deterministic: candidate thresholds are scanned in
ascending feature-index and threshold order and ties in gain keep the first
candidate, so identical inputs produce byte-identical serialized models.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError, ModelFormatError

MODEL_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class TreeNode:
    """Internal node (feature >= 0) or leaf (feature == -1).

    ``cover`` is the sum of hessians routed through the node during the
    round that grew it; an internal node's cover is exactly the sum of its
    children's. Routing: value < threshold goes left, ties go right.
    """

    cover: float
    feature: int = -1
    threshold: float = 0.0
    weight: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0


@dataclass(frozen=True)
class TrainConfig:
    num_rounds: int = 100
    max_depth: int = 3
    learning_rate: float = 0.3
    reg_lambda: float = 1.0
    gamma: float = 0.0
    min_child_weight: float = 1.0
    seed: int = 0  # recorded for provenance; exact greedy training is deterministic

    def __post_init__(self):
        if self.num_rounds < 1:
            raise DataError("num_rounds must be >= 1")
        if self.max_depth < 1:
            raise DataError("max_depth must be >= 1")
        if not 0.0 < self.learning_rate <= 1.0:
            raise DataError("learning_rate must be in (0, 1]")
        if self.reg_lambda < 0 or self.gamma < 0 or self.min_child_weight < 0:
            raise DataError("reg_lambda, gamma, min_child_weight must be >= 0")


class _FlatTree:
    """Array form of one tree for vectorized routing."""

    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self, root: TreeNode):
        nodes: list[TreeNode] = []

        def collect(node: TreeNode) -> int:
            idx = len(nodes)
            nodes.append(node)
            if not node.is_leaf:
                collect(node.left)
                collect(node.right)
            return idx

        collect(root)
        offsets = {id(n): i for i, n in enumerate(nodes)}
        self.feature = np.array([n.feature for n in nodes], dtype=np.int64)
        self.threshold = np.array([n.threshold for n in nodes], dtype=np.float64)
        self.value = np.array([n.weight for n in nodes], dtype=np.float64)
        self.left = np.array(
            [offsets[id(n.left)] if not n.is_leaf else 0 for n in nodes], dtype=np.int64
        )
        self.right = np.array(
            [offsets[id(n.right)] if not n.is_leaf else 0 for n in nodes], dtype=np.int64
        )

    def apply(self, X: np.ndarray) -> np.ndarray:
        idx = np.zeros(X.shape[0], dtype=np.int64)
        while True:
            feat = self.feature[idx]
            active = feat >= 0
            if not active.any():
                return self.value[idx]
            rows = np.nonzero(active)[0]
            node = idx[rows]
            go_left = X[rows, feat[rows]] < self.threshold[node]
            idx[rows] = np.where(go_left, self.left[node], self.right[node])


@dataclass
class TreeEnsemble:
    """Boosted tree model: margin(x) = base_score + sum of routed leaf weights."""

    trees: tuple[TreeNode, ...]
    base_score: float
    learning_rate: float
    feature_names: tuple[str, ...]
    train_loss: tuple[float, ...] = ()
    _flat: list = field(default=None, repr=False, compare=False)

    @property
    def num_features(self) -> int:
        return len(self.feature_names)

    def _flat_trees(self):
        if self._flat is None:
            self._flat = [_FlatTree(t) for t in self.trees]
        return self._flat

    def predict_margin_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.num_features:
            raise DataError(
                f"expected shape (n, {self.num_features}), got {X.shape}"
            )
        if not np.isfinite(X).all():
            raise DataError("feature matrix contains non-finite values")
        margins = np.full(X.shape[0], self.base_score, dtype=np.float64)
        for flat in self._flat_trees():
            margins += flat.apply(X)
        return margins

    def predict_margin(self, x: np.ndarray) -> float:
        return float(self.predict_margin_batch(np.asarray(x, dtype=np.float64)[None, :])[0])

    def predict_proba(self, x: np.ndarray) -> float:
        return float(sigmoid(np.array([self.predict_margin(x)]))[0])

    def predict_label(self, x: np.ndarray) -> int:
        return 1 if self.predict_margin(x) >= 0.0 else 0


def sigmoid(m: np.ndarray) -> np.ndarray:
    out = np.empty_like(m, dtype=np.float64)
    pos = m >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-m[pos]))
    em = np.exp(m[~pos])
    out[~pos] = em / (1.0 + em)
    return out


def log_loss(margins: np.ndarray, y: np.ndarray) -> float:
    signs = 2.0 * y - 1.0
    return float(np.mean(np.logaddexp(0.0, -signs * margins)))


def logistic_gradients(margins: np.ndarray, y: np.ndarray):
    """First and second derivatives of the logistic loss w.r.t. the margin."""
    p = sigmoid(margins)
    return p - y, p * (1.0 - p)


def _best_split(X, idx, g, h, cfg: TrainConfig):
    """Exact greedy search over all features and midpoint thresholds.

    Returns (gain, feature, threshold) for the best positive-gain split or
    None. Candidates are scanned ascending in feature then threshold, and a
    later candidate replaces the incumbent only on strictly larger gain.
    """
    gs, hs = g[idx], h[idx]
    G, H = gs.sum(), hs.sum()
    parent_score = G * G / (H + cfg.reg_lambda)
    best = None
    for j in range(X.shape[1]):
        v = X[idx, j]
        order = np.argsort(v, kind="stable")
        sv = v[order]
        cg = np.cumsum(gs[order])
        ch = np.cumsum(hs[order])
        cut = np.nonzero(sv[:-1] < sv[1:])[0]
        if cut.size == 0:
            continue
        thr = 0.5 * (sv[cut] + sv[cut + 1])
        # midpoints can collapse onto a neighbor in float; those cuts would
        # not reproduce the scanned partition under "< threshold goes left"
        ok = (thr > sv[cut]) & (thr <= sv[cut + 1])
        G_L, H_L = cg[cut], ch[cut]
        G_R, H_R = G - G_L, H - H_L
        with np.errstate(divide="ignore", invalid="ignore"):
            gain = 0.5 * (
                G_L * G_L / (H_L + cfg.reg_lambda)
                + G_R * G_R / (H_R + cfg.reg_lambda)
                - parent_score
            ) - cfg.gamma
        ok &= np.isfinite(gain)
        ok &= (H_L >= cfg.min_child_weight) & (H_R >= cfg.min_child_weight)
        if not ok.any():
            continue
        gain = np.where(ok, gain, -np.inf)
        k = int(np.argmax(gain))
        if gain[k] > 0.0 and (best is None or gain[k] > best[0]):
            best = (float(gain[k]), j, float(thr[k]))
    return best


def _grow_tree(X, idx, g, h, depth, cfg: TrainConfig) -> TreeNode:
    if depth < cfg.max_depth:
        split = _best_split(X, idx, g, h, cfg)
        if split is not None:
            _, j, thr = split
            mask = X[idx, j] < thr
            left = _grow_tree(X, idx[mask], g, h, depth + 1, cfg)
            right = _grow_tree(X, idx[~mask], g, h, depth + 1, cfg)
            return TreeNode(
                cover=left.cover + right.cover,
                feature=j,
                threshold=thr,
                left=left,
                right=right,
            )
    G, H = g[idx].sum(), h[idx].sum()
    weight = -G / (H + cfg.reg_lambda) * cfg.learning_rate
    return TreeNode(cover=float(H), weight=float(weight))


def train(
    X: np.ndarray,
    y: np.ndarray,
    cfg: TrainConfig = TrainConfig(),
    feature_names: tuple[str, ...] | None = None,
) -> TreeEnsemble:
    """Fit a boosted ensemble of cfg.num_rounds trees.

    The base score is the clamped log-odds of the training positive rate;
    each round fits one tree to the current gradients and hessians and the
    training log-loss after the round is recorded in ``train_loss``.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise DataError("training matrix must be non-empty and 2-dimensional")
    if X.shape[0] != y.shape[0]:
        raise DataError(f"size mismatch: {X.shape[0]} rows vs {y.shape[0]} labels")
    if not np.isfinite(X).all():
        raise DataError("training matrix contains non-finite values")
    if not np.isin(y, (0.0, 1.0)).all():
        raise DataError("labels must be 0 or 1")
    pos = int(y.sum())
    if pos == 0 or pos == y.shape[0]:
        raise DataError("training labels are single-class; need both 0 and 1")
    if feature_names is None:
        feature_names = tuple(f"f{j}" for j in range(X.shape[1]))
    if len(feature_names) != X.shape[1]:
        raise DataError("feature_names length does not match matrix width")

    base_score = float(np.clip(math.log(pos / (y.shape[0] - pos)), -10.0, 10.0))
    margins = np.full(X.shape[0], base_score, dtype=np.float64)
    all_rows = np.arange(X.shape[0])

    trees = []
    losses = []
    for _ in range(cfg.num_rounds):
        g, h = logistic_gradients(margins, y)
        root = _grow_tree(X, all_rows, g, h, 0, cfg)
        trees.append(root)
        margins += _FlatTree(root).apply(X)
        losses.append(log_loss(margins, y))

    return TreeEnsemble(
        trees=tuple(trees),
        base_score=base_score,
        learning_rate=cfg.learning_rate,
        feature_names=tuple(feature_names),
        train_loss=tuple(losses),
    )


def _node_to_dict(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"leaf": node.weight, "cover": node.cover}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "cover": node.cover,
        "left": _node_to_dict(node.left),
        "right": _node_to_dict(node.right),
    }


def _node_from_dict(obj, n_features: int) -> TreeNode:
    if not isinstance(obj, dict):
        raise ModelFormatError("tree node must be an object")
    if "leaf" in obj:
        return TreeNode(cover=float(obj["cover"]), weight=float(obj["leaf"]))
    try:
        feature = int(obj["feature"])
        if not 0 <= feature < n_features:
            raise ModelFormatError(f"feature index {feature} out of range")
        return TreeNode(
            cover=float(obj["cover"]),
            feature=feature,
            threshold=float(obj["threshold"]),
            left=_node_from_dict(obj["left"], n_features),
            right=_node_from_dict(obj["right"], n_features),
        )
    except KeyError as exc:
        raise ModelFormatError(f"tree node missing key {exc}") from exc


def model_to_json(model: TreeEnsemble) -> str:
    payload = {
        "version": MODEL_SCHEMA_VERSION,
        "base_score": model.base_score,
        "learning_rate": model.learning_rate,
        "feature_names": list(model.feature_names),
        "trees": [_node_to_dict(t) for t in model.trees],
    }
    return json.dumps(payload, indent=2) + "\n"


def model_from_json(text: str) -> TreeEnsemble:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model file is not valid JSON: {exc.msg}") from exc
    if not isinstance(payload, dict):
        raise ModelFormatError("model file must contain a JSON object")
    version = payload.get("version")
    if version != MODEL_SCHEMA_VERSION:
        raise ModelFormatError(
            f"unsupported model schema version {version!r}, expected {MODEL_SCHEMA_VERSION}"
        )
    try:
        names = tuple(str(n) for n in payload["feature_names"])
        trees = tuple(
            _node_from_dict(t, len(names)) for t in payload["trees"]
        )
        return TreeEnsemble(
            trees=trees,
            base_score=float(payload["base_score"]),
            learning_rate=float(payload["learning_rate"]),
            feature_names=names,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model file: {exc}") from exc


def save_model(model: TreeEnsemble, path: str | Path) -> None:
    Path(path).write_text(model_to_json(model), encoding="utf-8")


def load_model(path: str | Path) -> TreeEnsemble:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"model file not found: {path}")
    return model_from_json(path.read_text(encoding="utf-8"))
