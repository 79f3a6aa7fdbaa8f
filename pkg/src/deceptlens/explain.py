"""Shapley attributions for boosted-tree margins, plus report builders.

Feature credit is allocated with the classic fair-division weights over
coalitions: phi_i sums |S|!(n-|S|-1)!/n! * (v(S+i) - v(S)) over all feature
subsets S. The coalition value v(S) is interventional: the mean margin over a
background set after overwriting the features in S with the explained
instance's values. Two routes compute the same quantity:

* ``shapley_exact`` enumerates all 2^n coalitions and evaluates the model on
  composite inputs (the brute-force definition);
* ``shapley_tree`` walks each tree once per background row, tracking which
  features force the instance-side or background-side branch, and weights
  each reachable leaf by the exact fraction of coalitions that route there.

Both return attributions in margin (log-odds) space, where contributions are
additive: base value + sum(phi) equals the predicted margin.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .gbm import TreeEnsemble, TreeNode


@dataclass(frozen=True)
class Explanation:
    feature_names: tuple[str, ...]
    phi: np.ndarray
    base_value: float
    fx: float
    feature_values: np.ndarray


@dataclass(frozen=True)
class GlobalSummary:
    feature_names: tuple[str, ...]
    mean_abs_phi: np.ndarray
    ranking: tuple[int, ...]  # feature indices, descending mean |phi|

    def top_features(self, k: int) -> tuple[str, ...]:
        return tuple(self.feature_names[i] for i in self.ranking[:k])


@dataclass(frozen=True)
class WaterfallStep:
    feature: str
    value: float
    phi: float
    running_total: float
    direction: str  # "positive" | "negative"


@dataclass(frozen=True)
class WaterfallReport:
    base_value: float
    steps: tuple[WaterfallStep, ...]
    fx: float


@dataclass(frozen=True)
class InteractionReport:
    primary: str
    coloring: str
    records: tuple[tuple[float, float, float], ...]  # (x_primary, phi_primary, x_coloring)


def _check_inputs(model: TreeEnsemble, x: np.ndarray, background: np.ndarray):
    x = np.asarray(x, dtype=np.float64)
    background = np.asarray(background, dtype=np.float64)
    n = model.num_features
    if x.shape != (n,):
        raise DataError(f"instance must have shape ({n},), got {x.shape}")
    if background.ndim != 2 or background.shape[0] == 0 or background.shape[1] != n:
        raise DataError(f"background must be a non-empty matrix with {n} columns")
    if not np.isfinite(x).all() or not np.isfinite(background).all():
        raise DataError("instance and background must be finite")
    return x, background


def _coalition_weights(n: int) -> np.ndarray:
    # |S|!(n-|S|-1)!/n! == 1/(n * C(n-1, |S|)), built from exact integers
    return np.array(
        [1.0 / (n * math.comb(n - 1, s)) for s in range(n)], dtype=np.float64
    )


def shapley_exact(
    model: TreeEnsemble, x: np.ndarray, background: np.ndarray
) -> Explanation:
    """Brute-force attributions: evaluate every coalition's composite inputs.

    Enumerates all 2^n feature subsets, builds for each the composite matrix
    taking x on the subset and the background row elsewhere, averages the
    predicted margins, and combines the differences with exact coalition
    weights. Exponential in n; intended as the oracle for small n and as a
    feasibility check at n = 17.
    """
    x, background = _check_inputs(model, x, background)
    n = x.shape[0]
    n_bg = background.shape[0]
    n_masks = 1 << n
    bits = np.arange(n, dtype=np.uint32)

    v = np.empty(n_masks, dtype=np.float64)
    chunk = max(1, min(n_masks, 400_000 // n_bg))
    for start in range(0, n_masks, chunk):
        masks = np.arange(start, min(start + chunk, n_masks), dtype=np.uint32)
        in_coalition = ((masks[:, None] >> bits[None, :]) & 1).astype(bool)
        composite = np.where(
            in_coalition[:, None, :], x[None, None, :], background[None, :, :]
        )
        margins = model.predict_margin_batch(composite.reshape(-1, n))
        v[start : start + masks.size] = margins.reshape(-1, n_bg).mean(axis=1)

    all_masks = np.arange(n_masks, dtype=np.uint32)
    sizes = np.zeros(n_masks, dtype=np.int64)
    for j in range(n):
        sizes += (all_masks >> j) & 1
    weights = _coalition_weights(n)

    phi = np.zeros(n, dtype=np.float64)
    for i in range(n):
        without = all_masks[((all_masks >> i) & 1) == 0]
        diffs = v[without | (1 << i)] - v[without]
        phi[i] = float(np.dot(weights[sizes[without]], diffs))

    return Explanation(
        feature_names=model.feature_names,
        phi=phi,
        base_value=float(v[0]),
        fx=float(v[n_masks - 1]),
        feature_values=x,
    )


def _path_weights(n: int) -> np.ndarray:
    """W[p, q] = (p-1)! q! / (p+q)! for p >= 1, from exact integers.

    This is the summed coalition weight of a leaf constrained by p
    instance-side and q background-side features; equals 1/(p * C(p+q, p)).
    """
    W = np.zeros((n + 1, n + 1), dtype=np.float64)
    for p in range(1, n + 1):
        for q in range(0, n - p + 1):
            W[p, q] = 1.0 / (p * math.comb(p + q, p))
    return W


def _tree_phi(root: TreeNode, x: np.ndarray, b: np.ndarray, W: np.ndarray, phi: np.ndarray):
    """Accumulate one (tree, background row) pair's attributions into phi.

    Walks every path a coalition composite could take. Where x and b diverge
    at a node, the path forks: one branch requires the feature in the
    coalition (instance side), the other requires it out (background side).
    A leaf reached with p instance-side and q background-side features
    contributes weight (p-1)! q! / (p+q)! to each instance-side feature and
    -p! (q-1)! / (p+q)! to each background-side one; these are the exact
    coalition-weight sums, so the result matches full enumeration.
    """
    assigned: dict[int, bool] = {}  # feature -> True if forced to instance side

    def walk(node: TreeNode):
        if node.is_leaf:
            p = sum(1 for side in assigned.values() if side)
            q = len(assigned) - p
            w_in = node.weight * W[p, q] if p else 0.0
            w_out = node.weight * W[q, p] if q else 0.0
            for j, side in assigned.items():
                if side:
                    phi[j] += w_in
                else:
                    phi[j] -= w_out
            return
        j = node.feature
        x_child = node.left if x[j] < node.threshold else node.right
        b_child = node.left if b[j] < node.threshold else node.right
        side = assigned.get(j)
        if side is True:
            walk(x_child)
        elif side is False:
            walk(b_child)
        elif x_child is b_child:
            walk(x_child)
        else:
            assigned[j] = True
            walk(x_child)
            assigned[j] = False
            walk(b_child)
            del assigned[j]

    walk(root)


def shapley_tree(
    model: TreeEnsemble, x: np.ndarray, background: np.ndarray
) -> Explanation:
    """Tree-path attributions, equal to shapley_exact without enumeration.

    Linear in background size and total tree paths rather than exponential
    in feature count.
    """
    x, background = _check_inputs(model, x, background)
    n = x.shape[0]
    W = _path_weights(n)

    phi = np.zeros(n, dtype=np.float64)
    for b in background:
        for root in model.trees:
            _tree_phi(root, x, b, W, phi)
    phi /= background.shape[0]

    base_value = float(model.predict_margin_batch(background).mean())
    return Explanation(
        feature_names=model.feature_names,
        phi=phi,
        base_value=base_value,
        fx=model.predict_margin(x),
        feature_values=x,
    )


METHODS = {"exact": shapley_exact, "tree": shapley_tree}


def explain_rows(
    model: TreeEnsemble,
    rows: np.ndarray,
    background: np.ndarray,
    method: str = "tree",
) -> list[Explanation]:
    if method not in METHODS:
        raise DataError(f"unknown method {method!r}, expected 'exact' or 'tree'")
    fn = METHODS[method]
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2:
        raise DataError("rows must be a matrix")
    return [fn(model, row, background) for row in rows]


def summarize(explanations: list[Explanation]) -> GlobalSummary:
    """Mean |phi| per feature with a deterministic descending ranking."""
    if not explanations:
        raise DataError("cannot summarize zero explanations")
    names = explanations[0].feature_names
    mean_abs = np.mean([np.abs(e.phi) for e in explanations], axis=0)
    ranking = tuple(sorted(range(len(names)), key=lambda i: (-mean_abs[i], i)))
    return GlobalSummary(feature_names=names, mean_abs_phi=mean_abs, ranking=ranking)


def global_summary(
    model: TreeEnsemble,
    corpus_features: np.ndarray,
    background: np.ndarray,
    method: str = "tree",
) -> GlobalSummary:
    return summarize(explain_rows(model, corpus_features, background, method))


def waterfall(explanation: Explanation) -> WaterfallReport:
    """Order contributions by |phi| and accumulate from base value to margin."""
    order = sorted(
        range(len(explanation.feature_names)),
        key=lambda i: (-abs(explanation.phi[i]), i),
    )
    steps = []
    total = explanation.base_value
    for i in order:
        phi_i = float(explanation.phi[i])
        total += phi_i
        steps.append(
            WaterfallStep(
                feature=explanation.feature_names[i],
                value=float(explanation.feature_values[i]),
                phi=phi_i,
                running_total=total,
                direction="positive" if phi_i >= 0 else "negative",
            )
        )
    return WaterfallReport(
        base_value=explanation.base_value, steps=tuple(steps), fx=explanation.fx
    )


def interaction_report(
    explanations: list[Explanation], primary: str, coloring: str
) -> InteractionReport:
    """Per-instance (primary value, primary phi, coloring value) records."""
    if explanations:
        names = explanations[0].feature_names
    else:
        from .lexfeat import FEATURE_NAMES as names  # canonical fallback
    if primary not in names:
        raise DataError(f"unknown feature name {primary!r}")
    if coloring not in names:
        raise DataError(f"unknown feature name {coloring!r}")
    pi, ci = names.index(primary), names.index(coloring)
    records = tuple(
        (float(e.feature_values[pi]), float(e.phi[pi]), float(e.feature_values[ci]))
        for e in explanations
    )
    return InteractionReport(primary=primary, coloring=coloring, records=records)


def explanation_to_json(e: Explanation) -> str:
    return json.dumps(
        {
            "feature_names": list(e.feature_names),
            "phi": [float(v) for v in e.phi],
            "base_value": e.base_value,
            "fx": e.fx,
            "feature_values": [float(v) for v in e.feature_values],
        },
        indent=2,
    ) + "\n"


def summary_to_json(s: GlobalSummary) -> str:
    return json.dumps(
        {
            "ranking": [
                {"feature": s.feature_names[i], "mean_abs_phi": float(s.mean_abs_phi[i])}
                for i in s.ranking
            ]
        },
        indent=2,
    ) + "\n"


def waterfall_to_json(w: WaterfallReport) -> str:
    return json.dumps(
        {
            "base_value": w.base_value,
            "steps": [
                {
                    "feature": s.feature,
                    "value": s.value,
                    "phi": s.phi,
                    "running_total": s.running_total,
                }
                for s in w.steps
            ],
            "fx": w.fx,
        },
        indent=2,
    ) + "\n"


def interaction_to_csv(r: InteractionReport) -> str:
    lines = ["primary_value,phi_primary,coloring_value"]
    for pv, phi_p, cv in r.records:
        lines.append(f"{pv!r},{phi_p!r},{cv!r}")
    return "\n".join(lines) + "\n"
