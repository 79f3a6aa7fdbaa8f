#!/usr/bin/env python3
"""Build the XOR-style fixture and its independent reference results.

Generates a 200-point two-feature dataset labeled (x0 > 0.5) XOR (x1 > 0.8):
a noise-free XOR pattern whose asymmetric second threshold makes feature 0
decisively more important. Trains scikit-learn's GradientBoostingClassifier
on it as an independent reference implementation, and computes mean-|phi|
feature importance of that reference model by direct two-feature coalition
enumeration. Writes:

  tests/fixtures/xor.csv             x0,x1,label rows
  tests/fixtures/xor_reference.json  reference accuracy, held-out predictions,
                                     and the mean-|phi| feature ordering

Run from the repo root:  python scripts/oracles/xor_reference.py
"""

import json
import random
from pathlib import Path

import numpy as np
from sklearn.ensemble import GradientBoostingClassifier

ROOT = Path(__file__).resolve().parents[2]
FIXTURES = ROOT / "tests" / "fixtures"
SEED = 1337
HELD_OUT = [(0.25, 0.25), (0.75, 0.25)]


def make_dataset():
    rng = random.Random(SEED)
    rows = []
    for _ in range(200):
        x0, x1 = rng.random(), rng.random()
        label = int((x0 > 0.5) != (x1 > 0.8))
        rows.append((x0, x1, label))
    return rows


def exact_two_feature_phi(margin_fn, x, background):
    """Shapley values for n=2 by direct enumeration of the 4 coalitions."""
    def v(mask):
        composite = np.array(background, dtype=float)
        for j in (0, 1):
            if mask & (1 << j):
                composite[:, j] = x[j]
        return float(np.mean(margin_fn(composite)))

    v0, v1, v2, v3 = v(0b00), v(0b01), v(0b10), v(0b11)
    phi0 = 0.5 * (v1 - v0) + 0.5 * (v3 - v2)
    phi1 = 0.5 * (v2 - v0) + 0.5 * (v3 - v1)
    return phi0, phi1


def main():
    rows = make_dataset()
    FIXTURES.mkdir(parents=True, exist_ok=True)
    csv_lines = ["x0,x1,label"] + [f"{x0!r},{x1!r},{label}" for x0, x1, label in rows]
    (FIXTURES / "xor.csv").write_text("\n".join(csv_lines) + "\n")

    X = np.array([[r[0], r[1]] for r in rows])
    y = np.array([r[2] for r in rows])
    clf = GradientBoostingClassifier(
        n_estimators=50, max_depth=2, learning_rate=0.3, random_state=0
    )
    clf.fit(X, y)
    train_acc = float((clf.predict(X) == y).mean())
    held_out_pred = [int(p) for p in clf.predict(np.array(HELD_OUT))]

    background = X[:50]
    abs_phi = np.zeros(2)
    for x in X:
        phi0, phi1 = exact_two_feature_phi(clf.decision_function, x, background)
        abs_phi += (abs(phi0), abs(phi1))
    mean_abs_phi = abs_phi / len(X)
    ordering = ["x0", "x1"] if mean_abs_phi[0] >= mean_abs_phi[1] else ["x1", "x0"]

    reference = {
        "reference_impl": "sklearn.ensemble.GradientBoostingClassifier",
        "train_accuracy": train_acc,
        "held_out_points": HELD_OUT,
        "held_out_predictions": held_out_pred,
        "mean_abs_phi": [float(v) for v in mean_abs_phi],
        "importance_ordering": ordering,
    }
    (FIXTURES / "xor_reference.json").write_text(json.dumps(reference, indent=2) + "\n")
    print(f"reference train accuracy: {train_acc:.3f}")
    print(f"held-out predictions: {held_out_pred}")
    print(f"mean |phi|: {mean_abs_phi} -> ordering {ordering}")


if __name__ == "__main__":
    main()
