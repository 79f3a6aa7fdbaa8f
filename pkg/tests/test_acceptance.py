"""Acceptance suite: one test per criterion, at the stated tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS line per
criterion.
"""

import json
import random
import time
from fractions import Fraction

import mpmath as mp
import numpy as np

from deceptlens.cli import main as cli_main
from deceptlens.explain import global_summary, shapley_exact, shapley_tree
from deceptlens.gbm import TrainConfig, TreeEnsemble, logistic_gradients, train
from deceptlens.lexfeat import (
    FEATURE_NAMES,
    default_lexicons,
    extract_features,
    tokenize,
)
from deceptlens.metrics import evaluate_margins
from helpers import FIXTURES, leaf, random_ensemble, split

F = {name: i for i, name in enumerate(FEATURE_NAMES)}


def announce(criterion, text):
    print(f"ACCEPTANCE {criterion} PASS: {text}")


def test_criterion_1_shapley_efficiency():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        model = random_ensemble(
            rng, 17, n_trees=int(rng.integers(1, 9)), max_depth=int(rng.integers(1, 5))
        )
        x = rng.uniform(0, 1, 17)
        background = rng.uniform(0, 1, (int(rng.integers(1, 31)), 17))
        e = shapley_tree(model, x, background)
        worst = max(worst, abs(e.phi.sum() + e.base_value - e.fx))
        assert abs(e.phi.sum() + e.base_value - e.fx) < 1e-9
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"efficiency sweep took {elapsed:.1f}s"
    announce(1, f"efficiency gap < 1e-9 on 200 triples (worst {worst:.2e}, {elapsed:.1f}s)")


def test_criterion_2_oracle_equivalence_and_exact_feasibility():
    rng = np.random.default_rng(202)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 13))
        model = random_ensemble(rng, n, n_trees=int(rng.integers(1, 7)), max_depth=3)
        x = rng.uniform(0, 1, n)
        background = rng.uniform(0, 1, (int(rng.integers(1, 11)), n))
        exact = shapley_exact(model, x, background)
        tree = shapley_tree(model, x, background)
        gap = np.abs(exact.phi - tree.phi).max()
        worst = max(worst, gap)
        assert gap < 1e-9

    model17 = random_ensemble(rng, 17, n_trees=10, max_depth=3)
    x = rng.uniform(0, 1, 17)
    background = rng.uniform(0, 1, (100, 17))
    start = time.perf_counter()
    exact17 = shapley_exact(model17, x, background)
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"17-feature enumeration took {elapsed:.1f}s"
    tree17 = shapley_tree(model17, x, background)
    assert np.abs(exact17.phi - tree17.phi).max() < 1e-9
    announce(2, f"tree==exact on 50 models (worst {worst:.2e}); "
                f"2^17 x 100-row enumeration in {elapsed:.1f}s")


def test_criterion_3_dummy_symmetry_linearity():
    rng = np.random.default_rng(303)

    # dummy: a feature appearing in no tree has phi exactly 0
    model = random_ensemble(rng, 6, n_trees=5, max_depth=3, features=range(5))
    for _ in range(5):
        e = shapley_tree(model, rng.uniform(0, 1, 6), rng.uniform(0, 1, (8, 6)))
        assert e.phi[5] == 0.0

    # symmetry: identical duplicated columns receive equal phi
    base_model = random_ensemble(rng, 3, n_trees=4, max_depth=3)

    def remap(node):
        if node.is_leaf:
            return node
        feature = 3 if node.feature == 0 else node.feature
        return split(feature, node.threshold, remap(node.left), remap(node.right))

    sym = TreeEnsemble(
        trees=base_model.trees + tuple(remap(t) for t in base_model.trees),
        base_score=base_model.base_score,
        learning_rate=1.0,
        feature_names=("f0", "f1", "f2", "f3"),
    )
    for _ in range(10):
        x3 = rng.uniform(0, 1, 3)
        x = np.array([x3[0], x3[1], x3[2], x3[0]])
        bg3 = rng.uniform(0, 1, (6, 3))
        background = np.column_stack([bg3, bg3[:, 0]])
        e = shapley_tree(sym, x, background)
        assert abs(e.phi[0] - e.phi[3]) < 1e-9

    # linearity: concatenated ensembles add their attributions
    for _ in range(10):
        a = random_ensemble(rng, 5, n_trees=3, max_depth=3)
        b = random_ensemble(rng, 5, n_trees=2, max_depth=2)
        combined = TreeEnsemble(
            trees=a.trees + b.trees,
            base_score=a.base_score + b.base_score,
            learning_rate=1.0,
            feature_names=a.feature_names,
        )
        x = rng.uniform(0, 1, 5)
        background = rng.uniform(0, 1, (6, 5))
        ea, eb, ec = (shapley_tree(m, x, background) for m in (a, b, combined))
        assert np.abs(ec.phi - (ea.phi + eb.phi)).max() < 1e-9
    announce(3, "dummy exact-zero, symmetry < 1e-9, linearity < 1e-9")


def test_criterion_4_gradient_check():
    mp.mp.dps = 40
    eps = mp.mpf("1e-10")
    rng = np.random.default_rng(404)
    margins = rng.uniform(-8, 8, size=1000)
    labels = rng.integers(0, 2, size=1000)
    g, h = logistic_gradients(margins, labels.astype(float))

    worst = 0.0
    for i in range(1000):
        m = mp.mpf(float(margins[i]))
        s = 2 * int(labels[i]) - 1
        lp = mp.log(1 + mp.exp(-s * (m + eps)))
        l0 = mp.log(1 + mp.exp(-s * m))
        lm = mp.log(1 + mp.exp(-s * (m - eps)))
        g_fd = float((lp - lm) / (2 * eps))
        h_fd = float((lp - 2 * l0 + lm) / (eps * eps))
        g_rel = abs(g[i] - g_fd) / max(abs(g_fd), 1e-300)
        h_rel = abs(h[i] - h_fd) / max(abs(h_fd), 1e-300)
        worst = max(worst, g_rel, h_rel)
        assert g_rel < 1e-6 and h_rel < 1e-6
    announce(4, f"g = p-y and h = p(1-p) match finite differences "
                f"(worst rel err {worst:.2e} over 1000 points)")


def test_criterion_5_monotone_boosting():
    rng = np.random.default_rng(505)
    for dataset in range(20):
        X = rng.normal(size=(200, 17))
        w = rng.normal(size=17)
        y = ((X @ w + rng.normal(size=200)) > 0).astype(np.int64)
        if y.min() == y.max():
            y[0] = 1 - y[0]
        model = train(X, y, TrainConfig(num_rounds=20, max_depth=3,
                                        learning_rate=0.3, gamma=0.0))
        losses = model.train_loss
        assert all(b <= a for a, b in zip(losses, losses[1:])), f"dataset {dataset}"
    announce(5, "per-round log-loss non-increasing on 20 random 200x17 datasets")


def test_criterion_6_end_to_end_synthetic_reproduction(tmp_path):
    reference = json.loads((FIXTURES / "runall_reference.json").read_text())
    out = tmp_path / "runall"
    start = time.perf_counter()
    assert cli_main(["--out-dir", str(out), "--seed", "42", "run-all"]) == 0
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0, f"run-all took {elapsed:.1f}s"

    table = (out / "table3.txt").read_text().strip().splitlines()
    assert len(table) == 5  # header + four Table 3-format rows
    assert table[0].split() == ["Model", "Accuracy", "Precision", "Recall", "F1"]

    for tag in ("EN", "FB", "POS", "NEG"):
        name = f"DIS+{tag}"
        metrics = json.loads((out / name / "metrics.json").read_text())
        summary = json.loads((out / name / "summary.json").read_text())
        top3 = [entry["feature"] for entry in summary["ranking"][:3]]
        assert metrics["accuracy"] >= 0.65, name
        assert metrics["accuracy"] == reference[name]["accuracy"], name
        assert top3 == reference[name]["top3"], name
    announce(6, f"run-all reproduced the reference accuracies and top-3 features "
                f"({elapsed:.1f}s)")


def test_criterion_7_metrics_oracle():
    pos = [3.0, 2.5, 2.0, 1.5, 1.2, 1.0, 0.8, 0.5, 0.2, -0.3, -0.7, -1.2]
    neg = [-2.5, -2.0, -1.5, -1.0, -0.5, 0.4, 0.9, -0.2]
    report = evaluate_margins(np.array(pos + neg), np.array([1] * 12 + [0] * 8))
    assert (report.tp, report.fp, report.tn, report.fn) == (9, 2, 6, 3)
    assert report.accuracy == 0.75
    assert abs(report.per_class[1].f1 - float(Fraction(18, 23))) < 1e-15
    assert abs(report.weighted.f1 - float(Fraction(294, 391))) < 1e-15
    assert abs(report.auc - float(Fraction(5, 6))) < 1e-15

    rng = np.random.default_rng(707)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(4, 201))
        y = rng.integers(0, 2, size=n)
        if y.min() == y.max():
            y[0] = 1 - y[0]
        margins = np.round(rng.normal(size=n), 1)  # coarse grid forces ties
        auc = evaluate_margins(margins, y).auc
        pos_m, neg_m = margins[y == 1], margins[y == 0]
        wins = (pos_m[:, None] > neg_m[None, :]).sum()
        ties = (pos_m[:, None] == neg_m[None, :]).sum()
        oracle = (wins + 0.5 * ties) / (len(pos_m) * len(neg_m))
        worst = max(worst, abs(auc - oracle))
        assert abs(auc - oracle) < 1e-12
    announce(7, f"hand fixture exact; AUC matches Mann-Whitney oracle "
                f"(worst gap {worst:.2e})")


def test_criterion_8_determinism(tmp_path):
    outs = [tmp_path / "run1", tmp_path / "run2"]
    for out in outs:
        assert cli_main(["--out-dir", str(out), "--seed", "42", "run-all",
                         "--rounds", "40"]) == 0
    files1 = sorted(p.relative_to(outs[0]) for p in outs[0].rglob("*") if p.is_file())
    files2 = sorted(p.relative_to(outs[1]) for p in outs[1].rglob("*") if p.is_file())
    assert files1 == files2 and files1
    for rel in files1:
        assert (outs[0] / rel).read_bytes() == (outs[1] / rel).read_bytes(), rel
    announce(8, f"two same-seed runs byte-identical across {len(files1)} files")


def test_criterion_9_feature_extraction_goldens():
    lexicons = default_lexicons()

    vec = extract_features(tokenize("I can win.", lexicons), lexicons)
    assert vec[F["num_verbs"]] == 2
    assert vec[F["num_modal_verbs"]] == 1
    assert vec[F["num_sentences"]] == 1
    assert vec[F["av_sent_len"]] == 3
    assert vec[F["I"]] == 1
    assert vec[F["Sixltr"]] == 0

    text = (FIXTURES / "para1.txt").read_text(encoding="utf-8")
    expected = json.loads((FIXTURES / "para1_counts.json").read_text())
    vec = extract_features(tokenize(text, lexicons), lexicons)
    for name, value in expected["features"].items():
        assert vec[F[name]] == value, name

    count_features = [
        "num_verbs", "num_modifiers", "num_modal_verbs", "num_chars",
        "num_punctuation", "num_sentences", "num_adjectives", "num_adverbs",
        "num_nouns", "num_function_words", "I", "Analytic", "Sixltr", "insight",
    ]
    pool = (
        "the government may win because we believe the amazing analysis today "
        "I think this hotel staff could return a wonderful refund so click now"
    ).split()
    rng = random.Random(909)
    for _ in range(100):
        sentences = []
        for _ in range(rng.randint(1, 6)):
            words = [rng.choice(pool) for _ in range(rng.randint(1, 12))]
            sentences.append(" ".join(words) + rng.choice(".!?"))
        text = " ".join(sentences) + " "
        single = extract_features(tokenize(text, lexicons), lexicons)
        double = extract_features(tokenize(text + text, lexicons), lexicons)
        for name in count_features:
            assert double[F[name]] == 2 * single[F[name]], name
        assert double[F["av_sent_len"]] == single[F["av_sent_len"]]
        assert double[F["av_word_len"]] == single[F["av_word_len"]]
        assert double[F["lexical_diversity"]] <= single[F["lexical_diversity"]]
    announce(9, "hand-computed goldens exact; doubling metamorphic holds on 100 docs")
