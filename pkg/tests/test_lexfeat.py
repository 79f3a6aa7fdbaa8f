import json
import random

import numpy as np
import pytest

from deceptlens.cli import BUNDLED_CORPORA
from deceptlens.corpus import Corpus, LabeledDocument, load_corpus
from deceptlens.errors import DataError
from deceptlens.lexfeat import (
    FEATURE_NAMES,
    extract_features,
    feature_csv_text,
    featurize_corpus,
    load_lexicons,
    read_feature_csv,
    tokenize,
)
from helpers import FIXTURES

F = {name: i for i, name in enumerate(FEATURE_NAMES)}


def features_of(text, lexicons):
    return extract_features(tokenize(text, lexicons), lexicons)


def test_i_can_win_golden(lexicons):
    doc = tokenize("I can win.", lexicons)
    assert len(doc.sentences) == 1
    words = [t.surface for t in doc.sentences[0] if t.is_word]
    puncts = [t.surface for t in doc.sentences[0] if not t.is_word]
    assert words == ["I", "can", "win"]
    assert puncts == ["."]
    can = doc.sentences[0][1]
    assert {"verb", "modal"} <= set(can.tags)

    vec = features_of("I can win.", lexicons)
    # hand-computed against the bundled lexicons
    assert vec[F["num_verbs"]] == 2
    assert vec[F["num_modal_verbs"]] == 1
    assert vec[F["num_sentences"]] == 1
    assert vec[F["av_sent_len"]] == 3
    assert vec[F["I"]] == 1
    assert vec[F["Sixltr"]] == 0
    assert vec[F["av_word_len"]] == (1 + 3 + 3) / 3
    assert vec[F["lexical_diversity"]] == 1.0
    assert vec[F["num_chars"]] == 10
    assert vec[F["num_punctuation"]] == 1
    assert vec[F["num_function_words"]] == 2
    assert vec[F["num_nouns"]] == 0
    assert vec[F["num_modifiers"]] == 0
    assert vec[F["Analytic"]] == 0
    assert vec[F["insight"]] == 0


def test_go_go_splits_into_two_sentences(lexicons):
    doc = tokenize("Go! Go!", lexicons)
    assert len(doc.sentences) == 2
    words = doc.words()
    assert len(words) == 2
    assert len(doc.punctuation()) == 2


def test_para1_hand_tokenization(lexicons):
    text = (FIXTURES / "para1.txt").read_text(encoding="utf-8")
    expected = json.loads((FIXTURES / "para1_counts.json").read_text())
    doc = tokenize(text, lexicons)
    got = [
        {
            "words": [t.surface for t in s if t.is_word],
            "punctuation": [t.surface for t in s if not t.is_word],
        }
        for s in doc.sentences
    ]
    assert got == expected["sentences"]
    vec = extract_features(doc, lexicons)
    for name, value in expected["features"].items():
        assert vec[F[name]] == value, name


def test_single_word_document_diversity(lexicons):
    vec = features_of("a", lexicons)
    assert vec[F["lexical_diversity"]] == 1.0
    assert vec[F["num_sentences"]] == 1
    assert vec[F["num_chars"]] == 1


COUNT_FEATURES = [
    "num_verbs", "num_modifiers", "num_modal_verbs", "num_chars",
    "num_punctuation", "num_sentences", "num_adjectives", "num_adverbs",
    "num_nouns", "num_function_words", "I", "Analytic", "Sixltr", "insight",
]

WORD_POOL = (
    "the government may win because we believe the amazing analysis today "
    "I think this hotel staff could return a wonderful refund so click now"
).split()


def random_document(rng):
    sentences = []
    for _ in range(rng.randint(1, 6)):
        words = [rng.choice(WORD_POOL) for _ in range(rng.randint(1, 12))]
        sentences.append(" ".join(words) + rng.choice(".!?"))
    # trailing separator keeps T+T concatenation sentence-aligned
    return " ".join(sentences) + " "


def test_doubling_metamorphic_property(lexicons):
    rng = random.Random(4242)
    for _ in range(100):
        text = random_document(rng)
        single = features_of(text, lexicons)
        double = features_of(text + text, lexicons)
        for name in COUNT_FEATURES:
            assert double[F[name]] == 2 * single[F[name]], name
        assert double[F["av_sent_len"]] == single[F["av_sent_len"]]
        assert double[F["av_word_len"]] == single[F["av_word_len"]]
        assert double[F["lexical_diversity"]] <= single[F["lexical_diversity"]]


def test_sentence_permutation_invariance(lexicons):
    rng = random.Random(77)
    for _ in range(50):
        sentences = [
            " ".join(rng.choice(WORD_POOL) for _ in range(rng.randint(1, 10)))
            + rng.choice(".!?")
            for _ in range(rng.randint(2, 6))
        ]
        base = features_of(" ".join(sentences), lexicons)
        rng.shuffle(sentences)
        permuted = features_of(" ".join(sentences), lexicons)
        assert np.array_equal(base, permuted)


def test_appending_sentence_never_decreases_counts(lexicons):
    rng = random.Random(123)
    for _ in range(50):
        text = random_document(rng).rstrip() + " "
        extended = text + "However the evidence did indicate a wonderful result."
        before = features_of(text, lexicons)
        after = features_of(extended, lexicons)
        for name in COUNT_FEATURES:
            assert after[F[name]] >= before[F[name]], name


def test_extraction_is_deterministic(lexicons):
    text = random_document(random.Random(5))
    a = features_of(text, lexicons)
    b = features_of(text, lexicons)
    assert a.tobytes() == b.tobytes()


def test_structural_invariants_on_bundled_corpus(lexicons):
    corpus = load_corpus(BUNDLED_CORPORA["DIS"], "DIS")
    X, y = featurize_corpus(corpus, lexicons)
    assert X.shape == (220, 17)
    assert y.shape == (220,)
    n_words = X[:, F["av_sent_len"]] * X[:, F["num_sentences"]]
    assert (X[:, F["num_modal_verbs"]] <= X[:, F["num_verbs"]]).all()
    assert np.array_equal(
        X[:, F["num_modifiers"]], X[:, F["num_adjectives"]] + X[:, F["num_adverbs"]]
    )
    assert (X[:, F["Sixltr"]] <= n_words + 1e-9).all()
    assert (X[:, F["I"]] <= n_words + 1e-9).all()
    assert ((X[:, F["lexical_diversity"]] > 0) & (X[:, F["lexical_diversity"]] <= 1)).all()
    assert (X[:, F["av_word_len"]] > 0).all()


def test_modal_implies_verb_tag(lexicons):
    for word, tags in lexicons.pos_lexicon.items():
        if "modal" in tags:
            assert "verb" in tags, word


def test_column_means_match_independent_reference(lexicons):
    corpus = load_corpus(BUNDLED_CORPORA["DIS"], "DIS")
    X, _ = featurize_corpus(corpus, lexicons)
    reference = json.loads((FIXTURES / "syn_dis_feature_means.json").read_text())
    assert reference["n_docs"] == X.shape[0]
    means = X.mean(axis=0)
    for i, name in enumerate(FEATURE_NAMES):
        assert means[i] == pytest.approx(reference["column_means"][name], abs=1e-12)


def test_featurize_maps_rows_to_documents_in_order(lexicons):
    texts = ["I can win.", "Go! Go!", "The hotel staff was friendly."]
    corpus = Corpus(
        name="three",
        documents=tuple(
            LabeledDocument(t, i % 2, "SYN") for i, t in enumerate(texts)
        ),
    )
    X, y = featurize_corpus(corpus, lexicons)
    assert X.shape == (3, 17)
    assert y.tolist() == [0, 1, 0]
    for i, text in enumerate(texts):
        assert np.array_equal(X[i], features_of(text, lexicons))


def test_featurize_propagates_error_with_index(lexicons):
    corpus = Corpus(
        name="bad",
        documents=(
            LabeledDocument("Fine text here.", 1, "SYN"),
            LabeledDocument("...", 0, "SYN"),  # punctuation only: no words
        ),
    )
    with pytest.raises(DataError, match="document 1"):
        featurize_corpus(corpus, lexicons)


def test_featurize_empty_corpus_errors(lexicons):
    with pytest.raises(DataError, match="empty"):
        featurize_corpus(Corpus(name="none", documents=()), lexicons)


def test_tokenize_rejects_empty_text(lexicons):
    with pytest.raises(DataError):
        tokenize("   ", lexicons)


def test_word_and_punctuation_tokens_are_disjoint(lexicons):
    doc = tokenize("Don't over-pay - it's a scam!", lexicons)
    words = [t.surface for t in doc.words()]
    assert "don't" in [w.lower() for w in words]
    assert "over-pay" in words
    puncts = [t.surface for t in doc.punctuation()]
    assert "-" in puncts and "!" in puncts
    for sentence in doc.sentences:
        for token in sentence:
            has_alnum = any(ch.isalnum() for ch in token.surface)
            assert token.is_word == has_alnum


def test_feature_csv_round_trip(tmp_path, lexicons):
    corpus = load_corpus(BUNDLED_CORPORA["FB"], "FB")
    X, y = featurize_corpus(corpus, lexicons)
    text = feature_csv_text(X, y)
    assert text.splitlines()[0] == ",".join(FEATURE_NAMES) + ",label"
    path = tmp_path / "features.csv"
    path.write_text(text, encoding="utf-8")
    X2, y2 = read_feature_csv(path)
    assert np.array_equal(X, X2)
    assert np.array_equal(y, y2)


def test_load_lexicons_validates(tmp_path):
    with pytest.raises(DataError, match="not found"):
        load_lexicons(tmp_path / "absent")
