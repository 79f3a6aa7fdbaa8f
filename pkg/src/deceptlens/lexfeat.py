"""Stylometric feature extraction for deception detection.

Turns raw text into a 17-dimensional vector of computational-linguistic and
psycholinguistic measurements: verb/noun/modifier counts, sentence and word
length averages, type/token lexical diversity, punctuation and character
totals, first-person-singular usage, six-letter-word count, and counts
against analytic and insight wordlists.

The tokenizer, sentence splitter, and part-of-speech assignment are fully
deterministic: sentences split on terminal punctuation, words are regex runs,
and tagging is a lexicon lookup with ordered suffix fallbacks. No statistical
tagger is involved, so identical text always yields an identical vector.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Corpus
from .errors import DataError

FEATURE_NAMES = (
    "num_verbs",
    "num_modifiers",
    "av_sent_len",
    "av_word_len",
    "num_modal_verbs",
    "lexical_diversity",
    "num_chars",
    "num_punctuation",
    "num_sentences",
    "num_adjectives",
    "num_adverbs",
    "num_nouns",
    "num_function_words",
    "I",
    "Analytic",
    "Sixltr",
    "insight",
)

NUM_FEATURES = len(FEATURE_NAMES)

TAGS = frozenset(
    {"verb", "modal", "noun", "adjective", "adverb", "function", "pronoun_i"}
)

# Word: runs of letters/digits, with apostrophes/hyphens allowed only between
# such runs ("don't", "state-of-the-art"); a bare "-" or "'" is punctuation.
_WORD_RE = re.compile(r"[^\W_]+(?:['’-][^\W_]+)*")
_PUNCT_CHARS = frozenset(string.punctuation) | frozenset("“”‘’—–…¡¿«»")
_TOKEN_RE = re.compile(
    _WORD_RE.pattern + "|[" + re.escape("".join(sorted(_PUNCT_CHARS))) + "]"
)
# Sentence boundary: terminal punctuation followed by whitespace or end.
_SENT_BOUNDARY_RE = re.compile(r"[.!?](?=\s|$)")


@dataclass(frozen=True)
class Token:
    surface: str
    is_word: bool
    tags: frozenset[str]

    @property
    def length(self) -> int:
        return len(self.surface)


@dataclass(frozen=True)
class TokenizedDocument:
    text: str
    sentences: tuple[tuple[Token, ...], ...]

    def words(self):
        return [t for s in self.sentences for t in s if t.is_word]

    def punctuation(self):
        return [t for s in self.sentences for t in s if not t.is_word]


@dataclass(frozen=True)
class LexiconSet:
    """Wordlists driving tagging and the psycholinguistic counts.

    All entries are lowercase. ``pos_lexicon`` maps a word to its tag set;
    ``suffix_rules`` is an ordered fallback list applied to unknown words,
    first match wins. Modal verbs always carry the verb tag as well.
    """

    modal_verbs: frozenset[str]
    function_words: frozenset[str]
    analytic_words: frozenset[str]
    insight_words: frozenset[str]
    pos_lexicon: dict[str, frozenset[str]]
    suffix_rules: tuple[tuple[str, str], ...]

    def tag(self, word: str) -> frozenset[str]:
        lower = word.lower()
        tags = self.pos_lexicon.get(lower)
        if tags is not None:
            return tags
        for suffix, tag in self.suffix_rules:
            if len(lower) > len(suffix) and lower.endswith(suffix):
                return frozenset({tag, "verb"} if tag == "modal" else {tag})
        return frozenset()


def _read_wordlist(path: Path) -> frozenset[str]:
    entries = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        entry = line.split("#", 1)[0].strip()
        if entry:
            entries.add(entry.lower())
    if not entries:
        raise DataError(f"lexicon file {path} has no entries")
    return frozenset(entries)


def load_lexicons(directory: str | Path) -> LexiconSet:
    """Load a lexicon directory.

    Expects ``modal_verbs.txt``, ``function_words.txt``, ``analytic_words.txt``,
    ``insight_words.txt`` (one lowercase word per line, ``#`` comments),
    ``pos_lexicon.tsv`` (``word<TAB>tag[,tag...]``) and ``suffix_rules.tsv``
    (``suffix<TAB>tag``, order-significant).
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise DataError(f"lexicon directory not found: {directory}")

    modal = _read_wordlist(directory / "modal_verbs.txt")
    function = _read_wordlist(directory / "function_words.txt")
    analytic = _read_wordlist(directory / "analytic_words.txt")
    insight = _read_wordlist(directory / "insight_words.txt")

    pos: dict[str, set[str]] = {}
    pos_path = directory / "pos_lexicon.tsv"
    for lineno, line in enumerate(pos_path.read_text(encoding="utf-8").splitlines(), 1):
        body = line.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        parts = body.split("\t")
        if len(parts) != 2:
            raise DataError(f"{pos_path}:{lineno}: expected 'word<TAB>tags'")
        word, tag_field = parts[0].strip().lower(), parts[1].strip()
        tags = {t.strip() for t in tag_field.split(",") if t.strip()}
        unknown = tags - TAGS
        if unknown:
            raise DataError(f"{pos_path}:{lineno}: unknown tags {sorted(unknown)}")
        pos.setdefault(word, set()).update(tags)

    suffix_rules = []
    suffix_path = directory / "suffix_rules.tsv"
    for lineno, line in enumerate(suffix_path.read_text(encoding="utf-8").splitlines(), 1):
        body = line.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        parts = body.split("\t")
        if len(parts) != 2 or parts[1].strip() not in TAGS:
            raise DataError(f"{suffix_path}:{lineno}: expected 'suffix<TAB>tag'")
        suffix_rules.append((parts[0].strip().lower(), parts[1].strip()))

    for word in modal:
        pos.setdefault(word, set()).update({"verb", "modal"})
    for word in function:
        pos.setdefault(word, set()).add("function")
    for word, tags in pos.items():
        if "modal" in tags:
            tags.add("verb")

    return LexiconSet(
        modal_verbs=modal,
        function_words=function,
        analytic_words=analytic,
        insight_words=insight,
        pos_lexicon={w: frozenset(t) for w, t in sorted(pos.items())},
        suffix_rules=tuple(suffix_rules),
    )


def default_lexicon_dir() -> Path:
    return Path(__file__).resolve().parent / "data" / "lexicons"


def default_lexicons() -> LexiconSet:
    return load_lexicons(default_lexicon_dir())


def _sentence_spans(text: str):
    spans = []
    start = 0
    for match in _SENT_BOUNDARY_RE.finditer(text):
        end = match.end()
        spans.append(text[start:end])
        start = end
    if start < len(text):
        spans.append(text[start:])
    return spans


def tokenize(text: str, lexicons: LexiconSet) -> TokenizedDocument:
    """Split text into sentences of word and punctuation tokens.

    Sentences end at ``.``, ``!`` or ``?`` followed by whitespace or the end
    of the text. Punctuation tokens are single characters; any character
    outside the word pattern and the punctuation class is skipped.
    """
    if not text or not text.strip():
        raise DataError("cannot tokenize empty text")

    sentences = []
    for span in _sentence_spans(text):
        tokens = []
        for match in _TOKEN_RE.finditer(span):
            surface = match.group()
            if len(surface) == 1 and surface in _PUNCT_CHARS:
                tokens.append(Token(surface=surface, is_word=False, tags=frozenset()))
            else:
                tokens.append(
                    Token(surface=surface, is_word=True, tags=lexicons.tag(surface))
                )
        if tokens:
            sentences.append(tuple(tokens))
    if not sentences:
        raise DataError("text contains no tokens")
    return TokenizedDocument(text=text, sentences=tuple(sentences))


def extract_features(doc: TokenizedDocument, lexicons: LexiconSet) -> np.ndarray:
    """Compute the 17 canonical features for one tokenized document.

    Counts are document totals; ``av_sent_len`` is words per sentence,
    ``av_word_len`` the mean word character length, ``lexical_diversity`` the
    distinct-lowercase-form to total-word ratio, and ``num_chars`` the raw
    character count of the text including whitespace. ``I`` counts the exact
    token "I" plus standalone lowercase "i".
    """
    words = doc.words()
    if not doc.sentences or not words:
        raise DataError("document has no words to extract features from")

    n_words = len(words)
    n_sentences = len(doc.sentences)
    tag_counts = {tag: 0 for tag in TAGS}
    for w in words:
        for tag in w.tags:
            tag_counts[tag] += 1

    num_adjectives = tag_counts["adjective"]
    num_adverbs = tag_counts["adverb"]
    lowered = [w.surface.lower() for w in words]

    values = {
        "num_verbs": tag_counts["verb"],
        "num_modifiers": num_adjectives + num_adverbs,
        "av_sent_len": n_words / n_sentences,
        "av_word_len": sum(w.length for w in words) / n_words,
        "num_modal_verbs": tag_counts["modal"],
        "lexical_diversity": len(set(lowered)) / n_words,
        "num_chars": len(doc.text),
        "num_punctuation": len(doc.punctuation()),
        "num_sentences": n_sentences,
        "num_adjectives": num_adjectives,
        "num_adverbs": num_adverbs,
        "num_nouns": tag_counts["noun"],
        "num_function_words": tag_counts["function"],
        "I": sum(1 for w in words if w.surface in ("I", "i")),
        "Analytic": sum(1 for lw in lowered if lw in lexicons.analytic_words),
        "Sixltr": sum(1 for w in words if w.length > 6),
        "insight": sum(1 for lw in lowered if lw in lexicons.insight_words),
    }
    return np.array([values[name] for name in FEATURE_NAMES], dtype=np.float64)


def featurize_corpus(corpus: Corpus, lexicons: LexiconSet):
    """Featurize every document, returning (X, y) with row order preserved."""
    if len(corpus.documents) == 0:
        raise DataError(f"corpus {corpus.name!r} is empty")
    rows = []
    for i, doc in enumerate(corpus.documents):
        try:
            rows.append(extract_features(tokenize(doc.text, lexicons), lexicons))
        except DataError as exc:
            raise DataError(f"document {i} of corpus {corpus.name!r}: {exc}") from exc
    X = np.vstack(rows)
    y = corpus.labels()
    return X, y


def feature_csv_text(X: np.ndarray, y: np.ndarray) -> str:
    if X.shape[0] != y.shape[0]:
        raise DataError("feature matrix and label vector lengths differ")
    lines = [",".join(FEATURE_NAMES) + ",label"]
    for row, label in zip(X, y):
        lines.append(",".join(repr(float(v)) for v in row) + f",{int(label)}")
    return "\n".join(lines) + "\n"


def write_feature_csv(X: np.ndarray, y: np.ndarray, path: str | Path) -> None:
    """Export a feature matrix as CSV with the canonical header plus label."""
    Path(path).write_text(feature_csv_text(X, y), encoding="utf-8")


def read_feature_csv(path: str | Path):
    """Read a feature CSV produced by write_feature_csv."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"feature file not found: {path}")
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != ",".join(FEATURE_NAMES) + ",label":
        raise DataError(f"{path}: unexpected or missing feature CSV header")
    X_rows, labels = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != NUM_FEATURES + 1:
            raise DataError(f"{path}:{lineno}: expected {NUM_FEATURES + 1} columns")
        try:
            X_rows.append([float(v) for v in parts[:-1]])
            labels.append(int(parts[-1]))
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from exc
    if not X_rows:
        raise DataError(f"{path}: no data rows")
    return np.array(X_rows, dtype=np.float64), np.array(labels, dtype=np.int64)
