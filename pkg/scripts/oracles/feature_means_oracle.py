#!/usr/bin/env python3
"""Independent reference computation of feature-column means.

Re-implements the documented feature definitions from scratch (no imports
from the package) and writes the per-column means over the bundled syn_dis
corpus to tests/fixtures/syn_dis_feature_means.json. The test suite compares
the package's featurizer against this fixture.

Run from the repo root:  python scripts/oracles/feature_means_oracle.py
"""

import json
import re
import string
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2]
LEX_DIR = ROOT / "src" / "deceptlens" / "data" / "lexicons"
CORPUS = ROOT / "src" / "deceptlens" / "data" / "corpora" / "syn_dis.jsonl"
OUT = ROOT / "tests" / "fixtures" / "syn_dis_feature_means.json"

FEATURE_NAMES = [
    "num_verbs", "num_modifiers", "av_sent_len", "av_word_len",
    "num_modal_verbs", "lexical_diversity", "num_chars", "num_punctuation",
    "num_sentences", "num_adjectives", "num_adverbs", "num_nouns",
    "num_function_words", "I", "Analytic", "Sixltr", "insight",
]

WORD = re.compile(r"[A-Za-z0-9]+(?:['’-][A-Za-z0-9]+)*")
PUNCT = set(string.punctuation) | set("“”‘’—–…¡¿«»")


def read_list(name):
    words = set()
    for line in (LEX_DIR / name).read_text().splitlines():
        entry = line.split("#")[0].strip()
        if entry:
            words.add(entry)
    return words


def read_pos():
    table = {}
    for line in (LEX_DIR / "pos_lexicon.tsv").read_text().splitlines():
        body = line.split("#")[0].rstrip()
        if not body.strip():
            continue
        word, tags = body.split("\t")
        table.setdefault(word, set()).update(tags.split(","))
    return table


def read_suffixes():
    rules = []
    for line in (LEX_DIR / "suffix_rules.tsv").read_text().splitlines():
        body = line.split("#")[0].rstrip()
        if body.strip():
            suffix, tag = body.split("\t")
            rules.append((suffix, tag))
    return rules


def features(text, pos, suffixes, analytic, insight):
    # sentence spans: split after . ! ? when followed by whitespace
    spans = [s for s in re.split(r"(?<=[.!?])\s+", text) if s.strip()]
    # re-join spans that do not end a sentence is unnecessary: the split
    # keeps trailing fragments as their own span, matching the definition
    n_sentences = len(spans)

    words = []
    n_punct = 0
    for span in spans:
        words.extend(WORD.findall(span))
        shredded = WORD.sub(" ", span)
        n_punct += sum(1 for ch in shredded if ch in PUNCT)

    n_words = len(words)
    lowers = [w.lower() for w in words]

    def tags_of(word):
        t = pos.get(word)
        if t is not None:
            return t
        for suffix, tag in suffixes:
            if len(word) > len(suffix) and word.endswith(suffix):
                return {tag}
        return set()

    counts = {t: 0 for t in ("verb", "modal", "noun", "adjective", "adverb", "function")}
    for lw in lowers:
        for tag in tags_of(lw):
            if tag in counts:
                counts[tag] += 1

    return {
        "num_verbs": counts["verb"],
        "num_modifiers": counts["adjective"] + counts["adverb"],
        "av_sent_len": n_words / n_sentences,
        "av_word_len": sum(len(w) for w in words) / n_words,
        "num_modal_verbs": counts["modal"],
        "lexical_diversity": len(set(lowers)) / n_words,
        "num_chars": len(text),
        "num_punctuation": n_punct,
        "num_sentences": n_sentences,
        "num_adjectives": counts["adjective"],
        "num_adverbs": counts["adverb"],
        "num_nouns": counts["noun"],
        "num_function_words": counts["function"],
        "I": sum(1 for w in words if w in ("I", "i")),
        "Analytic": sum(1 for lw in lowers if lw in analytic),
        "Sixltr": sum(1 for w in words if len(w) > 6),
        "insight": sum(1 for lw in lowers if lw in insight),
    }


def main():
    pos = read_pos()
    modal = read_list("modal_verbs.txt")
    function = read_list("function_words.txt")
    analytic = read_list("analytic_words.txt")
    insight = read_list("insight_words.txt")
    suffixes = read_suffixes()
    for w in modal:
        pos.setdefault(w, set()).update({"verb", "modal"})
    for w in function:
        pos.setdefault(w, set()).add("function")
    for w, t in pos.items():
        if "modal" in t:
            t.add("verb")

    totals = {name: 0.0 for name in FEATURE_NAMES}
    n_docs = 0
    for line in CORPUS.read_text(encoding="utf-8").splitlines():
        record = json.loads(line)
        row = features(record["text"], pos, suffixes, analytic, insight)
        for name in FEATURE_NAMES:
            totals[name] += row[name]
        n_docs += 1

    means = {name: totals[name] / n_docs for name in FEATURE_NAMES}
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps({"n_docs": n_docs, "column_means": means}, indent=2) + "\n")
    print(f"wrote {OUT} over {n_docs} documents")
    for name in FEATURE_NAMES:
        print(f"  {name:20s} {means[name]:.6f}")


if __name__ == "__main__":
    main()
