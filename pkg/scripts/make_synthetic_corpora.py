#!/usr/bin/env python3
"""Generate the bundled synthetic stand-in corpora.

Produces five JSONL corpora under src/deceptlens/data/corpora/: a
disinformation stand-in (syn_dis, 220 documents) and four partner deception
genres (syn_en fraud emails, syn_fb scams, syn_pos / syn_neg fake reviews,
200 documents each). Texts are template-generated with a fixed seed, with
deceptive (label 0) and truthful (label 1) documents drawn from different
stylometric distributions: deceptive texts run shorter-worded, more
exclamatory, more repetitive, and lighter on modals, first-person I, and
analytic/insight vocabulary.

Run from the repo root:  python scripts/make_synthetic_corpora.py
"""

import json
import random
import sys
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parents[1] / "src" / "deceptlens" / "data" / "corpora"
SEED = 20240817

NOUNS = {
    "dis": [
        "government", "election", "leader", "country", "report", "source",
        "crisis", "policy", "scandal", "vote", "media", "party", "president",
        "law", "economy", "border", "tax", "war", "protest", "poll",
    ],
    "en": [
        "meeting", "contract", "project", "budget", "quarter", "revenue",
        "merger", "filing", "audit", "statement", "investor", "client",
        "schedule", "agreement", "transaction", "earnings", "shares",
        "division", "forecast", "account",
    ],
    "fb": [
        "money", "account", "offer", "prize", "time", "day", "news", "story",
        "link", "deal", "reward", "winner", "price", "chance", "gift", "code",
        "phone", "bank", "card", "cash",
    ],
    "review": [
        "hotel", "room", "staff", "service", "breakfast", "location", "bed",
        "bathroom", "lobby", "pool", "view", "night", "desk", "floor",
        "towel", "wifi", "parking", "restaurant", "manager", "experience",
    ],
}

VERBS = [
    "win", "send", "click", "get", "make", "take", "give", "go", "see",
    "find", "want", "need", "help", "pay", "buy", "book", "arrive", "leave",
    "work", "read", "share", "claim", "report", "confirm", "promise",
    "offer", "visit", "enjoy", "recommend", "return", "act", "call", "miss",
    "trust", "check", "reply", "demand", "reveal", "deny", "expose",
]
INSIGHT_VERBS = ["think", "know", "believe", "understand", "realize", "feel", "suppose", "reckon"]
ANALYTIC_NOUNS = [
    "analysis", "evidence", "result", "reason", "factor", "method", "process",
    "system", "research", "data", "review", "structure", "logic", "criteria",
]
ADJ_SHORT = [
    "good", "great", "bad", "big", "free", "easy", "quick", "real", "fake",
    "true", "nice", "rude", "sure", "last", "next", "new", "old", "rich",
    "poor", "busy",
]
ADJ_LONG = [
    "terrible", "amazing", "special", "urgent", "important", "horrible",
    "excellent", "perfect", "fantastic", "wonderful", "comfortable",
    "friendly", "expensive", "beautiful", "dangerous", "corrupt", "shocking",
    "exclusive", "limited", "verified", "spacious", "delicious", "helpful",
    "responsive", "disappointing", "outstanding",
]
ADVERBS = [
    "very", "really", "never", "always", "now", "today", "soon", "quickly",
    "easily", "honestly", "truly", "absolutely", "completely", "totally",
    "immediately", "finally", "barely", "deeply",
]
MODALS = ["can", "could", "may", "might", "must", "should", "will", "would"]
CONNECTIVES = ["because", "however", "therefore"]


def _cap(words):
    first = words[0]
    return [first if first == "I" else first[0].upper() + first[1:]] + words[1:]


def deceptive_sentence(rng, nouns, adjs):
    end = "!" if rng.random() < 0.45 else "."
    noun = rng.choice(nouns)
    pattern = rng.randrange(5)
    if pattern == 0:
        words = [rng.choice(VERBS), "the", rng.choice(adjs), noun, rng.choice(ADVERBS)]
    elif pattern == 1:
        words = ["the", noun, "is", rng.choice(adjs), "and", "the",
                 rng.choice(nouns), "is", rng.choice(adjs)]
    elif pattern == 2:
        words = [rng.choice(ADVERBS), rng.choice(VERBS), "this", rng.choice(adjs), noun]
    elif pattern == 3:
        words = ["you", rng.choice(VERBS), "the", noun, "now"]
    else:
        words = ["no", noun, "no", rng.choice(nouns), "just", rng.choice(adjs),
                 rng.choice(nouns)]
    if rng.random() < 0.30:
        words += [",", "so", rng.choice(VERBS), "the", rng.choice(nouns), "now"]
    sentence = " ".join(_cap(words)).replace(" ,", ",")
    return sentence + end


def truthful_sentence(rng, nouns, adjs):
    roll = rng.random()
    end = "?" if roll < 0.05 else ("!" if roll < 0.09 else ".")
    noun = rng.choice(nouns)
    pattern = rng.randrange(5)
    if pattern == 0:
        words = ["I", rng.choice(INSIGHT_VERBS), "the", noun, "was", rng.choice(adjs)]
    elif pattern == 1:
        words = ["I", rng.choice(MODALS), rng.choice(VERBS), "the", noun,
                 rng.choice(CONNECTIVES), "the", rng.choice(ANALYTIC_NOUNS),
                 "was", rng.choice(adjs)]
    elif pattern == 2:
        words = ["we", rng.choice(MODALS), rng.choice(VERBS), "that", noun, "and",
                 rng.choice(["examine", "compare", "evaluate", "verify", "assess"]),
                 "the", rng.choice(ANALYTIC_NOUNS), "carefully"]
    elif pattern == 3:
        words = ["however", "the", rng.choice(ANALYTIC_NOUNS), "did", "indicate",
                 "that", "the", noun, "was", rng.choice(adjs)]
    else:
        words = ["I", "believe", "the", noun, "deserves", "a", rng.choice(adjs),
                 "review", "because", "we", rng.choice(VERBS), "the",
                 rng.choice(ANALYTIC_NOUNS)]
    return " ".join(_cap(words)) + end


def make_document(rng, genre, label):
    # ~10% of documents are written in the opposite label's style so the
    # classes overlap and classifier metrics stay away from the ceiling
    style = label if rng.random() >= 0.10 else 1 - label
    source_nouns = NOUNS[genre]
    if style == 0:
        nouns = rng.sample(source_nouns, 6)  # narrow vocabulary: repetition
        adjs = ADJ_SHORT if rng.random() < 0.80 else ADJ_SHORT + ADJ_LONG
        n_sentences = rng.randint(4, 9)
        make = deceptive_sentence
    else:
        nouns = source_nouns
        adjs = ADJ_LONG if rng.random() < 0.50 else ADJ_SHORT + ADJ_LONG
        n_sentences = rng.randint(3, 7)
        make = truthful_sentence
    return " ".join(make(rng, nouns, adjs) for _ in range(n_sentences))


def make_corpus(rng, genre, size):
    labels = [0] * (size // 2) + [1] * (size - size // 2)
    rng.shuffle(labels)
    return [
        {"text": make_document(rng, genre, label), "label": label}
        for label in labels
    ]


def check_lexicon_coverage(corpora):
    sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
    from deceptlens.lexfeat import default_lexicons, tokenize

    lex = default_lexicons()
    missing = set()
    for records in corpora.values():
        for record in records:
            doc = tokenize(record["text"], lex)
            for sent in doc.sentences:
                for tok in sent:
                    if tok.is_word and not tok.tags:
                        missing.add(tok.surface.lower())
    if missing:
        raise SystemExit(f"untagged vocabulary: {sorted(missing)}")


def main():
    rng = random.Random(SEED)
    corpora = {
        "syn_dis.jsonl": make_corpus(rng, "dis", 220),
        "syn_en.jsonl": make_corpus(rng, "en", 200),
        "syn_fb.jsonl": make_corpus(rng, "fb", 200),
        "syn_pos.jsonl": make_corpus(rng, "review", 200),
        "syn_neg.jsonl": make_corpus(rng, "review", 200),
    }
    check_lexicon_coverage(corpora)
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for name, records in corpora.items():
        path = OUT_DIR / name
        with open(path, "w", encoding="utf-8") as fh:
            for record in records:
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")
        n0 = sum(1 for r in records if r["label"] == 0)
        print(f"{path.name}: {len(records)} documents ({n0} deceptive)")


if __name__ == "__main__":
    main()
