"""Labeled text corpora and hybrid train/test splits.

Corpora are JSONL files, one ``{"text": ..., "label": 0|1}`` object per line.
Label 0 marks deceptive documents, label 1 truthful ones. Hybrid splits mix a
disinformation corpus with a partner deception corpus: half of the training
set (rounded down) comes from the disinformation source, the rest from the
partner, and the test set is disinformation only, disjoint from training.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError

SOURCES = ("DIS", "EN", "FB", "POS", "NEG", "SYN")


@dataclass(frozen=True)
class LabeledDocument:
    text: str
    label: int  # 0 deceptive, 1 truthful
    source: str

    def __post_init__(self):
        if self.label not in (0, 1):
            raise DataError(f"label must be 0 or 1, got {self.label!r}")
        if not self.text.strip():
            raise DataError("document text is empty")


@dataclass(frozen=True)
class Corpus:
    name: str
    documents: tuple[LabeledDocument, ...]

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def labels(self) -> np.ndarray:
        return np.array([d.label for d in self.documents], dtype=np.int64)


@dataclass(frozen=True)
class SplitRecipe:
    dis_source: str
    partner_source: str
    train_size: int
    test_size: int


@dataclass(frozen=True)
class HybridSplit:
    train: Corpus
    test: Corpus
    seed: int
    recipe: SplitRecipe


def load_corpus(path: str | Path, source: str) -> Corpus:
    """Read a JSONL corpus file, preserving line order.

    Each line must be a JSON object with exactly the keys ``text`` (string)
    and ``label`` (integer 0 or 1). The source tag comes from the argument,
    not the file.
    """
    path = Path(path)
    if source not in SOURCES:
        raise DataError(f"unknown source tag {source!r}, expected one of {SOURCES}")
    if not path.is_file():
        raise DataError(f"corpus file not found: {path}")

    documents = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                raise DataError(f"{path}:{lineno}: blank line in corpus file")
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(record, dict) or set(record) != {"text", "label"}:
                raise DataError(
                    f"{path}:{lineno}: expected exactly the keys 'text' and 'label'"
                )
            text, label = record["text"], record["label"]
            if not isinstance(text, str):
                raise DataError(f"{path}:{lineno}: 'text' must be a string")
            if not isinstance(label, int) or isinstance(label, bool) or label not in (0, 1):
                raise DataError(f"{path}:{lineno}: 'label' must be 0 or 1, got {label!r}")
            if not text.strip():
                raise DataError(f"{path}:{lineno}: 'text' is empty")
            documents.append(LabeledDocument(text=text, label=label, source=source))
    return Corpus(name=path.stem, documents=tuple(documents))


def corpus_to_jsonl(corpus: Corpus) -> str:
    lines = [
        json.dumps({"text": d.text, "label": d.label}, ensure_ascii=False)
        for d in corpus.documents
    ]
    return "\n".join(lines) + "\n"


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus back to JSONL with the same two-key schema."""
    Path(path).write_text(corpus_to_jsonl(corpus), encoding="utf-8")


def make_hybrid_split(
    dis: Corpus,
    partner: Corpus,
    train_size: int,
    test_size: int,
    seed: int,
) -> HybridSplit:
    """Build a hybrid training set and a disinformation-only test set.

    floor(train_size / 2) training documents are sampled without replacement
    from ``dis``, the remainder from ``partner``; the test set draws
    ``test_size`` further documents from ``dis``, disjoint from the training
    picks. Sampling is a seeded index shuffle, so identical inputs and seed
    reproduce the split exactly.
    """
    if train_size <= 0 or test_size <= 0:
        raise DataError("train_size and test_size must be positive")
    if seed < 0 or seed >= 2**64:
        raise DataError("seed must be an unsigned 64-bit integer")
    n_dis_train = train_size // 2
    n_partner = train_size - n_dis_train
    if len(dis) < n_dis_train + test_size:
        raise DataError(
            f"disinformation corpus has {len(dis)} documents, "
            f"needs {n_dis_train} for training plus {test_size} for testing"
        )
    if len(partner) < n_partner:
        raise DataError(
            f"partner corpus has {len(partner)} documents, needs {n_partner}"
        )

    rng = np.random.default_rng(seed)
    dis_order = rng.permutation(len(dis))
    partner_order = rng.permutation(len(partner))

    dis_train_idx = dis_order[:n_dis_train]
    dis_test_idx = dis_order[n_dis_train : n_dis_train + test_size]
    partner_idx = partner_order[:n_partner]

    train_docs = tuple(dis.documents[i] for i in dis_train_idx) + tuple(
        partner.documents[i] for i in partner_idx
    )
    test_docs = tuple(dis.documents[i] for i in dis_test_idx)

    recipe = SplitRecipe(
        dis_source=dis.documents[0].source if dis.documents else "DIS",
        partner_source=partner.documents[0].source if partner.documents else "SYN",
        train_size=train_size,
        test_size=test_size,
    )
    return HybridSplit(
        train=Corpus(name=f"{dis.name}+{partner.name}-train", documents=train_docs),
        test=Corpus(name=f"{dis.name}-test", documents=test_docs),
        seed=seed,
        recipe=recipe,
    )
