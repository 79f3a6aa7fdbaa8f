"""Command-line pipeline: split, featurize, train, evaluate, explain, run-all.

Every command resolves options as flags > config file > defaults, computes
all of its outputs in memory, then writes each file through a temp-file
rename, so a failing command leaves no partial output. Exit codes: 0 success,
1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import explain as explain_mod
from . import gbm
from . import lexfeat
from . import metrics as metrics_mod
from .corpus import corpus_to_jsonl, load_corpus, make_hybrid_split
from .errors import DataError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

_DATA_DIR = Path(__file__).resolve().parent / "data"
BUNDLED_CORPORA = {
    "DIS": _DATA_DIR / "corpora" / "syn_dis.jsonl",
    "EN": _DATA_DIR / "corpora" / "syn_en.jsonl",
    "FB": _DATA_DIR / "corpora" / "syn_fb.jsonl",
    "POS": _DATA_DIR / "corpora" / "syn_pos.jsonl",
    "NEG": _DATA_DIR / "corpora" / "syn_neg.jsonl",
}

CONFIG_KEYS = {
    "seed", "out-dir", "lexicon-dir", "train-size", "test-size", "rounds",
    "depth", "learning-rate", "lambda", "gamma", "min-child-weight",
    "method", "bg-cap",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _load_config(path: str) -> dict:
    cfg_path = Path(path)
    if not cfg_path.is_file():
        raise DataError(f"config file not found: {cfg_path}")
    config = {}
    for lineno, line in enumerate(cfg_path.read_text(encoding="utf-8").splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise DataError(f"{cfg_path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in body.split("=", 1))
        if key not in CONFIG_KEYS:
            raise DataError(f"{cfg_path}:{lineno}: unknown config key {key!r}")
        config[key] = value
    return config


class Settings:
    """Flag > config file > default resolution."""

    def __init__(self, args):
        self.args = args
        self.config = _load_config(args.config) if args.config else {}

    def get(self, flag_value, key, cast, default):
        if flag_value is not None:
            return flag_value
        if key in self.config:
            raw = self.config[key]
            try:
                return cast(raw)
            except (TypeError, ValueError) as exc:
                raise DataError(f"config key {key!r}: bad value {raw!r} ({exc})") from exc
        return default

    def seed(self) -> int:
        return self.get(self.args.seed, "seed", int, 42)

    def out_dir(self) -> Path:
        return Path(self.get(self.args.out_dir, "out-dir", str, "out"))

    def lexicons(self) -> lexfeat.LexiconSet:
        directory = self.get(
            self.args.lexicon_dir, "lexicon-dir", str, lexfeat.default_lexicon_dir()
        )
        return lexfeat.load_lexicons(directory)

    def train_config(self) -> gbm.TrainConfig:
        a = self.args
        return gbm.TrainConfig(
            num_rounds=self.get(getattr(a, "rounds", None), "rounds", int, 100),
            max_depth=self.get(getattr(a, "depth", None), "depth", int, 3),
            learning_rate=self.get(
                getattr(a, "learning_rate", None), "learning-rate", float, 0.3
            ),
            reg_lambda=self.get(getattr(a, "reg_lambda", None), "lambda", float, 1.0),
            gamma=self.get(getattr(a, "gamma", None), "gamma", float, 0.0),
            min_child_weight=self.get(
                getattr(a, "min_child_weight", None), "min-child-weight", float, 1.0
            ),
            seed=self.seed(),
        )

    def sizes(self):
        train_size = self.get(self.args.train, "train-size", int, 200)
        test_size = self.get(self.args.test, "test-size", int, 20)
        return train_size, test_size

    def method(self) -> str:
        method = self.get(getattr(self.args, "method", None), "method", str, "tree")
        if method not in explain_mod.METHODS:
            raise DataError(f"unknown explanation method {method!r}")
        return method

    def bg_cap(self) -> int:
        cap = self.get(getattr(self.args, "bg_cap", None), "bg-cap", int, 100)
        if cap <= 0:
            raise DataError("bg-cap must be positive")
        return cap


def _background(X: np.ndarray, cap: int) -> np.ndarray:
    if X.shape[0] <= cap:
        return X
    idx = np.unique(np.round(np.linspace(0, X.shape[0] - 1, cap)).astype(int))
    return X[idx]


def _write_all(outputs: dict) -> None:
    for path in outputs:
        path.parent.mkdir(parents=True, exist_ok=True)
    for path, text in outputs.items():
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, path)


def _loss_csv(losses) -> str:
    lines = ["round,loss"]
    lines += [f"{i + 1},{loss!r}" for i, loss in enumerate(losses)]
    return "\n".join(lines) + "\n"


# --- command handlers: return (outputs, printed lines) ---


def _split_outputs(settings, dis_path, partner_path, dis_source, partner_source, out_dir):
    dis = load_corpus(dis_path, dis_source)
    partner = load_corpus(partner_path, partner_source)
    train_size, test_size = settings.sizes()
    split = make_hybrid_split(dis, partner, train_size, test_size, settings.seed())
    outputs = {
        out_dir / "train.jsonl": corpus_to_jsonl(split.train),
        out_dir / "test.jsonl": corpus_to_jsonl(split.test),
    }
    lines = [
        f"train.jsonl: {len(split.train)} documents "
        f"({train_size // 2} {dis_source} + {train_size - train_size // 2} {partner_source})",
        f"test.jsonl: {len(split.test)} documents ({dis_source})",
    ]
    return outputs, lines


def cmd_split(args):
    settings = Settings(args)
    return _split_outputs(
        settings, args.dis, args.partner, args.dis_source, args.partner_source,
        settings.out_dir(),
    )


def cmd_featurize(args):
    settings = Settings(args)
    corpus = load_corpus(args.corpus, args.source)
    X, y = lexfeat.featurize_corpus(corpus, settings.lexicons())
    out = settings.out_dir() / args.out
    return {out: lexfeat.feature_csv_text(X, y)}, [f"{args.out}: {X.shape[0]} rows"]


def _train_outputs(settings, train_path, out_dir, model_name, loss_name):
    corpus = load_corpus(train_path, "SYN")
    X, y = lexfeat.featurize_corpus(corpus, settings.lexicons())
    model = gbm.train(X, y, settings.train_config(), lexfeat.FEATURE_NAMES)
    outputs = {
        out_dir / model_name: gbm.model_to_json(model),
        out_dir / loss_name: _loss_csv(model.train_loss),
    }
    return outputs, model


def cmd_train(args):
    settings = Settings(args)
    outputs, model = _train_outputs(
        settings, args.train_file, settings.out_dir(), args.model, args.loss
    )
    return outputs, [f"final training loss: {model.train_loss[-1]!r}"]


def _evaluate_outputs(settings, model, test_path, out_dir, name):
    corpus = load_corpus(test_path, "DIS")
    X, y = lexfeat.featurize_corpus(corpus, settings.lexicons())
    report = metrics_mod.evaluate(model, X, y)
    table = metrics_mod.report_table([(name, report)])
    outputs = {
        out_dir / "metrics.json": metrics_mod.report_to_json(report),
        out_dir / "metrics.txt": table,
        out_dir / "roc.csv": metrics_mod.roc_to_csv(report),
    }
    return outputs, report, table


def cmd_evaluate(args):
    settings = Settings(args)
    model = gbm.load_model(args.model)
    outputs, _, table = _evaluate_outputs(
        settings, model, args.test_file, settings.out_dir(), args.name
    )
    return outputs, table.rstrip("\n").splitlines()


def _explain_outputs(settings, model, instances_path, background_path, out_dir):
    lexicons = settings.lexicons()
    instances = load_corpus(instances_path, "DIS")
    X_inst, _ = lexfeat.featurize_corpus(instances, lexicons)
    bg_corpus = load_corpus(background_path, "SYN")
    X_bg, _ = lexfeat.featurize_corpus(bg_corpus, lexicons)
    background = _background(X_bg, settings.bg_cap())

    explanations = explain_mod.explain_rows(model, X_inst, background, settings.method())
    summary = explain_mod.summarize(explanations)

    outputs = {out_dir / "summary.json": explain_mod.summary_to_json(summary)}
    for i, e in enumerate(explanations):
        outputs[out_dir / f"waterfall_{i:03d}.json"] = explain_mod.waterfall_to_json(
            explain_mod.waterfall(e)
        )
    for primary in summary.top_features(2):
        for other in model.feature_names:
            if other == primary:
                continue
            report = explain_mod.interaction_report(explanations, primary, other)
            outputs[out_dir / f"interaction_{primary}_{other}.csv"] = (
                explain_mod.interaction_to_csv(report)
            )
    lines = [f"explained {len(explanations)} instances "
             f"(top features: {', '.join(summary.top_features(3))})"]
    return outputs, lines


def cmd_explain(args):
    settings = Settings(args)
    model = gbm.load_model(args.model)
    return _explain_outputs(
        settings, model, args.instances, args.background, settings.out_dir()
    )


def cmd_run_all(args):
    settings = Settings(args)
    out_dir = settings.out_dir()
    dis_path = args.dis or BUNDLED_CORPORA["DIS"]
    partner_paths = {
        "EN": args.en or BUNDLED_CORPORA["EN"],
        "FB": args.fb or BUNDLED_CORPORA["FB"],
        "POS": args.pos or BUNDLED_CORPORA["POS"],
        "NEG": args.neg or BUNDLED_CORPORA["NEG"],
    }
    lexicons = settings.lexicons()
    train_size, test_size = settings.sizes()
    dis = load_corpus(dis_path, "DIS")

    outputs = {}
    named_reports = []
    lines = []
    for tag in ("EN", "FB", "POS", "NEG"):
        model_name = f"DIS+{tag}"
        model_dir = out_dir / model_name
        partner = load_corpus(partner_paths[tag], tag)
        split = make_hybrid_split(dis, partner, train_size, test_size, settings.seed())
        outputs[model_dir / "train.jsonl"] = corpus_to_jsonl(split.train)
        outputs[model_dir / "test.jsonl"] = corpus_to_jsonl(split.test)

        X_train, y_train = lexfeat.featurize_corpus(split.train, lexicons)
        outputs[model_dir / "features.csv"] = lexfeat.feature_csv_text(X_train, y_train)
        model = gbm.train(X_train, y_train, settings.train_config(), lexfeat.FEATURE_NAMES)
        outputs[model_dir / "model.json"] = gbm.model_to_json(model)
        outputs[model_dir / "loss.csv"] = _loss_csv(model.train_loss)

        X_test, y_test = lexfeat.featurize_corpus(split.test, lexicons)
        report = metrics_mod.evaluate(model, X_test, y_test)
        outputs[model_dir / "metrics.json"] = metrics_mod.report_to_json(report)
        outputs[model_dir / "metrics.txt"] = metrics_mod.report_table([(model_name, report)])
        outputs[model_dir / "roc.csv"] = metrics_mod.roc_to_csv(report)
        named_reports.append((model_name, report))

        background = _background(X_train, settings.bg_cap())
        explanations = explain_mod.explain_rows(model, X_test, background, settings.method())
        summary = explain_mod.summarize(explanations)
        outputs[model_dir / "summary.json"] = explain_mod.summary_to_json(summary)
        for i, e in enumerate(explanations):
            outputs[model_dir / f"waterfall_{i:03d}.json"] = (
                explain_mod.waterfall_to_json(explain_mod.waterfall(e))
            )
        for primary in summary.top_features(2):
            for other in model.feature_names:
                if other == primary:
                    continue
                rep = explain_mod.interaction_report(explanations, primary, other)
                outputs[model_dir / f"interaction_{primary}_{other}.csv"] = (
                    explain_mod.interaction_to_csv(rep)
                )
        lines.append(
            f"{model_name}: accuracy {report.accuracy:.2f}, "
            f"top features {', '.join(summary.top_features(3))}"
        )

    table = metrics_mod.report_table(named_reports)
    outputs[out_dir / "table3.txt"] = table
    lines += [""] + table.rstrip("\n").splitlines()
    return outputs, lines


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="deceptlens", description=__doc__)
    parser.add_argument("--seed", type=int, default=None, help="global random seed (default 42)")
    parser.add_argument("--out-dir", default=None, help="output directory (default ./out)")
    parser.add_argument("--lexicon-dir", default=None, help="lexicon directory (default bundled)")
    parser.add_argument("--config", default=None, help="flat key=value config file")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("split", help="build a hybrid train set and disinformation test set")
    p.add_argument("--dis", required=True, help="disinformation corpus (JSONL)")
    p.add_argument("--partner", required=True, help="partner deception corpus (JSONL)")
    p.add_argument("--dis-source", default="DIS", help="source tag for --dis")
    p.add_argument("--partner-source", default="SYN", help="source tag for --partner")
    p.add_argument("--train", type=_positive_int, default=None, help="training set size (default 200)")
    p.add_argument("--test", type=_positive_int, default=None, help="test set size (default 20)")
    p.set_defaults(handler=cmd_split)

    p = sub.add_parser("featurize", help="export a corpus as a feature CSV")
    p.add_argument("--corpus", required=True, help="corpus file (JSONL)")
    p.add_argument("--source", default="SYN", help="source tag")
    p.add_argument("--out", default="features.csv", help="output file name")
    p.set_defaults(handler=cmd_featurize)

    p = sub.add_parser("train", help="train the boosted-tree classifier")
    p.add_argument("--train", dest="train_file", required=True, help="training corpus (JSONL)")
    p.add_argument("--model", default="model.json", help="model output name")
    p.add_argument("--loss", default="loss.csv", help="per-round loss output name")
    _add_train_flags(p)
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("evaluate", help="score a model on a test corpus")
    p.add_argument("--model", required=True, help="model file")
    p.add_argument("--test", dest="test_file", required=True, help="test corpus (JSONL)")
    p.add_argument("--name", default="model", help="row name in the metrics table")
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("explain", help="emit summary, waterfall, and interaction reports")
    p.add_argument("--model", required=True, help="model file")
    p.add_argument("--instances", required=True, help="instances to explain (JSONL)")
    p.add_argument("--background", required=True, help="background corpus (JSONL)")
    p.add_argument("--method", choices=("exact", "tree"), default=None,
                   help="attribution algorithm (default tree)")
    p.add_argument("--bg-cap", type=_positive_int, default=None,
                   help="background size cap (default 100)")
    p.set_defaults(handler=cmd_explain)

    p = sub.add_parser("run-all", help="reproduce the four-hybrid-model experiment")
    p.add_argument("--dis", default=None, help="disinformation corpus (default bundled)")
    p.add_argument("--en", default=None, help="fraud partner corpus (default bundled)")
    p.add_argument("--fb", default=None, help="scam partner corpus (default bundled)")
    p.add_argument("--pos", default=None, help="positive-review partner corpus (default bundled)")
    p.add_argument("--neg", default=None, help="negative-review partner corpus (default bundled)")
    p.add_argument("--train", type=_positive_int, default=None, help="training set size (default 200)")
    p.add_argument("--test", type=_positive_int, default=None, help="test set size (default 20)")
    p.add_argument("--method", choices=("exact", "tree"), default=None)
    p.add_argument("--bg-cap", type=_positive_int, default=None)
    _add_train_flags(p)
    p.set_defaults(handler=cmd_run_all)

    return parser


def _add_train_flags(p):
    p.add_argument("--rounds", type=_positive_int, default=None, help="boosting rounds (default 100)")
    p.add_argument("--depth", type=_positive_int, default=None, help="max tree depth (default 3)")
    p.add_argument("--learning-rate", type=float, default=None, help="shrinkage in (0,1] (default 0.3)")
    p.add_argument("--lambda", dest="reg_lambda", type=float, default=None,
                   help="L2 leaf regularizer (default 1.0)")
    p.add_argument("--gamma", type=float, default=None, help="split gain threshold (default 0.0)")
    p.add_argument("--min-child-weight", type=float, default=None,
                   help="minimum child hessian sum (default 1.0)")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        outputs, lines = args.handler(args)
        _write_all(outputs)
        for line in lines:
            print(line)
        return EXIT_OK
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
