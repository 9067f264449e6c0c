"""Command-line entry point: prepare, train, evaluate, export-logprobs, ensemble, predict.

Every command is deterministic given its flags and seed; logs go to stderr,
data to stdout or files.  Exit codes: 0 success, 1 runtime failure, 2 usage.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bayes, corpus, ensemble, evaluation, modelio, preprocess, svm, vectorize
from .jsonio import dump_canonical

SPLIT_NAMES = ("train", "validation", "test")


class CliError(Exception):
    """Runtime failure mapped to exit code 1."""


def _read_config_file(path: str) -> dict[str, str]:
    """Flat key=value config file; '#' starts a comment line."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise CliError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        values[key.strip()] = value.strip()
    return values


def _apply_config_defaults(args: argparse.Namespace, parser_defaults: dict) -> None:
    """Config file values fill in wherever the flag was left at its default."""
    if not getattr(args, "config", None):
        return
    overrides = _read_config_file(args.config)
    for key, raw in overrides.items():
        attr = key.replace("-", "_")
        if attr not in parser_defaults or not hasattr(args, attr):
            raise CliError(f"config key {key!r} does not match any flag of this command")
        if getattr(args, attr) != parser_defaults[attr]:
            continue  # explicit flag wins
        default = parser_defaults[attr]
        if isinstance(default, bool):
            value = raw.lower() in ("1", "true", "yes", "on")
        elif isinstance(default, int) and not isinstance(default, bool):
            value = int(raw)
        elif isinstance(default, float):
            value = float(raw)
        else:
            value = raw
        setattr(args, attr, value)


def _load_split(data_dir: Path, split: str) -> list[corpus.LabeledTweet]:
    path = data_dir / f"{split}.jsonl"
    if not path.is_file():
        raise CliError(f"split file not found: {path}")
    return corpus.read_jsonl(path)


def _vectorize_tweets(model, tweets):
    docs = [preprocess.preprocess_classical(t.text) for t in tweets]
    return vectorize.transform_many(model.tfidf, docs)


# --- commands ----------------------------------------------------------------

def cmd_prepare(args) -> int:
    tweets = corpus.load_wassa(args.wassa_dir)
    tweets += corpus.load_neutral(
        args.neutral_csv,
        text_column=args.text_column,
        sentiment_column=args.sentiment_column,
        neutral_tag=args.neutral_tag,
        id_column=args.id_column,
    )
    split = corpus.balance_and_split(
        tweets, per_class=args.per_class, seed=args.seed, drop_neutral=args.drop_neutral
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest: dict = {
        "seed": args.seed,
        "per_class": args.per_class,
        "drop_neutral": args.drop_neutral,
        "classes": [l for l in corpus.LABELS if not (args.drop_neutral and l == "neutral")],
        "partitions": {},
    }
    for name, tweets_part in split.partitions():
        path = out_dir / f"{name}.jsonl"
        corpus.write_jsonl(tweets_part, path)
        counts: dict[str, int] = {}
        for t in tweets_part:
            counts[t.label] = counts.get(t.label, 0) + 1
        manifest["partitions"][name] = {
            "path": path.name,
            "total": len(tweets_part),
            "per_class": counts,
            "sha256": corpus.file_sha256(path),
        }
    dump_canonical(manifest, out_dir / "manifest.json")
    print(f"wrote {out_dir}/{{train,validation,test}}.jsonl and manifest.json", file=sys.stderr)
    return 0


def cmd_train(args) -> int:
    data_dir = Path(args.data_dir)
    train_tweets = _load_split(data_dir, "train")
    class_names = sorted({t.label for t in train_tweets})
    docs = [preprocess.preprocess_classical(t.text) for t in train_tweets]
    tfidf = vectorize.fit(docs)
    vectors = vectorize.transform_many(tfidf, docs)
    labels = [class_names.index(t.label) for t in train_tweets]
    if args.model == "svm":
        config = svm.SvmConfig(
            C=args.c, gamma=("auto" if args.gamma == "auto" else float(args.gamma)),
            tol=args.tol, max_passes=args.max_passes, cache_mb=args.cache_mb,
        )
        model = svm.fit_svm(
            vectors, labels, class_names, config,
            seed=args.seed, tfidf=tfidf, threads=args.threads,
        )
    elif args.model == "mnb":
        model = bayes.fit_mnb(vectors, labels, class_names, alpha=args.alpha, tfidf=tfidf)
    elif args.model == "gnb":
        model = bayes.fit_gnb(vectors, labels, class_names, smoothing=args.smoothing, tfidf=tfidf)
    else:  # pragma: no cover - argparse restricts choices
        raise CliError(f"unknown model {args.model!r}")
    modelio.save_model(model, args.out)
    print(f"trained {args.model} on {len(train_tweets)} tweets -> {args.out}", file=sys.stderr)
    return 0


def _score_model_on_split(model, tweets) -> evaluation.EvalReport:
    vectors = _vectorize_tweets(model, tweets)
    log_probs = model.log_proba_matrix(vectors)
    pairs = [
        (t.label, model.classes[int(row.argmax())]) for t, row in zip(tweets, log_probs)
    ]
    return evaluation.score(pairs, model.classes)


def cmd_evaluate(args) -> int:
    model = modelio.load_model(args.model_path)
    tweets = _load_split(Path(args.data_dir), args.split)
    report = _score_model_on_split(model, tweets)
    sys.stdout.write(evaluation.render(report, args.format))
    return 0


def cmd_export_logprobs(args) -> int:
    model = modelio.load_model(args.model_path)
    tweets = _load_split(Path(args.data_dir), args.split)
    vectors = _vectorize_tweets(model, tweets)
    log_probs = model.log_proba_matrix(vectors)
    source = args.source or f"{model.to_dict()['kind']}"
    records = [
        ensemble.LogProbRecord(
            id=t.id, gold=t.label, source=source,
            labels=tuple(model.classes), logprobs=row,
        )
        for t, row in zip(tweets, log_probs)
    ]
    ensemble.write_stream(records, args.out)
    print(f"wrote {len(records)} log-prob records -> {args.out}", file=sys.stderr)
    return 0


def cmd_ensemble(args) -> int:
    streams = [ensemble.validate_stream(path) for path in args.inputs]
    fused = ensemble.fuse(streams)
    missing_gold = [f.id for f in fused if f.gold is None]
    if missing_gold:
        raise CliError(
            f"cannot score: {len(missing_gold)} records lack gold labels "
            f"(first: {missing_gold[0]!r})"
        )
    pairs = [(f.gold, f.predicted) for f in fused]
    report = evaluation.score(pairs, fused[0].labels)
    sys.stdout.write(evaluation.render(report, args.format))
    return 0


def cmd_predict(args) -> int:
    model = modelio.load_model(args.model_path)
    doc = preprocess.preprocess_classical(args.text)
    vector = vectorize.transform(model.tfidf, doc)
    log_probs = model.predict_log_proba(vector)
    label = model.classes[int(log_probs.argmax())]
    print(label)
    for cls, lp in zip(model.classes, log_probs):
        print(f"{cls}\t{lp:.6f}")
    return 0


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tweemo", description="Tweet emotion classification toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--seed", type=int, default=42, help="deterministic seed")
        p.add_argument("--threads", type=int, default=1, help="parallel workers")
        p.add_argument("--config", default=None, help="key=value config file")

    p = sub.add_parser("prepare", help="balance classes and write split files")
    add_common(p)
    p.add_argument("--wassa-dir", required=True)
    p.add_argument("--neutral-csv", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--per-class", type=int, default=1500)
    p.add_argument("--drop-neutral", action="store_true")
    p.add_argument("--text-column", default="content")
    p.add_argument("--sentiment-column", default="sentiment")
    p.add_argument("--neutral-tag", default="neutral")
    p.add_argument("--id-column", default="tweet_id")
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("train", help="fit a classifier on the train split")
    add_common(p)
    p.add_argument("--model", required=True, choices=("svm", "mnb", "gnb"))
    p.add_argument("--data-dir", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--c", type=float, default=1.0, help="SVM regularization")
    p.add_argument("--gamma", default="auto", help="RBF gamma or 'auto'")
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--max-passes", type=int, default=1000)
    p.add_argument("--cache-mb", type=int, default=512)
    p.add_argument("--alpha", type=float, default=1.0, help="MNB additive smoothing")
    p.add_argument("--smoothing", type=float, default=0.5, help="GNB variance floor factor")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="score a model on a split")
    add_common(p)
    p.add_argument("--model-path", required=True)
    p.add_argument("--data-dir", required=True)
    p.add_argument("--split", default="test", choices=("validation", "test"))
    p.add_argument("--format", default="text", choices=("text", "json", "csv"))
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("export-logprobs", help="write the log-probability JSONL stream")
    add_common(p)
    p.add_argument("--model-path", required=True)
    p.add_argument("--data-dir", required=True)
    p.add_argument("--split", default="test", choices=("validation", "test"))
    p.add_argument("--out", required=True)
    p.add_argument("--source", default=None, help="source tag (defaults to model kind)")
    p.set_defaults(func=cmd_export_logprobs)

    p = sub.add_parser("ensemble", help="fuse log-prob streams and score them")
    add_common(p)
    p.add_argument("inputs", nargs="+", help="log-prob JSONL files")
    p.add_argument("--format", default="text", choices=("text", "json", "csv"))
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("predict", help="classify a single tweet")
    add_common(p)
    p.add_argument("--model-path", required=True)
    p.add_argument("--text", required=True)
    p.set_defaults(func=cmd_predict)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    defaults = {
        action.dest: action.default
        for sub_action in parser._subparsers._group_actions
        for sub_parser in sub_action.choices.values()
        for action in sub_parser._actions
        if action.dest not in ("help",)
    }
    try:
        _apply_config_defaults(args, defaults)
        return args.func(args)
    except (
        CliError,
        corpus.CorpusError,
        vectorize.VectorizerError,
        svm.SvmTrainingError,
        bayes.BayesError,
        ensemble.StreamError,
        evaluation.EvalError,
        modelio.ModelIoError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
