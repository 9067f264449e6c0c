#!/usr/bin/env python3
"""End-to-end experiment driver: prepare, train all classifiers, evaluate,
export SVM log-probabilities, optionally fuse with a transformer stream, and
run the no-neutral ablation.

Two data sources:
  --wassa-dir/--neutral-csv   the real datasets (full-scale run)
  --synthetic                 a generated stand-in corpus (pipeline capacity
                              run; accuracies are not comparable to real-data
                              results and are labelled as synthetic)

Artifacts land under --out-dir: split files, model files, JSON reports,
log-prob streams, and summary.json.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from tweemo import cli
from tweemo.jsonio import dump_canonical


def run_cli(argv: list[str]) -> str:
    buffer = io.StringIO()
    with contextlib.redirect_stdout(buffer):
        rc = cli.main(argv)
    if rc != 0:
        raise SystemExit(f"command failed ({rc}): tweemo {' '.join(argv)}")
    return buffer.getvalue()


def evaluate_json(model_path: Path, data_dir: Path, split: str) -> dict:
    out = run_cli([
        "evaluate", "--model-path", str(model_path), "--data-dir", str(data_dir),
        "--split", split, "--format", "json",
    ])
    return json.loads(out)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--synthetic", action="store_true")
    source.add_argument("--wassa-dir")
    parser.add_argument("--neutral-csv")
    parser.add_argument("--out-dir", required=True)
    parser.add_argument("--per-class", type=int, default=1500)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--threads", type=int, default=2)
    parser.add_argument(
        "--bert-stream", action="append", default=[],
        metavar="SPLIT=PATH",
        help="transformer log-prob stream to fuse, e.g. test=bert_test.jsonl",
    )
    args = parser.parse_args(argv)
    if not args.synthetic and not args.neutral_csv:
        parser.error("--neutral-csv is required with --wassa-dir")

    t0 = time.monotonic()
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if args.synthetic:
        from synth_corpus import write_corpus

        raw = out_dir / "raw"
        write_corpus(raw, per_class=args.per_class, seed=args.seed)
        wassa_dir, neutral_csv = raw / "wassa", raw / "neutral.csv"
        print(f"[pipeline] synthetic corpus ({args.per_class}/class)", file=sys.stderr)
    else:
        wassa_dir, neutral_csv = Path(args.wassa_dir), Path(args.neutral_csv)

    summary: dict = {
        "data_source": "synthetic" if args.synthetic else "reconstructed",
        "per_class": args.per_class,
        "seed": args.seed,
        "accuracy": {},
    }

    splits = out_dir / "splits"
    run_cli([
        "prepare", "--wassa-dir", str(wassa_dir), "--neutral-csv", str(neutral_csv),
        "--out-dir", str(splits), "--per-class", str(args.per_class),
        "--seed", str(args.seed),
    ])

    for kind in ("svm", "mnb", "gnb"):
        model_path = out_dir / f"{kind}.json"
        step = time.monotonic()
        run_cli([
            "train", "--model", kind, "--data-dir", str(splits),
            "--out", str(model_path), "--seed", str(args.seed),
            "--threads", str(args.threads),
        ])
        for split in ("validation", "test"):
            report = evaluate_json(model_path, splits, split)
            (out_dir / f"report_{kind}_{split}.json").write_text(
                json.dumps(report, sort_keys=True) + "\n"
            )
            summary["accuracy"][f"{kind}_{split}"] = report["accuracy"]
        print(
            f"[pipeline] {kind}: val {summary['accuracy'][kind + '_validation']:.4f} "
            f"test {summary['accuracy'][kind + '_test']:.4f} "
            f"({time.monotonic() - step:.0f}s)",
            file=sys.stderr,
        )

    for split in ("validation", "test"):
        run_cli([
            "export-logprobs", "--model-path", str(out_dir / "svm.json"),
            "--data-dir", str(splits), "--split", split,
            "--out", str(out_dir / f"svm_logprobs_{split}.jsonl"),
        ])

    bert_streams = dict(spec.split("=", 1) for spec in args.bert_stream)
    for split, path in bert_streams.items():
        fused = run_cli([
            "ensemble", str(out_dir / f"svm_logprobs_{split}.jsonl"), path,
            "--format", "json",
        ])
        report = json.loads(fused)
        (out_dir / f"report_ensemble_{split}.json").write_text(
            json.dumps(report, sort_keys=True) + "\n"
        )
        summary["accuracy"][f"ensemble_{split}"] = report["accuracy"]
        print(f"[pipeline] ensemble {split}: {report['accuracy']:.4f}", file=sys.stderr)

    # No-neutral ablation.
    splits4 = out_dir / "splits_no_neutral"
    run_cli([
        "prepare", "--wassa-dir", str(wassa_dir), "--neutral-csv", str(neutral_csv),
        "--out-dir", str(splits4), "--per-class", str(args.per_class),
        "--seed", str(args.seed), "--drop-neutral",
    ])
    model4 = out_dir / "svm_no_neutral.json"
    run_cli([
        "train", "--model", "svm", "--data-dir", str(splits4),
        "--out", str(model4), "--seed", str(args.seed), "--threads", str(args.threads),
    ])
    report4 = evaluate_json(model4, splits4, "test")
    (out_dir / "report_svm_no_neutral_test.json").write_text(
        json.dumps(report4, sort_keys=True) + "\n"
    )
    summary["accuracy"]["svm_no_neutral_test"] = report4["accuracy"]
    print(f"[pipeline] svm without neutral: test {report4['accuracy']:.4f}", file=sys.stderr)

    summary["elapsed_seconds"] = round(time.monotonic() - t0, 1)
    dump_canonical(summary, out_dir / "summary.json")
    print(f"[pipeline] done in {summary['elapsed_seconds']}s -> {out_dir}/summary.json",
          file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
