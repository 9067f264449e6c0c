#!/usr/bin/env python3
"""Regenerate the committed log-probability fixture streams in tests/data/.

Two aligned 150-record streams ("svm" and "bertweet" sources) with valid
log-probability vectors over the five classes.  Both models peak on the gold
label most of the time with independent noise, so the fixtures contain
agreements, disagreements, and near-ties.  Deterministic in --seed.
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from tweemo.corpus import LABELS
from tweemo.ensemble import LogProbRecord, write_stream


def synth_stream(rng: np.random.Generator, ids, golds, source: str, sharpness: float):
    records = []
    for rec_id, gold in zip(ids, golds):
        logits = rng.normal(0.0, 1.0, size=len(LABELS))
        logits[LABELS.index(gold)] += sharpness * rng.uniform(0.3, 1.6)
        log_probs = logits - (np.max(logits) + np.log(np.exp(logits - np.max(logits)).sum()))
        records.append(
            LogProbRecord(
                id=rec_id, gold=gold, source=source,
                labels=tuple(LABELS), logprobs=log_probs,
            )
        )
    return records


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=90125)
    parser.add_argument("--count", type=int, default=150)
    parser.add_argument(
        "--out-dir", default=str(Path(__file__).resolve().parent.parent / "tests" / "data")
    )
    args = parser.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    ids = [f"fx{i:04d}" for i in range(args.count)]
    golds = [LABELS[int(rng.integers(len(LABELS)))] for _ in ids]
    out_dir = Path(args.out_dir)
    write_stream(synth_stream(rng, ids, golds, "svm", 2.0), out_dir / "logprobs_svm.jsonl")
    write_stream(
        synth_stream(rng, ids, golds, "bertweet", 2.6), out_dir / "logprobs_bert.jsonl"
    )
    print(f"wrote 2 x {args.count} fixture records under {out_dir}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
