#!/usr/bin/env python3
"""Regenerate the committed demo SVM model used by the single-tweet predict tests.

Trains on a small synthetic corpus (30 tweets/class) and records the model's
own prediction for a happy fixture sentence, which the test suite asserts.
"""

from __future__ import annotations

import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from synth_corpus import write_corpus

from tweemo import cli

FIXTURE_TEXT = "feeling so happy and excited today :-) wonderful amazing day"


def main() -> int:
    out = Path(__file__).resolve().parent.parent / "tests" / "data" / "demo_model.json"
    with tempfile.TemporaryDirectory() as tmp:
        tmp_path = Path(tmp)
        write_corpus(tmp_path / "raw", per_class=30, seed=777)
        rc = cli.main([
            "prepare", "--wassa-dir", str(tmp_path / "raw" / "wassa"),
            "--neutral-csv", str(tmp_path / "raw" / "neutral.csv"),
            "--out-dir", str(tmp_path / "splits"), "--per-class", "30", "--seed", "42",
        ])
        assert rc == 0, "prepare failed"
        rc = cli.main([
            "train", "--model", "svm", "--data-dir", str(tmp_path / "splits"),
            "--out", str(out), "--seed", "42",
        ])
        assert rc == 0, "train failed"
    from tweemo import modelio, preprocess, vectorize

    model = modelio.load_model(out)
    vec = vectorize.transform(model.tfidf, preprocess.preprocess_classical(FIXTURE_TEXT))
    label = model.predict(vec)
    print(f"demo model written to {out}")
    print(f"prediction for the happy fixture: {label}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
