import json
from pathlib import Path

import pytest

from bert_bridge.model import StubEncoder, StubTokenizer

CLASSES = ("anger", "fear", "joy", "neutral", "sadness")

WORD_POOLS = {
    "anger": ["furious", "rage", "mad", "hate"],
    "fear": ["scared", "terrified", "panic", "afraid"],
    "joy": ["happy", "wonderful", "excited", "smile"],
    "neutral": ["work", "today", "coffee", "schedule"],
    "sadness": ["sad", "tears", "lonely", "crying"],
}


def _make_split(path: Path, per_class: int, offset: int = 0) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        n = 0
        for label in CLASSES:
            pool = WORD_POOLS[label]
            for i in range(per_class):
                words = [pool[(i + j) % len(pool)] for j in range(3)]
                text = f"@user so {' '.join(words)} right now http://t.co/x #life"
                record = {"id": f"{label}-{offset + i}", "text": text, "label": label}
                fh.write(json.dumps(record) + "\n")
                n += 1


@pytest.fixture(scope="session")
def tiny_splits(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("splits")
    _make_split(root / "train.jsonl", per_class=8)
    _make_split(root / "validation.jsonl", per_class=3, offset=100)
    _make_split(root / "test.jsonl", per_class=3, offset=200)
    return root


@pytest.fixture()
def stub_encoder_factory():
    return lambda: StubEncoder(seed=1234)


@pytest.fixture()
def stub_tokenizer():
    return StubTokenizer()
