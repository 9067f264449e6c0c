#!/usr/bin/env python3
"""Generate a synthetic emotion tweet corpus in the ingestion file formats.

Writes WASSA-style TSV files (one per emotion) and a CrowdFlower-style CSV
with neutral rows.  Texts are built from per-class vocabulary pools with
shared fillers, mentions, links, hashtags, emoji, and emoticons, so the whole
preprocessing path gets exercised.  The neutral class borrows words from the
emotion pools, which makes it the hardest class, as observed on real data.

Deterministic in --seed.  This is a stand-in corpus for pipeline capacity
runs; accuracy numbers on it are not comparable to real-data results.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from tweemo.rng import SplitMix64

CLASS_WORDS = {
    "anger": [
        "furious", "rage", "angry", "fuming", "annoyed", "hate", "outraged",
        "irritated", "livid", "disgusted", "offended", "snapped", "bitter",
        "hostile", "resent",
    ],
    "fear": [
        "scared", "afraid", "terrified", "anxious", "panic", "nightmare",
        "horror", "worried", "dread", "frightened", "shaking", "alarmed",
        "creepy", "phobia", "terror",
    ],
    "joy": [
        "happy", "joy", "delighted", "excited", "wonderful", "amazing",
        "love", "great", "smile", "thrilled", "awesome", "blessed",
        "celebrate", "fantastic", "cheerful",
    ],
    "sadness": [
        "sad", "crying", "tears", "depressed", "miserable", "heartbroken",
        "lonely", "grief", "gloomy", "hopeless", "hurt", "sorrow",
        "mourning", "weeping", "blue",
    ],
}

NEUTRAL_WORDS = [
    "work", "today", "weather", "meeting", "coffee", "news", "schedule",
    "train", "office", "regular", "update", "monday", "report", "lunch",
    "commute", "errands", "laundry", "podcast", "email", "grocery",
]

FILLERS = [
    "the", "a", "to", "and", "of", "day", "time", "really", "just", "so",
    "very", "now", "going", "got", "this", "that", "about", "with", "for",
    "morning", "tonight", "week", "people", "thing", "still",
]

AMBIGUOUS = ["feeling", "feel", "mood", "vibes", "energy", "moment", "lately"]

DECORATIONS = ["@friend", "#mood", "http://t.co/abc123", "www.example.com/x"]
EMOJI = {"anger": "\U0001F620", "fear": "\U0001F628", "joy": "\U0001F600",
         "sadness": "\U0001F622"}
EMOTICONS = {"anger": ">:(", "fear": "D:", "joy": ":-)", "sadness": ":-("}


def _pick(rng: SplitMix64, pool: list[str]) -> str:
    return pool[rng.below(len(pool))]


def _other_class_word(rng: SplitMix64, label: str) -> str:
    others = [c for c in sorted(CLASS_WORDS) if c != label]
    return _pick(rng, CLASS_WORDS[_pick(rng, others)])


def make_text(rng: SplitMix64, label: str) -> str:
    words: list[str] = []
    n_fillers = 4 + rng.below(5)
    for _ in range(n_fillers):
        words.append(_pick(rng, FILLERS))
    if rng.below(100) < 30:
        words.append(_pick(rng, AMBIGUOUS))
    if label == "neutral":
        if rng.below(100) < 75:
            words.append(_pick(rng, NEUTRAL_WORDS))
        # Heavy vocabulary overlap with the emotion classes: neutral is the
        # confusable class, as on the real data.
        if rng.below(100) < 75:
            words.append(_pick(rng, CLASS_WORDS[_pick(rng, sorted(CLASS_WORDS))]))
        if rng.below(100) < 35:
            words.append(_pick(rng, CLASS_WORDS[_pick(rng, sorted(CLASS_WORDS))]))
    else:
        for _ in range(1 + rng.below(2)):
            words.append(_pick(rng, CLASS_WORDS[label]))
        if rng.below(100) < 35:
            words.append(_other_class_word(rng, label))
        if rng.below(100) < 35:
            words.append(_pick(rng, NEUTRAL_WORDS))
    words = [words[i] for i in _shuffled_range(rng, len(words))]
    if label != "neutral":
        roll = rng.below(100)
        if roll < 15:
            words.append(EMOJI[label])
        elif roll < 25:
            words.append(EMOTICONS[label])
    if rng.below(100) < 20:
        words.insert(0, DECORATIONS[rng.below(len(DECORATIONS))])
    return " ".join(words)


def _shuffled_range(rng: SplitMix64, n: int) -> list[int]:
    order = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        order[i], order[j] = order[j], order[i]
    return order


def write_corpus(out_dir: Path, per_class: int, seed: int) -> None:
    wassa_dir = out_dir / "wassa"
    wassa_dir.mkdir(parents=True, exist_ok=True)
    rng = SplitMix64(seed)
    next_id = 10000
    for label in sorted(CLASS_WORDS):
        path = wassa_dir / f"{label}.txt"
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for _ in range(per_class):
                text = make_text(rng, label)
                intensity = f"0.{rng.below(90) + 10:02d}"
                fh.write(f"{next_id}\t{text}\t{label}\t{intensity}\n")
                next_id += 1
    neutral_path = out_dir / "neutral.csv"
    with open(neutral_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tweet_id", "sentiment", "author", "content"])
        for _ in range(per_class):
            writer.writerow([str(next_id), "neutral", "synth", make_text(rng, "neutral")])
            next_id += 1
        # Decoy rows with other sentiment tags that must be filtered out.
        for tag in ("happiness", "worry", "love"):
            writer.writerow([str(next_id), tag, "synth", make_text(rng, "neutral")])
            next_id += 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", required=True)
    parser.add_argument("--per-class", type=int, default=1500)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args(argv)
    write_corpus(Path(args.out_dir), args.per_class, args.seed)
    print(f"synthetic corpus written under {args.out_dir}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
