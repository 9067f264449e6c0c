import json

import pytest
from hypothesis import given, settings, strategies as st

from tweemo import corpus
from tweemo.corpus import (
    CorpusError,
    LabeledTweet,
    balance_and_split,
    load_neutral,
    load_wassa,
    read_jsonl,
    split_sizes,
    write_jsonl,
)


def make_tweets(per_class: int, labels=corpus.LABELS) -> list[LabeledTweet]:
    return [
        LabeledTweet(id=f"{label}-{i}", text=f"text {label} {i}", label=label)
        for label in labels
        for i in range(per_class)
    ]


class TestLoadWassa:
    def test_basic_row(self, tmp_path):
        (tmp_path / "joy.txt").write_text(
            "10000\tJust got a promotion!\tjoy\t0.80\n", encoding="utf-8"
        )
        tweets = load_wassa(tmp_path)
        assert tweets == [LabeledTweet(id="10000", text="Just got a promotion!", label="joy")]

    def test_empty_file(self, tmp_path):
        (tmp_path / "anger.txt").write_text("", encoding="utf-8")
        assert load_wassa(tmp_path) == []

    def test_malformed_row_names_file_and_line(self, tmp_path):
        (tmp_path / "fear.txt").write_text(
            "1\tok tweet\tfear\t0.5\n2\tbad row\tfear\n", encoding="utf-8"
        )
        with pytest.raises(CorpusError, match=r"fear\.txt:2"):
            load_wassa(tmp_path)

    def test_unknown_emotion_rejected(self, tmp_path):
        (tmp_path / "x.txt").write_text("1\thello\tsurprise\t0.5\n", encoding="utf-8")
        with pytest.raises(CorpusError, match="surprise"):
            load_wassa(tmp_path)

    def test_header_autodetected(self, tmp_path):
        (tmp_path / "joy.txt").write_text(
            "id\ttweet\temotion\tscore\n7\they\tjoy\t0.1\n", encoding="utf-8"
        )
        tweets = load_wassa(tmp_path)
        assert [t.id for t in tweets] == ["7"]

    def test_intensity_discarded(self, tmp_path):
        (tmp_path / "joy.txt").write_text("5\thello\tjoy\tNONE\n", encoding="utf-8")
        (tweet,) = load_wassa(tmp_path)
        assert not hasattr(tweet, "intensity")


class TestLoadNeutral:
    def _write(self, tmp_path, body):
        path = tmp_path / "neutral.csv"
        path.write_text(body, encoding="utf-8")
        return path

    def test_filter_and_relabel(self, tmp_path):
        path = self._write(
            tmp_path,
            "tweet_id,sentiment,author,content\n"
            "1,neutral,a,at work\n"
            "2,happiness,b,yay\n",
        )
        tweets = load_neutral(path)
        assert len(tweets) == 1
        assert tweets[0].label == "neutral"
        assert tweets[0].text == "at work"

    def test_quoted_commas_preserved(self, tmp_path):
        path = self._write(
            tmp_path,
            'tweet_id,sentiment,author,content\n1,neutral,a,"on the bus, waiting"\n',
        )
        (tweet,) = load_neutral(path)
        assert tweet.text == "on the bus, waiting"

    def test_missing_column_lists_headers(self, tmp_path):
        path = self._write(tmp_path, "tweet_id,feeling,text\n1,neutral,hi\n")
        with pytest.raises(CorpusError, match="feeling"):
            load_neutral(path)

    def test_missing_id_column_synthesizes_ids(self, tmp_path):
        path = self._write(tmp_path, "sentiment,content\nneutral,hi\nneutral,yo\n")
        tweets = load_neutral(path)
        assert len({t.id for t in tweets}) == 2

    def test_configurable_tag(self, tmp_path):
        path = self._write(tmp_path, "tweet_id,sentiment,content\n1,calm,hi\n")
        assert load_neutral(path, neutral_tag="calm")[0].label == "neutral"


class TestBalanceAndSplit:
    def test_full_scale_split_sizes(self):
        split = balance_and_split(make_tweets(1500), per_class=1500, seed=42)
        assert (len(split.train), len(split.validation), len(split.test)) == (6000, 750, 750)

    def test_drop_neutral_sizes(self):
        split = balance_and_split(
            make_tweets(1500), per_class=1500, seed=42, drop_neutral=True
        )
        assert (len(split.train), len(split.validation), len(split.test)) == (4800, 600, 600)
        labels = {t.label for t in split.train + split.validation + split.test}
        assert "neutral" not in labels and len(labels) == 4

    def test_short_class_raises(self):
        tweets = make_tweets(10)
        tweets = [t for t in tweets if not (t.label == "fear" and t.id.endswith("-9"))]
        with pytest.raises(CorpusError, match="fear"):
            balance_and_split(tweets, per_class=10, seed=0)

    def test_small_per_class_remainder_goes_to_train(self):
        assert split_sizes(10) == (8, 1, 1)
        assert split_sizes(7) == (7, 0, 0)
        assert split_sizes(15) == (13, 1, 1)

    def test_dedupe_identical_text_label_pairs(self):
        tweets = make_tweets(20)
        clones = [
            LabeledTweet(id=f"clone-{i}", text="text anger 0", label="anger")
            for i in range(5)
        ]
        split = balance_and_split(tweets + clones, per_class=20, seed=1)
        texts = [t.text for t in split.train + split.validation + split.test
                 if t.label == "anger"]
        assert sum(1 for x in texts if x == "text anger 0") == 1

    def test_duplicate_ids_rejected(self):
        tweets = make_tweets(5)
        with pytest.raises(CorpusError, match="duplicate"):
            balance_and_split(tweets + [tweets[0]], per_class=5, seed=0)

    @given(seed=st.integers(min_value=0, max_value=2**64 - 1),
           per_class=st.integers(min_value=5, max_value=40))
    @settings(max_examples=25, deadline=None)
    def test_split_properties(self, seed, per_class):
        tweets = make_tweets(40)
        first = balance_and_split(tweets, per_class=per_class, seed=seed)
        second = balance_and_split(tweets, per_class=per_class, seed=seed)
        parts_a = [sorted(t.id for t in part) for _, part in first.partitions()]
        parts_b = [sorted(t.id for t in part) for _, part in second.partitions()]
        assert parts_a == parts_b  # determinism
        ids = [t.id for _, part in first.partitions() for t in part]
        assert len(ids) == len(set(ids))  # disjointness
        for _, part in first.partitions():
            counts = {}
            for t in part:
                counts[t.label] = counts.get(t.label, 0) + 1
            assert len(set(counts.values())) <= 1  # class balance

    def test_different_seed_changes_selection(self):
        tweets = make_tweets(50)
        a = balance_and_split(tweets, per_class=20, seed=1)
        b = balance_and_split(tweets, per_class=20, seed=2)
        assert sorted(t.id for t in a.train) != sorted(t.id for t in b.train)


class TestJsonl:
    def test_round_trip_bit_exact(self, tmp_path):
        tweets = [
            LabeledTweet(id="1", text='tricky "quotes" and émoji \U0001F600', label="joy"),
            LabeledTweet(id="2", text="plain", label="anger"),
        ]
        path = tmp_path / "part.jsonl"
        write_jsonl(tweets, path)
        loaded = read_jsonl(path)
        assert loaded == tweets
        second = tmp_path / "again.jsonl"
        write_jsonl(loaded, second)
        assert path.read_bytes() == second.read_bytes()

    def test_schema_is_flat_json_object(self, tmp_path):
        path = tmp_path / "part.jsonl"
        write_jsonl([LabeledTweet(id="9", text="hi", label="fear")], path)
        obj = json.loads(path.read_text().splitlines()[0])
        assert obj == {"id": "9", "text": "hi", "label": "fear"}

    def test_bad_record_reports_line(self, tmp_path):
        path = tmp_path / "part.jsonl"
        path.write_text('{"id": "1", "text": "x", "label": "joy"}\nnot json\n')
        with pytest.raises(CorpusError, match=":2"):
            read_jsonl(path)
