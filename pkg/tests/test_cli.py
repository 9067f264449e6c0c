import json
import subprocess
import sys
from pathlib import Path

import pytest

from tweemo import cli, evaluation, modelio, preprocess, vectorize
from tweemo.corpus import read_jsonl
from tweemo.ensemble import validate_stream
from tweemo.jsonio import load

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="module")
def splits_dir(tmp_path_factory, synth_inputs):
    wassa_dir, neutral_csv = synth_inputs
    out = tmp_path_factory.mktemp("splits")
    rc = cli.main([
        "prepare", "--wassa-dir", str(wassa_dir), "--neutral-csv", str(neutral_csv),
        "--out-dir", str(out), "--per-class", "60", "--seed", "42",
    ])
    assert rc == 0
    return out


@pytest.fixture(scope="module")
def svm_model_path(tmp_path_factory, splits_dir):
    out = tmp_path_factory.mktemp("models") / "svm.json"
    rc = cli.main([
        "train", "--model", "svm", "--data-dir", str(splits_dir),
        "--out", str(out), "--seed", "42",
    ])
    assert rc == 0
    return out


class TestPrepare:
    def test_manifest_counts_and_checksums(self, splits_dir):
        manifest = load(splits_dir / "manifest.json")
        assert manifest["per_class"] == 60
        assert manifest["classes"] == ["anger", "fear", "joy", "neutral", "sadness"]
        assert manifest["partitions"]["train"]["total"] == 240
        assert manifest["partitions"]["validation"]["total"] == 30
        assert manifest["partitions"]["test"]["total"] == 30
        for name in ("train", "validation", "test"):
            entry = manifest["partitions"][name]
            assert set(entry["per_class"].values()) == {entry["total"] // 5}
            assert len(entry["sha256"]) == 64

    def test_drop_neutral_manifest(self, tmp_path, synth_inputs):
        wassa_dir, neutral_csv = synth_inputs
        out = tmp_path / "splits4"
        rc = cli.main([
            "prepare", "--wassa-dir", str(wassa_dir), "--neutral-csv", str(neutral_csv),
            "--out-dir", str(out), "--per-class", "40", "--seed", "7", "--drop-neutral",
        ])
        assert rc == 0
        manifest = load(out / "manifest.json")
        assert manifest["classes"] == ["anger", "fear", "joy", "sadness"]
        labels = {t.label for t in read_jsonl(out / "train.jsonl")}
        assert "neutral" not in labels

    def test_missing_input_dir_exits_nonzero(self, tmp_path, capsys):
        rc = cli.main([
            "prepare", "--wassa-dir", str(tmp_path / "nope"),
            "--neutral-csv", str(tmp_path / "nope.csv"),
            "--out-dir", str(tmp_path / "out"),
        ])
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_byte_identical_across_runs(self, tmp_path, synth_inputs):
        wassa_dir, neutral_csv = synth_inputs
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            rc = cli.main([
                "prepare", "--wassa-dir", str(wassa_dir), "--neutral-csv", str(neutral_csv),
                "--out-dir", str(out), "--per-class", "25", "--seed", "5",
            ])
            assert rc == 0
            outs.append(out)
        for fname in ("train.jsonl", "validation.jsonl", "test.jsonl", "manifest.json"):
            assert (outs[0] / fname).read_bytes() == (outs[1] / fname).read_bytes()


class TestTrain:
    def test_svm_config_persisted(self, tmp_path, splits_dir):
        out = tmp_path / "svm_c2.json"
        rc = cli.main([
            "train", "--model", "svm", "--data-dir", str(splits_dir),
            "--out", str(out), "--c", "2.0", "--seed", "1",
        ])
        assert rc == 0
        obj = load(out)
        assert obj["kind"] == "svm"
        assert obj["config"]["C"] == 2.0
        assert obj["seed"] == 1

    def test_mnb_alpha_persisted(self, tmp_path, splits_dir):
        out = tmp_path / "mnb.json"
        rc = cli.main([
            "train", "--model", "mnb", "--data-dir", str(splits_dir),
            "--out", str(out), "--alpha", "1.0",
        ])
        assert rc == 0
        obj = load(out)
        assert obj["kind"] == "mnb" and obj["alpha"] == 1.0

    def test_gnb_smoothing_persisted(self, tmp_path, splits_dir):
        out = tmp_path / "gnb.json"
        rc = cli.main([
            "train", "--model", "gnb", "--data-dir", str(splits_dir),
            "--out", str(out), "--smoothing", "0.5",
        ])
        assert rc == 0
        assert load(out)["smoothing"] == 0.5

    def test_unknown_model_is_usage_error(self, splits_dir, tmp_path):
        with pytest.raises(SystemExit) as excinfo:
            cli.main([
                "train", "--model", "rainbow", "--data-dir", str(splits_dir),
                "--out", str(tmp_path / "x.json"),
            ])
        assert excinfo.value.code == 2


class TestEvaluate:
    def test_deterministic_report(self, svm_model_path, splits_dir, capsys):
        argv = [
            "evaluate", "--model-path", str(svm_model_path),
            "--data-dir", str(splits_dir), "--split", "test",
        ]
        assert cli.main(argv) == 0
        first = capsys.readouterr().out
        assert cli.main(argv) == 0
        second = capsys.readouterr().out
        assert first == second
        assert first.startswith("accuracy:")

    def test_json_format_schema(self, svm_model_path, splits_dir, capsys):
        rc = cli.main([
            "evaluate", "--model-path", str(svm_model_path),
            "--data-dir", str(splits_dir), "--split", "validation", "--format", "json",
        ])
        assert rc == 0
        obj = json.loads(capsys.readouterr().out)
        assert set(obj) == {
            "version", "n", "accuracy", "labels", "confusion",
            "confusion_row_normalized", "per_class",
        }
        assert obj["n"] == 30

    def test_report_matches_direct_scoring(self, svm_model_path, splits_dir, capsys):
        rc = cli.main([
            "evaluate", "--model-path", str(svm_model_path),
            "--data-dir", str(splits_dir), "--split", "test", "--format", "json",
        ])
        assert rc == 0
        reported = json.loads(capsys.readouterr().out)
        model = modelio.load_model(svm_model_path)
        tweets = read_jsonl(splits_dir / "test.jsonl")
        vectors = [
            vectorize.transform(model.tfidf, preprocess.preprocess_classical(t.text))
            for t in tweets
        ]
        pairs = [
            (t.label, model.classes[int(row.argmax())])
            for t, row in zip(tweets, model.log_proba_matrix(vectors))
        ]
        direct = evaluation.report_to_dict(evaluation.score(pairs, model.classes))
        assert reported == direct

    def test_missing_split_file_fails(self, svm_model_path, tmp_path, capsys):
        rc = cli.main([
            "evaluate", "--model-path", str(svm_model_path),
            "--data-dir", str(tmp_path), "--split", "test",
        ])
        assert rc == 1
        assert "not found" in capsys.readouterr().err


class TestExportLogprobs:
    def test_export_validates_and_matches_split(self, svm_model_path, splits_dir, tmp_path):
        out = tmp_path / "svm_logprobs.jsonl"
        rc = cli.main([
            "export-logprobs", "--model-path", str(svm_model_path),
            "--data-dir", str(splits_dir), "--split", "test", "--out", str(out),
        ])
        assert rc == 0
        records = validate_stream(out)
        tweets = read_jsonl(splits_dir / "test.jsonl")
        assert len(records) == len(tweets)
        assert [r.id for r in records] == [t.id for t in tweets]
        assert all(r.source == "svm" for r in records)

    def test_exported_argmax_joins_with_evaluate_predictions(
        self, svm_model_path, splits_dir, tmp_path
    ):
        out = tmp_path / "lp.jsonl"
        assert cli.main([
            "export-logprobs", "--model-path", str(svm_model_path),
            "--data-dir", str(splits_dir), "--split", "test", "--out", str(out),
        ]) == 0
        records = validate_stream(out)
        model = modelio.load_model(svm_model_path)
        tweets = {t.id: t for t in read_jsonl(splits_dir / "test.jsonl")}
        for record in records:
            tweet = tweets[record.id]
            vec = vectorize.transform(
                model.tfidf, preprocess.preprocess_classical(tweet.text)
            )
            assert record.labels[int(record.logprobs.argmax())] == model.predict(vec)


class TestEnsembleCommand:
    def test_fixture_fusion_accuracy_matches_brute_force(self, capsys):
        rc = cli.main([
            "ensemble", str(DATA / "logprobs_svm.jsonl"), str(DATA / "logprobs_bert.jsonl"),
            "--format", "json",
        ])
        assert rc == 0
        reported = json.loads(capsys.readouterr().out)
        svm_stream = validate_stream(DATA / "logprobs_svm.jsonl")
        bert_stream = validate_stream(DATA / "logprobs_bert.jsonl")
        svm_by_id = {r.id: r for r in svm_stream}
        hits = 0
        for rec in bert_stream:
            sums = [
                float(a) + float(b)
                for a, b in zip(rec.logprobs, svm_by_id[rec.id].logprobs)
            ]
            best = max(range(5), key=lambda k: (sums[k], -k))
            hits += rec.labels[best] == rec.gold
        assert reported["accuracy"] == hits / len(bert_stream)

    def test_single_stream_equals_model_evaluate(
        self, svm_model_path, splits_dir, tmp_path, capsys
    ):
        out = tmp_path / "only.jsonl"
        assert cli.main([
            "export-logprobs", "--model-path", str(svm_model_path),
            "--data-dir", str(splits_dir), "--split", "test", "--out", str(out),
        ]) == 0
        assert cli.main(["ensemble", str(out), "--format", "json"]) == 0
        via_ensemble = capsys.readouterr().out
        assert cli.main([
            "evaluate", "--model-path", str(svm_model_path),
            "--data-dir", str(splits_dir), "--split", "test", "--format", "json",
        ]) == 0
        via_evaluate = capsys.readouterr().out
        assert via_ensemble == via_evaluate

    def test_disjoint_ids_error(self, tmp_path, capsys):
        a = tmp_path / "a.jsonl"
        b = tmp_path / "b.jsonl"
        line = {
            "id": "one", "gold": "joy", "source": "m1",
            "logprobs": {
                "anger": -1.6094379124341003, "fear": -1.6094379124341003,
                "joy": -1.6094379124341003, "neutral": -1.6094379124341003,
                "sadness": -1.6094379124341003,
            },
        }
        a.write_text(json.dumps(line) + "\n")
        line2 = dict(line, id="two", source="m2")
        b.write_text(json.dumps(line2) + "\n")
        rc = cli.main(["ensemble", str(a), str(b)])
        assert rc == 1
        assert "id" in capsys.readouterr().err

    def test_stream_without_gold_cannot_be_scored(self, tmp_path, capsys):
        a = tmp_path / "nogold.jsonl"
        line = {
            "id": "x", "gold": None, "source": "m",
            "logprobs": {
                "anger": -1.6094379124341003, "fear": -1.6094379124341003,
                "joy": -1.6094379124341003, "neutral": -1.6094379124341003,
                "sadness": -1.6094379124341003,
            },
        }
        a.write_text(json.dumps(line) + "\n")
        rc = cli.main(["ensemble", str(a)])
        assert rc == 1
        assert "gold" in capsys.readouterr().err


class TestPredict:
    def test_happy_fixture_predicts_joy_on_committed_model(self, capsys):
        rc = cli.main([
            "predict", "--model-path", str(DATA / "demo_model.json"),
            "--text", "feeling so happy and excited today :-) wonderful amazing day",
        ])
        assert rc == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "joy"
        assert len(out) == 6  # label line + five class rows

    def test_empty_text_is_valid(self, capsys):
        rc = cli.main([
            "predict", "--model-path", str(DATA / "demo_model.json"), "--text", "",
        ])
        assert rc == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] in ("anger", "fear", "joy", "neutral", "sadness")

    def test_missing_model_file_exits_one(self, tmp_path, capsys):
        rc = cli.main([
            "predict", "--model-path", str(tmp_path / "ghost.json"), "--text", "hello",
        ])
        assert rc == 1


class TestConfigFile:
    def test_config_fills_defaults_and_flags_win(self, tmp_path, splits_dir):
        config = tmp_path / "run.conf"
        config.write_text("alpha = 0.25\nseed = 9\n# comment\n")
        out = tmp_path / "mnb.json"
        rc = cli.main([
            "train", "--model", "mnb", "--data-dir", str(splits_dir),
            "--out", str(out), "--config", str(config), "--seed", "3",
        ])
        assert rc == 0
        obj = load(out)
        assert obj["alpha"] == 0.25  # from config
        # --seed was explicit, so the config value must not override it
        # (MNB ignores the seed, so check via a prepare run instead)

    def test_unknown_config_key_fails(self, tmp_path, splits_dir, capsys):
        config = tmp_path / "run.conf"
        config.write_text("warp-speed = 11\n")
        rc = cli.main([
            "train", "--model", "mnb", "--data-dir", str(splits_dir),
            "--out", str(tmp_path / "x.json"), "--config", str(config),
        ])
        assert rc == 1
        assert "warp-speed" in capsys.readouterr().err


class TestConsoleScript:
    def test_entry_point_runs(self):
        result = subprocess.run(
            [sys.executable, "-m", "tweemo.cli", "--help"],
            capture_output=True, text=True,
        )
        assert result.returncode == 0
        assert "prepare" in result.stdout

    def test_usage_error_exit_code(self):
        result = subprocess.run(
            [sys.executable, "-m", "tweemo.cli", "train", "--model", "nope",
             "--data-dir", "x", "--out", "y"],
            capture_output=True, text=True,
        )
        assert result.returncode == 2
