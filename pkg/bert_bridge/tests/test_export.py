import json
import math
import subprocess
import sys

import pytest

from bert_bridge.config import BertFinetuneConfig
from bert_bridge.export import ExportError, export_logprobs
from bert_bridge.train import finetune


@pytest.fixture(scope="module")
def trained_checkpoint(tmp_path_factory, tiny_splits):
    from bert_bridge.model import StubEncoder, StubTokenizer

    out = tmp_path_factory.mktemp("ckpt")
    config = BertFinetuneConfig(epochs=2, batch_size=8, lr=5e-3, seed=11)
    path = finetune(
        config, tiny_splits, out,
        encoder_factory=lambda: StubEncoder(seed=1234),
        tokenizer=StubTokenizer(),
        log=lambda message: None,
    )
    return path


class TestExport:
    def test_record_count_and_order_match_split(self, trained_checkpoint, tiny_splits,
                                                tmp_path, stub_encoder_factory,
                                                stub_tokenizer):
        out = tmp_path / "stream.jsonl"
        count = export_logprobs(
            trained_checkpoint, tiny_splits / "test.jsonl", out,
            encoder_factory=stub_encoder_factory, tokenizer=stub_tokenizer,
        )
        lines = out.read_text().splitlines()
        assert count == len(lines) == 15
        split_ids = [
            json.loads(l)["id"]
            for l in (tiny_splits / "test.jsonl").read_text().splitlines()
        ]
        assert [json.loads(l)["id"] for l in lines] == split_ids

    def test_records_satisfy_wire_contract(self, trained_checkpoint, tiny_splits,
                                           tmp_path, stub_encoder_factory,
                                           stub_tokenizer):
        out = tmp_path / "stream.jsonl"
        export_logprobs(
            trained_checkpoint, tiny_splits / "validation.jsonl", out,
            encoder_factory=stub_encoder_factory, tokenizer=stub_tokenizer,
        )
        for line in out.read_text().splitlines():
            record = json.loads(line)
            assert set(record) == {"id", "gold", "source", "logprobs"}
            assert record["source"] == "bertweet-base"
            values = list(record["logprobs"].values())
            assert set(record["logprobs"]) == {
                "anger", "fear", "joy", "neutral", "sadness"
            }
            assert all(v <= 0.0 for v in values)
            total = sum(math.exp(v) for v in values)
            assert abs(math.log(total)) <= 1e-6

    def test_validates_under_the_classical_cli(self, trained_checkpoint, tiny_splits,
                                               tmp_path, stub_encoder_factory,
                                               stub_tokenizer):
        """Cross-component contract: the primary toolkit accepts the stream."""
        out = tmp_path / "stream.jsonl"
        export_logprobs(
            trained_checkpoint, tiny_splits / "test.jsonl", out,
            encoder_factory=stub_encoder_factory, tokenizer=stub_tokenizer,
        )
        result = subprocess.run(
            [sys.executable, "-m", "tweemo.cli", "ensemble", str(out),
             "--format", "json"],
            capture_output=True, text=True,
        )
        assert result.returncode == 0, result.stderr
        report = json.loads(result.stdout)
        assert report["n"] == 15

    def test_fusable_with_a_second_stream_via_classical_cli(
        self, trained_checkpoint, tiny_splits, tmp_path,
        stub_encoder_factory, stub_tokenizer,
    ):
        ours = tmp_path / "bert.jsonl"
        export_logprobs(
            trained_checkpoint, tiny_splits / "test.jsonl", ours,
            encoder_factory=stub_encoder_factory, tokenizer=stub_tokenizer,
        )
        # Second stream: uniform probabilities from a hypothetical model.
        other = tmp_path / "uniform.jsonl"
        uniform = math.log(1 / 5)
        with open(other, "w", encoding="utf-8") as fh:
            for line in ours.read_text().splitlines():
                record = json.loads(line)
                record["source"] = "uniform"
                record["logprobs"] = {k: uniform for k in record["logprobs"]}
                fh.write(json.dumps(record) + "\n")
        result = subprocess.run(
            [sys.executable, "-m", "tweemo.cli", "ensemble", str(ours), str(other),
             "--format", "json"],
            capture_output=True, text=True,
        )
        assert result.returncode == 0, result.stderr

    def test_mismatched_labels_rejected(self, trained_checkpoint, tmp_path,
                                        stub_encoder_factory, stub_tokenizer):
        bad_split = tmp_path / "bad.jsonl"
        bad_split.write_text(
            json.dumps({"id": "x", "text": "hello", "label": "surprise"}) + "\n"
        )
        with pytest.raises(ExportError, match="mismatch"):
            export_logprobs(
                trained_checkpoint, bad_split, tmp_path / "out.jsonl",
                encoder_factory=stub_encoder_factory, tokenizer=stub_tokenizer,
            )

    def test_inference_is_deterministic_despite_dropout_config(
        self, trained_checkpoint, tiny_splits, tmp_path,
        stub_encoder_factory, stub_tokenizer,
    ):
        outs = []
        for name in ("a.jsonl", "b.jsonl"):
            out = tmp_path / name
            export_logprobs(
                trained_checkpoint, tiny_splits / "test.jsonl", out,
                encoder_factory=stub_encoder_factory, tokenizer=stub_tokenizer,
            )
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
