"""Transformer fine-tuning sidecar for the tweet emotion pipeline.

Consumes the split JSONL files written by the classical pipeline's prepare
command and emits log-probability JSONL streams in the shared wire format.
"""

__version__ = "0.1.0"
