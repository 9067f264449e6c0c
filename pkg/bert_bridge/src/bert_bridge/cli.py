"""Command-line entry point: finetune and export.

Both commands consume the split JSONL files written by the classical
pipeline's prepare command; export writes the shared wire-format stream.
"""

from __future__ import annotations

import argparse
import sys

from .config import VARIANTS, BertFinetuneConfig
from .data import DataError
from .export import ExportError, export_logprobs
from .train import finetune


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bert-bridge",
                                     description="Transformer fine-tuning sidecar")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("finetune", help="fine-tune an encoder on the train split")
    p.add_argument("--splits-dir", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--variant", default="bertweet-base", choices=sorted(VARIANTS))
    p.add_argument("--max-len", type=int, default=None,
                   help="padding length (default: the variant's)")
    p.add_argument("--lr", type=float, default=2e-5)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--dropout", type=float, default=0.30)
    p.add_argument("--grad-clip-norm", type=float, default=1.0)
    p.add_argument("--weight-decay", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_finetune)

    p = sub.add_parser("export", help="write the log-probability JSONL stream")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--split-file", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--batch-size", type=int, default=64)
    p.set_defaults(func=cmd_export)
    return parser


def cmd_finetune(args) -> int:
    config = BertFinetuneConfig(
        variant=args.variant, max_len=args.max_len, lr=args.lr, epochs=args.epochs,
        batch_size=args.batch_size, dropout=args.dropout,
        grad_clip_norm=args.grad_clip_norm, weight_decay=args.weight_decay,
        seed=args.seed,
    )
    checkpoint = finetune(config, args.splits_dir, args.out_dir)
    print(f"checkpoint written to {checkpoint}", file=sys.stderr)
    return 0


def cmd_export(args) -> int:
    count = export_logprobs(args.checkpoint, args.split_file, args.out,
                            batch_size=args.batch_size)
    print(f"wrote {count} log-prob records -> {args.out}", file=sys.stderr)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DataError, ExportError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
