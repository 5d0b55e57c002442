"""Command line front end.

Exit codes: 0 on success, 1 for usage errors (bad flags or arguments),
2 when an input file violates the data contract.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import ArgumentError, TextfeatError
from .extract import emit_tags, extract_full


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="textfeat",
        description="Extract text feature matrices and coarse tag files "
        "from JSONL datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    full = sub.add_parser(
        "extract-full",
        help="write the full 241-column feature matrix as CSV",
    )
    full.add_argument("--dataset", required=True, help="input JSONL dataset")
    full.add_argument("--out", required=True, help="output CSV path")

    tags = sub.add_parser(
        "emit-tags",
        help="write tokens and coarse tags per sample as JSONL",
    )
    tags.add_argument("--dataset", required=True, help="input JSONL dataset")
    tags.add_argument("--out", required=True, help="output JSONL path")

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=logging.INFO, format="%(levelname)s %(name)s: %(message)s"
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        if args.command == "extract-full":
            manifest = extract_full(args.dataset, args.out)
        else:
            manifest = emit_tags(args.dataset, args.out)
    except ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except TextfeatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    n_fallback = len(manifest["fallback_samples"])
    print(
        f"wrote {args.out}: {manifest['n_samples']} samples, "
        f"{n_fallback} fallback"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
