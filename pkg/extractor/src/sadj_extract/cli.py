"""Command-line entry point: sadj-extract {contextual,static}."""

from __future__ import annotations

import argparse
import logging
import sys

from .contextual import ExtractionJob, extract_contextual
from .errors import CoverageError, ExtractionError
from .sentences import read_sentences
from .static import extract_static


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sadj-extract",
        description="Write SADJ embedding dumps from transformer checkpoints "
        "or static word-vector files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "contextual", help="run an encoder over a sentence JSONL file"
    )
    p.add_argument("--model", required=True, help="checkpoint name or local path")
    p.add_argument("--sentences", required=True, help="sentence JSONL file")
    p.add_argument("--out", required=True, help="output dump path")
    p.add_argument(
        "--cased",
        action="store_true",
        help="record the checkpoint as case-sensitive in the manifest",
    )
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument(
        "--max-length",
        type=int,
        default=None,
        help="wordpiece cap per sentence (default: model position limit)",
    )

    p = sub.add_parser("static", help="look adjectives up in a word-vector file")
    p.add_argument("--vectors", required=True, help="text vector file, word per row")
    p.add_argument("--out", required=True, help="output dump path")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--words", help="word list file, one adjective per line")
    src.add_argument(
        "--sentences", help="sentence JSONL file; its adjectives are used"
    )
    p.add_argument("--language", default="en")
    p.add_argument("--model-id", default=None, help="manifest model id override")
    return parser


def _read_word_list(path: str) -> list[str]:
    words: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                words.append(line)
    return words


def _run(args: argparse.Namespace) -> int:
    if args.command == "contextual":
        if args.batch_size < 1:
            raise ExtractionError("--batch-size must be >= 1")
        report = extract_contextual(
            ExtractionJob(
                model=args.model,
                sentences=args.sentences,
                out=args.out,
                cased=args.cased,
                batch_size=args.batch_size,
                max_length=args.max_length,
            )
        )
        print(f"{report.summary()} -> {args.out}")
        for sk in report.skipped:
            print(f"  skipped ({sk.surface}, {sk.context_id}): {sk.reason}")
        if report.written == 0:
            print("no usable records", file=sys.stderr)
            return 2
        return 0

    if args.words:
        words = _read_word_list(args.words)
    else:
        words = [s.adjective for s in read_sentences(args.sentences)]
    report = extract_static(
        args.vectors,
        words,
        args.out,
        language=args.language,
        model_id=args.model_id,
    )
    print(f"{report.summary()} -> {args.out}")
    for word in report.missing:
        print(f"  missing: {word}")
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=logging.INFO, stream=sys.stderr, format="%(levelname)s %(message)s"
    )
    args = _build_parser().parse_args(argv)
    try:
        return _run(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CoverageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ExtractionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
