"""Command-line front end: parse, mark, generate, link, assemble, serialize."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .cmml import MeaningTable, load_expansion_table
from .convert import build_content, build_parallel, build_presentation
from .errors import ConversionError, ParseError, ParseErrorKind
from .linker import check_links
from .mml import target_from_raw
from .parser import parse_xmath, read_xml_tree
from .serializer import EntityMode, SerializeOptions, serialize_mathml

MODES = ("pmml", "cmml", "parallel", "check")


@dataclass
class CliConfig:
    input_path: str
    mode: str = "parallel"
    output_path: str = "-"
    tex: str | None = None
    display: str | None = None
    expansions: str | None = None
    pretty: bool = False
    numeric_entities: bool = False


def _read_input(path: str) -> str:
    data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(
            ParseErrorKind.MALFORMED_XML, 0, 0, f"input is not UTF-8: {exc}"
        ) from None


def _write_output(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_table(config: CliConfig) -> MeaningTable:
    table = MeaningTable.default()
    if config.expansions:
        rules = load_expansion_table(Path(config.expansions).read_text("utf-8"))
        table = table.extended(rules)
    return table


def run(config: CliConfig) -> int:
    """Execute one conversion. 0 on success, 1 on link violations, 2 on errors."""
    name = "<stdin>" if config.input_path == "-" else config.input_path
    try:
        text = _read_input(config.input_path)
        if config.mode == "check":
            math = target_from_raw(read_xml_tree(text))
            report = check_links(math)
            for line in report.lines():
                print(line)
            return 0 if report.ok else 1

        doc = parse_xmath(text)
        if config.mode == "parallel":
            math = build_parallel(
                doc,
                tex=config.tex,
                display=config.display,
                table=_load_table(config),
            )
        elif config.mode == "pmml":
            math = build_presentation(doc, display=config.display)
        else:
            math = build_content(doc, table=_load_table(config))
    except ParseError as exc:
        print(f"{name}:{exc.line}:{exc.col}: error: {exc.detail}", file=sys.stderr)
        return 2
    except (ConversionError, ValueError) as exc:
        print(f"{name}: error: {exc}", file=sys.stderr)
        return 2
    except RecursionError:
        print(f"{name}: error: formula too deeply self-referential", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"{name}: error: {exc}", file=sys.stderr)
        return 2

    options = SerializeOptions(
        pretty=config.pretty,
        entity_mode=(
            EntityMode.NUMERIC_REFS if config.numeric_entities else EntityMode.UTF8
        ),
    )
    try:
        _write_output(config.output_path, serialize_mathml(math, options))
    except OSError as exc:
        print(f"{config.output_path}: error: {exc}", file=sys.stderr)
        return 2
    return 0


def _build_argparser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xmathml",
        description=(
            "Convert XMath markup to cross-referenced parallel MathML, "
            "or check the cross-references of an existing document."
        ),
    )
    parser.add_argument("input", help="input file, or - for standard input")
    parser.add_argument(
        "--to",
        dest="mode",
        choices=MODES,
        default="parallel",
        help="output kind, or 'check' to validate an existing MathML file",
    )
    parser.add_argument("--out", default="-", help="output file (default: stdout)")
    parser.add_argument("--tex", help="TeX source for the annotation/alttext")
    parser.add_argument(
        "--display",
        choices=("block", "inline"),
        help="display attribute for the math element (default: derived)",
    )
    parser.add_argument("--expansions", help="extra expansion-rule table file")
    parser.add_argument("--pretty", action="store_true", help="indent the output")
    parser.add_argument(
        "--numeric-entities",
        action="store_true",
        help="escape non-ASCII output as numeric character references",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_argparser().parse_args(argv)
    config = CliConfig(
        input_path=args.input,
        mode=args.mode,
        output_path=args.out,
        tex=args.tex,
        display=args.display,
        expansions=args.expansions,
        pretty=args.pretty,
        numeric_entities=args.numeric_entities,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
