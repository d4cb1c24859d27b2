"""Command line front end: ``refclass {query,check,classes}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from refclass.bounds import BoundsScaleError, InconsistentKB
from refclass.kb import KnowledgeBase, parse_kb, parse_sentence
from refclass.selection import Config, UnresolvableQuery, prob
from refclass.sets import ScaleError, UnknownIndividual, build_closure, classes_of

EXIT_OK, EXIT_INVALID, EXIT_QUERY = 0, 1, 2


def _load(path: str, minimal: bool):
    """Parse ``path``; returns the KB or None after printing diagnostics."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        print("%s: error: %s" % (path, e.strerror), file=sys.stderr)
        return None
    doc = parse_kb(text, minimal=minimal)
    for d in doc.diagnostics:
        print("%s:%s" % (path, d), file=sys.stderr)
    return KnowledgeBase.from_document(doc) if doc.ok else None


def _blocks(value: str):
    if value == "all":
        return None
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def cmd_query(args) -> int:
    kb = _load(args.file, args.minimal)
    if kb is None:
        return EXIT_INVALID
    try:
        sentence = parse_sentence(args.sentence)
    except Exception as e:
        print("error: cannot read sentence %r: %s" % (args.sentence, e), file=sys.stderr)
        return EXIT_QUERY
    config = Config(constructions=not args.no_constructions, bounds=args.bounds,
                    max_bracket_blocks=args.max_bracket_blocks)
    try:
        answer, trace = prob(sentence, kb, config)
    except UnresolvableQuery as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_QUERY
    except (InconsistentKB, ScaleError, BoundsScaleError, ValueError) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_INVALID
    print("Prob = %s" % answer)
    if args.trace == "human":
        sys.stdout.write(trace.render())
    elif args.trace == "json":
        print(json.dumps(trace.to_json(), indent=2))
    if args.plot:
        from refclass.plotting import plot_trace

        plot_trace(trace, args.plot)
    return EXIT_OK


def cmd_check(args) -> int:
    kb = _load(args.file, args.minimal)
    if kb is None:
        return EXIT_INVALID
    print("%s: ok (%d classes, %d memberships, %d subset assertions, %d statistics, "
          "%d equivalences)" % (
              args.file, len(kb.classes), sum(len(v) for v in kb.members.values()),
              len(kb.subsets), len(kb.stats), len(kb.equivalences)))
    return EXIT_OK


def cmd_classes(args) -> int:
    kb = _load(args.file, args.minimal)
    if kb is None:
        return EXIT_INVALID
    try:
        closure = build_closure(kb)
        found = classes_of(args.individual, kb, closure)
    except UnknownIndividual as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_QUERY
    except ScaleError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_INVALID
    targets = kb.targets()
    for cls, origin in found.items():
        print("%-24s %s" % (cls, origin.value))
        for z in targets:
            iv = kb.stat(cls, z)
            if iv is not None:
                print("    %%(%s, %s) = %s" % (cls, z, iv))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="refclass", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("query", help="compute Prob(sentence)")
    q.add_argument("file")
    q.add_argument("sentence", help="sentence name or '(member x Z)'")
    q.add_argument("--trace", choices=("human", "json"))
    q.add_argument("--no-constructions", action="store_true",
                   help="do not generate product or bracket candidates")
    q.add_argument("--bounds", action="store_true",
                   help="derive bounds for intersection classes without statistics")
    q.add_argument("--max-bracket-blocks", type=_blocks, default=2, metavar="N",
                   help="largest number of bracket constituents, or 'all' (default 2)")
    q.add_argument("--plot", metavar="PATH", help="write a figure of the candidate intervals")
    q.set_defaults(func=cmd_query)

    c = sub.add_parser("check", help="parse and validate a knowledge base")
    c.add_argument("file")
    c.set_defaults(func=cmd_check)

    k = sub.add_parser("classes", help="list the classes an individual belongs to")
    k.add_argument("file")
    k.add_argument("individual")
    k.set_defaults(func=cmd_classes)

    for p in (q, c, k):
        p.add_argument("--minimal", action="store_true",
                       help="restrict to the minimal language (no subset assertions)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
