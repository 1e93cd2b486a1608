"""Command-line interface.

Subcommands: ``config`` (build point configurations), ``tropicalize``
(polynomial pair to curve report), ``enumerate`` (stream triangulation
representatives with checkpointing), ``classify`` (isomorphism classes +
atlas), ``census`` (abstract graph counts).

Exit codes: 0 success, 2 degenerate subdivision, 3 non-unimodular
triangulation, 4 I/O error, 5 checkpoint mismatch, 64 usage error.
Progress and telemetry go to stderr; standard output carries data.
"""

from __future__ import annotations

import argparse
import json
import os
import signal
import sys
import time

from .enumeration import EnumerationFilters, Enumerator, load_checkpoint
from .errors import (
    CheckpointMismatchError,
    DegenerateSubdivisionError,
    NonUnimodularError,
    SupportError,
)
from .formats import (
    atlas_text,
    cells_to_text,
    class_table_to_dict,
    config_from_dict,
    config_to_dict,
    graph_to_dot,
    load_json,
    parse_triangulation_line,
    polynomial_terms_from_dict,
    report_to_dict,
    save_json,
    triangulation_line,
)
from .geometry import cayley_config, simplex_lattice_points
from .graphs import CENSUS_CONVENTIONS, ClassTable, census
from .triangulation import Triangulation, builtin_symmetry
from .tropical import ValuedPolynomial, dual_curve_planar, mixed_subdivision, dual_curve_3d, tropicalize_pair

EXIT_OK = 0
EXIT_DEGENERATE = 2
EXIT_NONUNIMODULAR = 3
EXIT_IO = 4
EXIT_CHECKPOINT = 5
EXIT_USAGE = 64

_GROUP_PRESETS = {
    "trivial": "trivial",
    "s3": "simplex-3d2",
    "simplex-3d2": "simplex-3d2",
    "s4xz2": "cayley-2d3-2d3",
    "cayley-2d3-2d3": "cayley-2d3-2d3",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="tropcay", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("config", help="write a point configuration JSON file")
    kinds = p.add_subparsers(dest="kind", required=True)
    ps = kinds.add_parser("simplex", help="lattice points of dilation*Delta_dim")
    ps.add_argument("--dim", type=int, required=True)
    ps.add_argument("--dilation", type=int, required=True)
    ps.add_argument("--out", default=None, help="output file (default: stdout)")
    pc = kinds.add_parser("cayley", help="Cayley configuration of d*Delta and e*Delta")
    pc.add_argument("--d", type=int, required=True, help="first factor dilation")
    pc.add_argument("--e", type=int, required=True, help="second factor dilation")
    pc.add_argument("--dim", type=int, default=3, help="factor dimension (default 3)")
    pc.add_argument("--out", default=None)

    p = sub.add_parser("tropicalize", help="curve report for a pair of valued polynomials")
    p.add_argument("f1", help="first polynomial JSON file")
    p.add_argument("f2", help="second polynomial JSON file")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("enumerate", help="stream triangulation class representatives as JSONL")
    p.add_argument("--config", default=None, help="point configuration JSON file")
    p.add_argument("--group", default="trivial", choices=sorted(_GROUP_PRESETS))
    p.add_argument("--unimodular", action="store_true", help="emit only unimodular classes")
    p.add_argument("--full", action="store_true", help="emit only full classes")
    p.add_argument("--checkpoint", default=None, help="checkpoint file to write (and resume from)")
    p.add_argument("--resume", action="store_true", help="resume from --checkpoint")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--limit", type=int, default=None, help="stop after this many emissions")
    p.add_argument("--checkpoint-every", type=int, default=None)
    p.add_argument("--placing-order", default=None,
                   help="comma-separated point order for the seed triangulation")
    p.add_argument("--out", default=None, help="output JSONL file (default: stdout)")

    p = sub.add_parser("classify", help="isomorphism classes of curves from a JSONL stream")
    p.add_argument("--config", required=True)
    p.add_argument("--in", dest="input", required=True, help="triangulation JSONL file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--use-colors", action="store_true", help="classify color-respecting")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("census", help="count connected bounded-degree graphs up to isomorphism")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=3)
    p.add_argument("--convention", default="simple", choices=list(CENSUS_CONVENTIONS))

    return parser


def _emit(doc, out_path):
    if out_path is None:
        json.dump(doc, sys.stdout, indent=1)
        sys.stdout.write("\n")
    else:
        save_json(out_path, doc)


def cmd_config(args) -> int:
    if args.kind == "simplex":
        cfg = simplex_lattice_points(args.dim, args.dilation)
    else:
        cfg = cayley_config(
            simplex_lattice_points(args.dim, args.d),
            simplex_lattice_points(args.dim, args.e),
        )
    _emit(config_to_dict(cfg), args.out)
    return EXIT_OK


def _load_polynomial(path) -> ValuedPolynomial:
    degree, terms = polynomial_terms_from_dict(load_json(path))
    return ValuedPolynomial.make(degree, terms)


def cmd_tropicalize(args) -> int:
    f1 = _load_polynomial(args.f1)
    f2 = _load_polynomial(args.f2)
    try:
        report = tropicalize_pair(f1, f2)
    except DegenerateSubdivisionError as err:
        sys.stderr.write(f"degenerate subdivision: {err}\n")
        return EXIT_DEGENERATE
    except NonUnimodularError as err:
        sys.stderr.write(f"not unimodular: {err}\n")
        return EXIT_NONUNIMODULAR
    os.makedirs(args.out, exist_ok=True)
    doc = report_to_dict(report)
    save_json(os.path.join(args.out, "report.json"), doc)
    with open(os.path.join(args.out, "curve.dot"), "w", encoding="utf-8") as fh:
        fh.write(doc["dot"])
    sys.stderr.write(
        f"cells={len(report.triangulation.cells)} mixed={report.mixed_count} "
        f"genus={report.genus} cycle_length={report.cycle_length}\n"
    )
    return EXIT_OK


def cmd_enumerate(args) -> int:
    if args.resume:
        if not args.checkpoint:
            sys.stderr.write("error: --resume needs --checkpoint\n")
            return EXIT_USAGE
        config = config_from_dict(load_json(args.config)) if args.config else None
        enumerator = load_checkpoint(args.checkpoint, config=config, jobs=args.jobs)
    else:
        if not args.config:
            sys.stderr.write("error: --config is required unless resuming\n")
            return EXIT_USAGE
        config = config_from_dict(load_json(args.config))
        group = builtin_symmetry(_GROUP_PRESETS[args.group], config)
        filters = EnumerationFilters(
            require_unimodular=args.unimodular, require_full=args.full
        )
        order = None
        if args.placing_order:
            order = [int(x) for x in args.placing_order.split(",")]
        enumerator = Enumerator(
            config,
            group,
            filters,
            jobs=args.jobs,
            checkpoint_path=args.checkpoint,
            checkpoint_every=args.checkpoint_every,
            placing_order=order,
        )

    previous = signal.signal(signal.SIGINT, lambda *_: enumerator.request_stop())
    previous_term = signal.signal(signal.SIGTERM, lambda *_: enumerator.request_stop())
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    last_report = time.time()
    try:
        for t in enumerator.run(limit=args.limit):
            out.write(triangulation_line(t.configuration, t.cells))
            out.write("\n")
            now = time.time()
            if now - last_report > 2.0:
                s = enumerator.stats()
                sys.stderr.write(
                    f"visited={s['visited']} emitted={s['emitted']} "
                    f"frontier={s['frontier']}\n"
                )
                last_report = now
    finally:
        if args.out:
            out.close()
        signal.signal(signal.SIGINT, previous)
        signal.signal(signal.SIGTERM, previous_term)
    s = enumerator.stats()
    sys.stderr.write(
        f"done: visited={s['visited']} emitted={s['emitted']} "
        f"frontier={s['frontier']} complete={s['complete']}\n"
    )
    return EXIT_OK


def _curve_for(config, cells):
    t = Triangulation.make(config, cells)
    if config.is_cayley:
        return dual_curve_3d(mixed_subdivision(t))
    return dual_curve_planar(t)


def _classify_lines(config, lines):
    graphs = []
    for lineno, line in lines:
        try:
            cells = parse_triangulation_line(config, line)
            graph = _curve_for(config, cells)
        except Exception as err:  # report and continue
            sys.stderr.write(f"line {lineno}: skipped ({err})\n")
            continue
        graphs.append((graph, cells_to_text(config, cells)))
    return graphs


def cmd_classify(args) -> int:
    config = config_from_dict(load_json(args.config))
    with open(args.input, "r", encoding="utf-8") as fh:
        lines = [
            (i + 1, line)
            for i, line in enumerate(fh)
            if line.strip()
        ]
    if args.jobs > 1 and len(lines) > 1:
        from concurrent.futures import ProcessPoolExecutor

        chunks = [lines[i :: args.jobs] for i in range(args.jobs)]
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = pool.map(_classify_chunk, [(config_to_dict(config), c) for c in chunks])
        graphs = [g for part in results for g in part]
    else:
        graphs = _classify_lines(config, lines)

    table = ClassTable(use_colors=args.use_colors)
    for graph, provenance in graphs:
        table.add(graph, provenance)

    from .formats import text_to_cells

    entries_with_cells = [
        (entry, text_to_cells(config, entry.provenance)) for entry in table.entries()
    ]
    os.makedirs(args.out, exist_ok=True)
    doc = class_table_to_dict(config, entries_with_cells)
    save_json(os.path.join(args.out, "classes.json"), doc)
    with open(os.path.join(args.out, "atlas.txt"), "w", encoding="utf-8") as fh:
        fh.write(atlas_text(config, entries_with_cells))
    for class_id, (entry, _cells) in enumerate(entries_with_cells):
        graph = entry.representative
        path = os.path.join(args.out, f"class_{class_id:04d}.dot")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(graph_to_dot(graph, name=f"curve_class_{class_id}"))
    sys.stderr.write(f"classified {table.total} inputs into {table.class_count()} classes\n")
    return EXIT_OK


def _classify_chunk(payload):
    config_doc, lines = payload
    config = config_from_dict(config_doc)
    return _classify_lines(config, lines)


def cmd_census(args) -> int:
    count = census(args.v, args.e, args.max_degree, args.convention)
    sys.stdout.write(f"{count}\n")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "config":
            return cmd_config(args)
        if args.command == "tropicalize":
            return cmd_tropicalize(args)
        if args.command == "enumerate":
            return cmd_enumerate(args)
        if args.command == "classify":
            return cmd_classify(args)
        if args.command == "census":
            return cmd_census(args)
        raise AssertionError(args.command)
    except CheckpointMismatchError as err:
        sys.stderr.write(f"checkpoint mismatch: {err}\n")
        return EXIT_CHECKPOINT
    except SupportError as err:
        sys.stderr.write(f"bad polynomial support: {err}\n")
        return EXIT_USAGE
    except OSError as err:
        sys.stderr.write(f"i/o error: {err}\n")
        return EXIT_IO
    except json.JSONDecodeError as err:
        sys.stderr.write(f"i/o error: malformed JSON ({err})\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
