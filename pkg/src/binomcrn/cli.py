"""Command line front end.

Exit codes: 0 analyzed (either verdict), 2 input/parse failure,
3 the two methods disagree, 4 bad flags.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import __version__
from .decomposition import format_odes
from .graph import create_graph, to_dot, transform_steps
from .harness import (METHODS, MethodDisagreement, RandomNetworkSpec, analyze, bench,
                      generate_random, write_report_csv)
from .matrix import build_matrix, format_table, matrix_json, rref
from .network import (DegenerateReactionWarning, ParseError, _HEADER_RE, format_network,
                      parse_batch_text, parse_network)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DISAGREE = 3
EXIT_USAGE = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if a < 1 or a > b:
        raise argparse.ArgumentTypeError(f"empty or invalid range {text!r}")
    return a, b


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="binomcrn", description="Test unconditional binomiality of reversible "
                "chemical reaction networks with the matrix and the graph method.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyze one model file")
    a.add_argument("file", type=Path)
    a.add_argument("--method", choices=METHODS, default="both")
    a.add_argument("--show-odes", action="store_true", help="print the steady-state polynomials")
    a.add_argument("--dump-matrix", action="store_true",
                   help="print the binomial coefficient matrix and its RREF")
    a.add_argument("--dump-graph", choices=("initial", "final", "steps"),
                   help="write DOT snapshots of the species-reaction graph")
    a.add_argument("--dump-dir", type=Path, default=Path("."), help="directory for DOT files")
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.add_argument("--assume-reversible", action="store_true",
                   help="accept '->' reactions, adding a free reverse rate constant")

    b = sub.add_parser("bench", help="time both methods over a corpus")
    b.add_argument("path", type=Path, help="directory of *.crn files or a batch file")
    b.add_argument("--out", type=Path, help="CSV report (default: stdout)")
    b.add_argument("--json", type=Path, dest="json_out", help="JSON report with diagnostics")
    b.add_argument("--figure", type=Path, help="timing figure (PNG/PDF/SVG by suffix)")
    b.add_argument("--threads", type=_positive, default=1, help="worker processes")
    b.add_argument("--assume-reversible", action="store_true")

    r = sub.add_parser("random", help="emit random reversible networks")
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--species", type=_range, required=True, metavar="A..B")
    r.add_argument("--reactions", type=_range, required=True, metavar="C..D")
    r.add_argument("--max-coeff", type=_positive, default=3)
    r.add_argument("--max-complex-size", type=_positive, default=3)
    r.add_argument("--count", type=_positive, default=1,
                   help="number of models (seeds S, S+1, ...); >1 writes batch format")
    r.add_argument("--emit", type=Path, help="output file (default: stdout)")
    return p


def _load_models(path: Path, assume_reversible: bool):
    text = path.read_text(encoding="utf-8")
    if any(_HEADER_RE.match(line) for line in text.splitlines()):
        batch = parse_batch_text(text, path.stem, assume_reversible)
        if batch.errors:
            raise ParseError("; ".join(f"{m}: {e}" for m, e in batch.errors))
        return batch.models
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateReactionWarning)
        net = parse_network(text, assume_reversible)
    for w in caught:
        print(f"warning: {path.name}: {w.message}", file=sys.stderr)
    return [(path.stem, net)]


def _dump_graphs(name: str, net, mode: str, outdir: Path) -> list[Path]:
    outdir.mkdir(parents=True, exist_ok=True)
    g = create_graph(net)
    written = []

    def write(suffix, graph, title):
        path = outdir / f"{name}.{suffix}.dot"
        path.write_text(to_dot(graph, title), encoding="utf-8")
        written.append(path)

    if mode == "initial":
        write("initial", g, f"{name} initial")
        return written
    width = len(str(len(g.reactions)))
    for step in transform_steps(g):
        if mode == "steps":
            write(f"step{step.position + 1:0{width}d}", g, f"{name} step {step.position + 1}")
    if mode == "final":
        write("final", g, f"{name} final")
    return written


def _text_report(rep, net, args) -> str:
    d = rep.diagnostics
    lines = [
        f"model: {rep.model}",
        f"species: {rep.n}",
        f"reactions: {rep.r}",
        f"method: {rep.method}",
        f"verdict: {rep.verdict.value}",
    ]
    if rep.agreement is not None:
        lines.append(f"agreement: {'yes' if rep.agreement else 'no'}")
    if rep.t_matrix_ns is not None:
        lines.append(f"time matrix: {rep.t_matrix_ms:.6f} ms")
    if rep.t_graph_ns is not None:
        lines.append(f"time graph: {rep.t_graph_ms:.6f} ms")
    if "matrix" in d:
        m = d["matrix"]
        lines.append(f"matrix rank: {m['rank']}")
        lines.append("matrix violating rows: " + (", ".join(m["violating_rows"]) or "-"))
    if "graph" in d:
        g = d["graph"]
        lines.append("graph marked species: " + (", ".join(g["marked"]) or "-"))
        comps = [f"{{{', '.join(c['species'])} | {', '.join(c['reactions'])}}}"
                 for c in g["components"]]
        lines.append("graph components: " + (" ".join(comps) or "-"))
    if args.show_odes:
        lines.append("")
        lines.extend(format_odes(net))
    if args.dump_matrix:
        m = build_matrix(net)
        red = rref(m)
        lines += ["", "binomial coefficient matrix:",
                  format_table(m.entries, m.row_labels, m.col_labels),
                  "", "reduced row echelon form:",
                  format_table(red.matrix, red.row_labels, m.col_labels)]
    return "\n".join(lines)


def _json_report(rep, net, args) -> dict:
    out = rep.to_dict()
    if args.show_odes:
        out["odes"] = format_odes(net)
    if args.dump_matrix:
        m = build_matrix(net)
        red = rref(m)
        out["matrix"] = matrix_json(m.entries, m.row_labels, m.col_labels)
        out["rref"] = matrix_json(red.matrix, red.row_labels, m.col_labels)
    return out


def cmd_analyze(args) -> int:
    try:
        models = _load_models(args.file, args.assume_reversible)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    texts, objs = [], []
    for name, net in models:
        try:
            rep = analyze(net, args.method, name)
        except MethodDisagreement as exc:
            print(f"fatal: {exc}", file=sys.stderr)
            print(json.dumps({"matrix": exc.matrix, "graph": exc.graph}, indent=2), file=sys.stderr)
            return EXIT_DISAGREE
        if args.dump_graph:
            for path in _dump_graphs(name, net, args.dump_graph, args.dump_dir):
                print(f"wrote {path}", file=sys.stderr)
        if args.format == "json":
            objs.append(_json_report(rep, net, args))
        else:
            texts.append(_text_report(rep, net, args))
    if args.format == "json":
        payload = objs[0] if len(objs) == 1 else objs
        print(json.dumps(payload, indent=2))
    else:
        print("\n\n".join(texts))
    return EXIT_OK


def cmd_bench(args) -> int:
    if not args.path.exists():
        print(f"error: no such corpus: {args.path}", file=sys.stderr)
        return EXIT_PARSE
    result = bench(args.path, args.out, args.json_out, args.threads, args.assume_reversible)
    if args.out is None:
        write_report_csv(result.reports, sys.stdout)
    for err in result.errors:
        print(f"{err['kind']} error: {err['model']}: {err['error']}", file=sys.stderr)
    if args.figure is not None:
        from .plotting import timing_figure

        timing_figure(result.reports, args.figure)
    print(result.summary_line(), file=sys.stderr)
    return EXIT_DISAGREE if result.disagreements else EXIT_OK


def cmd_random(args) -> int:
    chunks = []
    for i in range(args.count):
        try:
            spec = RandomNetworkSpec(args.seed + i, args.species, args.reactions,
                                     args.max_coeff, args.max_complex_size)
            net = generate_random(spec)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        text = format_network(net)
        if args.count > 1:
            text = f"=== random-{args.seed + i} ===\n" + text
        chunks.append(text)
    out = "".join(chunks)
    if args.emit is None:
        sys.stdout.write(out)
    else:
        args.emit.write_text(out, encoding="utf-8")
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    handler = {"analyze": cmd_analyze, "bench": cmd_bench, "random": cmd_random}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
