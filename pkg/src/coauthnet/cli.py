"""Command-line driver.

Each stage reads and writes files so it can run on its own::

    coauthnet ingest records.csv --directory authors.csv -o corpus.json
    coauthnet build coauthor corpus.json -o coauthor.edges
    coauthnet metrics coauthor.edges -o frame.tsv
    coauthnet stats top frame.tsv --metric betweenness --k 10
    coauthnet export graphml coauthor.edges -o coauthor.graphml

Exit status: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path

from . import __version__
from . import build, corpus as corpus_mod, graph as graph_mod, metrics, render, stats
from .exceptions import CoauthnetError, UnknownAuthorWarning

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

DEVIATION_METRICS = ("degree", "betweenness", "closeness", "eigenvector", "pagerank", "clustering")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _year_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected START:END, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _gender(text: str) -> str:
    try:
        return corpus_mod.normalize_gender(text)
    except CoauthnetError:
        raise argparse.ArgumentTypeError(f"invalid gender {text!r}") from None


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("tsv", "markdown"), default="tsv", help="table style")
    common.add_argument("--decimal-comma", action="store_true", default=None,
                        help="print decimals with a comma (also via COAUTHNET_DECIMAL=comma)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="coauthnet", description="Coauthorship and thematic network analysis.")
    p.add_argument("--version", action="version", version=f"coauthnet {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("ingest", parents=[common], help="parse records into a corpus document")
    s.add_argument("records")
    s.add_argument("--directory")
    s.add_argument("--gender-file", help="annotation file whose gender column is applied")
    s.add_argument("--affiliation-file", help="annotation file whose affiliation column is applied")
    s.add_argument("--years", type=_year_range)
    s.add_argument("-o", "--output", required=True)

    s = sub.add_parser("simulate", parents=[common], help="generate a synthetic corpus")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--papers", type=int, default=2000)
    s.add_argument("--authors", type=int, default=900)
    s.add_argument("--bias", type=float, default=1.0, help="preferential attachment exponent")
    s.add_argument("--coauthor-start", type=float, default=0.1)
    s.add_argument("--coauthor-end", type=float, default=0.7)
    s.add_argument("--records-out", help="also write the CSV record and directory files")
    s.add_argument("-o", "--output", required=True)

    s = sub.add_parser("timeline", parents=[common], help="yearly single/coauthored counts")
    s.add_argument("corpus")

    s = sub.add_parser("build", parents=[common], help="build a network from a corpus")
    s.add_argument("kind", choices=("coauthor", "jel", "affil"))
    s.add_argument("corpus")
    s.add_argument("--window", type=_year_range)
    s.add_argument("--gender", type=_gender)
    s.add_argument("--include-singles", action="store_true")
    s.add_argument("--coauthored-only", action="store_true", help="jel: only coauthored papers")
    s.add_argument("-o", "--output", required=True)

    s = sub.add_parser("metrics", parents=[common], help="per-node metric frame")
    s.add_argument("graph")
    s.add_argument("--rw", action="store_true", help="add random-walk betweenness/closeness")
    s.add_argument("--damping", type=float, default=0.85)
    s.add_argument("-o", "--output")

    s = sub.add_parser("stats", parents=[common], help="tables over graphs and frames")
    s.add_argument("what", choices=("degree-dist", "corr", "deviation", "smallworld", "top", "kcore"))
    s.add_argument("input", help="graph edge list (degree-dist, smallworld, kcore) or metric frame")
    s.add_argument("--metric")
    s.add_argument("--k", type=int, default=10)
    s.add_argument("--gender", type=_gender, help="top: restrict to one gender")
    s.add_argument("--columns", type=_csv_list)
    s.add_argument("--classes", type=_csv_list, default=["male", "female"])
    s.add_argument("--key", default="gender", help="deviation: grouping column")
    s.add_argument("--decimals", type=int, default=3)
    s.add_argument("-o", "--output")

    s = sub.add_parser("export", parents=[common], help="graph exchange formats and SVG plots")
    s.add_argument("fmt", choices=("graphml", "dot", "edges", "svg"))
    s.add_argument("graph")
    s.add_argument("--frame", help="metric frame whose columns become node attributes / scatter data")
    s.add_argument("--plot", choices=render.PLOT_KINDS, default="histogram")
    s.add_argument("--columns", type=_csv_list)
    s.add_argument("-o", "--output", required=True)
    return p


def _emit(text: str, output=None):
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _table(args, header, body) -> str:
    return render.render_table(body, header, fmt=args.format)


def _cmd_ingest(args):
    corpus = corpus_mod.parse_corpus(args.records, args.directory, year_range=args.years)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", UnknownAuthorWarning)
        if args.gender_file:
            corpus = corpus_mod.annotate(corpus, args.gender_file, "gender")
        if args.affiliation_file:
            corpus = corpus_mod.annotate(corpus, args.affiliation_file, "affiliation")
    for w in caught:
        print(f"coauthnet: warning: {w.message}", file=sys.stderr)
    corpus_mod.save_corpus(corpus, args.output)
    counts = corpus.class_counts("gender")
    body = [["papers", str(len(corpus))], ["authors", str(len(corpus.directory))]]
    body += [[f"gender:{k}", str(v)] for k, v in counts.items()]
    _emit(_table(args, ["field", "value"], body))


def _cmd_simulate(args):
    schedule = corpus_mod.default_schedule(start=args.coauthor_start, stop=args.coauthor_end)
    corpus = corpus_mod.generate_corpus(args.seed, args.papers, args.authors, args.bias, schedule)
    corpus_mod.save_corpus(corpus, args.output)
    if args.records_out:
        base = Path(args.records_out)
        corpus_mod.write_records(corpus, base, base.with_name(base.stem + "_authors.csv"))
    _emit(_table(args, ["field", "value"], [["papers", str(len(corpus))], ["authors", str(len(corpus.directory))]]))


def _cmd_timeline(args):
    corpus = corpus_mod.load_corpus(args.corpus)
    body = [
        [str(r.year), str(r.single), str(r.coauthored), render.format_number(r.sc_ratio, 3, args.decimal_comma)]
        for r in corpus_mod.yearly_counts(corpus)
    ]
    _emit(_table(args, ["year", "single", "coauthored", "S/C"], body))


def _cmd_build(args):
    corpus = corpus_mod.load_corpus(args.corpus)
    comma = args.decimal_comma
    if args.kind == "jel":
        g = build.build_jel(corpus, coauthored_only=args.coauthored_only)
        rows = build.cluster_metrics(g, build.group_partition(g, "jel_first_letter"))
        header, body = render.metric_rows(rows, graph_mod.JEL_COLUMNS, "JEL", {"AGD": 2, "D": 2}, comma)
    else:
        g = build.build_coauthor(corpus, args.window, args.gender, args.include_singles)
        if args.kind == "affil":
            rows = build.cluster_metrics(g, build.group_partition(g, "affiliation"))
            header, body = render.metric_rows(rows, graph_mod.AFFILIATION_COLUMNS, "Affiliation",
                                              {"AGD": 2}, comma)
        else:
            rows = graph_mod.component_metrics_table(g)
            header, body = render.metric_rows(rows, graph_mod.COMPONENT_COLUMNS, "Group", None, comma)
    graph_mod.write_edge_list(g, args.output)
    _emit(_table(args, header, body))


def _cmd_metrics(args):
    g = graph_mod.read_edge_list(args.graph)
    frame = metrics.metric_frame(g, include_rw=args.rw, damping=args.damping)
    _emit(metrics.dumps_frame(frame), args.output)


def _read_frame(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CoauthnetError(f"cannot read {path}: {exc}") from exc
    return metrics.loads_frame(text)


def _cmd_stats(args):
    comma, dec = args.decimal_comma, args.decimals
    if args.what == "top":
        if not args.metric:
            raise UsageError("stats top: --metric is required")
        if args.k < 1:
            raise UsageError("stats top: --k must be >= 1")
    if args.what in ("degree-dist", "smallworld", "kcore"):
        g = graph_mod.read_edge_list(args.input)
        if args.what == "degree-dist":
            dist = stats.degree_distribution(g)
            body = [[str(d), str(c)] for d, c in dist.histogram.items()]
            text = _table(args, ["degree", "count"], body)
        elif args.what == "kcore":
            res = metrics.kcore(g)
            body = [[str(k), str(i + 1), str(len(c)), " ".join(sorted(c))]
                    for k, comps in res.cores.items() for i, c in enumerate(comps)]
            text = _table(args, ["k", "core", "size", "members"], body)
        else:
            rep = stats.small_world_report(g)
            body = [
                ["g", str(rep.g)],
                ["ln_g", render.format_number(rep.ln_g, dec, comma)],
                ["giant_size", str(rep.giant_size)],
                ["ln_giant", render.format_number(rep.ln_giant, dec, comma)],
                ["giant_share_nodes", render.format_number(rep.giant_share_nodes, dec, comma)],
                ["giant_share_edges", render.format_number(rep.giant_share_edges, dec, comma)],
                ["AGD_giant", render.format_number(rep.AGD_giant, dec, comma)],
                ["MGD_giant", str(rep.MGD_giant)],
                ["verdict", rep.verdict_text],
            ]
            text = _table(args, ["field", "value"], body)
        return _emit(text, args.output)

    frame = _read_frame(args.input)
    if args.what == "corr":
        cols = args.columns or [c for c in metrics.METRIC_COLUMNS + metrics.RW_COLUMNS if c in frame.columns]
        header, body = render.frame_rows(stats.correlation_matrix(frame, cols), dec, comma, "")
        text = _table(args, header, body)
    elif args.what == "deviation":
        if args.key not in frame.columns:
            raise CoauthnetError(f"frame has no column {args.key!r}")
        cols = args.columns or [c for c in DEVIATION_METRICS if c in frame.columns]
        rows = stats.group_mean_deviation(frame, frame[args.key].to_dict(), cols, args.classes)
        body = [[r.group, str(r.size), *(render.format_number(r.deviation[c], 1, comma) + "%" for c in cols)]
                for r in rows]
        text = _table(args, ["group", "n", *cols], body)
    else:
        flt = ("gender", args.gender) if args.gender else None
        try:
            top = stats.top_k(frame, args.metric, args.k, flt)
        except KeyError as exc:
            raise CoauthnetError(str(exc.args[0])) from None
        header, body = render.frame_rows(top.reset_index(drop=True), dec, comma)
        text = _table(args, ["rank", *header[1:]], [[str(i + 1), *r[1:]] for i, r in enumerate(body)])
    _emit(text, args.output)


def _cmd_export(args):
    g = graph_mod.read_edge_list(args.graph)
    frame = _read_frame(args.frame) if args.frame else None
    if args.fmt == "svg":
        if args.plot == "scatter_matrix":
            if frame is None:
                frame = metrics.metric_frame(g)
            cols = args.columns or ["degree", "betweenness", "closeness", "eigenvector", "pagerank"]
            data = stats.scatter_matrix_data(frame, cols)
        else:
            data = stats.degree_distribution(g)
        render.plot_svg(args.plot, data, args.output)
    else:
        render.export_graph(g, "edge_csv" if args.fmt == "edges" else args.fmt, args.output, frame)


_COMMANDS = {
    "ingest": _cmd_ingest,
    "simulate": _cmd_simulate,
    "timeline": _cmd_timeline,
    "build": _cmd_build,
    "metrics": _cmd_metrics,
    "stats": _cmd_stats,
    "export": _cmd_export,
}


def run(argv=None) -> int:
    """Run the CLI and return the exit status instead of exiting."""
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (CoauthnetError, ValueError, KeyError, OSError) as exc:
        print(f"coauthnet: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
