"""``twwkit`` command-line interface.

Every command prints a report of ``key=value`` lines on stdout.  Exit codes:
0 success, 1 usage, 2 parse error, 3 invalid certificate, 4 budget exceeded,
5 verification failure.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from pathlib import Path

from .budget import Limits
from .cwexpr import eval_expr, exact_cw, exact_lcw, expr_width, is_linear, parse_expr, serialize_expr
from .errors import BudgetExceeded, GraphError, InvalidCertificate, ParseError
from .graphcore import KINDS, generate, parse_graph, serialize_graph
from .homcount import (
    DEFAULT_BRUTE_WORK,
    CountStats,
    brute_count,
    brute_work,
    count_g_side,
    count_h_side,
    trivial_sequence,
)
from .rankwidth import (
    decomposition_width,
    exact_lrw,
    exact_rw,
    is_linear_decomposition,
    parse_decomposition,
    serialize_decomposition,
)
from .transform import branch_to_seq, expr_to_branch, expr_to_seq, seq_to_expr, seq_to_linexpr
from .trigraph import WIDTHS, exact_width, parse_sequence, sequence_width, serialize_sequence
from .verify import SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_CERT, EXIT_BUDGET, EXIT_VERIFY = range(6)

PARAMS = WIDTHS + ("cw", "lcw", "rw", "lrw")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class Report:
    """Ordered key=value report; ``wall_time`` is always printed last."""

    def __init__(self, command: str):
        self.items: list[tuple[str, object]] = [("command", command)]
        self.start = time.perf_counter()

    def add(self, key: str, value) -> None:
        self.items.append((key, value))

    def digest(self, key: str, path: str) -> str:
        data = Path(path).read_bytes()
        self.add(f"{key}_sha256", hashlib.sha256(data).hexdigest())
        return data.decode()

    def emit(self, out=None) -> None:
        out = out or sys.stdout
        for k, v in self.items:
            out.write(f"{k}={v}\n")
        out.write(f"wall_time={time.perf_counter() - self.start:.6f}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _limits(args) -> Limits:
    return Limits(max_n=args.max_n, max_states=args.max_states, time_ms=args.time_ms)


def _write(path: str, text: str) -> None:
    Path(path).write_text(text if text.endswith("\n") else text + "\n")


# -- width ----------------------------------------------------------------------


def cmd_width(args, report: Report) -> int:
    _read(args.input)
    g = parse_graph(report.digest("input", args.input))
    report.add("param", args.param)
    report.add("n", g.n)
    report.add("m", g.m)
    if args.exact:
        report.add("mode", "exact")
        lim = _limits(args)
        if args.param in WIDTHS:
            value, seq = exact_width(g, args.param, lim)
            cert = serialize_sequence(seq)
        elif args.param in ("cw", "lcw"):
            search = exact_cw if args.param == "cw" else exact_lcw
            value, expr = search(g, limits=lim)
            cert = serialize_expr(expr)
        elif args.param == "rw":
            value, tree = exact_rw(g, limits=lim)
            cert = serialize_decomposition(tree)
        else:
            value, order = exact_lrw(g, limits=lim)
            cert = " ".join(map(str, order))
    else:
        report.add("mode", "certificate")
        text = _read(args.certificate)
        report.digest("certificate", args.certificate)
        if args.param in WIDTHS:
            seq = parse_sequence(text, g)
            value = sequence_width(seq, args.param)
        elif args.param in ("cw", "lcw"):
            expr = parse_expr(text)
            if eval_expr(expr).graph != g:
                raise InvalidCertificate("expression does not evaluate to the input graph")
            if args.param == "lcw" and not is_linear(expr):
                raise InvalidCertificate("expression is not linear")
            value = expr_width(expr)
        else:
            tree = parse_decomposition(text, g)
            if args.param == "lrw" and not is_linear_decomposition(tree):
                raise InvalidCertificate("decomposition is not linear")
            value = decomposition_width(g, tree)
        cert = None
    report.add("value", value)
    if args.emit_certificate:
        if cert is None:
            raise UsageError("--emit-certificate needs --exact")
        _write(args.emit_certificate, cert)
        report.add("certificate_out", args.emit_certificate)
    return EXIT_OK


# -- convert --------------------------------------------------------------------

CONVERSIONS = {
    ("seq", "expr"),
    ("seq", "linexpr"),
    ("expr", "seq"),
    ("linexpr", "seq"),
    ("expr", "branch"),
    ("linexpr", "branch"),
    ("branch", "seq"),
}


def cmd_convert(args, report: Report) -> int:
    src, dst = args.source, args.target
    if (src, dst) not in CONVERSIONS:
        supported = ", ".join(f"{a}->{b}" for a, b in sorted(CONVERSIONS))
        raise UsageError(f"unsupported conversion {src}->{dst} (supported: {supported})")
    _read(args.input)
    g = parse_graph(report.digest("input", args.input))
    text = _read(args.certificate)
    report.digest("certificate", args.certificate)
    report.add("from", src)
    report.add("to", dst)

    if src == "seq":
        seq = parse_sequence(text, g)
        if dst == "expr":
            kappa = sequence_width(seq, "ctww")
            expr = seq_to_expr(g, seq)
            report.add("input_ctww", kappa)
            report.add("bound", f"width<=ctww+1={kappa + 1}")
        else:
            kappa = sequence_width(seq, "tvtww")
            expr = seq_to_linexpr(g, seq)
            report.add("input_tvtww", kappa)
            report.add("bound", f"width<=tvtww+1={kappa + 1}")
        report.add("width", expr_width(expr))
        out = serialize_expr(expr)
    elif src in ("expr", "linexpr"):
        expr = parse_expr(text)
        if src == "linexpr" and not is_linear(expr):
            raise InvalidCertificate("expression is not linear")
        k = expr_width(expr)
        report.add("input_width", k)
        if dst == "seq":
            seq = expr_to_seq(g, expr)
            ctww = sequence_width(seq, "ctww")
            report.add("ctww", ctww)
            if is_linear(expr):
                report.add("tvtww", sequence_width(seq, "tvtww"))
                report.add("bound", f"ctww<=tvtww<=k={k}")
            else:
                report.add("bound", f"ctww<=2k-1={2 * k - 1}")
            out = serialize_sequence(seq)
        else:
            if eval_expr(expr).graph != g:
                raise InvalidCertificate("expression does not evaluate to the input graph")
            tree = expr_to_branch(expr)
            report.add("width", decomposition_width(g, tree))
            out = serialize_decomposition(tree)
    else:
        tree = parse_decomposition(text, g)
        r = args.r if args.r is not None else decomposition_width(g, tree)
        seq = branch_to_seq(g, tree, r)
        report.add("r", r)
        report.add("ctww", sequence_width(seq, "ctww"))
        report.add("bound", f"ctww<=2^(r+1)-1={2 ** (r + 1) - 1}")
        out = serialize_sequence(seq)
    _write(args.out, out)
    report.add("output", args.out)
    return EXIT_OK


# -- count ------------------------------------------------------------------------


def cmd_count(args, report: Report) -> int:
    _read(args.graph)
    _read(args.template)
    g = parse_graph(report.digest("graph", args.graph))
    h = parse_graph(report.digest("template", args.template))
    lim = _limits(args)
    g_seq = parse_sequence(_read(args.g_seq), g) if args.g_seq else None
    h_seq = parse_sequence(_read(args.h_seq), h) if args.h_seq else None

    algo = args.algo
    if algo == "auto":
        if g_seq is not None:
            algo = "dpg"
        elif h_seq is not None:
            algo = "dph"
        else:
            algo = "dpg"
            try:
                g_seq = exact_width(g, "ctww", lim)[1]
            except BudgetExceeded:
                try:
                    h_seq = exact_width(h, "ctww", lim)[1]
                    algo = "dph"
                except BudgetExceeded:
                    algo = "brute"
    report.add("algo", algo)
    stats = CountStats()
    if algo == "brute":
        work = brute_work(g, h)
        count = brute_count(g, h, max_work=args.max_work or DEFAULT_BRUTE_WORK, limits=lim)
        stats = None
        if args.stats:
            report.add("maps_bound", work)
    elif algo == "dpg":
        seq = g_seq or trivial_sequence(g)
        report.add("g_seq_ctww", sequence_width(seq, "ctww"))
        count = count_g_side(g, seq, h, stats=stats, limits=lim)
    else:
        seq = h_seq or trivial_sequence(h)
        report.add("h_seq_ctww", sequence_width(seq, "ctww"))
        count = count_h_side(g, h, seq, stats=stats, limits=lim, max_work=args.max_work)
    report.add("count", count)
    if args.stats and stats is not None:
        report.add("merges", len(stats.merges))
        report.add("families", stats.total_families)
        report.add("families_bound", sum(b for _, _, b in stats.merges))
        report.add("peak_table", stats.peak_table)
    return EXIT_OK


# -- verify -----------------------------------------------------------------------


def cmd_verify(args, report: Report) -> int:
    report.add("suite", args.suite)
    report.add("seed", args.seed)
    result = run_suite(args.suite, args.max_n, args.seed)
    report.add("instances", result.instances)
    report.add("checks", result.checks)
    report.add("failures", len(result.failures))
    if result.ok:
        report.add("status", "pass")
        return EXIT_OK
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for i, f in enumerate(result.failures):
        stem = f"{args.suite}_{i:03d}"
        for role, graph in f.graphs.items():
            _write(str(out_dir / f"{stem}_{role}.gr"), f"# {f.check}: {f.name}\n# {f.detail}\n" + serialize_graph(graph))
        report.add(f"failure_{i}", f"{f.check} | {f.name} | {f.detail}")
    report.add("repro_dir", str(out_dir))
    report.add("status", "fail")
    return EXIT_VERIFY


# -- gen --------------------------------------------------------------------------


def cmd_gen(args, report: Report) -> int:
    params = {}
    for key in ("n", "p", "a", "b", "rows", "cols"):
        val = getattr(args, key)
        if val is not None:
            params[key] = val
    g = generate(args.kind, seed=args.seed, **params)
    text = serialize_graph(g)
    report.add("kind", args.kind)
    report.add("seed", args.seed)
    report.add("n", g.n)
    report.add("m", g.m)
    report.add("sha256", hashlib.sha256(text.encode()).hexdigest())
    if args.out:
        _write(args.out, text)
        report.add("output", args.out)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return EXIT_OK


# -- wiring -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twwkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def budget_flags(p):
        p.add_argument("--max-n", type=int, default=None, help="largest n for exhaustive search")
        p.add_argument("--max-states", type=int, default=None, help="cap on search states")
        p.add_argument(
            "--time-ms", type=int, default=None, help="soft time budget (default: $TWWKIT_BUDGET_MS, if set)"
        )

    p = sub.add_parser("width", help="compute or check a width parameter")
    p.add_argument("--input", required=True, help="graph file")
    p.add_argument("--param", required=True, choices=PARAMS)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exact", action="store_true", help="exhaustive search")
    mode.add_argument("--certificate", help="certificate file to evaluate")
    p.add_argument("--emit-certificate", metavar="PATH", help="write the witness of --exact")
    budget_flags(p)
    p.set_defaults(func=cmd_width)

    p = sub.add_parser("convert", help="convert between certificates")
    p.add_argument("--input", required=True, help="graph file")
    p.add_argument("--from", dest="source", required=True, choices=("seq", "expr", "linexpr", "branch"))
    p.add_argument("--to", dest="target", required=True, choices=("seq", "expr", "linexpr", "branch"))
    p.add_argument("--certificate", required=True, help="input certificate file")
    p.add_argument("--out", required=True, help="output certificate file")
    p.add_argument("--r", type=int, default=None, help="claimed decomposition width for branch->seq")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("count", help="count homomorphisms from --graph to --template")
    p.add_argument("--graph", required=True)
    p.add_argument("--template", required=True)
    p.add_argument("--algo", choices=("auto", "brute", "dpg", "dph"), default="auto")
    p.add_argument("--g-seq", help="contraction sequence of the graph (for dpg)")
    p.add_argument("--h-seq", help="contraction sequence of the template (for dph)")
    p.add_argument("--stats", action="store_true", help="report enumeration counters")
    p.add_argument("--max-work", type=int, default=None, help="work cap for brute/dph")
    budget_flags(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("verify", help="run a self-check suite")
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default="twwkit-repro", help="where failing instances are written")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate a graph")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    report = Report(args.command)
    try:
        code = args.func(args, report)
    except UsageError as exc:
        print(f"twwkit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, GraphError) as exc:
        print(f"twwkit: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidCertificate as exc:
        print(f"twwkit: invalid certificate: {exc}", file=sys.stderr)
        return EXIT_CERT
    except BudgetExceeded as exc:
        print(f"twwkit: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    report.emit()
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
