"""Self-check suites behind ``twwkit verify``.

Each suite returns a list of :class:`Failure` records (empty means pass).
Instances are visited smallest first, so the first failure of a suite is a
minimal reproducer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import fixtures
from .budget import Limits
from .cwexpr import eval_expr, exact_cw, exact_lcw, expr_width
from .graphcore import Graph, SplitMix64, corpus
from .homcount import brute_count, count_g_side, count_h_side
from .rankwidth import exact_lrw, exact_rw
from .trigraph import exact_width, replay, sequence_width
from .transform import branch_to_seq, expr_to_seq, seq_to_expr, seq_to_linexpr

SUITES = ("bounds", "oracle", "golden")


@dataclass
class Failure:
    suite: str
    check: str
    name: str
    detail: str
    graphs: dict[str, Graph] = field(default_factory=dict)


@dataclass
class SuiteResult:
    suite: str
    instances: int = 0
    checks: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


class _Checker:
    def __init__(self, suite: str):
        self.result = SuiteResult(suite)

    def check(self, cond: bool, check: str, name: str, detail: str, **graphs: Graph) -> None:
        self.result.checks += 1
        if not cond:
            self.result.failures.append(Failure(self.result.suite, check, name, detail, graphs))


def run_bounds(max_n: int = 5, seed: int = 0) -> SuiteResult:
    """Width inequalities between all parameters, plus the conversion guarantees."""
    c = _Checker("bounds")
    lim = Limits(max_n=max(max_n, 1))
    for name, g in corpus(max_n, seed=seed):
        c.result.instances += 1
        ctww, seq = exact_width(g, "ctww", lim)
        tvtww, tvseq = exact_width(g, "tvtww", lim)
        ttww, _ = exact_width(g, "ttww", lim)
        cw, cw_expr = exact_cw(g, limits=lim)
        lcw, _ = exact_lcw(g, limits=lim)
        rw, tree = exact_rw(g, limits=lim)
        lrw, _ = exact_lrw(g, limits=lim)
        vals = f"ctww={ctww} tvtww={tvtww} ttww={ttww} cw={cw} lcw={lcw} rw={rw} lrw={lrw}"
        c.check(cw <= ctww + 1 <= 2 * cw, "cw<=ctww+1<=2cw", name, vals, g=g)
        c.check(lcw - 1 <= tvtww <= lcw, "lcw-1<=tvtww<=lcw", name, vals, g=g)
        c.check(tvtww <= 2 * ttww <= tvtww * (tvtww + 1), "tvtww<=2ttww<=tvtww(tvtww+1)", name, vals, g=g)
        c.check(rw <= ctww <= 2 ** (rw + 1) - 1, "rw<=ctww<=2^(rw+1)-1", name, vals, g=g)
        c.check(lrw <= tvtww <= 2 ** (lrw + 1) - 1, "lrw<=tvtww<=2^(lrw+1)-1", name, vals, g=g)
        try:
            w = expr_width(seq_to_expr(g, seq))
            c.check(w <= ctww + 1, "seq_to_expr width", name, f"width={w} ctww={ctww}", g=g)
            lw = expr_width(seq_to_linexpr(g, tvseq))
            c.check(lw <= tvtww + 1, "seq_to_linexpr width", name, f"width={lw} tvtww={tvtww}", g=g)
            back = sequence_width(expr_to_seq(g, cw_expr), "ctww")
            c.check(back <= 2 * cw - 1, "expr_to_seq ctww", name, f"ctww={back} cw={cw}", g=g)
            bts = sequence_width(branch_to_seq(g, tree, rw), "ctww")
            c.check(bts <= 2 ** (rw + 1) - 1, "branch_to_seq ctww", name, f"ctww={bts} rw={rw}", g=g)
        except AssertionError as exc:
            c.check(False, "conversion guarantee", name, str(exc), g=g)
    return c.result


def run_oracle(max_n: int = 5, seed: int = 0, pairs: int = 200, max_template: int = 4) -> SuiteResult:
    """Both dynamic programs against the brute-force counter."""
    c = _Checker("oracle")
    graphs = corpus(max_n, seed=seed)
    templates = corpus(max_template, seed=seed + 1)
    rng = SplitMix64(seed)
    chosen = sorted(
        ((graphs[rng.below(len(graphs))], templates[rng.below(len(templates))]) for _ in range(pairs)),
        key=lambda pair: (pair[0][1].n, pair[1][1].n),
    )
    lim = Limits(max_n=max(max_n, max_template, 1))
    seq_cache: dict[str, object] = {}
    for (gname, g), (hname, h) in chosen:
        c.result.instances += 1
        name = f"{gname}->{hname}"
        if gname not in seq_cache:
            seq_cache[gname] = exact_width(g, "ctww", lim)[1]
        if "H:" + hname not in seq_cache:
            seq_cache["H:" + hname] = exact_width(h, "ctww", lim)[1]
        want = brute_count(g, h, max_work=None)
        got_g = count_g_side(g, seq_cache[gname], h)
        c.check(got_g == want, "dpg == brute", name, f"dpg={got_g} brute={want}", g=g, h=h)
        got_h = count_h_side(g, h, seq_cache["H:" + hname], max_work=None)
        c.check(got_h == want, "dph == brute", name, f"dph={got_h} brute={want}", g=g, h=h)
    return c.result


def run_golden() -> SuiteResult:
    """The bundled worked examples."""
    c = _Checker("golden")
    g, seq = fixtures.c7()
    c.result.instances += 1
    got = replay(seq)
    want = fixtures.expected_c7_trigraphs()
    for k, (a, b) in enumerate(zip(got, want)):
        c.check(a == b, "c7 trigraph", f"G{g.n - k}", f"got {a} want {b}", g=g)
    c.check(len(got) == len(want), "c7 trigraph count", "c7", f"{len(got)} trigraphs", g=g)
    tww, ctww = sequence_width(seq, "tww"), sequence_width(seq, "ctww")
    c.check((tww, ctww) == (2, 3), "c7 sequence widths", "c7", f"tww={tww} ctww={ctww}", g=g)
    exact = exact_width(g, "ctww")[0]
    c.check(exact == 3, "c7 exact ctww", "c7", f"ctww={exact}", g=g)
    cw = exact_cw(g, limits=Limits(max_n=7))[0]
    c.check(cw == 4, "c7 exact cw", "c7", f"cw={cw}", g=g)

    g, seq = fixtures.a1()
    c.result.instances += 1
    ctww = sequence_width(seq, "ctww")
    c.check(ctww <= 3, "a1 sequence ctww", "a1", f"ctww={ctww}", g=g)
    w = expr_width(seq_to_expr(g, seq))
    c.check(w <= ctww + 1, "a1 expression width", "a1", f"width={w} ctww={ctww}", g=g)

    e = fixtures.a2()
    g = eval_expr(e).graph
    c.result.instances += 1
    ctww = sequence_width(expr_to_seq(g, e), "ctww")
    k = expr_width(e)
    c.check(ctww <= 2 * k - 1, "a2 sequence ctww", "a2", f"ctww={ctww} k={k}", g=g)
    return c.result


def run_suite(suite: str, max_n: int | None = None, seed: int = 0) -> SuiteResult:
    if suite == "bounds":
        return run_bounds(max_n or 5, seed)
    if suite == "oracle":
        return run_oracle(max_n or 5, seed)
    if suite == "golden":
        return run_golden()
    raise ValueError(f"unknown suite {suite!r}")
