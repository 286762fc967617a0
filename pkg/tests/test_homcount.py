from __future__ import annotations

import itertools

import pytest
from hypothesis import given

from strategies import graphs, graphs_with_sequences
from twwkit import fixtures
from twwkit.errors import BudgetExceeded, InvalidCertificate
from twwkit.graphcore import Graph, corpus, generate
from twwkit.homcount import (
    CountStats,
    brute_count,
    count_g_side,
    count_h_side,
    exists_hom,
    trivial_sequence,
)
from twwkit.trigraph import ContractionSequence, exact_width


def hom_by_definition(g: Graph, h: Graph) -> int:
    """Check every map V_G -> V_H."""
    return sum(
        1
        for f in itertools.product(range(h.n), repeat=g.n)
        if all(h.has_edge(f[u], f[v]) for u, v in g.edges)
    )


def test_small_examples():
    assert brute_count(generate("complete", n=2), generate("cycle", n=4)) == 8
    assert brute_count(generate("empty", n=3), generate("path", n=4)) == 64
    assert brute_count(generate("cycle", n=5), generate("complete", n=3)) == 30
    k2 = generate("complete", n=2)
    assert count_g_side(k2, ContractionSequence(k2, ((0, 1),)), generate("cycle", n=4)) == 8
    c5, k3 = generate("cycle", n=5), generate("complete", n=3)
    assert count_g_side(c5, trivial_sequence(c5), k3) == 30
    assert count_h_side(c5, k3, trivial_sequence(k3)) == 30
    e3 = generate("empty", n=3)
    h4 = generate("random", seed=2, n=4, p=0.5)
    assert count_h_side(e3, h4, trivial_sequence(h4)) == 64


@given(graphs(max_n=5), graphs(max_n=4))
def test_brute_force_matches_definition(g, h):
    assert brute_count(g, h) == hom_by_definition(g, h)


@given(graphs_with_sequences(max_n=6), graphs_with_sequences(max_n=4))
def test_both_dynamic_programs_match_brute_force(gs, hs):
    (g, seq), (h, seq_h) = gs, hs
    want = brute_count(g, h)
    assert count_g_side(g, seq, h) == want
    assert count_h_side(g, h, seq_h) == want


def test_corpus_pairs_with_optimal_sequences():
    gs = corpus(5, seed=12)
    hs = corpus(4, seed=13)
    for gname, g in gs[::3]:
        seq = exact_width(g, "ctww")[1]
        for hname, h in hs[::4]:
            want = brute_count(g, h)
            assert count_g_side(g, seq, h) == want, (gname, hname)
            assert count_h_side(g, h, exact_width(h, "ctww")[1]) == want, (gname, hname)


def test_c7_template_with_its_sequence():
    h, seq_h = fixtures.c7()
    for name, g in corpus(5, seed=14):
        assert count_h_side(g, h, seq_h, max_work=None) == brute_count(g, h), name


def _profiles_by_definition(g: Graph, h: Graph, comp) -> dict:
    """Exact-image profile -> number of H-colorings of g[∪comp]."""
    verts = sorted(set().union(*comp))
    edges = [(u, v) for u, v in g.edges if u in verts and v in verts]
    out: dict = {}
    for f in itertools.product(range(h.n), repeat=len(verts)):
        col = dict(zip(verts, f))
        if all(h.has_edge(col[u], col[v]) for u, v in edges):
            key = tuple(_image(col, part) for part in comp)
            out[key] = out.get(key, 0) + 1
    return out


def _image(col, part) -> int:
    m = 0
    for x in part:
        m |= 1 << col[x]
    return m


@given(graphs_with_sequences(max_n=5), graphs(max_n=3))
def test_g_side_tables_partition_the_colorings(gs, h):
    g, seq = gs
    seen = []

    def trace(step, comp, table):
        seen.append((comp, dict(table)))

    count_g_side(g, seq, h, trace=trace)
    assert len(seen) == len(seq.merges)
    for comp, table in seen:
        want = _profiles_by_definition(g, h, comp)
        assert {k: v for k, v in table.items() if v} == want


@given(graphs(min_n=3, max_n=6), graphs(max_n=4))
def test_sequence_independence(g, h):
    results = set()
    for seq in (
        trivial_sequence(g),
        ContractionSequence(g, tuple((g.n - 1, v) for v in range(g.n - 1))),
        ContractionSequence(g, tuple((v, v + 1) for v in range(g.n - 1))),
        exact_width(g, "ctww")[1],
    ):
        results.add(count_g_side(g, seq, h))
    assert len(results) == 1


def test_h_side_enumeration_accounting():
    g = generate("cycle", n=5)
    h, seq_h = fixtures.c7()
    stats = CountStats()
    count_h_side(g, h, seq_h, stats=stats)
    assert len(stats.merges) == h.n - 1
    for size, families, bound in stats.merges:
        assert families == bound == (size + 2) ** g.n


def test_g_side_enumeration_within_bound():
    g, seq = fixtures.c7()
    h = generate("complete", n=3)
    stats = CountStats()
    count_g_side(g, seq, h, stats=stats)
    for size, families, bound in stats.merges:
        assert families <= bound == (2 ** h.n - 1) ** (size + 1)
    assert stats.peak_table > 0


def test_big_counts_do_not_overflow():
    g = generate("empty", n=25)
    h = generate("complete", n=6)
    want = 6**25
    assert want > 2**64
    assert count_g_side(g, trivial_sequence(g), h) == want
    assert brute_count(g, h) == want


def test_exists_hom():
    c5, c4, k2 = generate("cycle", n=5), generate("cycle", n=4), generate("complete", n=2)
    for strategy in ("auto", "brute", "dpg", "dph"):
        assert not exists_hom(c5, k2, strategy)
        assert exists_hom(c4, k2, strategy)
    k3 = generate("complete", n=3)
    for _, g in corpus(5, seed=15):
        assert exists_hom(g, k3) == (brute_count(g, k3) > 0)


def test_degenerate_templates():
    k1 = Graph(1)
    assert count_h_side(generate("empty", n=3), k1, trivial_sequence(k1)) == 1
    assert count_h_side(generate("path", n=3), k1, trivial_sequence(k1)) == 0
    assert count_g_side(Graph(1), trivial_sequence(Graph(1)), generate("cycle", n=4)) == 4
    k2 = generate("complete", n=2)
    assert count_h_side(generate("path", n=4), k2, trivial_sequence(k2)) == 2


def test_errors():
    g = generate("path", n=3)
    with pytest.raises(InvalidCertificate):
        count_g_side(g, trivial_sequence(generate("path", n=4)), g)
    with pytest.raises(ValueError):
        count_g_side(g, trivial_sequence(g), generate("empty", n=65))
    with pytest.raises(BudgetExceeded):
        brute_count(generate("path", n=12), generate("complete", n=6))
    with pytest.raises(BudgetExceeded):
        count_h_side(generate("path", n=16), generate("complete", n=6), trivial_sequence(generate("complete", n=6)))
    with pytest.raises(ValueError):
        exists_hom(g, g, "nope")
