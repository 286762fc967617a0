from __future__ import annotations

import pytest
from hypothesis import given

from strategies import graphs_with_sequences
from twwkit import fixtures
from twwkit.cwexpr import (
    Vertex,
    check_claim_fresh_right,
    check_claim_left_labels,
    eval_expr,
    exact_cw,
    exact_lcw,
    expr_width,
    is_linear,
    parse_expr,
    walk,
)
from twwkit.errors import InvalidCertificate
from twwkit.graphcore import Graph, corpus, generate
from twwkit.rankwidth import decomposition_width, enumerate_decompositions, exact_rw, leaf_list
from twwkit.trigraph import ContractionSequence, exact_width, replay, sequence_width
from twwkit.transform import branch_to_seq, expr_to_branch, expr_to_seq, seq_to_expr, seq_to_linexpr


def _same(a: Graph, b: Graph) -> bool:
    return a.n == b.n and set(a.edges) == set(b.edges)


@given(graphs_with_sequences(max_n=7))
def test_seq_to_expr_on_arbitrary_sequences(gs):
    g, seq = gs
    kappa = sequence_width(seq, "ctww")
    e = seq_to_expr(g, seq)
    assert _same(eval_expr(e).graph, g)
    assert expr_width(e) <= kappa + 1
    assert check_claim_left_labels(e, kappa)


@given(graphs_with_sequences(max_n=7))
def test_seq_to_linexpr_on_arbitrary_sequences(gs):
    g, seq = gs
    kappa = sequence_width(seq, "tvtww")
    e = seq_to_linexpr(g, seq)
    assert _same(eval_expr(e).graph, g)
    assert is_linear(e)
    assert expr_width(e) <= kappa + 1
    assert check_claim_fresh_right(e)


@given(graphs_with_sequences(max_n=7))
def test_expr_to_seq_round_trip(gs):
    g, seq = gs
    e = seq_to_expr(g, seq)
    back = expr_to_seq(g, e)
    assert sequence_width(back, "ctww") <= 2 * expr_width(e) - 1
    lin = seq_to_linexpr(g, seq)
    back = expr_to_seq(g, lin)
    assert sequence_width(back, "ctww") <= expr_width(lin)
    assert sequence_width(back, "tvtww") <= expr_width(lin)


@given(graphs_with_sequences(max_n=7))
def test_union_tree_width_at_most_ctww(gs):
    g, seq = gs
    t = expr_to_branch(seq_to_expr(g, seq))
    assert sorted(leaf_list(t)) == list(range(g.n))
    assert decomposition_width(g, t) <= sequence_width(seq, "ctww")


def test_round_trip_on_optimal_witnesses():
    for name, g in corpus(6, seed=8):
        kappa, seq = exact_width(g, "ctww")
        e = seq_to_expr(g, seq)
        assert _same(eval_expr(e).graph, g), name
        assert expr_width(e) <= kappa + 1
        assert sequence_width(expr_to_seq(g, e), "ctww") <= 2 * (kappa + 1) - 1


def test_c7_examples():
    g, seq = fixtures.c7()
    e = seq_to_expr(g, seq)
    assert expr_width(e) <= 4 and _same(eval_expr(e).graph, g)
    lin = seq_to_linexpr(g, seq)
    assert expr_width(lin) <= sequence_width(seq, "tvtww") + 1
    assert decomposition_width(g, expr_to_branch(e)) <= 3


def test_twin_merges_on_k4():
    g = generate("complete", n=4)
    seq = ContractionSequence(g, ((0, 1), (0, 2), (0, 3)))
    assert sequence_width(seq, "ctww") == 1
    assert expr_width(seq_to_expr(g, seq)) <= 2


def test_path_p3_linear():
    g = generate("path", n=3)
    seq = ContractionSequence(g, ((0, 1), (0, 2)))
    e = seq_to_linexpr(g, seq)
    assert is_linear(e)
    assert expr_width(e) <= sequence_width(seq, "tvtww") + 1


def test_single_vertex():
    g = Graph(1)
    seq = ContractionSequence(g, ())
    assert isinstance(seq_to_expr(g, seq), Vertex)
    assert isinstance(seq_to_linexpr(g, seq), Vertex)
    assert expr_to_branch(parse_expr("v(1)")) == 0
    assert sequence_width(expr_to_seq(g, parse_expr("v(1)")), "ctww") == 1


def test_expr_to_seq_examples():
    k2 = parse_expr("e(1,2,(v(1)+v(2)))")
    seq = expr_to_seq(generate("complete", n=2), k2)
    assert sequence_width(seq, "ctww") <= 2
    assert decomposition_width(generate("complete", n=2), expr_to_branch(k2)) == 1
    cograph = generate("cograph", seed=3, n=6)
    k, e = exact_cw(cograph)
    assert k <= 2
    assert sequence_width(expr_to_seq(cograph, e), "ctww") <= 3


def _label_classes_everywhere(e) -> set[frozenset]:
    """Label classes (as sets of global vertex ids) of every subexpression."""
    whole = eval_expr(e)
    gid = {name: v for v, name in enumerate(whole.names)}
    out = set()
    for node in walk(e):
        sub = eval_expr(node)
        for lab in set(sub.labels):
            out.add(frozenset(gid[sub.names[v]] for v in range(sub.graph.n) if sub.labels[v] == lab))
    return out


def _before_final_merges(e, seq):
    """Trigraphs up to the point where only the top-level label classes remain."""
    final_labels = len(set(eval_expr(e).labels))
    return replay(seq)[: len(seq.merges) - final_labels + 2]


def test_a2_parts_stay_inside_label_classes():
    e = fixtures.a2()
    g = eval_expr(e).graph
    seq = expr_to_seq(g, e)
    assert sequence_width(seq, "ctww") <= 2 * expr_width(e) - 1
    # every part ever formed is a set of vertices that share a label at some
    # point of the construction, so red edges stay inside the union sides
    for t in _before_final_merges(e, seq):
        for part in t.parts:
            assert any(part <= c for c in _label_classes_everywhere(e)), sorted(part)


@given(graphs_with_sequences(max_n=6))
def test_expr_to_seq_parts_stay_inside_label_classes(gs):
    g, seq = gs
    e = seq_to_expr(g, seq)
    classes = _label_classes_everywhere(e)
    for t in _before_final_merges(e, expr_to_seq(g, e)):
        for part in t.parts:
            assert any(part <= c for c in classes)


def test_expr_to_seq_rejects_wrong_graph():
    with pytest.raises(InvalidCertificate):
        expr_to_seq(generate("path", n=2), parse_expr("(v(1)+v(2))"))


def test_branch_to_seq_on_optimal_decompositions():
    for name, g in corpus(7, seed=9):
        rw, t = exact_rw(g)
        seq = branch_to_seq(g, t, rw)
        assert sequence_width(seq, "ctww") <= 2 ** (rw + 1) - 1, name


@pytest.mark.parametrize("n", [4, 5, 6])
def test_branch_to_seq_on_every_decomposition(n):
    g = generate("cycle", n=n) if n > 3 else generate("path", n=n)
    for t in enumerate_decompositions(n):
        r = decomposition_width(g, t)
        assert sequence_width(branch_to_seq(g, t, r), "ctww") <= 2 ** (r + 1) - 1


def test_branch_to_seq_examples():
    k2 = generate("complete", n=2)
    assert sequence_width(branch_to_seq(k2, (0, 1), 1), "ctww") <= 3
    c5 = generate("cycle", n=5)
    rw, t = exact_rw(c5)
    assert sequence_width(branch_to_seq(c5, t, rw), "ctww") <= 2 ** (rw + 1) - 1
    star = generate("complete_bipartite", a=1, b=4)
    for t in enumerate_decompositions(5):
        if decomposition_width(star, t) == 1:
            assert sequence_width(branch_to_seq(star, t, 1), "ctww") <= 3


def test_branch_to_seq_rejects_understated_width():
    c5 = generate("cycle", n=5)
    rw, t = exact_rw(c5)
    with pytest.raises(InvalidCertificate):
        branch_to_seq(c5, t, rw - 1)
    with pytest.raises(InvalidCertificate):
        branch_to_seq(c5, ((0, 1), (2, 3)), 5)


def test_seq_from_another_graph_rejected():
    g = generate("path", n=3)
    seq = ContractionSequence(generate("cycle", n=3), ((0, 1), (0, 2)))
    with pytest.raises(InvalidCertificate):
        seq_to_expr(g, seq)


def test_linear_chain_on_optimal_witnesses():
    for name, g in corpus(6, seed=10):
        tv, seq = exact_width(g, "tvtww")
        lin = seq_to_linexpr(g, seq)
        assert is_linear(lin) and expr_width(lin) <= tv + 1, name
        back = expr_to_seq(g, lin)
        assert sequence_width(back, "tvtww") <= expr_width(lin)
        lcw, le = exact_lcw(g)
        assert sequence_width(expr_to_seq(g, le), "tvtww") <= lcw
