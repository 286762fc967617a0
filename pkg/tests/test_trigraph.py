from __future__ import annotations

import pytest
from hypothesis import given

from oracles import best_width_by_enumeration, quotient_by_definition, width_by_definition
from strategies import graphs, graphs_with_sequences
from twwkit.budget import Limits
from twwkit.errors import BudgetExceeded, InvalidCertificate, ParseError
from twwkit.graphcore import Graph, bits, corpus, generate
from twwkit.trigraph import (
    WIDTHS,
    ContractionSequence,
    contract,
    exact_width,
    parse_sequence,
    partitions,
    quotient,
    red_components,
    replay,
    sequence_width,
    serialize_sequence,
    trigraph_width,
    validate_sequence,
)


def _as_definition_sets(t):
    black = {frozenset(e) for e in t.black}
    red = {frozenset(e) for e in t.red}
    return black, red


def _parts_of(masks):
    return [list(bits(m)) for m in masks]


@given(graphs_with_sequences(max_n=7))
def test_quotient_matches_definition(gs):
    g, seq = gs
    for masks in partitions(seq):
        parts = _parts_of(masks)
        assert _as_definition_sets(quotient(g, parts)) == quotient_by_definition(g, parts)


@given(graphs_with_sequences(max_n=7))
def test_contraction_rule_agrees_with_quotient(gs):
    # contracting step by step must give the quotient by the current partition
    g, seq = gs
    for t, masks in zip(replay(seq), partitions(seq)):
        assert t == quotient(g, _parts_of(masks))


@given(graphs_with_sequences(max_n=7))
def test_widths_match_definition(gs):
    g, seq = gs
    for t in replay(seq):
        black, red = quotient_by_definition(g, t.parts)
        for measure in WIDTHS:
            assert trigraph_width(t, measure) == width_by_definition(list(t.parts), red, measure)


@given(graphs_with_sequences(max_n=7))
def test_red_components_partition_parts_and_are_red_closed(gs):
    g, seq = gs
    for t in replay(seq):
        comps = red_components(t)
        flat = [p for c in comps for p in c]
        assert sorted(flat, key=min) == list(t.parts)
        where = {p: i for i, c in enumerate(comps) for p in c}
        for a, b in t.red:
            assert where[a] == where[b]


def test_contract_cases_by_hand():
    # path 0-1-2-3: after merging 0 and 2, vertex 1 sees both, vertex 3 only 2
    g = generate("path", n=4)
    t = quotient(g, [[v] for v in range(4)])
    a, b, c, d = t.parts
    t2 = contract(t, a, c)
    ac = a | c
    assert t2.relation(ac, b) == "black"
    assert t2.relation(ac, d) == "red"
    assert ac in t2.loops()
    with pytest.raises(ValueError):
        contract(t2, ac, ac)
    with pytest.raises(ValueError):
        contract(t2, a, b)


def test_single_vertex_widths():
    g = Graph(1)
    seq = ContractionSequence(g, ())
    assert [sequence_width(seq, m) for m in WIDTHS] == [0, 1, 0, 0]
    for m in WIDTHS:
        assert exact_width(g, m)[0] == sequence_width(seq, m)


def test_empty_and_complete_graphs():
    for n in range(2, 7):
        for g in (generate("empty", n=n), generate("complete", n=n)):
            assert exact_width(g, "tww")[0] == 0
            assert exact_width(g, "ctww")[0] == 1
            # growing one part keeps a single red loop and nothing else
            assert exact_width(g, "ttww")[0] == 1


@pytest.mark.parametrize("measure", WIDTHS)
def test_exact_width_matches_enumeration(measure):
    for name, g in corpus(5, seed=2):
        want = best_width_by_enumeration(g, measure)
        got, seq = exact_width(g, measure)
        assert got == want, name
        validate_sequence(seq)
        assert sequence_width(seq, measure) == got, name


@given(graphs(max_n=5))
def test_exact_ctww_matches_enumeration_random(g):
    assert exact_width(g, "ctww")[0] == best_width_by_enumeration(g, "ctww")


@given(graphs_with_sequences(max_n=6))
def test_exact_width_never_exceeds_a_random_sequence(gs):
    g, seq = gs
    for m in WIDTHS:
        assert exact_width(g, m)[0] <= sequence_width(seq, m)


def test_sequence_text_round_trip():
    g = generate("cycle", n=5)
    seq = exact_width(g, "ctww")[1]
    back = parse_sequence("# comment\n" + serialize_sequence(seq), g)
    assert back.merges == seq.merges


@pytest.mark.parametrize(
    "text, exc",
    [
        ("0 1\n", InvalidCertificate),  # too few merges
        ("0 1\n1 0\n", InvalidCertificate),  # merges within one part
        ("0 1\n0 5\n", InvalidCertificate),  # out of range
        ("0 1 2\n1 2\n", ParseError),
        ("0 x\n0 2\n", ParseError),
    ],
)
def test_parse_sequence_errors(text, exc):
    with pytest.raises(exc):
        parse_sequence(text, generate("path", n=3))


def test_exact_width_budget():
    g = generate("cycle", n=12)
    with pytest.raises(BudgetExceeded):
        exact_width(g, "ctww")
    with pytest.raises(BudgetExceeded) as info:
        exact_width(generate("random", seed=1, n=9, p=0.5), "ctww", Limits(max_states=5))
    assert info.value.upper is not None


def test_unknown_measure():
    with pytest.raises(ValueError):
        exact_width(Graph(2), "xyz")
