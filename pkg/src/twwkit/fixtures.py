"""Bundled example instances and the expected trigraphs of the C7 walkthrough."""

from __future__ import annotations

from importlib import resources

from .cwexpr import Expr, parse_expr
from .graphcore import Graph, parse_graph
from .trigraph import ContractionSequence, Trigraph, parse_sequence

LETTERS = "abcdefghij"


def data_text(name: str) -> str:
    return resources.files("twwkit").joinpath("data").joinpath(name).read_text()


def c7() -> tuple[Graph, ContractionSequence]:
    g = parse_graph(data_text("c7.gr"))
    return g, parse_sequence(data_text("c7.cs"), g)


def a1() -> tuple[Graph, ContractionSequence]:
    g = parse_graph(data_text("a1.gr"))
    return g, parse_sequence(data_text("a1.cs"), g)


def a2() -> Expr:
    return parse_expr(data_text("a2.cwe"))


# Expected trigraphs G7..G1 for c7.cs, written with letters a..g for 0..6.
# Each entry: (parts, black edges, red edges); "xy" pairs join two parts,
# and a part paired with itself is a red loop.
C7_TRIGRAPHS: list[tuple[list[str], list[tuple[str, str]], list[tuple[str, str]]]] = [
    (
        ["a", "b", "c", "d", "e", "f", "g"],
        [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f"), ("f", "g"), ("a", "g")],
        [],
    ),
    (
        ["ab", "c", "d", "e", "f", "g"],
        [("c", "d"), ("d", "e"), ("e", "f"), ("f", "g")],
        [("ab", "c"), ("ab", "g"), ("ab", "ab")],
    ),
    (
        ["abc", "d", "e", "f", "g"],
        [("d", "e"), ("e", "f"), ("f", "g")],
        [("abc", "d"), ("abc", "g"), ("abc", "abc")],
    ),
    (
        ["abcd", "e", "f", "g"],
        [("e", "f"), ("f", "g")],
        [("abcd", "e"), ("abcd", "g"), ("abcd", "abcd")],
    ),
    (
        ["abcde", "f", "g"],
        [("f", "g")],
        [("abcde", "f"), ("abcde", "g"), ("abcde", "abcde")],
    ),
    (
        ["abcdef", "g"],
        [],
        [("abcdef", "g"), ("abcdef", "abcdef")],
    ),
    (
        ["abcdefg"],
        [],
        [("abcdefg", "abcdefg")],
    ),
]


def _part(word: str) -> frozenset:
    return frozenset(LETTERS.index(ch) for ch in word)


def expected_c7_trigraphs() -> list[Trigraph]:
    """The expected trigraphs as :class:`Trigraph` objects (edge pairs normalised)."""
    out = []
    for parts, black, red in C7_TRIGRAPHS:
        ps = tuple(sorted((_part(p) for p in parts), key=min))

        def norm(x, y):
            a, b = _part(x), _part(y)
            return (a, b) if min(a) <= min(b) else (b, a)

        out.append(Trigraph(ps, frozenset(norm(x, y) for x, y in black), frozenset(norm(x, y) for x, y in red)))
    return out
