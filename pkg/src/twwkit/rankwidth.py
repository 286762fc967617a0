"""Branch decompositions, GF(2) cut-rank, and exact (linear) rank-width.

A branch decomposition is stored rooted, as nested pairs: a leaf is a vertex
id (``int``) and an internal node is a 2-tuple ``(left, right)``.  Every tree
edge joins a non-root node to its parent and induces the bipartition
(leaves below the node, the rest).
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterator, Union

from .budget import Limits, Meter, check_size
from .errors import InvalidCertificate, ParseError
from .graphcore import Graph, bits

BranchDecomposition = Union[int, tuple]

DEFAULT_RW_MAX_N = 10
DEFAULT_LRW_MAX_N = 12


def gf2_rank(rows: list[int]) -> int:
    """Rank over GF(2) of a matrix given as a list of bitmask rows."""
    basis: list[int] = []  # kept with pairwise distinct leading bits
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
    return len(basis)


def cut_rank(g: Graph, x: int) -> int:
    """GF(2) rank of the adjacency matrix between vertex set ``x`` (a mask) and the rest."""
    if x & ~g.vertex_mask:
        raise ValueError("vertex set is not a subset of the graph")
    y = g.vertex_mask & ~x
    return gf2_rank([g.adj[v] & y for v in bits(x)])


# -- decomposition structure ---------------------------------------------------


def leaf_mask(t: BranchDecomposition) -> int:
    if isinstance(t, int):
        return 1 << t
    return leaf_mask(t[0]) | leaf_mask(t[1])


def leaf_list(t: BranchDecomposition) -> list[int]:
    if isinstance(t, int):
        return [t]
    return leaf_list(t[0]) + leaf_list(t[1])


def node_sets(t: BranchDecomposition) -> list[int]:
    """Leaf sets of all non-root nodes, i.e. one side of every tree edge."""
    out: list[int] = []

    def go(node) -> int:
        if isinstance(node, int):
            m = 1 << node
        else:
            m = go(node[0]) | go(node[1])
        out.append(m)
        return m

    go(t)
    out.pop()  # the root carries no edge
    return out


def validate_decomposition(g: Graph, t: BranchDecomposition) -> None:
    """Raise InvalidCertificate unless ``t`` is a binary tree whose leaves are exactly V(g)."""
    seen: list[int] = []

    def go(node):
        if isinstance(node, bool) or not isinstance(node, (int, tuple)):
            raise InvalidCertificate(f"bad decomposition node {node!r}")
        if isinstance(node, int):
            seen.append(node)
            return
        if len(node) != 2:
            raise InvalidCertificate("every internal node needs exactly two children")
        go(node[0])
        go(node[1])

    go(t)
    if sorted(seen) != list(range(g.n)):
        raise InvalidCertificate("decomposition leaves must be exactly the graph's vertices, once each")


def decomposition_width(g: Graph, t: BranchDecomposition) -> int:
    """Maximum cut-rank over the bipartitions given by the tree edges."""
    validate_decomposition(g, t)
    return max((cut_rank(g, m) for m in node_sets(t)), default=0)


def order_to_linear_decomposition(order: list[int]) -> BranchDecomposition:
    """Caterpillar ``(((v1 v2) v3) ... vn)`` for a vertex order."""
    if not order:
        raise ValueError("order must be nonempty")
    if sorted(order) != list(range(len(order))):
        raise ValueError("order must be a permutation of 0..n-1")
    t: BranchDecomposition = order[0]
    for v in order[1:]:
        t = (t, v)
    return t


def is_linear_decomposition(t: BranchDecomposition) -> bool:
    """Caterpillar shape: at every internal node one child is a leaf."""
    while not isinstance(t, int):
        left, right = t
        if isinstance(right, int):
            t = left
        elif isinstance(left, int):
            t = right
        else:
            return False
    return True


def linear_order(t: BranchDecomposition) -> list[int]:
    """Vertex order of a caterpillar decomposition."""
    if not is_linear_decomposition(t):
        raise ValueError("decomposition is not linear")
    tail: list[int] = []
    while not isinstance(t, int):
        left, right = t
        if isinstance(right, int):
            tail.append(right)
            t = left
        else:
            tail.append(left)
            t = right
    tail.append(t)
    return tail[::-1]


def enumerate_decompositions(n: int) -> Iterator[BranchDecomposition]:
    """All branch decompositions on leaves ``0..n-1`` (as unrooted trees), once each.

    Built by leaf insertion: leaf ``i`` subdivides one of the edges of a tree
    on ``0..i-1``.  Trees are rooted at the edge above leaf 0, so the
    number produced is (2n-5)!! for n >= 3.
    """
    if n < 1:
        return
    if n == 1:
        yield 0
        return

    def insert(t, leaf):
        # every node except the root has an edge above it; the root of a
        # rooted representation of an unrooted tree stands for one edge, so
        # subdividing "above the root" duplicates subdividing the edges of
        # its children.  We root trees at leaf 0, i.e. t = (0, rest).
        yield (t, leaf)
        if not isinstance(t, int):
            for sub in insert(t[0], leaf):
                yield (sub, t[1])
            for sub in insert(t[1], leaf):
                yield (t[0], sub)

    def grow(rest, i):
        if i == n:
            yield (0, rest)
            return
        for r in insert(rest, i):
            yield from grow(r, i + 1)

    yield from grow(1, 2)


# -- text format ------------------------------------------------------------------

_DTOK = re.compile(r"\s+|#[^\n]*|[()]|\d+|\S")


def parse_decomposition(text: str, g: Graph | None = None) -> BranchDecomposition:
    """Parse ``((0 1) (2 3))``; a bare vertex list ``0 1 2 3`` means a linear order."""
    toks: list[tuple[str, int]] = []
    for mt in _DTOK.finditer(text):
        tok = mt.group()
        if tok.isspace() or tok.startswith("#"):
            continue
        toks.append((tok, mt.start()))

    def err(msg, pos):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        return ParseError(msg, line, col)

    if not toks:
        raise err("empty decomposition", 0)
    if all(tok.isdigit() for tok, _ in toks) and len(toks) > 1:
        order = [int(tok) for tok, _ in toks]
        try:
            t = order_to_linear_decomposition(order)
        except ValueError as exc:
            raise err(str(exc), toks[0][1]) from None
    else:
        pos = 0

        def node():
            nonlocal pos
            if pos >= len(toks):
                raise err("unexpected end of input", len(text))
            tok, at = toks[pos]
            if tok.isdigit():
                pos += 1
                return int(tok)
            if tok != "(":
                raise err(f"unexpected token {tok!r}", at)
            pos += 1
            left = node()
            right = node()
            if pos >= len(toks) or toks[pos][0] != ")":
                where = toks[pos][1] if pos < len(toks) else len(text)
                raise err("internal node needs exactly two children", where)
            pos += 1
            return (left, right)

        t = node()
        if pos != len(toks):
            raise err(f"trailing input {toks[pos][0]!r}", toks[pos][1])
    if g is not None:
        validate_decomposition(g, t)
    return t


def serialize_decomposition(t: BranchDecomposition) -> str:
    if isinstance(t, int):
        return str(t)
    return f"({serialize_decomposition(t[0])} {serialize_decomposition(t[1])})"


# -- exact search -----------------------------------------------------------------
#
# A rooted decomposition corresponds to a recursive splitting of V; its width
# is the maximum cut-rank over all sets that occur below the root.  Minimising
# over splittings is a subset DP, O(3^n) cut-rank lookups.  Linear
# decompositions peel one vertex at a time, giving a 2^n DP over prefixes.


def exact_rw(g: Graph, limits: Limits | None = None) -> tuple[int, BranchDecomposition]:
    """Rank-width of ``g`` with an optimal branch decomposition."""
    limits = (limits or Limits()).with_defaults(DEFAULT_RW_MAX_N)
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    check_size(g.n, limits, "exact rw")
    meter = Meter(limits, "exact rw")

    @lru_cache(maxsize=None)
    def cr(s: int) -> int:
        return cut_rank(g, s)

    @lru_cache(maxsize=None)
    def best(s: int) -> tuple[int, BranchDecomposition]:
        if s & (s - 1) == 0:
            return 0, s.bit_length() - 1
        low = s & -s
        rest = s ^ low
        found = None
        # enumerate splits (a, s - a) with the lowest vertex in a
        sub = rest
        while True:
            a = low | sub
            b = s ^ a
            if b:
                meter.tick()
                bound = max(cr(a), cr(b))
                if found is None or bound < found[0]:
                    wa, ta = best(a)
                    wb, tb = best(b)
                    w = max(bound, wa, wb)
                    if found is None or w < found[0]:
                        found = (w, (ta, tb))
            if sub == 0:
                break
            sub = (sub - 1) & rest
        return found

    if g.n == 1:
        return 0, 0
    return best(g.vertex_mask)


def exact_lrw(g: Graph, limits: Limits | None = None) -> tuple[int, list[int]]:
    """Linear rank-width of ``g`` with an optimal vertex order."""
    limits = (limits or Limits()).with_defaults(DEFAULT_LRW_MAX_N)
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    check_size(g.n, limits, "exact lrw")
    meter = Meter(limits, "exact lrw")
    full = g.vertex_mask
    singles = max(cut_rank(g, 1 << v) for v in range(g.n))
    # cost[s] = best max prefix cut-rank over orders of s, prefixes being proper subsets of V
    cost = {0: 0}
    back: dict[int, int] = {}
    for s in range(1, full + 1):
        meter.tick()
        c = cut_rank(g, s)
        bestv, bestw = -1, None
        for v in bits(s):
            w = cost[s ^ (1 << v)]
            if bestw is None or w < bestw:
                bestv, bestw = v, w
        cost[s] = max(bestw, c)
        back[s] = bestv
    order: list[int] = []
    s = full
    while s:
        v = back[s]
        order.append(v)
        s ^= 1 << v
    order.reverse()
    return max(cost[full], singles), order


def linear_width(g: Graph, order: list[int]) -> int:
    """Width of the caterpillar for ``order``."""
    return decomposition_width(g, order_to_linear_decomposition(order))

