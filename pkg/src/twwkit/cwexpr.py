"""Clique-width expressions: syntax tree, text grammar, evaluation, exact search.

Grammar (whitespace-insensitive, ``#`` starts a comment running to the end
of the line)::

    expr := "v(" INT [":" NAME] ")"
          | "(" expr "+" expr ")"
          | "r(" INT "->" INT "," expr ")"
          | "e(" INT "," INT "," expr ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union as _U

from .budget import Limits, Meter, check_size
from .errors import BudgetExceeded, ParseError
from .graphcore import Graph, LabelledGraph, bits


@dataclass(frozen=True)
class Vertex:
    label: int
    name: str | None = None

    def __post_init__(self):
        if self.label < 1:
            raise ValueError("labels are positive integers")


@dataclass(frozen=True)
class Union:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Relabel:
    src: int
    dst: int
    child: "Expr"

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError(f"relabel needs two different labels, got {self.src}->{self.dst}")
        if self.src < 1 or self.dst < 1:
            raise ValueError("labels are positive integers")


@dataclass(frozen=True)
class AddEdges:
    a: int
    b: int
    child: "Expr"

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError(f"edge creation needs two different labels, got {self.a},{self.b}")
        if self.a < 1 or self.b < 1:
            raise ValueError("labels are positive integers")


Expr = _U[Vertex, Union, Relabel, AddEdges]


# -- traversal helpers ------------------------------------------------------


def walk(e: Expr) -> Iterator[Expr]:
    """Pre-order iteration over all subexpressions (iterative)."""
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Union):
            stack.append(node.right)
            stack.append(node.left)
        elif isinstance(node, (Relabel, AddEdges)):
            stack.append(node.child)


def leaves(e: Expr) -> list[Vertex]:
    """Vertex nodes in left-to-right order."""
    return [node for node in walk(e) if isinstance(node, Vertex)]


def labels_used(e: Expr) -> set[int]:
    out: set[int] = set()
    for node in walk(e):
        if isinstance(node, Vertex):
            out.add(node.label)
        elif isinstance(node, Relabel):
            out.update((node.src, node.dst))
        elif isinstance(node, AddEdges):
            out.update((node.a, node.b))
    return out


def expr_width(e: Expr) -> int:
    """Number of distinct labels occurring anywhere in the expression."""
    return len(labels_used(e))


def is_linear(e: Expr) -> bool:
    """True iff the right operand of every union is a single vertex."""
    return all(isinstance(node.right, Vertex) for node in walk(e) if isinstance(node, Union))


def vertex_labels(e: Expr) -> set[int]:
    """Labels carried by the vertices of the graph ``e`` denotes."""
    if isinstance(e, Vertex):
        return {e.label}
    if isinstance(e, Union):
        return vertex_labels(e.left) | vertex_labels(e.right)
    if isinstance(e, Relabel):
        labs = vertex_labels(e.child)
        if e.src in labs:
            labs = (labs - {e.src}) | {e.dst}
        return labs
    return vertex_labels(e.child)


def substitute_labels(e: Expr, mapping: dict[int, int]) -> Expr:
    """Rename labels throughout ``e``; ``mapping`` must be injective on the labels used."""
    m = lambda x: mapping.get(x, x)  # noqa: E731
    if isinstance(e, Vertex):
        return Vertex(m(e.label), e.name)
    if isinstance(e, Union):
        return Union(substitute_labels(e.left, mapping), substitute_labels(e.right, mapping))
    if isinstance(e, Relabel):
        return Relabel(m(e.src), m(e.dst), substitute_labels(e.child, mapping))
    return AddEdges(m(e.a), m(e.b), substitute_labels(e.child, mapping))


# -- text format ---------------------------------------------------------------

_TOKEN = re.compile(r"\s+|#[^\n]*|->|[(),+:]|[A-Za-z0-9_.]+")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            mt = _TOKEN.match(text, pos)
            if not mt:
                raise self._error(f"unexpected character {text[pos]!r}", pos)
            tok = mt.group()
            if not tok.isspace() and not tok.startswith("#"):
                self.toks.append((tok, pos))
            pos = mt.end()
        self.i = 0
        self.names: set[str] = set()

    def _error(self, msg: str, pos: int) -> ParseError:
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return ParseError(msg, line, col)

    def peek(self) -> str | None:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def pos(self) -> int:
        return self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)

    def take(self, expected: str | None = None, what: str | None = None) -> str:
        if self.i >= len(self.toks):
            want = what or (repr(expected) if expected else "token")
            raise self._error(f"unexpected end of input (expected {want})", len(self.text))
        tok, pos = self.toks[self.i]
        if expected is not None and tok != expected:
            raise self._error(f"expected {expected!r}, got {tok!r}", pos)
        self.i += 1
        return tok

    def integer(self) -> int:
        pos = self.pos()
        tok = self.take(what="integer")
        if not tok.isdigit():
            raise self._error(f"expected a positive integer, got {tok!r}", pos)
        val = int(tok)
        if val < 1:
            raise self._error("labels are positive integers", pos)
        return val

    def expr(self) -> Expr:
        pos = self.pos()
        tok = self.peek()
        if tok == "(":
            self.take("(")
            left = self.expr()
            self.take("+")
            right = self.expr()
            self.take(")")
            return Union(left, right)
        if tok == "v":
            self.take("v")
            self.take("(")
            label = self.integer()
            name = None
            if self.peek() == ":":
                self.take(":")
                npos = self.pos()
                name = self.take(what="name")
                if not re.fullmatch(r"[A-Za-z0-9_.]+", name):
                    raise self._error(f"bad vertex name {name!r}", npos)
                if name in self.names:
                    raise self._error(f"duplicate vertex name {name!r}", npos)
                self.names.add(name)
            self.take(")")
            return Vertex(label, name)
        if tok == "r":
            self.take("r")
            self.take("(")
            src = self.integer()
            self.take("->")
            dst = self.integer()
            self.take(",")
            if src == dst:
                raise self._error(f"relabel {src}->{dst} needs two different labels", pos)
            child = self.expr()
            self.take(")")
            return Relabel(src, dst, child)
        if tok == "e":
            self.take("e")
            self.take("(")
            a = self.integer()
            self.take(",")
            b = self.integer()
            self.take(",")
            if a == b:
                raise self._error(f"edge creation {a},{b} needs two different labels", pos)
            child = self.expr()
            self.take(")")
            return AddEdges(a, b, child)
        raise self._error(f"unexpected token {tok!r}" if tok else "empty expression", pos)


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    e = p.expr()
    if p.peek() is not None:
        raise p._error(f"trailing input {p.peek()!r}", p.pos())
    return e


def serialize_expr(e: Expr) -> str:
    if isinstance(e, Vertex):
        return f"v({e.label})" if e.name is None else f"v({e.label}:{e.name})"
    if isinstance(e, Union):
        return f"({serialize_expr(e.left)}+{serialize_expr(e.right)})"
    if isinstance(e, Relabel):
        return f"r({e.src}->{e.dst},{serialize_expr(e.child)})"
    return f"e({e.a},{e.b},{serialize_expr(e.child)})"


# -- evaluation ----------------------------------------------------------------


def vertex_ids(e: Expr) -> list[int]:
    """Graph vertex id of each leaf, in leaf order.

    When every leaf is named and the names are exactly ``0..n-1`` the names
    are the ids; otherwise ids follow leaf order.
    """
    ls = leaves(e)
    names = [leaf.name for leaf in ls]
    if len(set(n for n in names if n is not None)) != sum(n is not None for n in names):
        raise ValueError("vertex names must be unique")
    if all(n is not None and n.isdigit() for n in names):
        ids = [int(n) for n in names]
        if sorted(ids) == list(range(len(ids))):
            return ids
    return list(range(len(ls)))


def eval_expr(e: Expr) -> LabelledGraph:
    """The labelled graph denoted by ``e``."""
    ls = leaves(e)
    ids = vertex_ids(e)
    leaf_id = {id(leaf): vid for leaf, vid in zip(ls, ids)}
    n = len(ls)
    adj = [0] * n

    def go(node) -> dict[int, int]:
        # returns label -> mask of vertices with that label
        if isinstance(node, Vertex):
            return {node.label: 1 << leaf_id[id(node)]}
        if isinstance(node, Union):
            left = go(node.left)
            for lab, m in go(node.right).items():
                left[lab] = left.get(lab, 0) | m
            return left
        classes = go(node.child)
        if isinstance(node, Relabel):
            if node.src in classes:
                m = classes.pop(node.src)
                classes[node.dst] = classes.get(node.dst, 0) | m
            return classes
        ma, mb = classes.get(node.a, 0), classes.get(node.b, 0)
        if ma and mb:
            for v in bits(ma):
                adj[v] |= mb
            for v in bits(mb):
                adj[v] |= ma
        return classes

    classes = go(e)
    labels = [0] * n
    for lab, m in classes.items():
        for v in bits(m):
            labels[v] = lab
    names: list[str | None] = [None] * n
    for leaf, vid in zip(ls, ids):
        names[vid] = leaf.name
    return LabelledGraph(Graph.from_adjacency(adj), tuple(labels), tuple(names))


def check_claim_left_labels(e: Expr, bound: int) -> bool:
    """Every union's left operand carries at most ``bound`` vertex labels."""
    return all(len(vertex_labels(node.left)) <= bound for node in walk(e) if isinstance(node, Union))


def check_claim_fresh_right(e: Expr) -> bool:
    """Every union ``L + v(i)`` has no vertex labelled ``i`` inside ``L``."""
    for node in walk(e):
        if isinstance(node, Union):
            if not isinstance(node.right, Vertex):
                return False
            if node.right.label in vertex_labels(node.left):
                return False
    return True


# -- exact clique-width ------------------------------------------------------
#
# Search states are pairs (S, P): a vertex set S and its label classes P
# (class masks sorted by lowest bit).  Labels are interchangeable, so only
# the classes matter.  Two pruning rules keep the search small and sound:
#   * edges are created eagerly, as soon as two classes are completely
#     joined in g, so a live state always has every edge of g[S] built;
#     a cross edge that is not between completely joined classes can never
#     be built later, since classes only grow;
#   * vertices sharing a label must have the same neighbours outside S,
#     because every later operation treats them identically.

DEFAULT_CW_MAX_N = 6
DEFAULT_LCW_MAX_N = 7


class _CwSearch:
    def __init__(self, g: Graph, k: int, linear: bool, meter: Meter):
        self.g = g
        self.adj = g.adj
        self.k = k
        self.linear = linear
        self.meter = meter
        # S -> {P: derivation}
        self.states: dict[int, dict[tuple[int, ...], tuple]] = {}

    def full(self, cls: int) -> int:
        f = -1
        for v in bits(cls):
            f &= self.adj[v]
        return f

    def outside(self, v: int, s: int) -> int:
        return self.adj[v] & ~s

    def complete(self, x: int, y: int) -> bool:
        return y & ~self.full(x) == 0

    def add(self, s: int, p: tuple[int, ...], how: tuple) -> bool:
        bucket = self.states.setdefault(s, {})
        if p in bucket:
            return False
        self.meter.tick()
        bucket[p] = how
        return True

    def union_results(self, s1, p1, s2, p2):
        """Class partitions reachable by uniting (s1, p1) with (s2, p2)."""
        s = s1 | s2
        adj = self.adj
        # a right class may share a label with a left class only if no edge
        # joins them and both agree on the outside of s
        compat = []
        for b in p2:
            rb = (b & -b).bit_length() - 1
            ob = adj[rb] & ~s
            row = []
            for i, a in enumerate(p1):
                ra = (a & -a).bit_length() - 1
                if adj[ra] & ~s != ob:
                    continue
                if any(adj[v] & b for v in bits(a)):
                    continue
                row.append(i)
            compat.append(row)

        results = []
        assign = [None] * len(p2)

        def rec(j, used, extra):
            if len(p1) + extra > self.k:
                return
            if j == len(p2):
                merged = list(p1)
                fresh = []
                for jj, target in enumerate(assign):
                    if target is None:
                        fresh.append(p2[jj])
                    else:
                        merged[target] |= p2[jj]
                p = tuple(sorted(merged + fresh, key=lambda c: c & -c))
                if self.cross_edges_ok(s1, s2, p):
                    results.append(p)
                return
            for i in compat[j]:
                if not used >> i & 1:
                    assign[j] = i
                    rec(j + 1, used | (1 << i), extra)
            assign[j] = None
            rec(j + 1, used, extra + 1)

        rec(0, 0, 0)
        return results

    def cross_edges_ok(self, s1, s2, p) -> bool:
        adj = self.adj
        cls_of = {}
        for idx, c in enumerate(p):
            for v in bits(c):
                cls_of[v] = idx
        for a in bits(s1):
            cross = adj[a] & s2
            if not cross:
                continue
            ca = cls_of[a]
            for b in bits(cross):
                cb = cls_of[b]
                if ca == cb or not self.complete(p[ca], p[cb]):
                    return False
        return True

    def relabel_closure(self, s: int) -> None:
        bucket = self.states.get(s, {})
        queue = list(bucket)
        adj = self.adj
        while queue:
            p = queue.pop()
            for i in range(len(p) - 1):
                ri = (p[i] & -p[i]).bit_length() - 1
                oi = adj[ri] & ~s
                for j in range(i + 1, len(p)):
                    rj = (p[j] & -p[j]).bit_length() - 1
                    if adj[rj] & ~s != oi:
                        continue
                    merged = [c for t, c in enumerate(p) if t != i and t != j]
                    merged.append(p[i] | p[j])
                    q = tuple(sorted(merged, key=lambda c: c & -c))
                    if self.add(s, q, ("relabel", p, p[i], p[j])):
                        queue.append(q)

    def run(self) -> tuple[int, tuple[int, ...]] | None:
        n = self.g.n
        by_size: dict[int, list[int]] = {1: []}
        for v in range(n):
            self.add(1 << v, (1 << v,), ("vertex", v))
            by_size[1].append(1 << v)
        for size in range(2, n + 1):
            created = []
            splits = [(size - 1, 1)] if self.linear else [(a, size - a) for a in range(1, size)]
            for a, b in splits:
                for s1 in by_size.get(a, []):
                    for s2 in by_size.get(b, []):
                        if s1 & s2:
                            continue
                        if not self.linear and (s1 & -s1) > (s2 & -s2):
                            continue
                        s = s1 | s2
                        for p1 in list(self.states[s1]):
                            for p2 in list(self.states[s2]):
                                for p in self.union_results(s1, p1, s2, p2):
                                    if self.add(s, p, ("union", s1, p1, s2, p2)):
                                        if s not in created:
                                            created.append(s)
            for s in created:
                self.relabel_closure(s)
            by_size[size] = created
        full = self.g.vertex_mask
        bucket = self.states.get(full)
        if not bucket:
            return None
        return full, next(iter(bucket))

    # -- witness reconstruction --

    def build(self, s: int, p: tuple[int, ...], label: dict[int, int]) -> Expr:
        how = self.states[s][p]
        kind = how[0]
        if kind == "vertex":
            return Vertex(label[p[0]], str(how[1]))
        if kind == "relabel":
            _, parent, a, b = how
            merged = a | b
            target = label[merged]
            taken = {label[c] for c in p}
            spare = next(x for x in range(1, self.k + 1) if x not in taken)
            child_labels = {c: label[c] for c in p if c != merged}
            child_labels[a] = target
            child_labels[b] = spare
            return Relabel(spare, target, self.build(s, parent, child_labels))
        _, s1, p1, s2, p2 = how

        def inherit(classes):
            out = {}
            for c in classes:
                big = next(x for x in p if x & c)
                out[c] = label[big]
            return out

        left = self.build(s1, p1, inherit(p1))
        right = self.build(s2, p2, inherit(p2))
        expr: Expr = Union(left, right)
        adj = self.adj
        pairs = []
        for i in range(len(p)):
            for j in range(i + 1, len(p)):
                x, y = p[i], p[j]
                crossing = any(adj[v] & (y & s2) for v in bits(x & s1)) or any(
                    adj[v] & (y & s1) for v in bits(x & s2)
                )
                if crossing:
                    pairs.append(tuple(sorted((label[x], label[y]))))
        for a, b in sorted(pairs):
            expr = AddEdges(a, b, expr)
        return expr


def _exact(g: Graph, k_max: int | None, linear: bool, limits: Limits | None, what: str):
    limits = (limits or Limits()).with_defaults(DEFAULT_LCW_MAX_N if linear else DEFAULT_CW_MAX_N)
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    check_size(g.n, limits, what)
    if k_max is None:
        k_max = g.n
    meter = Meter(limits, what)
    for k in range(1, k_max + 1):
        meter.lower = k
        search = _CwSearch(g, k, linear, meter)
        found = search.run()
        if found is not None:
            s, p = found
            label = {c: i + 1 for i, c in enumerate(p)}
            return k, search.build(s, p, label)
    raise BudgetExceeded(f"{what}: no expression with at most {k_max} labels", lower=k_max + 1)


def exact_cw(g: Graph, k_max: int | None = None, limits: Limits | None = None) -> tuple[int, Expr]:
    """Clique-width of ``g`` with an optimal witness expression."""
    return _exact(g, k_max, False, limits, "exact cw")


def exact_lcw(g: Graph, k_max: int | None = None, limits: Limits | None = None) -> tuple[int, Expr]:
    """Linear clique-width of ``g`` with an optimal linear witness expression."""
    return _exact(g, k_max, True, limits, "exact lcw")
