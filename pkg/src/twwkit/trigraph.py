"""Trigraphs, contraction sequences and the four sequence width measures.

A trigraph here is the quotient of a graph by a partition of its vertices:
two parts are joined by a black edge when every cross pair is an edge, by a
red edge when some but not all are, and every part with two or more
vertices carries a red loop.

Width measures (``WIDTHS``):

* ``tww``   largest red degree, loops ignored;
* ``ctww``  largest red-connected component (number of parts);
* ``ttww``  number of red edges, **loops included**;
* ``tvtww`` number of parts touched by a red edge or a red loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .budget import Limits, Meter, check_size
from .errors import BudgetExceeded, InvalidCertificate, ParseError
from .graphcore import Graph, bits

WIDTHS = ("tww", "ctww", "ttww", "tvtww")

Part = frozenset  # frozenset[int]


def _pkey(part: Part) -> int:
    return min(part)


def _pair(a: Part, b: Part) -> tuple[Part, Part]:
    return (a, b) if _pkey(a) <= _pkey(b) else (b, a)


@dataclass(frozen=True)
class Trigraph:
    """Parts plus black and red edge sets.

    Edges are pairs of parts ordered by smallest vertex; a red loop on ``P``
    is stored as ``(P, P)``.
    """

    parts: tuple[Part, ...]
    black: frozenset[tuple[Part, Part]]
    red: frozenset[tuple[Part, Part]]

    def __post_init__(self):
        if self.black & self.red:
            raise ValueError("black and red edge sets must be disjoint")

    def loops(self) -> set[Part]:
        return {a for a, b in self.red if a == b}

    def red_neighbors(self, part: Part) -> set[Part]:
        out = set()
        for a, b in self.red:
            if a == b:
                continue
            if a == part:
                out.add(b)
            elif b == part:
                out.add(a)
        return out

    def black_neighbors(self, part: Part) -> set[Part]:
        out = set()
        for a, b in self.black:
            if a == part:
                out.add(b)
            elif b == part:
                out.add(a)
        return out

    def relation(self, a: Part, b: Part) -> str:
        """``'black'``, ``'red'`` or ``'none'`` for two distinct parts."""
        e = _pair(a, b)
        if e in self.black:
            return "black"
        if e in self.red:
            return "red"
        return "none"

    def part_of(self, v: int) -> Part:
        for p in self.parts:
            if v in p:
                return p
        raise KeyError(v)


# -- quotient and contraction ---------------------------------------------


def _check_partition(n: int, parts: Iterable[Iterable[int]]) -> tuple[Part, ...]:
    seen: set[int] = set()
    out = []
    for p in parts:
        fp = frozenset(p)
        if not fp:
            raise ValueError("partition contains an empty part")
        if fp & seen:
            raise ValueError("partition parts overlap")
        if any(not 0 <= v < n for v in fp):
            raise ValueError("partition mentions a vertex outside the graph")
        seen |= fp
        out.append(fp)
    if len(seen) != n:
        raise ValueError("partition does not cover every vertex")
    return tuple(sorted(out, key=_pkey))


def quotient(g: Graph, parts: Iterable[Iterable[int]]) -> Trigraph:
    """The trigraph of ``g`` modulo a partition of its vertex set."""
    ps = _check_partition(g.n, parts)
    masks = [sum(1 << v for v in p) for p in ps]
    black, red = set(), set()
    for i, a in enumerate(ps):
        full = any_ = None
        for v in a:
            nb = g.adj[v]
            full = nb if full is None else full & nb
            any_ = nb if any_ is None else any_ | nb
        for j in range(i + 1, len(ps)):
            mb = masks[j]
            if mb & ~full == 0:
                black.add((a, ps[j]))
            elif any_ & mb:
                red.add((a, ps[j]))
        if len(a) >= 2:
            red.add((a, a))
    return Trigraph(ps, frozenset(black), frozenset(red))


def contract(t: Trigraph, u: Part, v: Part) -> Trigraph:
    """Merge parts ``u`` and ``v`` using only the relations already in ``t``."""
    u, v = frozenset(u), frozenset(v)
    if u == v:
        raise ValueError("cannot contract a part with itself")
    if u not in t.parts or v not in t.parts:
        raise ValueError("both arguments must be parts of the trigraph")
    uv = u | v
    others = [p for p in t.parts if p != u and p != v]
    black = {e for e in t.black if u not in e and v not in e}
    red = {e for e in t.red if u not in e and v not in e}
    for x in others:
        ru, rv = t.relation(u, x), t.relation(v, x)
        if ru == "black" and rv == "black":
            black.add(_pair(uv, x))
        elif ru == "none" and rv == "none":
            pass
        else:
            red.add(_pair(uv, x))
    red.add((uv, uv))
    parts = tuple(sorted(others + [uv], key=_pkey))
    return Trigraph(parts, frozenset(black), frozenset(red))


# -- contraction sequences ------------------------------------------------


@dataclass(frozen=True)
class ContractionSequence:
    """``n - 1`` merges, each naming one original vertex of each part to merge."""

    base: Graph
    merges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "merges", tuple((int(a), int(b)) for a, b in self.merges))


def validate_sequence(seq: ContractionSequence) -> None:
    """Raise :class:`InvalidCertificate` unless ``seq`` is replayable."""
    n = seq.base.n
    if n < 1:
        raise InvalidCertificate("contraction sequences need at least one vertex")
    if len(seq.merges) != n - 1:
        raise InvalidCertificate(f"expected {n - 1} merges for n={n}, got {len(seq.merges)}")
    owner = list(range(n))

    def find(x: int) -> int:
        while owner[x] != x:
            owner[x] = owner[owner[x]]
            x = owner[x]
        return x

    for step, (a, b) in enumerate(seq.merges, start=1):
        if not (0 <= a < n and 0 <= b < n):
            raise InvalidCertificate(f"merge {step}: vertex out of range")
        ra, rb = find(a), find(b)
        if ra == rb:
            raise InvalidCertificate(f"merge {step}: {a} and {b} are already in the same part")
        owner[rb] = ra


def partitions(seq: ContractionSequence) -> list[list[int]]:
    """Part masks (sorted by lowest vertex) of every step, from G_n down to G_1."""
    validate_sequence(seq)
    cur = [1 << v for v in range(seq.base.n)]
    out = [list(cur)]
    for a, b in seq.merges:
        pa = next(p for p in cur if p >> a & 1)
        pb = next(p for p in cur if p >> b & 1)
        cur = [p for p in cur if p != pa and p != pb]
        cur.append(pa | pb)
        cur.sort(key=lambda p: p & -p)
        out.append(list(cur))
    return out


def replay(seq: ContractionSequence) -> list[Trigraph]:
    """Trigraphs G_n, ..., G_1 of the sequence, built by successive contractions."""
    validate_sequence(seq)
    g = seq.base
    t = quotient(g, [[v] for v in range(g.n)])
    out = [t]
    for a, b in seq.merges:
        t = contract(t, t.part_of(a), t.part_of(b))
        out.append(t)
    return out


def red_components(t: Trigraph) -> list[tuple[Part, ...]]:
    """Connected components of the red graph (loops ignored), parts sorted."""
    parent = {p: p for p in t.parts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in t.red:
        if a != b:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
    groups: dict[Part, list[Part]] = {}
    for p in t.parts:
        groups.setdefault(find(p), []).append(p)
    comps = [tuple(sorted(ps, key=_pkey)) for ps in groups.values()]
    comps.sort(key=lambda c: _pkey(c[0]))
    return comps


def trigraph_width(t: Trigraph, measure: str) -> int:
    if measure == "tww":
        deg = {p: 0 for p in t.parts}
        for a, b in t.red:
            if a != b:
                deg[a] += 1
                deg[b] += 1
        return max(deg.values(), default=0)
    if measure == "ctww":
        return max((len(c) for c in red_components(t)), default=0)
    if measure == "ttww":
        return len(t.red)
    if measure == "tvtww":
        touched = set()
        for a, b in t.red:
            touched.add(a)
            touched.add(b)
        return len(touched)
    raise ValueError(f"unknown width measure {measure!r}")


def sequence_width(seq: ContractionSequence, measure: str) -> int:
    """Maximum width over all trigraphs of the sequence."""
    return max(trigraph_width(t, measure) for t in replay(seq))


# -- sequence file format -------------------------------------------------


def parse_sequence(text: str, g: Graph) -> ContractionSequence:
    """Read one ``<u> <v>`` merge per line and validate it against ``g``."""
    merges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if len(tok) != 2:
            raise ParseError(f"expected '<u> <v>', got {line!r}", lineno)
        try:
            merges.append((int(tok[0]), int(tok[1])))
        except ValueError:
            raise ParseError(f"bad vertex id in {line!r}", lineno) from None
    seq = ContractionSequence(g, tuple(merges))
    validate_sequence(seq)
    return seq


def serialize_sequence(seq: ContractionSequence) -> str:
    return "".join(f"{a} {b}\n" for a, b in seq.merges)


# -- exact search -----------------------------------------------------------
#
# Internally a state is a tuple of part masks sorted by lowest bit, together
# with its set of non-loop red edges (pairs of masks, smaller mask first).
# Relations are decided from two per-part masks: the vertices adjacent to
# every member ("full") and to some member ("any").

DEFAULT_MAX_N = {"tww": 10, "ctww": 10, "ttww": 8, "tvtww": 8}


class _Relations:
    def __init__(self, g: Graph):
        self.adj = g.adj
        self.cache: dict[int, tuple[int, int]] = {}

    def profile(self, part: int) -> tuple[int, int]:
        hit = self.cache.get(part)
        if hit is None:
            full, any_ = -1, 0
            for v in bits(part):
                full &= self.adj[v]
                any_ |= self.adj[v]
            hit = self.cache[part] = (full, any_)
        return hit

    def is_red(self, a: int, b: int) -> bool:
        full, any_ = self.profile(a)
        return bool(b & ~full) and bool(any_ & b)


def _state_width(parts: Sequence[int], red: frozenset, measure: str) -> int:
    if measure == "tww":
        deg: dict[int, int] = {}
        for a, b in red:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        return max(deg.values(), default=0)
    if measure == "ctww":
        if not red:
            return 1 if parts else 0
        parent: dict[int, int] = {}

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                x = parent[x]
            return x

        for a, b in red:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
        sizes: dict[int, int] = {}
        for x in list(parent):
            r = find(x)
            sizes[r] = sizes.get(r, 0) + 1
        return max(sizes.values())
    if measure == "ttww":
        return len(red) + sum(1 for p in parts if p & (p - 1))
    if measure == "tvtww":
        touched = {p for p in parts if p & (p - 1)}
        for a, b in red:
            touched.add(a)
            touched.add(b)
        return len(touched)
    raise ValueError(f"unknown width measure {measure!r}")


def _merge(rel: _Relations, parts: tuple[int, ...], red: frozenset, i: int, j: int):
    u, v = parts[i], parts[j]
    w = u | v
    rest = [p for k, p in enumerate(parts) if k != i and k != j]
    new_red = {e for e in red if u not in e and v not in e}
    for x in rest:
        if rel.is_red(w, x):
            new_red.add((w, x) if w < x else (x, w))
    rest.append(w)
    rest.sort(key=lambda p: p & -p)
    return tuple(rest), frozenset(new_red)


def _merge_pair(parts: tuple[int, ...], i: int, j: int) -> tuple[int, int]:
    return ((parts[i] & -parts[i]).bit_length() - 1, (parts[j] & -parts[j]).bit_length() - 1)


def _greedy(g: Graph, rel: _Relations, measure: str):
    """The lexicographically first sequence (always merge the first two parts)."""
    parts = tuple(1 << v for v in range(g.n))
    red: frozenset = frozenset()
    width = _state_width(parts, red, measure)
    merges = []
    while len(parts) > 1:
        merges.append(_merge_pair(parts, 0, 1))
        parts, red = _merge(rel, parts, red, 0, 1)
        width = max(width, _state_width(parts, red, measure))
    return width, merges


def exact_width(g: Graph, measure: str, limits: Limits | None = None) -> tuple[int, ContractionSequence]:
    """Exact width of ``g`` under ``measure`` with a witness sequence.

    Thresholded depth-first search over the partition lattice: for
    ``t = lower, lower + 1, ...`` look for a sequence whose trigraphs all
    have width at most ``t``, remembering partitions already shown to fail.
    Merges are tried in lexicographic order, so whenever the search beats
    the greedy upper bound the witness is the lexicographically smallest
    optimal sequence; otherwise the greedy sequence itself is returned.
    """
    if measure not in WIDTHS:
        raise ValueError(f"unknown width measure {measure!r}")
    limits = (limits or Limits()).with_defaults(DEFAULT_MAX_N[measure])
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    check_size(g.n, limits, f"exact {measure}")
    rel = _Relations(g)
    meter = Meter(limits, f"exact {measure}")
    start_parts = tuple(1 << v for v in range(g.n))
    start_red: frozenset = frozenset()
    base_width = _state_width(start_parts, start_red, measure)
    upper, greedy_merges = _greedy(g, rel, measure)
    meter.lower, meter.upper = base_width, upper

    for t in range(base_width, upper):
        failed: set[tuple[int, ...]] = set()
        path: list[tuple[int, int]] = []

        def dfs(parts, red) -> bool:
            if len(parts) == 1:
                return True
            if parts in failed:
                return False
            meter.tick()
            k = len(parts)
            for i in range(k - 1):
                for j in range(i + 1, k):
                    nparts, nred = _merge(rel, parts, red, i, j)
                    if nparts in failed or _state_width(nparts, nred, measure) > t:
                        continue
                    path.append(_merge_pair(parts, i, j))
                    if dfs(nparts, nred):
                        return True
                    path.pop()
            failed.add(parts)
            return False

        if dfs(start_parts, start_red):
            return t, ContractionSequence(g, tuple(path))
        meter.lower = t + 1
    return upper, ContractionSequence(g, tuple(greedy_merges))
