"""Simple undirected graphs, their text format, and seeded generators.

Vertices are the dense integers ``0..n-1``.  Adjacency is kept as one
integer bit mask per vertex, which the search code elsewhere in the package
relies on heavily.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from .errors import GraphError, ParseError

MASK64 = (1 << 64) - 1


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Graph:
    """Immutable simple graph on ``0..n-1``.

    ``edges`` holds normalised pairs ``(u, v)`` with ``u < v``; ``adj[v]`` is
    the neighbourhood of ``v`` as a bit mask.
    """

    __slots__ = ("n", "edges", "adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError(f"vertex count must be non-negative, got {n}")
        norm = set()
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            if u == v:
                raise GraphError(f"self-loop on vertex {u}")
            e = (u, v) if u < v else (v, u)
            if e in norm:
                raise GraphError(f"duplicate edge {e}")
            norm.add(e)
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "adj", tuple(adj))

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @classmethod
    def from_adjacency(cls, adj: Iterable[int]) -> Graph:
        adj = list(adj)
        edges = [(u, v) for u, m in enumerate(adj) for v in bits(m) if u < v]
        return cls(len(adj), edges)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={sorted(self.edges)})"

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def induced_subgraph(self, vertices: Iterable[int]) -> Graph:
        """Subgraph induced by ``vertices``, renumbered in ascending order."""
        vs = sorted(set(vertices))
        index = {v: i for i, v in enumerate(vs)}
        return Graph(len(vs), [(index[u], index[v]) for u, v in self.edges if u in index and v in index])

    def components(self) -> list[int]:
        """Connected components as vertex masks, ordered by smallest vertex."""
        seen = 0
        out = []
        for s in range(self.n):
            if seen >> s & 1:
                continue
            comp = frontier = 1 << s
            while frontier:
                nxt = 0
                for v in bits(frontier):
                    nxt |= self.adj[v]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            out.append(comp)
        return out


@dataclass(frozen=True)
class LabelledGraph:
    """A graph with a label in ``1..k`` on every vertex.

    ``names`` keeps the vertex names an expression used, indexed by vertex
    id (``None`` for anonymous vertices).
    """

    graph: Graph
    labels: tuple[int, ...]
    names: tuple[str | None, ...] = ()

    def __post_init__(self):
        if len(self.labels) != self.graph.n:
            raise GraphError("every vertex needs exactly one label")
        if any(lab < 1 for lab in self.labels):
            raise GraphError("labels are positive integers")

    def label_classes(self) -> dict[int, int]:
        """Map label -> mask of the vertices carrying it."""
        out: dict[int, int] = {}
        for v, lab in enumerate(self.labels):
            out[lab] = out.get(lab, 0) | (1 << v)
        return out


# -- text format -----------------------------------------------------------


def parse_graph(text: str) -> Graph:
    """Parse the line format ``n <count>`` followed by ``e <u> <v>`` lines."""
    n = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if n is None:
            if tok[0] != "n" or len(tok) != 2:
                raise ParseError("expected 'n <count>' as the first directive", lineno)
            try:
                n = int(tok[1])
            except ValueError:
                raise ParseError(f"bad vertex count {tok[1]!r}", lineno) from None
            if n < 0:
                raise ParseError("vertex count must be non-negative", lineno)
            continue
        if tok[0] != "e" or len(tok) != 3:
            raise ParseError(f"expected 'e <u> <v>', got {line!r}", lineno)
        try:
            u, v = int(tok[1]), int(tok[2])
        except ValueError:
            raise ParseError(f"bad edge endpoints in {line!r}", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"edge endpoint out of range [0, {n})", lineno)
        if u == v:
            raise ParseError(f"self-loop on vertex {u}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge {key}", lineno)
        seen.add(key)
        edges.append(key)
    if n is None:
        raise ParseError("missing 'n <count>' line")
    return Graph(n, edges)


def serialize_graph(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"e {u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"


# -- random numbers --------------------------------------------------------


class SplitMix64:
    """SplitMix64 generator (Steele, Lea & Flood 2014).

    Chosen because the whole algorithm is three lines of 64-bit integer
    arithmetic, so corpora can be regenerated bit-for-bit by any other
    implementation from the seed alone.
    """

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform float in [0, 1) built from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = ((1 << 64) // bound) * bound
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound


# -- generators ------------------------------------------------------------

KINDS = (
    "cycle",
    "path",
    "complete",
    "complete_bipartite",
    "empty",
    "random",
    "cograph",
    "distance_hereditary",
    "grid",
)


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs n >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    if n < 1:
        raise GraphError("a path needs n >= 1")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    if n < 1:
        raise GraphError("a complete graph needs n >= 1")
    return Graph(n, combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise GraphError("both sides of K_{a,b} need at least one vertex")
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def empty(n: int) -> Graph:
    if n < 1:
        raise GraphError("an empty graph needs n >= 1")
    return Graph(n)


def grid(rows: int, cols: int) -> Graph:
    if rows < 1 or cols < 1:
        raise GraphError("grid dimensions must be positive")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)


def random_graph(n: int, p: float, rng: SplitMix64) -> Graph:
    if n < 1:
        raise GraphError("a random graph needs n >= 1")
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability must lie in [0, 1], got {p}")
    # one draw per pair in lexicographic order, even when p is 0 or 1
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return Graph(n, edges)


def random_cograph(n: int, rng: SplitMix64) -> Graph:
    """Evaluate a random cotree: ``n`` leaves joined pairwise by union/join nodes."""
    if n < 1:
        raise GraphError("a cograph needs n >= 1")
    groups = [1 << v for v in range(n)]
    adj = [0] * n
    while len(groups) > 1:
        i = rng.below(len(groups))
        a = groups.pop(i)
        j = rng.below(len(groups))
        b = groups.pop(j)
        if rng.below(2):  # join
            for v in bits(a):
                adj[v] |= b
            for v in bits(b):
                adj[v] |= a
        groups.append(a | b)
    return Graph.from_adjacency(adj)


def random_distance_hereditary(n: int, rng: SplitMix64) -> Graph:
    """Grow from one vertex by pendant vertices, true twins and false twins."""
    if n < 1:
        raise GraphError("a distance-hereditary graph needs n >= 1")
    adj = [0] * n
    for v in range(1, n):
        u = rng.below(v)
        op = rng.below(3)
        if op == 0:  # pendant
            nbrs = 1 << u
        elif op == 1:  # true twin
            nbrs = adj[u] | (1 << u)
        else:  # false twin
            nbrs = adj[u]
        adj[v] = nbrs
        for w in bits(nbrs):
            adj[w] |= 1 << v
    return Graph.from_adjacency(adj)


def generate(kind: str, seed: int = 0, **params) -> Graph:
    """Build a graph of the named kind.

    ``params`` by kind: ``n`` for cycle/path/complete/empty/cograph/
    distance_hereditary; ``a``, ``b`` for complete_bipartite; ``n``, ``p``
    for random; ``rows``, ``cols`` for grid.  ``seed`` only matters for the
    randomised kinds.
    """
    rng = SplitMix64(seed)
    try:
        if kind == "cycle":
            return cycle(params["n"])
        if kind == "path":
            return path(params["n"])
        if kind == "complete":
            return complete(params["n"])
        if kind == "complete_bipartite":
            return complete_bipartite(params["a"], params["b"])
        if kind == "empty":
            return empty(params["n"])
        if kind == "random":
            return random_graph(params["n"], params["p"], rng)
        if kind == "cograph":
            return random_cograph(params["n"], rng)
        if kind == "distance_hereditary":
            return random_distance_hereditary(params["n"], rng)
        if kind == "grid":
            return grid(params["rows"], params["cols"])
    except KeyError as exc:
        raise GraphError(f"kind {kind!r} needs parameter {exc.args[0]!r}") from None
    except TypeError as exc:
        raise GraphError(f"bad parameters for {kind!r}: {exc}") from None
    raise GraphError(f"unknown graph kind {kind!r}")


def is_cograph(g: Graph) -> bool:
    """True iff no four vertices induce a path on four vertices."""
    adj = g.adj
    for quad in combinations(range(g.n), 4):
        qm = mask_of(quad)
        degs = sorted((adj[v] & qm).bit_count() for v in quad)
        # three edges with degrees 1,1,2,2 can only be an induced P4
        if degs == [1, 1, 2, 2]:
            return False
    return True


def corpus(max_n: int, seed: int = 0, min_n: int = 1) -> list[tuple[str, Graph]]:
    """A deterministic mixed corpus covering every generator kind.

    Returns ``(name, graph)`` pairs with ``min_n <= n <= max_n``.
    """
    rng = SplitMix64(seed)
    out: list[tuple[str, Graph]] = []

    def add(name: str, g: Graph) -> None:
        if min_n <= g.n <= max_n:
            out.append((name, g))

    for n in range(max(1, min_n), max_n + 1):
        add(f"path{n}", path(n))
        add(f"complete{n}", complete(n))
        add(f"empty{n}", empty(n))
        if n >= 3:
            add(f"cycle{n}", cycle(n))
        for a in range(1, n // 2 + 1):
            add(f"k{a},{n - a}", complete_bipartite(a, n - a))
        for rows in range(2, n):
            if n % rows == 0 and rows <= n // rows:
                add(f"grid{rows}x{n // rows}", grid(rows, n // rows))
        for rep in range(2):
            s = rng.next_u64()
            add(f"cograph{n}_{s:016x}", generate("cograph", seed=s, n=n))
            s = rng.next_u64()
            add(f"dh{n}_{s:016x}", generate("distance_hereditary", seed=s, n=n))
        for p in (0.3, 0.5, 0.7):
            s = rng.next_u64()
            add(f"random{n}_p{p}_{s:016x}", generate("random", seed=s, n=n, p=p))
    return out
