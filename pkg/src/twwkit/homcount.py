"""Counting H-colorings (graph homomorphisms G -> H).

Three counters that must always agree:

* :func:`brute_count` -- backtracking over all maps, one connected
  component of G at a time;
* :func:`count_g_side` -- dynamic programming along a contraction sequence
  of G, keyed by the exact set of colours used on each part of a red
  component;
* :func:`count_h_side` -- dynamic programming along a contraction sequence
  of the template H, keyed by which G-vertices are sent into each part of
  a red component of H.

Counts are Python integers, so they never overflow.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from .budget import Limits, Meter
from .errors import BudgetExceeded, InvalidCertificate
from .graphcore import Graph, bits
from .trigraph import ContractionSequence, Part, red_components, replay, validate_sequence

MASK_WIDTH = 64
DEFAULT_BRUTE_WORK = 6**8
DEFAULT_H_SIDE_WORK = 10**7


@dataclass
class CountStats:
    """Per-merge instrumentation.

    ``merges`` holds one ``(component size, families enumerated, bound)``
    triple per contraction step, where the bound is the worst case the
    enumeration is allowed to reach.
    """

    merges: list[tuple[int, int, int]] = field(default_factory=list)
    peak_table: int = 0

    @property
    def total_families(self) -> int:
        return sum(f for _, f, _ in self.merges)


# -- brute force ---------------------------------------------------------------


def brute_work(g: Graph, h: Graph) -> int:
    """Number of maps the brute-force counter may have to look at."""
    return sum(h.n ** bin(c).count("1") for c in g.components())


def brute_count(g: Graph, h: Graph, max_work: int | None = DEFAULT_BRUTE_WORK, limits: Limits | None = None) -> int:
    """Number of homomorphisms from ``g`` to ``h`` by exhaustive search.

    Components of ``g`` are counted separately and multiplied, so the work is
    the sum (not the product) of ``|V_H|^|component|``.
    """
    work = brute_work(g, h)
    if max_work is not None and work > max_work:
        raise BudgetExceeded(f"brute force: {work} maps exceed the budget of {max_work}")
    meter = Meter((limits or Limits()).with_defaults(g.n), "brute force")
    total = 1
    for comp in g.components():
        total *= _count_component(g, h, comp, meter, stop_at_first=False)
        if total == 0:
            break
    return total


def _bfs_order(g: Graph, comp: int) -> list[int]:
    start = (comp & -comp).bit_length() - 1
    order, seen, frontier = [start], 1 << start, [start]
    while frontier:
        nxt = []
        for v in frontier:
            for w in bits(g.adj[v] & comp & ~seen):
                seen |= 1 << w
                order.append(w)
                nxt.append(w)
        frontier = nxt
    return order


def _count_component(g: Graph, h: Graph, comp: int, meter: Meter, stop_at_first: bool) -> int:
    order = _bfs_order(g, comp)
    pos = {v: i for i, v in enumerate(order)}
    earlier = [[w for w in bits(g.adj[v]) if w in pos and pos[w] < i] for i, v in enumerate(order)]
    hfull = h.vertex_mask
    colour = [0] * len(order)

    def rec(i: int) -> int:
        meter.tick()
        cand = hfull
        for w in earlier[i]:
            cand &= h.adj[colour[pos[w]]]
        if i == len(order) - 1:
            return bin(cand).count("1")
        total = 0
        for x in bits(cand):
            colour[i] = x
            total += rec(i + 1)
            if stop_at_first and total:
                return total
        return total

    if h.n == 0:
        return 0
    return rec(0)


# -- DP over a contraction sequence of G --------------------------------------


def _check_template(h: Graph) -> None:
    if h.n > MASK_WIDTH:
        raise ValueError(f"template has {h.n} vertices; at most {MASK_WIDTH} are supported")


def _check_seq(g: Graph, seq: ContractionSequence) -> None:
    if seq.base != g:
        raise InvalidCertificate("contraction sequence belongs to a different graph")
    validate_sequence(seq)


Trace = Callable[[int, tuple, dict], None]


def count_g_side(
    g: Graph,
    seq: ContractionSequence,
    h: Graph,
    stats: CountStats | None = None,
    trace: Trace | None = None,
    limits: Limits | None = None,
) -> int:
    """Homomorphism count by dynamic programming over a contraction sequence of ``g``.

    For each red component ``C = (S_1..S_p)`` the table maps a profile
    ``(T_1..T_p)`` of nonempty colour sets to the number of colorings of
    ``g[∪C]`` using exactly the colours ``T_i`` on ``S_i``.  ``trace`` (if
    given) is called as ``trace(step, component, table)`` after each merge.
    """
    _check_template(h)
    _check_seq(g, seq)
    if h.n == 0:
        return 0
    meter = Meter((limits or Limits()).with_defaults(g.n), "dpg")
    # common neighbourhood of a colour set: colours adjacent to all of them
    common: dict[int, int] = {}

    def cn(mask: int) -> int:
        out = common.get(mask)
        if out is None:
            out = h.vertex_mask
            for x in bits(mask):
                out &= h.adj[x]
            common[mask] = out
        return out

    tables: dict[tuple[Part, ...], dict[tuple[int, ...], int]] = {
        (frozenset([v]),): {(1 << x,): 1 for x in range(h.n)} for v in range(g.n)
    }
    trigraphs = replay(seq)
    full_profiles = (1 << h.n) - 1
    for step, (a, b) in enumerate(seq.merges):
        before, after = trigraphs[step], trigraphs[step + 1]
        u, v = before.part_of(a), before.part_of(b)
        uv = u | v
        comp = next(c for c in red_components(after) if uv in c)
        old_parts = set(p for p in comp if p != uv) | {u, v}
        old_comps = [c for c in red_components(before) if any(p in old_parts for p in c)]
        index = {}  # part -> (component number, position in its profile)
        for j, c in enumerate(old_comps):
            for i, p in enumerate(c):
                index[p] = (j, i)
        cross = [
            (index[x], index[y])
            for x, y in before.black
            if x in index and y in index and index[x][0] != index[y][0]
        ]
        out_pos = []  # for each part of comp: where to read its colour set
        for p in comp:
            out_pos.append(None if p == uv else index[p])
        iu, iv = index[u], index[v]
        sub_tables = [list(tables.pop(c).items()) for c in old_comps]

        table: dict[tuple[int, ...], int] = {}
        families = 0
        for combo in itertools.product(*sub_tables):
            meter.tick()
            families += 1
            profs = [prof for prof, _ in combo]
            ok = True
            for (j1, i1), (j2, i2) in cross:
                if profs[j2][i2] & ~cn(profs[j1][i1]):
                    ok = False
                    break
            if not ok:
                continue
            count = 1
            for _, c in combo:
                count *= c
            key = tuple(
                profs[iu[0]][iu[1]] | profs[iv[0]][iv[1]] if where is None else profs[where[0]][where[1]]
                for where in out_pos
            )
            table[key] = table.get(key, 0) + count
        if stats is not None:
            stats.merges.append((len(comp), families, full_profiles ** (len(comp) + 1)))
            stats.peak_table = max(stats.peak_table, len(table))
        tables[comp] = table
        if trace is not None:
            trace(step, comp, table)
    (final,) = tables.values()
    return sum(final.values())


# -- DP over a contraction sequence of H ---------------------------------------


def _independent_sets(g: Graph) -> list[int]:
    out = [0]
    for v in range(g.n):
        out += [s | (1 << v) for s in out if not g.adj[v] & s]
    return out


def count_h_side(
    g: Graph,
    h: Graph,
    seq_h: ContractionSequence,
    stats: CountStats | None = None,
    limits: Limits | None = None,
    max_work: int | None = DEFAULT_H_SIDE_WORK,
) -> int:
    """Homomorphism count by dynamic programming over a contraction sequence of ``h``.

    For each red component ``C = (T_1..T_p)`` of the template the table maps
    a tuple ``(S_1..S_p)`` of disjoint vertex sets of ``g`` to the number of
    homomorphisms from ``g[S_1 ∪ .. ∪ S_p]`` to ``h`` sending ``S_i`` into
    ``T_i``.  Each merge enumerates all ``(|C|+2)^|V_G|`` assignments of
    G-vertices to the ``|C|+1`` old parts or to nothing.
    """
    _check_template(h)
    _check_seq(h, seq_h)
    n = g.n
    trigraphs = replay(seq_h)
    merged_sizes = []
    for step, (a, b) in enumerate(seq_h.merges):
        after = trigraphs[step + 1]
        uv = trigraphs[step].part_of(a) | trigraphs[step].part_of(b)
        merged_sizes.append(len(next(c for c in red_components(after) if uv in c)))
    work = sum((p + 2) ** n for p in merged_sizes)
    if max_work is not None and work > max_work:
        raise BudgetExceeded(f"dph: {work} assignments exceed the budget of {max_work}")
    meter = Meter((limits or Limits()).with_defaults(n), "dph")

    base = {(s,): 1 for s in _independent_sets(g)}
    tables: dict[tuple[Part, ...], dict[tuple[int, ...], int]] = {
        (frozenset([x]),): dict(base) for x in range(h.n)
    }
    gadj = g.adj
    for step, (a, b) in enumerate(seq_h.merges):
        before, after = trigraphs[step], trigraphs[step + 1]
        u, v = before.part_of(a), before.part_of(b)
        uv = u | v
        comp = next(c for c in red_components(after) if uv in c)
        old_parts = [p for p in comp if p != uv] + [u, v]  # T_1..T_{p+1}
        old_comps = [c for c in red_components(before) if any(p in c for p in old_parts)]
        slot = {p: i for i, p in enumerate(old_parts)}
        comp_of = {}
        for j, c in enumerate(old_comps):
            for p in c:
                comp_of[p] = j
        # pairs of old parts in different components, with their black status
        cross_forbidden = []  # (i, i') with no black edge: no g-edge may join S_i and S_i'
        for x in old_parts:
            for y in old_parts:
                if slot[x] < slot[y] and comp_of[x] != comp_of[y] and before.relation(x, y) != "black":
                    cross_forbidden.append((slot[x], slot[y]))
        sub_tables = [tables.pop(c) for c in old_comps]
        sub_slots = [[slot[p] for p in c] for c in old_comps]
        pu, pv = slot[u], slot[v]
        out_slots = [None if p == uv else slot[p] for p in comp]
        k = len(old_parts)

        table: dict[tuple[int, ...], int] = {}
        enumerated = 0
        for assign in itertools.product(range(k + 1), repeat=n):
            meter.tick()
            enumerated += 1
            sets = [0] * k
            for vert, where in enumerate(assign):
                if where < k:
                    sets[where] |= 1 << vert
            count = 1
            for tab, slots in zip(sub_tables, sub_slots):
                c = tab.get(tuple(sets[i] for i in slots), 0)
                if not c:
                    count = 0
                    break
                count *= c
            if not count:
                continue
            if any(_joined(gadj, sets[i], sets[j]) for i, j in cross_forbidden):
                continue
            key = tuple(sets[pu] | sets[pv] if s is None else sets[s] for s in out_slots)
            table[key] = table.get(key, 0) + count
        if stats is not None:
            stats.merges.append((len(comp), enumerated, (len(comp) + 2) ** n))
            stats.peak_table = max(stats.peak_table, len(table))
        tables[comp] = table
    (final,) = tables.values()
    return final.get((g.vertex_mask,), 0)


def _joined(adj, s: int, t: int) -> bool:
    for v in bits(s):
        if adj[v] & t:
            return True
    return False


# -- convenience -------------------------------------------------------------------


def trivial_sequence(g: Graph) -> ContractionSequence:
    """Merge vertex 0 with 1, 2, ... in turn; valid for every graph."""
    return ContractionSequence(g, tuple((0, v) for v in range(1, g.n)))


def exists_hom(g: Graph, h: Graph, strategy: str = "auto", seq: ContractionSequence | None = None) -> bool:
    """Whether some homomorphism ``g -> h`` exists.

    ``strategy`` is ``brute`` (stops at the first homomorphism), ``dpg``,
    ``dph`` or ``auto``.  ``seq`` is a contraction sequence of ``g`` for
    ``dpg`` or of ``h`` for ``dph``; any valid sequence gives the right
    answer, a narrow one just gets there faster.
    """
    if strategy == "auto":
        strategy = "brute" if brute_work(g, h) <= DEFAULT_BRUTE_WORK else "dpg"
    if strategy == "brute":
        meter = Meter(Limits().with_defaults(g.n), "brute force")
        return all(_count_component(g, h, c, meter, stop_at_first=True) for c in g.components())
    if strategy == "dpg":
        return count_g_side(g, seq or trivial_sequence(g), h) > 0
    if strategy == "dph":
        return count_h_side(g, h, seq or trivial_sequence(h)) > 0
    raise ValueError(f"unknown strategy {strategy!r}")
