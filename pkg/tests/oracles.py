"""Slow, definition-level reference implementations used only by the tests.

None of these share code with the package beyond the ``Graph`` container.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from twwkit.graphcore import Graph


def edge_set(g: Graph) -> frozenset:
    return frozenset(g.edges)


# -- trigraphs straight from the definition ------------------------------------


def quotient_by_definition(g: Graph, parts) -> tuple[set, set]:
    """Black and red pairs (as frozensets of two parts; red loops as 1-sets)."""
    parts = [frozenset(p) for p in parts]
    black, red = set(), set()
    for a, b in itertools.combinations(parts, 2):
        cross = [(x, y) for x in a for y in b]
        present = sum(1 for x, y in cross if g.has_edge(x, y))
        if present == len(cross):
            black.add(frozenset([a, b]))
        elif present:
            red.add(frozenset([a, b]))
    for a in parts:
        if len(a) > 1:
            red.add(frozenset([a]))
    return black, red


def width_by_definition(parts, red, measure: str) -> int:
    edges = [tuple(e) for e in red if len(e) == 2]
    loops = [e for e in red if len(e) == 1]
    if measure == "tww":
        deg = {p: 0 for p in parts}
        for a, b in edges:
            deg[a] += 1
            deg[b] += 1
        return max(deg.values())
    if measure == "ctww":
        comp = {p: {p} for p in parts}
        for a, b in edges:
            if comp[a] is not comp[b]:
                merged = comp[a] | comp[b]
                for x in merged:
                    comp[x] = merged
        return max(len(c) for c in comp.values())
    if measure == "ttww":
        return len(edges) + len(loops)
    if measure == "tvtww":
        touched = set()
        for e in red:
            touched |= set(e)
        return len(touched)
    raise ValueError(measure)


def best_width_by_enumeration(g: Graph, measure: str) -> int:
    """Minimum over every contraction sequence of the maximum trigraph width."""

    @lru_cache(maxsize=None)
    def best(parts: frozenset) -> int:
        _, red = quotient_by_definition(g, parts)
        here = width_by_definition(list(parts), red, measure)
        if len(parts) == 1:
            return here
        ps = sorted(parts, key=min)
        tail = min(
            best(frozenset(p for p in ps if p not in (a, b)) | {a | b})
            for a, b in itertools.combinations(ps, 2)
        )
        return max(here, tail)

    return best(frozenset(frozenset([v]) for v in range(g.n)))


# -- clique-width by exploring labelled graphs ------------------------------------


def _canon(labels: dict) -> tuple:
    """Rename labels by first appearance in vertex order."""
    ren = {}
    out = []
    for v in sorted(labels):
        lab = labels[v]
        if lab not in ren:
            ren[lab] = len(ren) + 1
        out.append((v, ren[lab]))
    return tuple(out)


def cw_by_exploration(g: Graph, linear: bool, k_max: int = 4) -> int:
    """Smallest k such that some (linear) k-expression builds exactly ``g``.

    States are labelled graphs (vertex labels, built edges) whose edges are a
    subset of ``g``'s; all k-expression operations are applied until closure.
    Labels are canonicalised, which is sound because any relabelling of a
    state is itself reachable by renaming labels in its expression.
    """
    target = edge_set(g)
    full = frozenset(range(g.n))
    for k in range(1, k_max + 1):
        seen = set()
        frontier = []
        singles = []
        for v in range(g.n):
            st = (_canon({v: 1}), frozenset())
            singles.append(st)
            if st not in seen:
                seen.add(st)
                frontier.append(st)
        while frontier:
            new = []
            for st in frontier:
                labels = dict(st[0])
                edges = st[1]
                if frozenset(labels) == full and edges == target:
                    return k
                used = set(labels.values())
                succ = []
                for i in used:
                    for j in range(1, k + 1):
                        if i != j:
                            nl = {v: (j if lab == i else lab) for v, lab in labels.items()}
                            succ.append((_canon(nl), edges))
                for i, j in itertools.combinations(sorted(used), 2):
                    add = {
                        (min(x, y), max(x, y))
                        for x, lx in labels.items()
                        for y, ly in labels.items()
                        if lx == i and ly == j
                    }
                    if add <= target:
                        succ.append((st[0], edges | add))
                partners = singles if linear else list(seen)
                for other in partners:
                    ol = dict(other[0])
                    if set(ol) & set(labels):
                        continue
                    # every injective-or-merging placement of the other labels
                    olabs = sorted(set(ol.values()))
                    for assign in itertools.product(range(1, k + 1), repeat=len(olabs)):
                        m = dict(zip(olabs, assign))
                        if len(set(assign)) != len(assign):
                            continue
                        nl = dict(labels)
                        nl.update({v: m[lab] for v, lab in ol.items()})
                        if len(set(nl.values())) > k:
                            continue
                        succ.append((_canon(nl), edges | other[1]))
                for s in succ:
                    if s not in seen:
                        seen.add(s)
                        new.append(s)
            frontier = new
    raise AssertionError("k_max too small")
