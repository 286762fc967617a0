"""Certificate conversions between contraction sequences, k-expressions and
branch decompositions.

Every converter checks the width guarantee of its construction on the object
it produces and raises ``AssertionError`` if the guarantee fails (which would
be a bug here, not a property of the input).  Inputs that are not valid
certificates raise :class:`InvalidCertificate`.
"""

from __future__ import annotations

from .cwexpr import (
    AddEdges,
    Expr,
    Relabel,
    Union,
    Vertex,
    check_claim_fresh_right,
    check_claim_left_labels,
    eval_expr,
    expr_width,
    is_linear,
    labels_used,
    leaves,
    substitute_labels,
    vertex_ids,
)
from .errors import InvalidCertificate
from .graphcore import Graph, bits
from .rankwidth import BranchDecomposition, decomposition_width, validate_decomposition
from .trigraph import (
    ContractionSequence,
    Part,
    Trigraph,
    red_components,
    replay,
    sequence_width,
    trigraph_width,
    validate_sequence,
)


def _check_seq(g: Graph, seq: ContractionSequence) -> None:
    if seq.base != g:
        raise InvalidCertificate("contraction sequence belongs to a different graph")
    validate_sequence(seq)


def _remap(expr: Expr, fixed: dict[int, int], universe: int) -> Expr:
    """Rename labels of ``expr`` so that ``fixed`` holds, using labels 1..universe.

    Labels not in ``fixed`` are sent, in ascending order, to the smallest
    labels not taken by ``fixed``'s targets, so the renaming is injective.
    """
    free = [x for x in range(1, universe + 1) if x not in set(fixed.values())]
    mapping = dict(fixed)
    for lab in sorted(labels_used(expr) - set(fixed)):
        mapping[lab] = free.pop(0)
    if all(k == v for k, v in mapping.items()):
        return expr
    return substitute_labels(expr, mapping)


def _eta_chain(expr: Expr, pairs) -> Expr:
    for a, b in sorted({tuple(sorted(p)) for p in pairs}):
        expr = AddEdges(a, b, expr)
    return expr


def _leaf(v: int) -> Vertex:
    return Vertex(1, str(v))


# -- sequence -> expression --------------------------------------------------


def seq_to_expr(g: Graph, seq: ContractionSequence) -> Expr:
    """A (κ+1)-expression of ``g`` from a sequence of component twin-width κ."""
    _check_seq(g, seq)
    if g.n == 1:
        return _leaf(0)
    trigraphs = replay(seq)
    kappa = max(trigraph_width(t, "ctww") for t in trigraphs)
    universe = kappa + 1
    # component (tuple of parts) -> (expression, part -> label)
    table: dict[tuple[Part, ...], tuple[Expr, dict[Part, int]]] = {
        (frozenset([v]),): (_leaf(v), {frozenset([v]): 1}) for v in range(g.n)
    }
    for step, (a, b) in enumerate(seq.merges):
        before: Trigraph = trigraphs[step]
        after: Trigraph = trigraphs[step + 1]
        u, v = before.part_of(a), before.part_of(b)
        uv = u | v
        comp = next(c for c in red_components(after) if uv in c)
        old_parts = [p for p in comp if p != uv] + [u, v]
        old_comps = []
        for c in red_components(before):
            if any(p in c for p in old_parts):
                old_comps.append(c)
        # labels for the new component: others by smallest vertex, then U, then V
        others = sorted((p for p in comp if p != uv), key=min)
        target = {p: i + 1 for i, p in enumerate(others)}
        pl = len(others) + 1
        target[u], target[v] = pl, pl + 1

        expr: Expr | None = None
        for c in old_comps:
            sub, labels = table.pop(c)
            sub = _remap(sub, {labels[p]: target[p] for p in c}, universe)
            expr = sub if expr is None else Union(expr, sub)
        owner = {p: i for i, c in enumerate(old_comps) for p in c}
        eta = []
        for x, y in before.black:
            if x in owner and y in owner and owner[x] != owner[y]:
                eta.append((target[x], target[y]))
        expr = _eta_chain(expr, eta)
        expr = Relabel(pl + 1, pl, expr)
        labels = {p: target[p] for p in others}
        labels[uv] = pl
        table[comp] = (expr, labels)
    (result, _), = table.values()
    assert eval_expr(result).graph == g, "constructed expression does not evaluate to the graph"
    assert expr_width(result) <= kappa + 1, "expression width exceeds ctww + 1"
    assert check_claim_left_labels(result, kappa), "left operand carries more than ctww labels"
    return result


def seq_to_linexpr(g: Graph, seq: ContractionSequence) -> Expr:
    """A linear (κ+1)-expression of ``g`` from a sequence of total vertex twin-width κ."""
    _check_seq(g, seq)
    if g.n == 1:
        return _leaf(0)
    trigraphs = replay(seq)
    kappa = max(trigraph_width(t, "tvtww") for t in trigraphs)
    universe = kappa + 1
    expr: Expr | None = None
    labels: dict[Part, int] = {}  # parts of C_{k+1} -> label in expr
    for step, (a, b) in enumerate(seq.merges):
        before: Trigraph = trigraphs[step]
        after: Trigraph = trigraphs[step + 1]
        u, v = before.part_of(a), before.part_of(b)
        uv = u | v
        touched = {p for e in after.red for p in e}
        others = sorted((p for p in touched if p != uv), key=min)
        target = {p: i + 1 for i, p in enumerate(others)}
        pl = len(others) + 1
        target[u], target[v] = pl, pl + 1
        if set(labels) - set(target):
            raise AssertionError("a part lost all of its red edges")
        if expr is not None:
            expr = _remap(expr, {labels[p]: target[p] for p in labels}, universe)
        fresh = sorted((p for p in target if p not in labels), key=min)
        for p in fresh:
            if len(p) != 1:
                raise AssertionError("a part without red edges must be a single vertex")
            leaf = Vertex(target[p], str(min(p)))
            expr = leaf if expr is None else Union(expr, leaf)
        fresh_set = set(fresh)
        eta = [
            (target[x], target[y])
            for x, y in before.black
            if x in target and y in target and (x in fresh_set or y in fresh_set)
        ]
        expr = _eta_chain(expr, eta)
        expr = Relabel(pl + 1, pl, expr)
        labels = {p: target[p] for p in others}
        labels[uv] = pl
    assert eval_expr(expr).graph == g, "constructed expression does not evaluate to the graph"
    assert is_linear(expr), "constructed expression is not linear"
    assert expr_width(expr) <= kappa + 1, "expression width exceeds tvtww + 1"
    assert check_claim_fresh_right(expr), "a union adds a vertex under a label already present"
    return expr


# -- expression -> sequence ----------------------------------------------------


def expr_to_seq(g: Graph, e: Expr) -> ContractionSequence:
    """A contraction sequence of ``g`` that only ever merges same-label classes.

    Component twin-width is at most ``2k - 1`` for a k-expression, and at
    most ``k`` (as is total vertex twin-width) when the expression is linear.
    """
    if eval_expr(e).graph != g:
        raise InvalidCertificate("expression does not evaluate to the given graph")
    leaf_vertex = {id(leaf): vid for leaf, vid in zip(leaves(e), vertex_ids(e))}
    merges: list[tuple[int, int]] = []
    checkpoints: list[tuple[int, int, int]] = []  # (merges done, left mask, right mask)

    def go(node) -> dict[int, int]:
        # returns label -> class mask, having emitted the merges for this subtree
        if isinstance(node, Vertex):
            return {node.label: 1 << leaf_vertex[id(node)]}
        if isinstance(node, AddEdges):
            return go(node.child)
        if isinstance(node, Relabel):
            classes = go(node.child)
            if node.src in classes:
                moved = classes.pop(node.src)
                if node.dst in classes:
                    merges.append(_merge_of(classes[node.dst], moved))
                    classes[node.dst] |= moved
                else:
                    classes[node.dst] = moved
            return classes
        left = go(node.left)
        right = go(node.right)
        lmask = _union_masks(left.values())
        rmask = _union_masks(right.values())
        checkpoints.append((len(merges), lmask, rmask))
        for lab in sorted(right):
            if lab in left:
                merges.append(_merge_of(left[lab], right[lab]))
                left[lab] |= right[lab]
            else:
                left[lab] = right[lab]
        return left

    classes = go(e)
    masks = [classes[lab] for lab in sorted(classes)]
    for m in masks[1:]:
        merges.append(_merge_of(masks[0], m))
        masks[0] |= m
    seq = ContractionSequence(g, tuple(merges))
    validate_sequence(seq)

    trigraphs = replay(seq)
    for done, lmask, rmask in checkpoints:
        t = trigraphs[done]
        for x, y in t.red:
            if x == y:
                continue
            mx, my = _mask(x), _mask(y)
            crossing = (mx & ~lmask == 0 and my & ~rmask == 0) or (mx & ~rmask == 0 and my & ~lmask == 0)
            assert not crossing, "a red edge joins the two sides of a union"
    k = expr_width(e)
    ctww = max(trigraph_width(t, "ctww") for t in trigraphs)
    if is_linear(e):
        assert ctww <= k, "component twin-width exceeds the linear expression width"
        tv = max(trigraph_width(t, "tvtww") for t in trigraphs)
        assert tv <= k, "total vertex twin-width exceeds the linear expression width"
    else:
        assert ctww <= 2 * k - 1, "component twin-width exceeds 2k - 1"
    return seq


def _mask(part: Part) -> int:
    m = 0
    for v in part:
        m |= 1 << v
    return m


def _union_masks(ms) -> int:
    out = 0
    for m in ms:
        out |= m
    return out


def _merge_of(a: int, b: int) -> tuple[int, int]:
    """Merge named by the smallest vertex of each class."""
    return ((a & -a).bit_length() - 1, (b & -b).bit_length() - 1)


# -- expression -> branch decomposition ----------------------------------------


def expr_to_branch(e: Expr) -> BranchDecomposition:
    """The union tree of ``e``: leaves are the vertices, internal nodes the unions."""
    leaf_vertex = {id(leaf): vid for leaf, vid in zip(leaves(e), vertex_ids(e))}

    def go(node):
        while isinstance(node, (Relabel, AddEdges)):
            node = node.child
        if isinstance(node, Vertex):
            return leaf_vertex[id(node)]
        return (go(node.left), go(node.right))

    return go(e)


# -- branch decomposition -> sequence -------------------------------------------


def branch_to_seq(g: Graph, t: BranchDecomposition, r: int) -> ContractionSequence:
    """A sequence of component twin-width at most ``2^(r+1) - 1`` from a
    branch decomposition of width at most ``r``.

    While more than ``2^r`` parts remain, take the deepest node whose subtree
    holds at least ``2^r + 1`` leaves, and contract two of its leaves that have
    the same neighbours outside the subtree.  Such a pair exists because the
    cut has rank at most ``r``; failing to find one means the decomposition
    is wider than claimed.
    """
    validate_decomposition(g, t)
    if r < 0:
        raise InvalidCertificate("width bound must be nonnegative")
    width = decomposition_width(g, t)
    if width > r:
        raise InvalidCertificate(f"decomposition has width {width}, more than the claimed {r}")
    threshold = 2**r
    adj = g.adj
    # tree nodes: leaf -> part mask; internal -> [left, right]; nodes are lists so
    # they can be edited in place
    tree = _to_mutable(t)
    merges: list[tuple[int, int]] = []
    parts = g.n

    while parts > 1:
        if parts <= threshold:
            leaves_now = sorted(_leaf_parts(tree), key=lambda m: m & -m)
            a, b = leaves_now[0], leaves_now[1]
            merges.append(_merge_of(a, b))
            tree = _identify(tree, a, b)
            parts -= 1
            continue
        node = _deepest_heavy(tree, threshold)
        inside = _leaf_parts(node)
        inside_mask = _union_masks(inside)
        outside = g.vertex_mask & ~inside_mask
        ordered = sorted(inside, key=lambda m: m & -m)
        pair = None
        for i, pa in enumerate(ordered):
            row = adj[(pa & -pa).bit_length() - 1] & outside
            for pb in ordered[i + 1:]:
                if adj[(pb & -pb).bit_length() - 1] & outside == row:
                    pair = (pa, pb)
                    break
            if pair:
                break
        if pair is None:
            raise InvalidCertificate("no two leaves with identical rows below a heavy node; the decomposition is wider than claimed")
        merges.append(_merge_of(*pair))
        tree = _identify(tree, pair[0], pair[1])
        parts -= 1
        _check_heavy_cuts(g, tree, threshold)

    seq = ContractionSequence(g, tuple(merges))
    validate_sequence(seq)
    assert sequence_width(seq, "ctww") <= 2 ** (r + 1) - 1, "component twin-width exceeds 2^(r+1) - 1"
    return seq


def _to_mutable(t):
    if isinstance(t, int):
        return 1 << t
    return [_to_mutable(t[0]), _to_mutable(t[1])]


def _leaf_parts(node) -> list[int]:
    if isinstance(node, int):
        return [node]
    return _leaf_parts(node[0]) + _leaf_parts(node[1])


def _deepest_heavy(tree, threshold: int):
    """Deepest node with more than ``threshold`` leaves; ties by smallest vertex."""
    best = None  # (depth, smallest vertex, node)

    def go(node, depth) -> int:
        nonlocal best
        if isinstance(node, int):
            return 1
        count = go(node[0], depth + 1) + go(node[1], depth + 1)
        if count > threshold:
            low = min(m & -m for m in _leaf_parts(node))
            key = (-depth, low)
            if best is None or key < best[0]:
                best = (key, node)
        return count

    go(tree, 0)
    return best[1]


def _identify(tree, keep: int, drop: int):
    """Remove leaf ``drop``, shortcut its parent, and grow leaf ``keep`` to ``keep | drop``."""

    def go(node):
        if isinstance(node, int):
            if node == drop:
                return None
            return keep | drop if node == keep else node
        left, right = go(node[0]), go(node[1])
        if left is None:
            return right
        if right is None:
            return left
        return [left, right]

    return go(tree)


def _check_heavy_cuts(g: Graph, tree, threshold: int) -> None:
    """No red edge may cross the cut of a node holding more than ``threshold`` parts."""
    parts = _leaf_parts(tree)
    full_of = {}
    any_of = {}
    for p in parts:
        f, a = -1, 0
        for v in bits(p):
            f &= g.adj[v]
            a |= g.adj[v]
        full_of[p], any_of[p] = f, a

    def red(p, q) -> bool:
        return bool(any_of[p] & q) and (q & ~full_of[p]) != 0

    def go(node) -> list[int]:
        if isinstance(node, int):
            return [node]
        inside = go(node[0]) + go(node[1])
        if len(inside) > threshold:
            ins = set(inside)
            for p in inside:
                for q in parts:
                    if q not in ins:
                        assert not red(p, q), "a red edge crosses the cut of a heavy node"
        return inside

    go(tree)

