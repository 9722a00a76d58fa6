"""Canonical forms and isomorphism for (rooted and free) trees.

Rooted codes are the classic multiset-sorted parenthesis strings: a leaf is
"()" and an inner vertex wraps the sorted codes of its children.  Two rooted
trees are isomorphic iff their codes match.  Free trees are rooted at their
centroid (the minimizer of the largest remaining component); with two
centroids the smaller of the two codes is taken.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GraphStructureError
from .graphs import Graph, require_tree


@dataclass(frozen=True)
class TreeCanonicalForm:
    """Canonical code of a tree; equal codes ⇔ isomorphic trees."""

    code: str
    rooted: bool


def _order_children(g: Graph, root: int) -> tuple[dict[int, list[int]], list[int]]:
    """Parent-aware children lists plus a bottom-up processing order."""
    children: dict[int, list[int]] = {v: [] for v in g.vertices()}
    order: list[int] = []
    seen = {root}
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        for w in g.neighbors(v):
            if w not in seen:
                seen.add(w)
                children[v].append(w)
                stack.append(w)
    if len(order) != g.num_vertices:
        raise GraphStructureError("tree is not connected")
    return children, list(reversed(order))


def rooted_code(g: Graph, root: int) -> str:
    """AHU canonical code of the tree g rooted at `root`."""
    require_tree(g)
    if not (0 <= root < g.num_vertices):
        raise GraphStructureError(f"root {root} is not a vertex")
    children, order = _order_children(g, root)
    code: dict[int, str] = {}
    for v in order:
        code[v] = "(" + "".join(sorted(code[c] for c in children[v])) + ")"
    return code[root]


def centroids(g: Graph) -> list[int]:
    """The one or two centroid vertices of a tree."""
    require_tree(g)
    n = g.num_vertices
    if n == 1:
        return [0]
    children, order = _order_children(g, 0)
    size = [1] * n
    for v in order:
        for c in children[v]:
            size[v] += size[c]
    best: list[int] = []
    best_weight = n + 1
    for v in g.vertices():
        weight = max([n - size[v]] + [size[c] for c in children[v]])
        if weight < best_weight:
            best_weight = weight
            best = [v]
        elif weight == best_weight:
            best.append(v)
    return sorted(best)


def free_code(g: Graph) -> str:
    """Canonical code of a free tree via centroid rooting."""
    return min(rooted_code(g, c) for c in centroids(g))


def canonical_form(g: Graph, root: int | None = None) -> TreeCanonicalForm:
    if root is None:
        return TreeCanonicalForm(free_code(g), rooted=False)
    return TreeCanonicalForm(rooted_code(g, root), rooted=True)


def tree_isomorphic(
    t1: Graph, t2: Graph, roots: tuple[int, int] | None = None
) -> bool:
    """Tree isomorphism; rooted when a pair of roots is given."""
    require_tree(t1, "t1")
    require_tree(t2, "t2")
    if t1.num_vertices != t2.num_vertices:
        return False
    if roots is None:
        return free_code(t1) == free_code(t2)
    r1, r2 = roots
    return rooted_code(t1, r1) == rooted_code(t2, r2)


def rooted_isomorphism_map(
    t1: Graph, root1: int, t2: Graph, root2: int
) -> dict[int, int] | None:
    """A vertex map realizing a rooted isomorphism, or None.

    Children with equal codes are interchangeable; they are paired in
    (code, vertex id) order, which makes the returned map deterministic.
    """
    require_tree(t1, "t1")
    require_tree(t2, "t2")
    if rooted_code(t1, root1) != rooted_code(t2, root2):
        return None

    def codes_of(g: Graph, root: int) -> tuple[dict[int, list[int]], dict[int, str]]:
        children, order = _order_children(g, root)
        code: dict[int, str] = {}
        for v in order:
            code[v] = "(" + "".join(sorted(code[c] for c in children[v])) + ")"
        return children, code

    ch1, code1 = codes_of(t1, root1)
    ch2, code2 = codes_of(t2, root2)
    mapping = {root1: root2}
    stack = [(root1, root2)]
    while stack:
        a, b = stack.pop()
        kids1 = sorted(ch1[a], key=lambda v: (code1[v], v))
        kids2 = sorted(ch2[b], key=lambda v: (code2[v], v))
        for c1, c2 in zip(kids1, kids2):
            mapping[c1] = c2
            stack.append((c1, c2))
    return mapping
